#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sparse_moments/model.hpp"
#include "sparse_moments/prony.hpp"

namespace sparse_moments::io {

using json = nlohmann::json;

// {"k": int, "alpha": [...], "w": [...]}, alpha ascending.
json to_json(const MixtureModel& model);
MixtureModel model_from_json(const json& j);

// {"m": int, "s": int, "counts": [...]}
json to_json(const Histogram& h);
Histogram histogram_from_json(const json& j);

json to_json(const MomentVector& mu);
MomentVector moments_from_json(const json& j);

json to_json(const Diagnostics& d);

/// status is "ok" or the snake_case ErrorKind name; model is null on failure.
json report_to_json(const std::optional<MixtureModel>& model, const Diagnostics& diagnostics,
                    std::string_view status, std::string_view stage = {},
                    std::string_view message = {});

/// Parse errors and unreadable files surface as Error(InvalidInput).
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace sparse_moments::io
