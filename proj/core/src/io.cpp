#include "sparse_moments/io.hpp"

#include <fstream>
#include <sstream>

#include "sparse_moments/error.hpp"

namespace sparse_moments::io {

namespace {

template <typename T>
std::vector<T> array_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw_invalid(std::string("missing array field \"") + key + "\"");
  }
  try {
    return j.at(key).get<std::vector<T>>();
  } catch (const json::exception& e) {
    throw_invalid(std::string("bad entries in \"") + key + "\": " + e.what());
  }
}

std::uint64_t count_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw_invalid(std::string("missing non-negative integer field \"") + key + "\"");
  }
  return j.at(key).get<std::uint64_t>();
}

}  // namespace

json to_json(const MixtureModel& model) {
  return json{{"k", model.k()}, {"alpha", model.alpha()}, {"w", model.weights()}};
}

MixtureModel model_from_json(const json& j) {
  auto alpha = array_field<double>(j, "alpha");
  auto w = array_field<double>(j, "w");
  const auto k = count_field(j, "k");
  if (k != alpha.size() || k != w.size()) {
    throw_invalid("model declares k = " + std::to_string(k) + " but lists " +
                  std::to_string(alpha.size()) + " biases and " + std::to_string(w.size()) +
                  " weights");
  }
  return MixtureModel(std::move(alpha), std::move(w));
}

json to_json(const Histogram& h) {
  return json{{"m", h.m()}, {"s", h.s()}, {"counts", h.counts()}};
}

Histogram histogram_from_json(const json& j) {
  const auto m = count_field(j, "m");
  const auto s = count_field(j, "s");
  for (const auto& c : array_field<json>(j, "counts")) {
    if (!c.is_number_unsigned()) throw_invalid("histogram counts must be non-negative integers");
  }
  Histogram h(m, array_field<std::uint64_t>(j, "counts"));
  if (h.s() != s) {
    throw_invalid("histogram declares s = " + std::to_string(s) + " but counts sum to " +
                  std::to_string(h.s()));
  }
  return h;
}

json to_json(const MomentVector& mu) { return json(mu.mu); }

MomentVector moments_from_json(const json& j) {
  if (!j.is_array()) throw_invalid("moment vector must be a JSON array");
  try {
    return MomentVector{j.get<std::vector<double>>()};
  } catch (const json::exception& e) {
    throw_invalid(std::string("bad moment entries: ") + e.what());
  }
}

json to_json(const Diagnostics& d) {
  return json{{"lambda_min", d.lambda_min},
              {"eigen_residual", d.eigen_residual},
              {"root_residual_max", d.root_residual_max},
              {"vandermonde_residual", d.vandermonde_residual},
              {"rectified_mass", d.rectified_mass},
              {"tolerance_clamped", d.tolerance_clamped ? 1.0 : 0.0}};
}

json report_to_json(const std::optional<MixtureModel>& model, const Diagnostics& diagnostics,
                    std::string_view status, std::string_view stage, std::string_view message) {
  json out{{"status", status},
           {"model", model ? to_json(*model) : json(nullptr)},
           {"diagnostics", to_json(diagnostics)},
           {"eps1", diagnostics.eps1},
           {"eps2", diagnostics.eps2}};
  if (!stage.empty()) out["stage"] = stage;
  if (!message.empty()) out["message"] = message;
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_invalid("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw_invalid("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_invalid("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw_invalid("write failed for " + path.string());
}

}  // namespace sparse_moments::io
