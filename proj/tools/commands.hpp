#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparse_moments/prony.hpp"

namespace sparse_moments::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kSolverFailure = 3 };

inline constexpr const char* kFloorEnvVar = "SPARSE_MOMENTS_FP_FLOOR";

/// Tolerance floor from SPARSE_MOMENTS_FP_FLOOR, or the library default.
/// Throws InvalidInput on a malformed or non-positive value.
double tolerance_floor_from_env();

struct SampleArgs {
  std::filesystem::path model_file;
  std::size_t m = 0;
  std::uint64_t s = 0;
  std::uint64_t seed = 0;
  std::filesystem::path out_file;
};
int cmd_sample(const SampleArgs& args, std::ostream& err);

struct LearnArgs {
  std::filesystem::path histogram_file;
  std::size_t k = 0;
  double zeta = 0.0;
  double w_min = 0.0;
  double gamma = 20.0;
  double delta = 0.01;
  std::filesystem::path out_file;
};
int cmd_learn(const LearnArgs& args, std::ostream& err);

struct EvalArgs {
  std::filesystem::path true_model_file;
  std::filesystem::path learned_model_file;
  bool wasserstein_only = false;
};
/// Prints "alpha_err_inf,w_err_inf,wasserstein" (or just the Wasserstein
/// distance with wasserstein_only) to `out`.
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
  std::vector<std::size_t> k_list;
  double zeta = 0.1;
  double w_min = 0.05;
  std::vector<std::uint64_t> s_list;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double gamma = 10.0;
  std::size_t threads = 1;
  bool omit_timing = false;
  std::filesystem::path out_csv;
};

struct BenchRow {
  std::size_t k = 0;
  double zeta = 0.0;
  double w_min = 0.0;
  std::uint64_t s = 0;
  std::uint64_t seed = 0;
  double alpha_err_inf = 0.0;
  double w_err_inf = 0.0;
  double wasserstein = 0.0;
  std::int64_t learn_time_ns = 0;
  std::string status;
};

inline constexpr const char* kBenchSchemaComment = "# sparse-moments bench schema v1";
inline constexpr const char* kBenchHeader =
    "k,zeta,w_min,s,seed,alpha_err_inf,w_err_inf,wasserstein,learn_time_ns,status";

/// Validates the sweep; throws InvalidInput on empty/zero lists or an
/// infeasible (k, zeta, w_min) combination.
void validate(const BenchArgs& args);

/// One row per (k, s, trial) in that nesting order, independent of `threads`.
std::vector<BenchRow> run_bench(const BenchArgs& args);
std::string format_bench_csv(const std::vector<BenchRow>& rows);
int cmd_bench(const BenchArgs& args, std::ostream& err);

/// Status string for a learning failure ("degree_deficient", ...).
std::string status_for(ErrorKind kind);

}  // namespace sparse_moments::cli
