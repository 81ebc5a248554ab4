#include "sparse_moments/error.hpp"

#include <utility>

namespace sparse_moments {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
      return "invalid_input";
    case ErrorKind::DegreeDeficient:
      return "degree_deficient";
    case ErrorKind::DegenerateNodes:
      return "degenerate_nodes";
    case ErrorKind::ConvergenceFailure:
      return "convergence_failure";
    case ErrorKind::InfeasibleSampleSize:
      return "infeasible_sample_size";
  }
  return "unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     const std::string& stage) {
  std::string out;
  if (!stage.empty()) out += "[" + stage + "] ";
  out += std::string(to_string(kind)) + ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, std::string stage)
    : std::runtime_error(decorate(kind, message, stage)),
      kind_(kind),
      stage_(std::move(stage)) {}

void throw_invalid(const std::string& message) {
  throw Error(ErrorKind::InvalidInput, message);
}

}  // namespace sparse_moments
