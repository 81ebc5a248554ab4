#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparse_moments {

enum class ErrorKind {
  InvalidInput,
  DegreeDeficient,
  DegenerateNodes,
  ConvergenceFailure,
  InfeasibleSampleSize,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. `stage` names the
/// pipeline step that failed ("eigenpair", "roots", ...) and is empty for
/// errors raised outside the learning pipeline.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::string stage = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] void throw_invalid(const std::string& message);

}  // namespace sparse_moments
