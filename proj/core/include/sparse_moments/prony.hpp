#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparse_moments/error.hpp"
#include "sparse_moments/linalg.hpp"
#include "sparse_moments/model.hpp"
#include "sparse_moments/moments.hpp"
#include "sparse_moments/roots.hpp"

namespace sparse_moments {

inline constexpr double kDefaultToleranceFloor = 64.0 * std::numeric_limits<double>::epsilon();

struct Tolerances {
  double eps1 = 0.0;  // eigenvector accuracy
  double eps2 = 0.0;  // root accuracy
  bool eps1_clamped = false;
  bool eps2_clamped = false;
};

struct LearnConfig {
  std::size_t k = 1;
  double zeta = 1.0;   // lower bound on the separation of the source
  double w_min = 1.0;  // lower bound on the smallest weight
  double gamma = 20.0; // target accuracy 2^-gamma
  double delta = 0.01; // failure probability used for sample planning

  std::optional<double> eps1_override;
  std::optional<double> eps2_override;
  double tolerance_floor = kDefaultToleranceFloor;
  double node_threshold = kDefaultNodeThreshold;
  /// Reject inputs whose Hankel matrix has a near-kernel of dimension >= 2
  /// (lambda_2 - lambda_1 <= 2 eps1) as DegreeDeficient.
  bool require_eigengap = true;
  EigenOptions eigen;
  RootOptions roots;

  /// Throws InvalidInput unless k >= 1, 0 < zeta <= 1/(k-1) (k >= 2),
  /// 0 < w_min <= 1/k, gamma >= 1 and 0 < delta < 1.
  void validate() const;

  /// eps1 = w_min 2^-gamma (zeta/16)^{2k}, eps2 = 2^-gamma (zeta/2)^k / (6k),
  /// each raised to tolerance_floor when it underflows it.
  Tolerances tolerances() const;

  /// Moment accuracy that keeps ||H~ - H||_2 <= w_min 2^-gamma (zeta/16)^{4k}.
  double moment_accuracy() const;
  std::uint64_t planned_sample_size(std::uint64_t cap = kDefaultSampleCap) const;
};

struct Diagnostics {
  double lambda_min = std::numeric_limits<double>::quiet_NaN();
  double lambda_next = std::numeric_limits<double>::quiet_NaN();
  double eigen_residual = std::numeric_limits<double>::quiet_NaN();
  double root_residual_max = std::numeric_limits<double>::quiet_NaN();
  double vandermonde_residual = std::numeric_limits<double>::quiet_NaN();
  double rectified_mass = std::numeric_limits<double>::quiet_NaN();
  bool tolerance_clamped = false;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

struct LearnReport {
  MixtureModel model;
  Diagnostics diagnostics;
};

/// Pipeline failure tagged with the stage that raised it and the
/// diagnostics gathered up to that point.
class LearnError : public Error {
 public:
  LearnError(ErrorKind kind, std::string message, std::string stage, Diagnostics diagnostics)
      : Error(kind, std::move(message), std::move(stage)), diagnostics_(std::move(diagnostics)) {}
  const Diagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// Zeroes negative weights and rescales the rest onto the simplex.
/// Requires sum(w') = 1 within 1e-9.
std::vector<double> rectify_weights(std::span<const double> wprime);

LearnReport learn_coin_mixture(const LearnConfig& cfg, const Histogram& h);
/// Same as above for a normalized (possibly expected) histogram of length 2k+1.
LearnReport learn_coin_mixture(const LearnConfig& cfg, std::span<const double> frequencies);

/// The pipeline from the Hankel step on, for a given moment vector.
LearnReport learn_from_exact_moments(const LearnConfig& cfg, const MomentVector& mu);

}  // namespace sparse_moments
