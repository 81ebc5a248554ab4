#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sparse_moments/error.hpp"

namespace sparse_moments {

/// coeffs[j] is the coefficient of z^j.
struct Polynomial {
  std::vector<double> coeffs;

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  std::complex<double> operator()(std::complex<double> z) const;
};

/// Monic polynomial prod_i (z - roots_i).
Polynomial polynomial_from_roots(std::span<const double> roots);

struct RootSet {
  std::vector<std::complex<double>> roots;
  std::vector<double> residuals;  // |p(root)|
  std::size_t iterations = 0;
};

struct RootOptions {
  std::size_t max_iterations = 500;
  /// DegreeDeficient when |coeffs_k| < leading_threshold * ||coeffs||_inf.
  double leading_threshold = 1e-10;
};

class RootConvergenceError : public Error {
 public:
  RootConvergenceError(std::string message, RootSet best)
      : Error(ErrorKind::ConvergenceFailure, std::move(message)), best_(std::move(best)) {}
  const RootSet& best() const noexcept { return best_; }

 private:
  RootSet best_;
};

/// All k complex roots by Aberth-Ehrlich iteration on the monic polynomial
/// rescaled so that roots inside B(0, (2k-1)/(2k-2)) map into the unit disc.
/// Each root is iterated until its step is below eps2 (in original units) or
/// its residual reaches rounding level.
RootSet find_roots(const Polynomial& p, double eps2, const RootOptions& options = {});

/// clamp(Re(root), 0, 1) for each root, sorted ascending.
std::vector<double> project_roots(const RootSet& rs);

}  // namespace sparse_moments
