#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sparse_moments/error.hpp"
#include "sparse_moments/matrix.hpp"
#include "sparse_moments/moments.hpp"

namespace sparse_moments {

struct EigenPair {
  double lambda = 0.0;     // Rayleigh quotient of v
  std::vector<double> v;   // unit vector, first non-negligible entry positive
  double residual = 0.0;   // ||H v - lambda v||_2
  double next_lambda = 0.0;  // second-smallest eigenvalue (bisection estimate)
  std::size_t iterations = 0;
  std::size_t restarts = 0;
};

struct EigenOptions {
  std::uint64_t seed = 0x51ed5eedULL;
  std::size_t max_iterations = 64;
  std::size_t max_restarts = 3;
  double asymmetry_tolerance = 1e-10;
  /// Residual accepted when <= max(eps1, residual_scale * eps_machine * ||H||_F).
  double residual_scale = 1e3;
};

/// Thrown when inverse iteration exhausts its restarts without meeting the
/// residual tolerance; carries the best iterate seen.
class EigenConvergenceError : public Error {
 public:
  EigenConvergenceError(std::string message, EigenPair best)
      : Error(ErrorKind::ConvergenceFailure, std::move(message)), best_(std::move(best)) {}
  const EigenPair& best() const noexcept { return best_; }

 private:
  EigenPair best_;
};

/// Smallest eigenpair of a symmetric matrix: Householder tridiagonalization,
/// Sturm bisection for lambda_1, then inverse iteration from a random start
/// until the tan-theta bound drops below eps1.
EigenPair min_eigenpair(const Matrix& h, double eps1, const EigenOptions& options = {});
EigenPair min_eigenpair(const HankelMatrix& h, double eps1, const EigenOptions& options = {});

/// All eigenvalues of a symmetric matrix in ascending order (bisection).
std::vector<double> symmetric_eigenvalues(const Matrix& h);

/// Largest singular value via power iteration on A^T A.
double spectral_norm(const Matrix& a, std::size_t iterations = 500);

struct VandermondeSolution {
  std::vector<double> w;
  double residual = 0.0;  // ||V w - rhs||_inf
};

inline constexpr double kDefaultNodeThreshold = 1e-12;

/// Solves sum_j w_j nodes_j^i = rhs_i (i = 0..k-1) by the O(k^2) dual
/// Bjorck-Pereyra scheme. Throws DegenerateNodes if two nodes are closer
/// than `node_threshold`.
VandermondeSolution solve_vandermonde(std::span<const double> nodes, std::span<const double> rhs,
                                      double node_threshold = kDefaultNodeThreshold);

/// ||V^{-1}||_inf = |q(-1)| / min_i (1 + x_i)|q'(x_i)| for non-negative nodes,
/// q(z) = prod (z - x_i).
double vandermonde_inverse_inf_norm(std::span<const double> nodes);

}  // namespace sparse_moments
