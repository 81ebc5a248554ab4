#include "sparse_moments/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparse_moments/rng.hpp"

namespace sparse_moments {

namespace {

using real = long double;

constexpr real kRealEps = std::numeric_limits<real>::epsilon();
constexpr double kSignThreshold = 64.0 * std::numeric_limits<double>::epsilon();

// Symmetric tridiagonal T = Q^T A Q; diag in d, off-diagonal in e.
struct Tridiagonal {
  std::vector<real> d;
  std::vector<real> e;
  std::vector<real> q;  // n x n row-major, columns are the Householder basis
  std::size_t n = 0;

  real& Q(std::size_t i, std::size_t j) { return q[i * n + j]; }
  real norm_bound() const {
    real bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
      real row = std::abs(d[i]);
      if (i > 0) row += std::abs(e[i - 1]);
      if (i + 1 < n) row += std::abs(e[i]);
      bound = std::max(bound, row);
    }
    return bound;
  }
};

Tridiagonal tridiagonalize(const Matrix& h) {
  const std::size_t n = h.rows();
  std::vector<real> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i * n + j] = (static_cast<real>(h(i, j)) + static_cast<real>(h(j, i))) / 2;

  Tridiagonal t;
  t.n = n;
  t.q.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) t.Q(i, i) = 1;

  std::vector<real> v(n), p(n), w(n);
  for (std::size_t col = 0; col + 2 < n; ++col) {
    // Householder vector zeroing a[col+2:, col].
    real alpha = 0;
    for (std::size_t i = col + 1; i < n; ++i) alpha += a[i * n + col] * a[i * n + col];
    alpha = std::sqrt(alpha);
    if (alpha == 0) continue;
    const real x0 = a[(col + 1) * n + col];
    if (x0 > 0) alpha = -alpha;
    std::fill(v.begin(), v.end(), real{0});
    v[col + 1] = x0 - alpha;
    for (std::size_t i = col + 2; i < n; ++i) v[i] = a[i * n + col];
    real vnorm2 = 0;
    for (std::size_t i = col + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0) continue;
    const real beta = 2 / vnorm2;

    // A <- P A P with P = I - beta v v^T, as a rank-2 update.
    for (std::size_t i = 0; i < n; ++i) {
      real acc = 0;
      for (std::size_t j = col + 1; j < n; ++j) acc += a[i * n + j] * v[j];
      p[i] = beta * acc;
    }
    real kappa = 0;
    for (std::size_t i = col + 1; i < n; ++i) kappa += v[i] * p[i];
    kappa *= beta / 2;
    for (std::size_t i = 0; i < n; ++i) w[i] = p[i] - kappa * v[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] -= v[i] * w[j] + w[i] * v[j];

    // Q <- Q P
    for (std::size_t i = 0; i < n; ++i) {
      real acc = 0;
      for (std::size_t j = col + 1; j < n; ++j) acc += t.Q(i, j) * v[j];
      acc *= beta;
      for (std::size_t j = col + 1; j < n; ++j) t.Q(i, j) -= acc * v[j];
    }
  }

  t.d.resize(n);
  t.e.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) t.d[i] = a[i * n + i];
  for (std::size_t i = 0; i + 1 < n; ++i) t.e[i] = (a[(i + 1) * n + i] + a[i * n + i + 1]) / 2;
  return t;
}

// Number of eigenvalues of T strictly below x.
std::size_t sturm_count(const Tridiagonal& t, real x) {
  const real tiny = std::numeric_limits<real>::min() * 1e10L;
  std::size_t count = 0;
  real q = 1;
  for (std::size_t i = 0; i < t.n; ++i) {
    q = t.d[i] - x - (i > 0 ? t.e[i - 1] * t.e[i - 1] / q : 0);
    if (q == 0) q = -tiny;
    if (q < 0) ++count;
  }
  return count;
}

struct Bracket {
  real lo;
  real hi;
  real mid() const { return lo + (hi - lo) / 2; }
};

// Bisection for the eigenvalue of rank `index` (0 = smallest) until the bracket
// is no wider than `width` or stops shrinking.
Bracket bisect(const Tridiagonal& t, std::size_t index, real width) {
  const real bound = t.norm_bound();
  Bracket b{-bound - 1, bound + 1};
  for (int it = 0; it < 400 && b.hi - b.lo > width; ++it) {
    const real mid = b.mid();
    if (mid <= b.lo || mid >= b.hi) break;
    if (sturm_count(t, mid) > index) {
      b.hi = mid;
    } else {
      b.lo = mid;
    }
  }
  return b;
}

// LU with partial pivoting of the tridiagonal T - shift*I; reused across
// inverse-iteration steps.
class ShiftedTridiagonalSolver {
 public:
  ShiftedTridiagonalSolver(const Tridiagonal& t, real shift)
      : n_(t.n), u0_(n_), u1_(n_, 0), u2_(n_, 0), mult_(n_, 0), swap_(n_, false) {
    const real floor = std::max(kRealEps * t.norm_bound(), std::numeric_limits<real>::min());
    if (n_ == 0) return;
    real p0 = t.d[0] - shift;
    real p1 = n_ > 1 ? t.e[0] : 0;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const real c = t.e[i];
      const real q1 = t.d[i + 1] - shift;
      const real q2 = i + 2 < n_ ? t.e[i + 1] : 0;
      real next0, next1;
      if (std::abs(p0) >= std::abs(c)) {
        if (p0 == 0) p0 = floor;
        u0_[i] = p0;
        u1_[i] = p1;
        u2_[i] = 0;
        mult_[i] = c / p0;
        next0 = q1 - mult_[i] * p1;
        next1 = q2;
      } else {
        swap_[i] = true;
        u0_[i] = c;
        u1_[i] = q1;
        u2_[i] = q2;
        mult_[i] = p0 / c;
        next0 = p1 - mult_[i] * q1;
        next1 = -mult_[i] * q2;
      }
      p0 = next0;
      p1 = next1;
    }
    u0_[n_ - 1] = p0 == 0 ? floor : p0;
    for (auto& u : u0_)
      if (std::abs(u) < floor) u = u < 0 ? -floor : floor;
  }

  void solve(std::vector<real>& x) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swap_[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= mult_[i] * x[i];
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      real acc = x[ii];
      if (ii + 1 < n_) acc -= u1_[ii] * x[ii + 1];
      if (ii + 2 < n_) acc -= u2_[ii] * x[ii + 2];
      x[ii] = acc / u0_[ii];
    }
  }

 private:
  std::size_t n_;
  std::vector<real> u0_, u1_, u2_, mult_;
  std::vector<bool> swap_;
};

real normalize(std::vector<real>& x) {
  real s = 0;
  for (real v : x) s += v * v;
  s = std::sqrt(s);
  if (s > 0)
    for (real& v : x) v /= s;
  return s;
}

void canonical_sign(std::vector<double>& v) {
  for (double x : v) {
    if (std::abs(x) > kSignThreshold) {
      if (x < 0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

// Rayleigh quotient and residual of unit v against h, in extended precision.
std::pair<double, double> rayleigh(const Matrix& h, const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<real> hv(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) hv[i] += static_cast<real>(h(i, j)) * v[j];
  real lambda = 0;
  for (std::size_t i = 0; i < n; ++i) lambda += hv[i] * v[i];
  real r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const real d = hv[i] - lambda * v[i];
    r += d * d;
  }
  return {static_cast<double>(lambda), static_cast<double>(std::sqrt(r))};
}

}  // namespace

EigenPair min_eigenpair(const Matrix& h, double eps1, const EigenOptions& options) {
  if (h.rows() == 0 || h.rows() != h.cols()) throw_invalid("eigenpair needs a non-empty square matrix");
  if (!(eps1 > 0.0)) throw_invalid("eigenpair tolerance eps1 must be positive");
  if (h.asymmetry() > options.asymmetry_tolerance) {
    throw_invalid("matrix is not symmetric (asymmetry " + std::to_string(h.asymmetry()) + ")");
  }
  const std::size_t n = h.rows();
  const Tridiagonal t = tridiagonalize(h);

  const real target = static_cast<real>(eps1) * static_cast<real>(eps1);
  const Bracket first = bisect(t, 0, target);
  const real shift = first.mid();

  EigenPair best;
  best.residual = std::numeric_limits<double>::infinity();
  if (n > 1) {
    const Bracket second = bisect(t, 1, std::max(target, kRealEps * t.norm_bound()));
    best.next_lambda = static_cast<double>(second.mid());
  } else {
    best.next_lambda = std::numeric_limits<double>::infinity();
  }

  // Contraction factor of inverse iteration: |shift - l1| / |shift - l2|.
  const real separation = static_cast<real>(best.next_lambda) - first.hi;
  const real rho = separation > 0 ? std::max(first.hi - first.lo, kRealEps * t.norm_bound()) / separation
                                  : real{1};

  const double tolerance = std::max(
      eps1, options.residual_scale * std::numeric_limits<double>::epsilon() * h.frobenius_norm());
  const ShiftedTridiagonalSolver solver(t, shift);
  CounterRng rng(options.seed);

  for (std::size_t attempt = 0; attempt <= options.max_restarts; ++attempt) {
    // Uniform direction on the sphere via normalized Gaussians.
    CounterRng stream = rng.substream({attempt});
    std::vector<real> y(n);
    for (std::size_t i = 0; i < n; i += 2) {
      const double u1 = 1.0 - stream.uniform();
      const double u2 = stream.uniform();
      const double radius = std::sqrt(-2.0 * std::log(u1));
      y[i] = radius * std::cos(2.0 * M_PI * u2);
      if (i + 1 < n) y[i + 1] = radius * std::sin(2.0 * M_PI * u2);
    }
    normalize(y);

    real tan_theta = std::sqrt(static_cast<real>(n));
    std::size_t it = 0;
    while (it < options.max_iterations) {
      solver.solve(y);
      normalize(y);
      ++it;
      tan_theta *= rho;
      if (it >= 2 && tan_theta <= static_cast<real>(eps1)) break;
    }

    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      real acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += t.q[i * n + j] * y[j];
      v[i] = static_cast<double>(acc);
    }
    const double scale = norm2(v);
    for (double& x : v) x /= scale;
    canonical_sign(v);
    const auto [lambda, residual] = rayleigh(h, v);

    if (residual < best.residual) {
      best.lambda = lambda;
      best.v = v;
      best.residual = residual;
      best.iterations = it;
      best.restarts = attempt;
    }
    if (residual <= tolerance) return best;
  }
  throw EigenConvergenceError("inverse iteration residual " + std::to_string(best.residual) +
                                  " above tolerance " + std::to_string(tolerance),
                              best);
}

EigenPair min_eigenpair(const HankelMatrix& h, double eps1, const EigenOptions& options) {
  return min_eigenpair(h.entries, eps1, options);
}

std::vector<double> symmetric_eigenvalues(const Matrix& h) {
  if (h.rows() != h.cols()) throw_invalid("eigenvalues need a square matrix");
  const Tridiagonal t = tridiagonalize(h);
  std::vector<double> out(t.n);
  for (std::size_t i = 0; i < t.n; ++i)
    out[i] = static_cast<double>(bisect(t, i, 0).mid());
  return out;
}

double spectral_norm(const Matrix& a, std::size_t iterations) {
  const Matrix at = a.transposed();
  std::vector<double> x(a.cols(), 1.0 / std::sqrt(static_cast<double>(a.cols())));
  double sigma = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    auto y = at * (a * x);
    const double lambda = norm2(y);
    if (lambda == 0.0) return 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] / lambda;
    const double next = std::sqrt(lambda);
    if (std::abs(next - sigma) <= 1e-15 * next) return next;
    sigma = next;
  }
  return sigma;
}

VandermondeSolution solve_vandermonde(std::span<const double> nodes, std::span<const double> rhs,
                                      double node_threshold) {
  const std::size_t k = nodes.size();
  if (k == 0) throw_invalid("Vandermonde solve needs at least one node");
  if (rhs.size() != k) throw_invalid("Vandermonde right-hand side has the wrong length");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::abs(nodes[i] - nodes[j]) < node_threshold) {
        throw Error(ErrorKind::DegenerateNodes,
                    "nodes " + std::to_string(i) + " and " + std::to_string(j) +
                        " closer than " + std::to_string(node_threshold));
      }
    }
  }

  // Dual Bjorck-Pereyra: Newton-basis elimination, then back substitution.
  std::vector<real> x(nodes.begin(), nodes.end());
  std::vector<real> b(rhs.begin(), rhs.end());
  const std::size_t n = k - 1;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = n; i > s; --i) b[i] -= x[s] * b[i - 1];
  for (std::size_t s = n; s-- > 0;) {
    for (std::size_t i = s + 1; i <= n; ++i) b[i] /= x[i] - x[i - s - 1];
    for (std::size_t i = s; i < n; ++i) b[i] -= b[i + 1];
  }

  VandermondeSolution out;
  out.w.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) out.w[i] = static_cast<double>(b[i]);
  for (std::size_t row = 0; row < k; ++row) {
    real acc = 0;
    for (std::size_t j = 0; j < k; ++j)
      acc += static_cast<real>(out.w[j]) * std::pow(x[j], static_cast<real>(row));
    out.residual = std::max(out.residual, static_cast<double>(std::abs(acc - rhs[row])));
  }
  return out;
}

double vandermonde_inverse_inf_norm(std::span<const double> nodes) {
  const std::size_t k = nodes.size();
  if (k == 0) throw_invalid("need at least one node");
  real q_at_minus_one = 1;
  real denominator = std::numeric_limits<real>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    if (nodes[i] < 0.0) throw_invalid("closed-form inverse norm needs non-negative nodes");
    q_at_minus_one *= -1 - static_cast<real>(nodes[i]);
    real derivative = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const real gap = static_cast<real>(nodes[i]) - nodes[j];
      if (gap == 0) throw Error(ErrorKind::DegenerateNodes, "duplicate Vandermonde nodes");
      derivative *= gap;
    }
    denominator = std::min(denominator, (1 + static_cast<real>(nodes[i])) * std::abs(derivative));
  }
  return static_cast<double>(std::abs(q_at_minus_one) / denominator);
}

}  // namespace sparse_moments
