#include "sparse_moments/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sparse_moments {

namespace {

using real = long double;
using cplx = std::complex<real>;

constexpr real kRealEps = std::numeric_limits<real>::epsilon();

}  // namespace

std::complex<double> Polynomial::operator()(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * z + coeffs[j];
  return acc;
}

Polynomial polynomial_from_roots(std::span<const double> roots) {
  Polynomial p{{1.0}};
  for (double r : roots) {
    std::vector<double> next(p.coeffs.size() + 1, 0.0);
    for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
      next[j + 1] += p.coeffs[j];
      next[j] -= r * p.coeffs[j];
    }
    p.coeffs = std::move(next);
  }
  return p;
}

RootSet find_roots(const Polynomial& p, double eps2, const RootOptions& options) {
  const std::size_t k = p.degree();
  if (k == 0) throw_invalid("root finding needs degree >= 1");
  if (!(eps2 > 0.0)) throw_invalid("root tolerance eps2 must be positive");
  double cmax = 0.0;
  for (double c : p.coeffs) {
    if (!std::isfinite(c)) throw_invalid("non-finite polynomial coefficient");
    cmax = std::max(cmax, std::abs(c));
  }
  const double lead = p.coeffs[k];
  if (!(std::abs(lead) >= options.leading_threshold * cmax) || lead == 0.0) {
    throw Error(ErrorKind::DegreeDeficient,
                "leading coefficient " + std::to_string(lead) + " below " +
                    std::to_string(options.leading_threshold) + " * max coefficient " +
                    std::to_string(cmax));
  }

  RootSet out;
  auto finish = [&](const std::vector<cplx>& z) {
    out.roots.resize(k);
    out.residuals.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      out.roots[i] = {static_cast<double>(z[i].real()), static_cast<double>(z[i].imag())};
      cplx acc = 0;
      for (std::size_t j = k + 1; j-- > 0;) acc = acc * z[i] + static_cast<real>(p.coeffs[j]);
      out.residuals[i] = static_cast<double>(std::abs(acc));
    }
  };

  if (k == 1) {
    finish({cplx(-static_cast<real>(p.coeffs[0]) / lead)});
    return out;
  }

  // g(z) = p(z / shrink) / lead / shrink^-k has roots shrink * beta; the
  // (2k-1)/(2k-2) ball maps onto the unit disc.
  const real shrink = static_cast<real>(2 * k - 2) / static_cast<real>(2 * k - 1);
  std::vector<real> a(k + 1);
  {
    real power = 1;
    for (std::size_t j = 0; j <= k; ++j) {
      a[j] = static_cast<real>(p.coeffs[j]) * power;
      power /= shrink;
    }
    const real monic = a[k];
    for (auto& c : a) c /= monic;
  }
  std::vector<real> abs_a(k + 1);
  for (std::size_t j = 0; j <= k; ++j) abs_a[j] = std::abs(a[j]);

  real cauchy = 0;
  for (std::size_t j = 0; j < k; ++j) cauchy = std::max(cauchy, abs_a[j]);
  cauchy += 1;

  std::vector<cplx> z(k);
  const real two_pi = 2 * static_cast<real>(M_PI);
  for (std::size_t i = 0; i < k; ++i) {
    const real angle = two_pi * static_cast<real>(i) / static_cast<real>(k) + 0.4L;
    z[i] = std::polar(1.05L * cauchy, angle);
  }

  const real tol = static_cast<real>(eps2) * shrink;
  std::vector<bool> done(k, false);
  std::size_t remaining = k;
  std::size_t it = 0;
  for (; it < options.max_iterations && remaining > 0; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      if (done[i]) continue;
      cplx value = 1, deriv = 0;
      real bound = 1;
      const real r = std::abs(z[i]);
      for (std::size_t j = k; j-- > 0;) {
        deriv = deriv * z[i] + value;
        value = value * z[i] + a[j];
        bound = bound * r + abs_a[j];
      }
      // Residual at rounding level: further steps cannot improve this root.
      if (std::abs(value) <= 4 * static_cast<real>(k) * kRealEps * bound) {
        done[i] = true;
        --remaining;
        continue;
      }
      cplx repulsion = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) repulsion += real{1} / (z[i] - z[j]);
      const cplx newton = value / deriv;
      const cplx step = newton / (real{1} - newton * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        // Critical point of g or a collision: nudge off it.
        z[i] += cplx(1e-3L, 1e-3L);
        continue;
      }
      z[i] -= step;
      if (std::abs(step) <= tol) {
        done[i] = true;
        --remaining;
      }
    }
  }

  for (auto& root : z) root /= shrink;
  finish(z);
  out.iterations = it;
  if (remaining > 0) {
    throw RootConvergenceError(std::to_string(remaining) + " of " + std::to_string(k) +
                                   " roots unconverged after " + std::to_string(it) +
                                   " iterations",
                               out);
  }
  return out;
}

std::vector<double> project_roots(const RootSet& rs) {
  std::vector<double> out;
  out.reserve(rs.roots.size());
  for (const auto& r : rs.roots) out.push_back(std::clamp(r.real(), 0.0, 1.0));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sparse_moments
