#include "sparse_moments/prony.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sparse_moments {

void LearnConfig::validate() const {
  if (k == 0) throw_invalid("k must be >= 1");
  if (!(zeta > 0.0)) throw_invalid("zeta must be positive");
  if (k >= 2 && zeta > 1.0 / static_cast<double>(k - 1) + 1e-12) {
    throw_invalid("zeta = " + std::to_string(zeta) + " violates zeta <= 1/(k-1) for k = " +
                  std::to_string(k));
  }
  if (!(w_min > 0.0) || w_min > 1.0 / static_cast<double>(k) + 1e-12) {
    throw_invalid("w_min must lie in (0, 1/k]");
  }
  if (!(gamma >= 1.0)) throw_invalid("gamma must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw_invalid("delta must lie in (0, 1)");
  if (!(tolerance_floor > 0.0)) throw_invalid("tolerance floor must be positive");
}

Tolerances LearnConfig::tolerances() const {
  const double kd = static_cast<double>(k);
  const double scale = std::exp2(-gamma);
  const double raw1 = eps1_override.value_or(w_min * scale * std::pow(zeta / 16.0, 2.0 * kd));
  const double raw2 = eps2_override.value_or(scale * std::pow(zeta / 2.0, kd) / (6.0 * kd));
  Tolerances t;
  t.eps1_clamped = !(raw1 >= tolerance_floor);
  t.eps2_clamped = !(raw2 >= tolerance_floor);
  t.eps1 = t.eps1_clamped ? tolerance_floor : raw1;
  t.eps2 = t.eps2_clamped ? tolerance_floor : raw2;
  return t;
}

double LearnConfig::moment_accuracy() const {
  const double kd = static_cast<double>(k);
  return w_min * std::exp2(-gamma) * std::pow(zeta / 16.0, 4.0 * kd) / (kd + 1.0);
}

std::uint64_t LearnConfig::planned_sample_size(std::uint64_t cap) const {
  validate();
  return plan_sample_size(k, moment_accuracy(), delta, cap);
}

std::vector<double> rectify_weights(std::span<const double> wprime) {
  if (wprime.empty()) throw_invalid("no weights to rectify");
  double negative = 0.0, positive = 0.0;
  for (double x : wprime) {
    if (!std::isfinite(x)) throw_invalid("non-finite weight");
    (x < 0.0 ? negative : positive) += x;
  }
  if (std::abs(negative + positive - 1.0) > 1e-9) {
    throw_invalid("weights sum to " + std::to_string(negative + positive) + ", expected 1");
  }
  if (positive <= 0.0) throw_invalid("no non-negative mass to rescale");

  // 1 + W-/W+ = 1/W+ when W- + W+ = 1; the latter keeps the output sum at 1
  // even when the input sum carries rounding error.
  const double factor = 1.0 / positive;
  std::vector<double> out(wprime.size());
  for (std::size_t i = 0; i < wprime.size(); ++i) out[i] = wprime[i] < 0.0 ? 0.0 : wprime[i] * factor;
  return out;
}

namespace {

[[noreturn]] void fail(const Error& e, const char* stage, const Diagnostics& diag) {
  throw LearnError(e.kind(), e.what(), stage, diag);
}

}  // namespace

LearnReport learn_from_exact_moments(const LearnConfig& cfg, const MomentVector& mu) {
  cfg.validate();
  const std::size_t k = cfg.k;
  if (mu.size() != 2 * k + 1) {
    throw_invalid("need 2k+1 = " + std::to_string(2 * k + 1) + " moments, got " +
                  std::to_string(mu.size()));
  }
  if (std::abs(mu[0] - 1.0) > 1e-9) throw_invalid("mu_0 must equal 1");

  const Tolerances tol = cfg.tolerances();
  Diagnostics diag;
  diag.eps1 = tol.eps1;
  diag.eps2 = tol.eps2;
  diag.tolerance_clamped = tol.eps1_clamped || tol.eps2_clamped;

  const HankelMatrix hankel = build_hankel(mu);

  EigenPair eig;
  try {
    eig = min_eigenpair(hankel, tol.eps1, cfg.eigen);
  } catch (const EigenConvergenceError& e) {
    diag.lambda_min = e.best().lambda;
    diag.eigen_residual = e.best().residual;
    fail(e, "eigenpair", diag);
  } catch (const Error& e) {
    fail(e, "eigenpair", diag);
  }
  diag.lambda_min = eig.lambda;
  diag.lambda_next = eig.next_lambda;
  diag.eigen_residual = eig.residual;
  if (cfg.require_eigengap && k >= 1 && eig.next_lambda - eig.lambda <= 2.0 * tol.eps1) {
    throw LearnError(ErrorKind::DegreeDeficient,
                     "eigengap " + std::to_string(eig.next_lambda - eig.lambda) +
                         " <= 2 eps1: the moments admit fewer than k atoms",
                     "eigenpair", diag);
  }

  RootSet roots;
  try {
    roots = find_roots(Polynomial{eig.v}, tol.eps2, cfg.roots);
  } catch (const RootConvergenceError& e) {
    diag.root_residual_max = *std::max_element(e.best().residuals.begin(), e.best().residuals.end());
    fail(e, "roots", diag);
  } catch (const Error& e) {
    fail(e, "roots", diag);
  }
  diag.root_residual_max = *std::max_element(roots.residuals.begin(), roots.residuals.end());

  const std::vector<double> alpha = project_roots(roots);

  VandermondeSolution solution;
  try {
    solution = solve_vandermonde(alpha, std::span<const double>(mu.mu).first(k), cfg.node_threshold);
  } catch (const Error& e) {
    fail(e, "vandermonde", diag);
  }
  diag.vandermonde_residual = solution.residual;

  std::vector<double> w;
  try {
    w = rectify_weights(solution.w);
  } catch (const Error& e) {
    fail(e, "rectify", diag);
  }
  double removed = 0.0;
  for (double x : solution.w) removed -= std::min(x, 0.0);
  diag.rectified_mass = removed;

  try {
    return LearnReport{MixtureModel(alpha, std::move(w)), diag};
  } catch (const Error& e) {
    fail(e, "model", diag);
  }
}

LearnReport learn_coin_mixture(const LearnConfig& cfg, std::span<const double> frequencies) {
  cfg.validate();
  if (frequencies.size() != 2 * cfg.k + 1) {
    throw_invalid("histogram must have m = 2k = " + std::to_string(2 * cfg.k) + " (got m = " +
                  std::to_string(frequencies.empty() ? 0 : frequencies.size() - 1) + ")");
  }
  return learn_from_exact_moments(cfg, histogram_to_moments(frequencies));
}

LearnReport learn_coin_mixture(const LearnConfig& cfg, const Histogram& h) {
  if (h.m() % 2 != 0) {
    throw_invalid("snapshot length m = " + std::to_string(h.m()) + " is odd; need m = 2k");
  }
  return learn_coin_mixture(cfg, h.normalized());
}

}  // namespace sparse_moments
