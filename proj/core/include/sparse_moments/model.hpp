#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "sparse_moments/rng.hpp"

namespace sparse_moments {

/// A k-atomic distribution on [0,1]: coin biases `alpha` with mixing
/// weights `w`. Always held in canonical form (alpha strictly increasing).
class MixtureModel {
 public:
  /// Validates and canonicalizes: sorts by alpha and merges coincident atoms.
  /// Throws Error(InvalidInput) on out-of-range values or a weight sum that
  /// differs from 1 by more than 1e-12.
  MixtureModel(std::vector<double> alpha, std::vector<double> w);

  std::size_t k() const noexcept { return alpha_.size(); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  const std::vector<double>& weights() const noexcept { return w_; }
  double w_min() const noexcept;

  friend bool operator==(const MixtureModel&, const MixtureModel&) = default;

 private:
  std::vector<double> alpha_;
  std::vector<double> w_;
};

/// Heads-count histogram of s snapshots, each of m tosses.
class Histogram {
 public:
  Histogram(std::size_t m, std::vector<std::uint64_t> counts);

  std::size_t m() const noexcept { return counts_.size() - 1; }
  std::uint64_t s() const noexcept { return s_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::vector<double> normalized() const;

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t s_ = 0;
};

/// Standard moments (mu_0, ..., mu_n).
struct MomentVector {
  std::vector<double> mu;

  std::size_t size() const noexcept { return mu.size(); }
  double operator[](std::size_t i) const { return mu[i]; }
};

inline constexpr double kInfiniteSeparation = std::numeric_limits<double>::infinity();

/// Minimum pairwise gap between atoms; kInfiniteSeparation when k = 1.
double separation(const MixtureModel& model);

MomentVector exact_moments(const MixtureModel& model, std::size_t n);

Histogram sample_histogram(const MixtureModel& model, std::size_t m, std::uint64_t s,
                           const CounterRng& rng);

/// Expected normalized histogram E[h] for m-snapshots.
std::vector<double> exact_histogram(const MixtureModel& model, std::size_t m);

/// min over permutations of max |a_i - b_sigma(i)|.
double matching_distance(std::span<const std::complex<double>> a,
                         std::span<const std::complex<double>> b);
double matching_distance(std::span<const double> a, std::span<const double> b);

/// Permutation achieving matching_distance: b[perm[i]] is matched to a[i].
std::vector<std::size_t> optimal_matching(std::span<const double> a,
                                          std::span<const double> b);

/// Exact 1-Wasserstein distance between two atomic measures on [0,1].
double wasserstein(const MixtureModel& a, const MixtureModel& b);

struct ModelErrors {
  double alpha_err_inf = 0.0;  // optimal matching distance between the biases
  double w_err_inf = 0.0;      // max weight error under that matching
  double wasserstein = 0.0;
};

/// Requires equal k.
ModelErrors compare_models(const MixtureModel& truth, const MixtureModel& estimate);

/// Random canonical model whose separation is >= zeta and min weight is
/// >= w_min, distributed as uniform biases and Dirichlet(1,...,1) weights
/// conditioned on those constraints.
MixtureModel random_model(std::size_t k, double zeta, double w_min, CounterRng& rng);

}  // namespace sparse_moments
