#include "sparse_moments/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sparse_moments/error.hpp"

namespace sparse_moments {

MixtureModel::MixtureModel(std::vector<double> alpha, std::vector<double> w) {
  if (alpha.empty()) throw_invalid("mixture needs at least one atom");
  if (alpha.size() != w.size()) {
    throw_invalid("alpha and w differ in length (" + std::to_string(alpha.size()) + " vs " +
                  std::to_string(w.size()) + ")");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] >= 0.0 && alpha[i] <= 1.0)) throw_invalid("alpha outside [0,1]");
    if (!(w[i] >= 0.0)) throw_invalid("negative or non-finite weight");
    total += w[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw_invalid("weights sum to " + std::to_string(total) + ", expected 1");
  }

  std::vector<std::size_t> order(alpha.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return alpha[a] < alpha[b]; });
  for (std::size_t idx : order) {
    if (!alpha_.empty() && alpha_.back() == alpha[idx]) {
      w_.back() += w[idx];
    } else {
      alpha_.push_back(alpha[idx]);
      w_.push_back(w[idx]);
    }
  }
}

double MixtureModel::w_min() const noexcept {
  return *std::min_element(w_.begin(), w_.end());
}

Histogram::Histogram(std::size_t m, std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)) {
  if (m == 0) throw_invalid("snapshot length m must be >= 1");
  if (counts_.size() != m + 1) {
    throw_invalid("histogram for m = " + std::to_string(m) + " needs " +
                  std::to_string(m + 1) + " counts, got " + std::to_string(counts_.size()));
  }
  for (auto c : counts_) s_ += c;
  if (s_ == 0) throw_invalid("histogram is empty (s = 0)");
}

std::vector<double> Histogram::normalized() const {
  std::vector<double> h(counts_.size());
  const double s = static_cast<double>(s_);
  for (std::size_t j = 0; j < h.size(); ++j) h[j] = static_cast<double>(counts_[j]) / s;
  return h;
}

double separation(const MixtureModel& model) {
  const auto& a = model.alpha();
  if (a.size() < 2) return kInfiniteSeparation;
  double gap = kInfiniteSeparation;
  for (std::size_t i = 1; i < a.size(); ++i) gap = std::min(gap, a[i] - a[i - 1]);
  return gap;
}

MomentVector exact_moments(const MixtureModel& model, std::size_t n) {
  MomentVector out{std::vector<double>(n + 1, 0.0)};
  out.mu[0] = 1.0;
  const auto& a = model.alpha();
  const auto& w = model.weights();
  for (std::size_t j = 0; j < a.size(); ++j) {
    double power = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
      power *= a[j];
      out.mu[i] += w[j] * power;
    }
  }
  return out;
}

namespace {

// pmf of Binomial(m, p) for j = 0..m.
std::vector<double> binomial_pmf(std::size_t m, double p) {
  std::vector<double> pmf(m + 1);
  double binom = 1.0;
  for (std::size_t j = 0; j <= m; ++j) {
    if (j > 0) binom = binom * static_cast<double>(m - j + 1) / static_cast<double>(j);
    pmf[j] = binom * std::pow(p, static_cast<double>(j)) *
             std::pow(1.0 - p, static_cast<double>(m - j));
  }
  return pmf;
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  c.back() = std::numeric_limits<double>::infinity();
  return c;
}

std::size_t draw(const std::vector<double>& cdf, double u) {
  return static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

}  // namespace

Histogram sample_histogram(const MixtureModel& model, std::size_t m, std::uint64_t s,
                           const CounterRng& rng) {
  if (m == 0) throw_invalid("snapshot length m must be >= 1");
  if (s == 0) throw_invalid("sample size s must be >= 1");

  const auto coin_cdf = cumulative(model.weights());
  std::vector<std::vector<double>> heads_cdf;
  heads_cdf.reserve(model.k());
  for (double a : model.alpha()) heads_cdf.push_back(cumulative(binomial_pmf(m, a)));

  CounterRng gen = rng;
  std::vector<std::uint64_t> counts(m + 1, 0);
  for (std::uint64_t t = 0; t < s; ++t) {
    const std::size_t coin = draw(coin_cdf, gen.uniform());
    ++counts[draw(heads_cdf[coin], gen.uniform())];
  }
  return Histogram(m, std::move(counts));
}

std::vector<double> exact_histogram(const MixtureModel& model, std::size_t m) {
  if (m == 0) throw_invalid("snapshot length m must be >= 1");
  std::vector<double> h(m + 1, 0.0);
  for (std::size_t c = 0; c < model.k(); ++c) {
    const auto pmf = binomial_pmf(m, model.alpha()[c]);
    for (std::size_t j = 0; j <= m; ++j) h[j] += model.weights()[c] * pmf[j];
  }
  return h;
}

namespace {

// Kuhn's augmenting-path matching on the graph {(i, j) : cost(i, j) <= threshold}.
class ThresholdMatcher {
 public:
  ThresholdMatcher(const std::vector<double>& cost, std::size_t n) : cost_(cost), n_(n) {}

  bool perfect(double threshold, std::vector<std::size_t>* match_of_left = nullptr) {
    threshold_ = threshold;
    right_owner_.assign(n_, kNone);
    for (std::size_t i = 0; i < n_; ++i) {
      seen_.assign(n_, false);
      if (!augment(i)) return false;
    }
    if (match_of_left) {
      match_of_left->assign(n_, 0);
      for (std::size_t j = 0; j < n_; ++j) (*match_of_left)[right_owner_[j]] = j;
    }
    return true;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (seen_[j] || cost_[i * n_ + j] > threshold_) continue;
      seen_[j] = true;
      if (right_owner_[j] == kNone || augment(right_owner_[j])) {
        right_owner_[j] = i;
        return true;
      }
    }
    return false;
  }

  const std::vector<double>& cost_;
  std::size_t n_;
  double threshold_ = 0.0;
  std::vector<std::size_t> right_owner_;
  std::vector<bool> seen_;
};

template <typename T>
double bottleneck(std::span<const T> a, std::span<const T> b,
                  std::vector<std::size_t>* perm) {
  if (a.size() != b.size()) {
    throw_invalid("matching distance needs equal sizes (" + std::to_string(a.size()) +
                  " vs " + std::to_string(b.size()) + ")");
  }
  const std::size_t n = a.size();
  if (n == 0) {
    if (perm) perm->clear();
    return 0.0;
  }
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = std::abs(a[i] - b[j]);

  std::vector<double> candidates = cost;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  ThresholdMatcher matcher(cost, n);
  std::size_t lo = 0, hi = candidates.size() - 1;  // the largest candidate always works
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matcher.perfect(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (perm) matcher.perfect(candidates[lo], perm);
  return candidates[lo];
}

}  // namespace

double matching_distance(std::span<const std::complex<double>> a,
                         std::span<const std::complex<double>> b) {
  return bottleneck(a, b, nullptr);
}

double matching_distance(std::span<const double> a, std::span<const double> b) {
  return bottleneck(a, b, nullptr);
}

std::vector<std::size_t> optimal_matching(std::span<const double> a,
                                          std::span<const double> b) {
  std::vector<std::size_t> perm;
  bottleneck(a, b, &perm);
  return perm;
}

double wasserstein(const MixtureModel& a, const MixtureModel& b) {
  // Both alpha vectors are sorted; sweep the merged breakpoints and integrate
  // |F_a - F_b| over each gap.
  const auto& xa = a.alpha();
  const auto& xb = b.alpha();
  std::size_t i = 0, j = 0;
  double cdf_a = 0.0, cdf_b = 0.0;
  double prev = 0.0, total = 0.0;
  while (i < xa.size() || j < xb.size()) {
    const double next = std::min(i < xa.size() ? xa[i] : 2.0, j < xb.size() ? xb[j] : 2.0);
    total += std::abs(cdf_a - cdf_b) * (next - prev);
    while (i < xa.size() && xa[i] == next) cdf_a += a.weights()[i++];
    while (j < xb.size() && xb[j] == next) cdf_b += b.weights()[j++];
    prev = next;
  }
  return total + std::abs(cdf_a - cdf_b) * (1.0 - prev);
}

ModelErrors compare_models(const MixtureModel& truth, const MixtureModel& estimate) {
  const auto perm = optimal_matching(truth.alpha(), estimate.alpha());
  ModelErrors out;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.alpha_err_inf =
        std::max(out.alpha_err_inf, std::abs(truth.alpha()[i] - estimate.alpha()[perm[i]]));
    out.w_err_inf =
        std::max(out.w_err_inf, std::abs(truth.weights()[i] - estimate.weights()[perm[i]]));
  }
  out.wasserstein = wasserstein(truth, estimate);
  return out;
}

MixtureModel random_model(std::size_t k, double zeta, double w_min, CounterRng& rng) {
  if (k == 0) throw_invalid("k must be >= 1");
  if (!(w_min >= 0.0) || w_min * static_cast<double>(k) > 1.0 + 1e-15) {
    throw_invalid("w_min must lie in [0, 1/k]");
  }
  const double span = k > 1 ? 1.0 - static_cast<double>(k - 1) * zeta : 1.0;
  if (k > 1 && (!(zeta > 0.0) || span < 0.0)) {
    throw_invalid("separation zeta must lie in (0, 1/(k-1)]");
  }

  // Sorted uniforms on [0, span] shifted by i*zeta are uniform on the set of
  // sorted vectors in [0,1]^k with all gaps >= zeta.
  std::vector<double> alpha(k);
  for (auto& x : alpha) x = rng.uniform() * span;
  std::sort(alpha.begin(), alpha.end());
  for (std::size_t i = 1; i < k; ++i) alpha[i] = std::min(1.0, alpha[i] + static_cast<double>(i) * zeta);

  // Uniform point of the simplex, shrunk onto {w : w_i >= w_min}.
  std::vector<double> e(k);
  double total = 0.0;
  for (auto& x : e) {
    x = -std::log1p(-rng.uniform());
    total += x;
  }
  const double free_mass = 1.0 - static_cast<double>(k) * w_min;
  std::vector<double> w(k);
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    w[i] = w_min + free_mass * e[i] / total;
    head += w[i];
  }
  w[k - 1] = 1.0 - head;
  return MixtureModel(std::move(alpha), std::move(w));
}

}  // namespace sparse_moments
