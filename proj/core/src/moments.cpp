#include "sparse_moments/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparse_moments/error.hpp"

namespace sparse_moments {

std::vector<double> Matrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const { return norm2(data_); }

double Matrix::asymmetry() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

double norm2(std::span<const double> x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += (v / scale) * (v / scale);
  return scale * std::sqrt(acc);
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  r = std::min(r, n - r);
  double out = 1.0;
  for (std::size_t t = 1; t <= r; ++t)
    out = out * static_cast<double>(n - r + t) / static_cast<double>(t);
  return std::round(out);
}

PascalMatrix pascal_matrix(std::size_t k) {
  if (k == 0) throw_invalid("Pascal transform needs k >= 1");
  const std::size_t n = 2 * k;
  PascalMatrix pas{k, Matrix(n + 1, n + 1)};
  // C(j,i)/C(2k,i) = prod_{t<i} (j-t)/(2k-t): no large intermediates.
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i; j <= n; ++j) {
      double ratio = 1.0;
      for (std::size_t t = 0; t < i; ++t)
        ratio *= static_cast<double>(j - t) / static_cast<double>(n - t);
      pas.entries(i, j) = ratio;
    }
  }
  return pas;
}

MomentVector histogram_to_moments(std::span<const double> frequencies) {
  const std::size_t len = frequencies.size();
  if (len < 3 || len % 2 == 0) {
    throw_invalid("histogram_to_moments needs m = 2k >= 2 (got m = " +
                  std::to_string(len == 0 ? 0 : len - 1) + ")");
  }
  const std::size_t k = (len - 1) / 2;
  const auto pas = pascal_matrix(k);
  MomentVector mu{pas.entries * frequencies};
  // Row 0 of Pas is all ones, so mu_0 = sum(h) = 1 up to rounding.
  mu.mu[0] = 1.0;
  return mu;
}

MomentVector histogram_to_moments(const Histogram& h) {
  if (h.m() % 2 != 0) {
    throw_invalid("snapshot length m = " + std::to_string(h.m()) + " is odd; need m = 2k");
  }
  return histogram_to_moments(h.normalized());
}

HankelMatrix build_hankel(const MomentVector& mu) {
  if (mu.size() < 3 || mu.size() % 2 == 0) {
    throw_invalid("Hankel construction needs 2k+1 moments with k >= 1, got " +
                  std::to_string(mu.size()));
  }
  const std::size_t k = (mu.size() - 1) / 2;
  HankelMatrix h{k, Matrix(k + 1, k + 1)};
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = 0; j <= k; ++j) h.entries(i, j) = mu.mu[i + j];
  return h;
}

std::uint64_t plan_sample_size(std::size_t k, double eps, double delta, std::uint64_t cap) {
  if (k == 0) throw_invalid("k must be >= 1");
  if (!(eps > 0.0)) throw_invalid("eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw_invalid("delta must lie in (0, 1)");

  const double kd = static_cast<double>(k);
  const double t = eps / (std::pow(6.0, kd) * std::sqrt(2.0 * kd + 1.0));
  const double s = std::log(4.0 * kd / delta) / (2.0 * t * t);
  // Absorb a few ulps of rounding so that exact integers do not round up.
  const double rounded = std::ceil(s * (1.0 - 1e-12));
  if (!std::isfinite(rounded) || rounded > static_cast<double>(cap)) {
    throw Error(ErrorKind::InfeasibleSampleSize,
                "planned sample size " + std::to_string(s) + " exceeds cap " +
                    std::to_string(cap));
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(rounded));
}

}  // namespace sparse_moments
