#pragma once

#include <cstdint>
#include <span>

#include "sparse_moments/matrix.hpp"
#include "sparse_moments/model.hpp"

namespace sparse_moments {

/// Upper-triangular (2k+1) x (2k+1) map from the normalized 2k-snapshot
/// histogram to the standard moments: entry (i, j) = C(j, i) / C(2k, i).
struct PascalMatrix {
  std::size_t k = 0;
  Matrix entries;
};

/// (k+1) x (k+1) matrix with entry (i, j) = mu_{i+j}.
struct HankelMatrix {
  std::size_t k = 0;
  Matrix entries;
};

/// C(n, r) in floating point by multiplicative recurrence.
double binomial(std::size_t n, std::size_t r);

PascalMatrix pascal_matrix(std::size_t k);

/// mu~ = Pas * h for a normalized histogram h of length 2k+1.
MomentVector histogram_to_moments(std::span<const double> frequencies);
MomentVector histogram_to_moments(const Histogram& h);

HankelMatrix build_hankel(const MomentVector& mu);

inline constexpr std::uint64_t kDefaultSampleCap = std::uint64_t{1} << 52;

/// Sample size that bounds ||mu~ - mu||_inf by eps with probability >= 1 - delta,
/// chaining Hoeffding over the 2k+1 histogram cells with ||Pas||_2 <= 6^k.
/// Throws InfeasibleSampleSize when the answer exceeds `cap`.
std::uint64_t plan_sample_size(std::size_t k, double eps, double delta,
                               std::uint64_t cap = kDefaultSampleCap);

}  // namespace sparse_moments
