#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace sparse_moments {

/// Counter-based generator: the n-th output is a pure function of (key, n),
/// so any trial can be replayed from its key alone. Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t seed = 0) noexcept
      : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    return mix(key_ + kWeyl * ++counter_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Independent stream keyed by this stream's key and `ids`; does not
  /// advance this generator.
  constexpr CounterRng substream(std::initializer_list<std::uint64_t> ids) const noexcept {
    CounterRng out;
    std::uint64_t key = key_;
    for (std::uint64_t id : ids) key = mix(key ^ mix(id + kWeyl));
    out.key_ = key;
    return out;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kWeyl = 0x9e3779b97f4a7c15ULL;

  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace sparse_moments
