#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rugged {

/// Generator used by every optimizer run and Monte-Carlo estimator.
/// The engine is bit-exact across standard libraries; the distributions
/// below are implemented here so sampled values are as well.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Folds `value` into the running hash `h`.
constexpr std::uint64_t mix_combine(std::uint64_t h, std::uint64_t value) noexcept {
  return mix64(h ^ mix64(value + kGoldenGamma));
}

/// Uniform double in [0, 1) from the top 53 bits of a word.
constexpr double to_unit_interval(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

template <class Gen>
double uniform01(Gen& gen) {
  return to_unit_interval(gen());
}

/// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
template <class Gen>
std::uint64_t uniform_index(Gen& rng, std::uint64_t bound) {
  using u128 = unsigned __int128;
  u128 m = static_cast<u128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

template <class Gen>
bool bernoulli(Gen& gen, double p) {
  return uniform01(gen) < p;
}

/// Counter-based stream: the i-th output is mix64(key + (i+1)·gamma).
/// Stateless apart from the counter, so a key fully determines the stream.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGoldenGamma);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rugged

namespace rugged {

/// FNV-1a over the bytes of `s`; used to turn string tags into seed words.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace rugged
