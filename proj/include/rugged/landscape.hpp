#pragma once

#include <cstdint>

#include "rugged/bitstring.hpp"
#include "rugged/noise.hpp"

namespace rugged {

/// D-rugged OneMax: x -> |x|_1 + y_x, where y_x is drawn once from D and
/// then frozen for the lifetime of the landscape.
///
/// y_x is never stored. It is recomputed as a pure function of the landscape
/// seed and a keyed SipHash-2-4 digest of x's canonical encoding (bit count
/// as a little-endian u64, then the packed little-endian words), which seeds
/// a counter-based stream from which one sample of D is drawn. Immutable and
/// safe for concurrent evaluation.
class FrozenLandscape {
 public:
  FrozenLandscape(std::size_t n, NoiseModel noise, std::uint64_t seed);

  std::size_t n() const noexcept { return n_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Keyed 64-bit digest of x (exposed for tests of the encoding).
  std::uint64_t digest(const BitString& x) const;

  double frozen_noise(const BitString& x) const;

  double evaluate(const BitString& x) const {
    return static_cast<double>(x.ones()) + frozen_noise(x);
  }

 private:
  std::size_t n_;
  NoiseModel noise_;
  std::uint64_t seed_;
  unsigned char key_[16];
};

}  // namespace rugged
