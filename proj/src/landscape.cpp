#include "rugged/landscape.hpp"

#include <sodium.h>

#include <array>
#include <bit>
#include <cstring>
#include <vector>

namespace rugged {
namespace {

void store_le(unsigned char* out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>(v >> (8 * b));
}

std::uint64_t load_le(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | in[b];
  return v;
}

}  // namespace

FrozenLandscape::FrozenLandscape(std::size_t n, NoiseModel noise, std::uint64_t seed)
    : n_(n), noise_(noise), seed_(seed) {
  if (n == 0) throw ConfigError("landscape dimension must be positive");
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  store_le(key_, mix64(seed ^ 0x6C616E6473636170ULL));
  store_le(key_ + 8, mix64(seed + 0x5349504B45590000ULL));
}

std::uint64_t FrozenLandscape::digest(const BitString& x) const {
  thread_local std::vector<unsigned char> buffer;
  const auto words = x.words();
  buffer.resize(8 * (words.size() + 1));
  store_le(buffer.data(), static_cast<std::uint64_t>(x.size()));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(buffer.data() + 8, words.data(), 8 * words.size());
  } else {
    for (std::size_t k = 0; k < words.size(); ++k) store_le(buffer.data() + 8 * (k + 1), words[k]);
  }
  unsigned char out[crypto_shorthash_siphash24_BYTES];
  crypto_shorthash_siphash24(out, buffer.data(), buffer.size(), key_);
  return load_le(out);
}

double FrozenLandscape::frozen_noise(const BitString& x) const {
  if (noise_.is_none()) return 0.0;
  CounterStream stream(mix_combine(seed_, digest(x)));
  return noise_.sample(stream);
}

}  // namespace rugged
