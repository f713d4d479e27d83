#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rugged {

/// Fixed-length bit vector with a cached popcount.
///
/// Bit i lives in word i / 64 at position i % 64. Bits past size() in the
/// last word are always zero, so the packed words are a canonical encoding.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n);

  /// Parses a string of '0'/'1' characters; character i becomes bit i.
  static BitString from_string(std::string_view bits);

  std::size_t size() const noexcept { return size_; }
  std::size_t ones() const noexcept { return ones_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }

  void flip(std::size_t i) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    std::uint64_t& w = words_[i >> 6];
    if (w & mask) {
      --ones_;
    } else {
      ++ones_;
    }
    w ^= mask;
  }

  void set(std::size_t i, bool value) noexcept {
    if (test(i) != value) flip(i);
  }

  /// Replaces the content with the given words; trailing bits are masked off.
  void assign_words(std::span<const std::uint64_t> words);

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::string to_string() const;

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  std::size_t size_ = 0;
  std::size_t ones_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::size_t word_count(std::size_t n) noexcept { return (n + 63) / 64; }

/// OneMax: number of one bits.
inline std::size_t onemax(const BitString& x) noexcept { return x.ones(); }

std::size_t hamming_distance(const BitString& a, const BitString& b);

}  // namespace rugged
