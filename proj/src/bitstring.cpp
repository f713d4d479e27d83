#include "rugged/bitstring.hpp"

#include <bit>
#include <cassert>

#include "rugged/errors.hpp"

namespace rugged {

BitString::BitString(std::size_t n) : size_(n), words_(word_count(n), 0) {}

BitString BitString::from_string(std::string_view bits) {
  BitString x(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      x.flip(i);
    } else if (bits[i] != '0') {
      throw ConfigError("bit string may only contain '0' and '1'");
    }
  }
  return x;
}

void BitString::assign_words(std::span<const std::uint64_t> words) {
  assert(words.size() == words_.size());
  ones_ = 0;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    words_[k] = words[k];
  }
  if (const std::size_t tail = size_ & 63; tail != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << tail) - 1;
  }
  for (auto w : words_) ones_ += static_cast<std::size_t>(std::popcount(w));
}

std::string BitString::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  assert(a.size() == b.size());
  std::size_t d = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t k = 0; k < wa.size(); ++k) {
    d += static_cast<std::size_t>(std::popcount(wa[k] ^ wb[k]));
  }
  return d;
}

}  // namespace rugged
