#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace idsq {

/// Fixed-width bit vector with left-to-right bit numbering.
///
/// Bit 0 is the most significant bit of the first word, so for a 64-bit
/// SKINNY state the first word reads exactly like the hex ciphertext.
/// Used for exponent vectors (u, v, d) and for state/key bit assignments.
template <std::size_t Words>
class BitVector {
 public:
  static constexpr std::size_t kBits = Words * 64;

  constexpr BitVector() = default;

  static constexpr BitVector unit(std::size_t i) {
    BitVector v;
    v.set(i);
    return v;
  }

  /// First `count` bits set.
  static constexpr BitVector ones(std::size_t count) {
    BitVector v;
    for (std::size_t i = 0; i < count; ++i) v.set(i);
    return v;
  }

  constexpr bool test(std::size_t i) const {
    return (words_[i / 64] >> (63 - i % 64)) & 1U;
  }
  constexpr void set(std::size_t i, bool value = true) {
    const std::uint64_t m = std::uint64_t{1} << (63 - i % 64);
    if (value)
      words_[i / 64] |= m;
    else
      words_[i / 64] &= ~m;
  }
  constexpr void flip(std::size_t i) {
    words_[i / 64] ^= std::uint64_t{1} << (63 - i % 64);
  }

  /// Reads `width` (<= 8) bits starting at bit `offset` as an integer,
  /// first bit most significant. Fields never straddle a word boundary
  /// for the cell sizes in use (4 and 8).
  constexpr unsigned field(std::size_t offset, unsigned width) const {
    const unsigned shift = 64 - static_cast<unsigned>(offset % 64) - width;
    return static_cast<unsigned>((words_[offset / 64] >> shift) &
                                 ((1U << width) - 1));
  }
  constexpr void set_field(std::size_t offset, unsigned width, unsigned value) {
    const unsigned shift = 64 - static_cast<unsigned>(offset % 64) - width;
    const std::uint64_t mask = ((std::uint64_t{1} << width) - 1) << shift;
    words_[offset / 64] =
        (words_[offset / 64] & ~mask) | ((std::uint64_t{value} << shift) & mask);
  }

  constexpr std::size_t weight() const {
    std::size_t w = 0;
    for (auto x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
  }
  constexpr bool none() const {
    for (auto x : words_)
      if (x) return false;
    return true;
  }
  constexpr bool any() const { return !none(); }

  /// this ⪰ other, i.e. every bit set in `other` is set here.
  constexpr bool dominates(const BitVector& other) const {
    for (std::size_t w = 0; w < Words; ++w)
      if (other.words_[w] & ~words_[w]) return false;
    return true;
  }
  constexpr bool dominated_by(const BitVector& other) const {
    return other.dominates(*this);
  }

  /// Highest index of a set bit plus one (0 when empty).
  constexpr std::size_t extent() const {
    for (std::size_t w = Words; w-- > 0;)
      if (words_[w])
        return w * 64 + 64 - static_cast<std::size_t>(std::countr_zero(words_[w]));
    return 0;
  }

  template <typename F>
  constexpr void for_each_set(F&& f) const {
    for (std::size_t w = 0; w < Words; ++w) {
      std::uint64_t x = words_[w];
      while (x) {
        const int lead = std::countl_zero(x);
        f(w * 64 + static_cast<std::size_t>(lead));
        x &= ~(std::uint64_t{1} << (63 - lead));
      }
    }
  }

  constexpr BitVector& operator|=(const BitVector& o) {
    for (std::size_t w = 0; w < Words; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  constexpr BitVector& operator&=(const BitVector& o) {
    for (std::size_t w = 0; w < Words; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  constexpr BitVector& operator^=(const BitVector& o) {
    for (std::size_t w = 0; w < Words; ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend constexpr BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend constexpr BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend constexpr BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  friend constexpr bool operator==(const BitVector&, const BitVector&) = default;
  friend constexpr auto operator<=>(const BitVector&, const BitVector&) = default;

  constexpr std::uint64_t word(std::size_t w) const { return words_[w]; }
  constexpr void set_word(std::size_t w, std::uint64_t value) { words_[w] = value; }

  std::size_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : words_) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

  /// Hex rendering of the first `bits` bits (bits must be a multiple of 4).
  std::string to_hex(std::size_t bits) const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bits / 4);
    for (std::size_t i = 0; i < bits; i += 4) out.push_back(kDigits[field(i, 4)]);
    return out;
  }

  /// Parses exactly bits/4 hex digits (an optional 0x prefix is accepted).
  static BitVector from_hex(std::string_view text, std::size_t bits) {
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    if (text.size() != bits / 4 || bits > kBits)
      throw std::invalid_argument("expected " + std::to_string(bits / 4) +
                                  " hex digits, got '" + std::string(text) + "'");
    BitVector v;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char ch = text[i];
      unsigned d;
      if (ch >= '0' && ch <= '9')
        d = static_cast<unsigned>(ch - '0');
      else if (ch >= 'a' && ch <= 'f')
        d = static_cast<unsigned>(ch - 'a' + 10);
      else if (ch >= 'A' && ch <= 'F')
        d = static_cast<unsigned>(ch - 'A' + 10);
      else
        throw std::invalid_argument("invalid hex digit in '" + std::string(text) + "'");
      v.set_field(i * 4, 4, d);
    }
    return v;
  }

 private:
  std::array<std::uint64_t, Words> words_{};
};

/// Exponent vector over the (at most 128) bits of a cipher state.
using StateMask = BitVector<2>;
/// Exponent vector over key variables.
using KeyMask = BitVector<4>;

struct BitVectorHash {
  template <std::size_t W>
  std::size_t operator()(const BitVector<W>& v) const {
    return v.hash();
  }
};

}  // namespace idsq
