#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geolabel {

/// Raised when a label does not parse under its scheme's grammar.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest b with 2^b >= x (0 for x <= 1).
constexpr unsigned ceil_log2(std::uint64_t x) {
  unsigned b = 0;
  while ((std::uint64_t{1} << b) < x && b < 64) ++b;
  return b;
}

/// Bit length of the Elias-gamma code of x >= 1.
constexpr unsigned gamma_length(std::uint64_t x) {
  unsigned n = 0;
  while ((x >> n) > 1) ++n;
  return 2 * n + 1;
}

/// Growable bit string, MSB-first within the logical sequence.
class BitString {
 public:
  BitString() = default;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool operator[](std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

  void push_back(bool bit) {
    if ((size_ & 63) == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
    ++size_;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  /// Appends `width` bits of `value`, most significant first.
  void append_uint(std::uint64_t value, unsigned width);
  void append_gamma(std::uint64_t value);
  void append(const BitString& other);

  /// "len:hex" with hex of the bits MSB-first, zero-padded to a nibble.
  std::string to_dump() const;
  static BitString from_dump(std::string_view text);

  friend bool operator==(const BitString& a, const BitString& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const BitString& bits, std::size_t begin = 0)
      : bits_(&bits), pos_(begin), end_(bits.size()) {}
  BitReader(const BitString& bits, std::size_t begin, std::size_t end)
      : bits_(&bits), pos_(begin), end_(end) {}

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return end_ - pos_; }
  bool at_end() const { return pos_ == end_; }

  bool read_bit() {
    if (pos_ >= end_) throw DecodeError("label truncated");
    return (*bits_)[pos_++];
  }
  std::uint64_t read_uint(unsigned width);
  std::uint64_t read_gamma();
  void skip(std::size_t count) {
    if (count > remaining()) throw DecodeError("label truncated");
    pos_ += count;
  }
  /// Reader over the next `count` bits; this reader skips past them.
  BitReader sub(std::size_t count) {
    if (count > remaining()) throw DecodeError("label truncated");
    BitReader r(*bits_, pos_, pos_ + count);
    pos_ += count;
    return r;
  }
  void expect_end() const {
    if (pos_ != end_) throw DecodeError("trailing bits after label");
  }

 private:
  const BitString* bits_;
  std::size_t pos_;
  std::size_t end_;
};

}  // namespace geolabel
