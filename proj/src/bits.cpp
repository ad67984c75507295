#include "geolabel/bits.hpp"

#include <charconv>

namespace geolabel {

void BitString::append_uint(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) push_back((value >> i) & 1U);
}

void BitString::append_gamma(std::uint64_t value) {
  if (value == 0) throw std::invalid_argument("Elias-gamma is defined for values >= 1");
  unsigned n = 0;
  while ((value >> n) > 1) ++n;
  for (unsigned i = 0; i < n; ++i) push_back(false);
  append_uint(value, n + 1);
}

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
}

std::string BitString::to_dump() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = std::to_string(size_) + ":";
  for (std::size_t i = 0; i < size_; i += 4) {
    unsigned nibble = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      nibble <<= 1;
      if (i + k < size_ && (*this)[i + k]) nibble |= 1;
    }
    out.push_back(digits[nibble]);
  }
  return out;
}

BitString BitString::from_dump(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DecodeError("label dump line lacks 'len:'");
  std::size_t len = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + colon, len);
  if (ec != std::errc{} || ptr != text.data() + colon) throw DecodeError("bad label length");
  std::string_view hex = text.substr(colon + 1);
  if (hex.size() != (len + 3) / 4) throw DecodeError("hex length does not match bit length");
  BitString out;
  for (std::size_t i = 0; i < hex.size(); ++i) {
    char c = hex[i];
    unsigned nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else throw DecodeError("non-hex character in label dump");
    for (int k = 3; k >= 0; --k) {
      std::size_t idx = 4 * i + (3 - k);
      bool bit = (nibble >> k) & 1U;
      if (idx < len) out.push_back(bit);
      else if (bit) throw DecodeError("nonzero padding bits in label dump");
    }
  }
  return out;
}

std::uint64_t BitReader::read_uint(unsigned width) {
  if (width > remaining()) throw DecodeError("label truncated");
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | ((*bits_)[pos_++] ? 1U : 0U);
  return v;
}

std::uint64_t BitReader::read_gamma() {
  unsigned zeros = 0;
  while (!read_bit()) {
    if (++zeros > 62) throw DecodeError("gamma code too long");
  }
  std::uint64_t v = 1;
  for (unsigned i = 0; i < zeros; ++i) v = (v << 1) | (read_bit() ? 1U : 0U);
  return v;
}

}  // namespace geolabel
