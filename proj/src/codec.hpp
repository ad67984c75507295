#pragma once

// Shared decoder plumbing for the per-scheme codecs. A codec provides
//   explicit Codec(const SchemeDescriptor&);
//   Parsed parse(BitReader&) const;
//   std::uint64_t id(const Parsed&) const;
//   bool adjacent(const Parsed&, const Parsed&) const;

#include <memory>
#include <span>
#include <vector>

#include "geolabel/labeling.hpp"

namespace geolabel::detail {

template <class Codec>
class CodecDecoder final : public LabelDecoder {
 public:
  CodecDecoder(const SchemeDescriptor& desc, std::span<const BitString> labels) : codec_(desc) {
    parsed_.reserve(labels.size());
    for (const auto& label : labels) {
      BitReader r(label);
      parsed_.push_back(codec_.parse(r));
      r.expect_end();
    }
  }

  std::size_t size() const override { return parsed_.size(); }
  std::uint64_t id(std::size_t i) const override { return codec_.id(parsed_[i]); }
  bool adjacent(std::size_t i, std::size_t j) const override { return codec_.adjacent(parsed_[i], parsed_[j]); }

 private:
  Codec codec_;
  std::vector<typename Codec::Parsed> parsed_;
};

template <class Codec>
std::unique_ptr<LabelDecoder> make_codec_decoder(const SchemeDescriptor& desc, std::span<const BitString> labels) {
  return std::make_unique<CodecDecoder<Codec>>(desc, labels);
}

inline std::uint64_t read_id(BitReader& r, std::size_t n) {
  std::uint64_t id = r.read_uint(ceil_log2(n));
  if (id >= n) throw DecodeError("vertex id out of range");
  return id;
}

/// Biclique-list labels, also the building block of sign_pair sublabels.
class BicliqueListCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    std::vector<std::uint64_t> entries;  // (biclique id << 1) | side
  };

  explicit BicliqueListCodec(const SchemeDescriptor& d) : n_(d.n), b_(d.bicliques) {}

  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    std::uint64_t count = r.read_gamma() - 1;
    if (count > b_) throw DecodeError("more biclique entries than bicliques");
    p.entries.reserve(count);
    const unsigned w = ceil_log2(b_);
    for (std::uint64_t k = 0; k < count; ++k) {
      std::uint64_t bid = r.read_uint(w);
      if (bid >= b_) throw DecodeError("biclique id out of range");
      bool side = r.read_bit();
      if (!p.entries.empty() && (p.entries.back() >> 1) >= bid) throw DecodeError("biclique entries not ascending");
      p.entries.push_back((bid << 1) | (side ? 1U : 0U));
    }
    return p;
  }

  std::uint64_t id(const Parsed& p) const { return p.id; }

  bool adjacent(const Parsed& a, const Parsed& b) const {
    auto i = a.entries.begin(), j = b.entries.begin();
    while (i != a.entries.end() && j != b.entries.end()) {
      std::uint64_t x = *i >> 1, y = *j >> 1;
      if (x < y) ++i;
      else if (y < x) ++j;
      else if ((*i ^ *j) & 1U) return true;
      else ++i, ++j;
    }
    return false;
  }

 private:
  std::size_t n_;
  std::uint64_t b_;
};

class SwitchRowsCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    std::uint64_t column = 0;
    SwitchRow row;
  };

  explicit SwitchRowsCodec(const SchemeDescriptor& d) : n_(d.n) {}

  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    p.row = read_switch_row(r, p.column, n_);
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const { return a.row.bit_at(b.column); }

 private:
  std::size_t n_;
};

}  // namespace geolabel::detail
