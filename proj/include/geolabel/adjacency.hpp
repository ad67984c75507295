#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace geolabel {

/// Symmetric n x n bit matrix with zero diagonal; rows are packed bitsets.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t n() const { return n_; }

  bool operator()(std::size_t u, std::size_t v) const {
    return (bits_[u * words_ + (v >> 6)] >> (v & 63)) & 1U;
  }

  /// Sets both (u, v) and (v, u).
  void set(std::size_t u, std::size_t v, bool value = true) {
    if (u == v) throw std::invalid_argument("adjacency matrix diagonal must stay zero");
    put(u, v, value);
    put(v, u, value);
  }

  std::size_t degree(std::size_t u) const {
    std::size_t d = 0;
    for (std::size_t w = 0; w < words_; ++w) d += __builtin_popcountll(bits_[u * words_ + w]);
    return d;
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (std::size_t u = 0; u < n_; ++u) total += degree(u);
    return total / 2;
  }

  const std::uint64_t* row(std::size_t u) const { return bits_.data() + u * words_; }

  friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

 private:
  void put(std::size_t u, std::size_t v, bool value) {
    std::uint64_t mask = std::uint64_t{1} << (v & 63);
    auto& w = bits_[u * words_ + (v >> 6)];
    w = value ? (w | mask) : (w & ~mask);
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace geolabel
