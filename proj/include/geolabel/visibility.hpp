#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geolabel/adjacency.hpp"
#include "geolabel/biclique.hpp"
#include "geolabel/geometry.hpp"
#include "geolabel/labeling.hpp"

namespace geolabel {

// ---------------------------------------------------------------------------
// Visibility oracles

/// Open segment uv inside the closed polygon: no proper crossing with an
/// edge and the midpoint inside or on the boundary.
template <class T>
bool polygon_visible_t(std::span<const Point2T<T>> poly, std::size_t u, std::size_t v) {
  if (u == v) throw std::invalid_argument("visibility of a vertex with itself");
  const std::size_t n = poly.size();
  const auto& a = poly[u];
  const auto& b = poly[v];
  for (std::size_t k = 0; k < n; ++k)
    if (segments_properly_cross(a, b, poly[k], poly[(k + 1) % n])) return false;
  // Winding test of the midpoint, carried out at twice the scale so integer
  // coordinates stay exact.
  using W = Wide<T>;
  const W sx = W(a.x) + W(b.x), sy = W(a.y) + W(b.y);
  int winding = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = poly[k];
    const auto& q = poly[(k + 1) % n];
    const W px = W(p.x) + W(p.x), py = W(p.y) + W(p.y);
    const W qx = W(q.x) + W(q.x), qy = W(q.y) + W(q.y);
    const W cross = (qx - px) * (sy - py) - (qy - py) * (sx - px);
    const int o = cross > 0 ? 1 : (cross < 0 ? -1 : 0);
    if (o == 0 && std::min(px, qx) <= sx && sx <= std::max(px, qx) && std::min(py, qy) <= sy &&
        sy <= std::max(py, qy))
      return true;
    if (py <= sy) {
      if (qy > sy && o > 0) ++winding;
    } else if (qy <= sy && o < 0) {
      --winding;
    }
  }
  return winding != 0;
}

inline bool polygon_visible(std::span<const Point2> poly, std::size_t u, std::size_t v) {
  return polygon_visible_t<Rational>(poly, u, v);
}

/// Terrain vertices i < j see each other iff every vertex strictly between
/// them lies on or below segment ij.
template <class T>
bool terrain_visible_t(std::span<const Point2T<T>> terrain, std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("visibility of a vertex with itself");
  if (i > j) std::swap(i, j);
  for (std::size_t k = i + 1; k < j; ++k)
    if (orient(terrain[i], terrain[j], terrain[k]) > 0) return false;
  return true;
}

inline bool terrain_visible(std::span<const Point2> terrain, std::size_t i, std::size_t j) {
  return terrain_visible_t<Rational>(terrain, i, j);
}

/// Diagonal (i, j), i < j, whose two sub-polygons have at most
/// ceil(2n/3) + 1 vertices each (chord endpoints counted on both sides).
std::pair<std::size_t, std::size_t> balanced_chord(std::span<const Point2> poly);

// ---------------------------------------------------------------------------
// Bichromatic segments and the hereditary segment tree

struct Segment {
  Point2 a;  // left endpoint (smaller x)
  Point2 b;
};

/// Red segments get vertex ids 0..|red|-1, blue ones follow.
struct BichromaticSegments {
  std::vector<Segment> red;
  std::vector<Segment> blue;

  std::size_t size() const { return red.size() + blue.size(); }
  const Segment& at(std::size_t id) const { return id < red.size() ? red[id] : blue[id - red.size()]; }
  bool is_red(std::size_t id) const { return id < red.size(); }

  /// Throws std::invalid_argument on same-colour intersections, vertical
  /// segments or repeated endpoint abscissae.
  void validate() const;
};

struct HSTNode {
  std::uint32_t lo = 0, hi = 0;  // endpoint index range [lo, hi)
  std::optional<Rational> left_wall, right_wall;  // open slab; nullopt = infinite
  std::int32_t child[2] = {-1, -1};
  std::vector<std::uint32_t> short_ids[2];  // [0] red, [1] blue
  std::vector<std::uint32_t> long_ids[2];   // sorted bottom to top
};

struct HSTEntry {
  std::uint32_t node = 0;
  bool is_long = false;
  std::uint32_t rank = 0;                 // among same-colour longs (long entries)
  std::uint32_t rho_lo = 0, rho_hi = 0;   // other-colour longs strictly below each clipped end
};

struct HereditarySegmentTree {
  std::vector<HSTNode> nodes;
  std::vector<std::vector<HSTEntry>> entries;  // per segment, ascending node id
};

HereditarySegmentTree build_hst(const BichromaticSegments& segs);

/// Ranks at one node for a colour pairing: the long colour's segments get
/// ranks 0..L-1 bottom to top; every short segment of the other colour gets
/// the pair of rho values of its clipped endpoints.
struct SlabRanks {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> long_rank;  // (segment id, rank)
  std::vector<std::pair<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>>> short_rho;
};

SlabRanks slab_ranks(const HereditarySegmentTree& tree, const BichromaticSegments& segs, std::size_t node,
                     bool long_is_red);

struct HSTDiagnostics {
  std::size_t max_nodes_per_segment = 0;
  std::size_t node_bound = 0;  // 4 ceil(log2 2n)
  std::size_t intersecting_pairs = 0;
  std::size_t witnessed_one_long = 0;   // some common node with exactly one long decodes the edge
  std::size_t witnessed_both_long = 0;  // only nodes where both are long decode it
  std::size_t unwitnessed = 0;
};

/// Exhaustive structural check over all red-blue pairs.
HSTDiagnostics hst_diagnostics(const HereditarySegmentTree& tree, const BichromaticSegments& segs);

/// Entry widths derived from the segment count alone.
struct HSTWidths {
  unsigned node = 0;
  unsigned rank = 0;
  unsigned entry() const { return node + 1 + 3 * rank; }
};
HSTWidths hst_widths(std::size_t segments);

/// [id][colour][gamma(count + 1)][entries]; entries are
/// (node, long bit, [rank], rho_lo, rho_hi).
LabelSet hst_labels(const BichromaticSegments& segs);

// ---------------------------------------------------------------------------
// Capped graphs

struct CappedWitness {
  VertexId i, j, k, l;
};

/// First 4-tuple at positions i<j<k<l with ik, jl edges and il missing;
/// exhaustive for n <= 128, otherwise 10^6 seeded samples.
std::optional<CappedWitness> capped_check(const AdjacencyMatrix& m, std::span<const VertexId> order,
                                          std::uint64_t seed = 0);

class RealizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cross edges between positions [lo, split) and [split, hi) of `order`.
/// min_n[i - lo] is the smallest right cross-neighbour position of i (hi
/// when there is none); max_n[j - split] the largest left cross-neighbour
/// position of j (lo - 1 when there is none).
struct CrossRealization {
  std::vector<std::int64_t> min_n;
  std::vector<std::int64_t> max_n;
};

/// Verifies min_n(i) <= j && i <= max_n(j) against every cross pair and
/// throws RealizationError on the first disagreement.
CrossRealization capped_cross_realization(const AdjacencyMatrix& m, std::span<const VertexId> order,
                                          std::size_t lo, std::size_t split, std::size_t hi);
CrossRealization capped_cross_realization(const AdjacencyMatrix& m, std::span<const VertexId> order,
                                          std::size_t split);

/// Smallest capped supergraph under `order` (4-tuple rule to fixpoint).
AdjacencyMatrix capped_closure(const AdjacencyMatrix& m, std::span<const VertexId> order);

/// [id][pos][per halving level: side bit, min_n or max_n + 1].
LabelSet capped_labels(const AdjacencyMatrix& m, std::span<const VertexId> order);

// ---------------------------------------------------------------------------
// Polygon visibility

/// Supplies dual segments for a cross-visibility instance: one red segment
/// per vertex of `red_side` and one blue per vertex of `blue_side`, such
/// that red i meets blue j iff the two vertices see each other.
using DualProvider = std::function<BichromaticSegments(std::span<const VertexId> red_side,
                                                       std::span<const VertexId> blue_side)>;

struct PolygonLabelOptions {
  std::string encoder = "switch_rows";  // or "hst_with_supplied_duals"
  DualProvider duals;
};

/// [id][gamma(levels + 1)][per level: side bit, cross sublabel].
LabelSet polygon_labels(std::span<const Point2> poly, const PolygonLabelOptions& options = {});

std::unique_ptr<LabelDecoder> make_hst_decoder(const SchemeDescriptor& d, std::span<const BitString> labels);
std::unique_ptr<LabelDecoder> make_capped_decoder(const SchemeDescriptor& d, std::span<const BitString> labels);
std::unique_ptr<LabelDecoder> make_polygon_decoder(const SchemeDescriptor& d, std::span<const BitString> labels);

}  // namespace geolabel
