#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geolabel/biclique.hpp"
#include "geolabel/checked.hpp"
#include "geolabel/geometry.hpp"
#include "geolabel/predicate.hpp"

namespace geolabel {

class PartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Relation { disjoint, crosses, contains };
std::string_view relation_name(Relation r);

/// Closed range { z : a |z|^2 + b z1 + c z2 + d >= 0 }. a < 0 is a disk,
/// a = 0 a half-plane; a > 0 is rejected by classify.
template <class T>
struct PlanarRange {
  T a{}, b{}, c{}, d{};
  std::uint32_t owner = 0;

  T at(const Point2T<T>& z) const { return a * (z.x * z.x + z.y * z.y) + b * z.x + c * z.y + d; }
};

/// Closed axis-aligned box; lo == hi on both axes is a single point.
template <class T>
struct CellBox {
  Point2T<T> lo;
  Point2T<T> hi;
};

// The templates below are instantiated for Checked and Rational.

/// Exact relation of a closed range to a closed box.
template <class T>
Relation classify(const PlanarRange<T>& range, const CellBox<T>& box);

/// Tight bounding box of pts[members]; members must be non-empty.
template <class T>
CellBox<T> bounding_box(std::span<const Point2T<T>> pts, std::span<const std::uint32_t> members);

template <class T>
struct PointCell {
  CellBox<T> box;  // tight around members
  std::vector<std::uint32_t> members;
};

/// kd-median partition into at most r cells: log2(r) alternating x/y median
/// splits, ties by index, the lower half taking the extra point. r must be a
/// power of 4 with r <= |members|.
template <class T>
std::vector<PointCell<T>> point_partition(std::span<const Point2T<T>> pts, std::vector<std::uint32_t> members,
                                          unsigned r);

/// Cells whose box meets the line z_axis = value (axis 0 is x).
template <class T>
std::size_t axis_line_crossings(std::span<const PointCell<T>> cells, int axis, const T& value);

template <class T>
struct RangeCell {
  CellBox<T> box;  // tight around members
  std::vector<std::uint32_t> members;
  std::vector<std::uint32_t> crossing;    // indices into the range list
  std::vector<std::uint32_t> containing;  // candidates that contain the box
};

/// Cutting restricted to the given points: boxes are split at the midpoint
/// of their longer side until at most m/D of the m candidate ranges cross
/// each one. The bound is re-verified exhaustively before returning and a
/// violation throws PartitionError.
template <class T>
std::vector<RangeCell<T>> range_partition(std::span<const PlanarRange<T>> ranges,
                                          std::span<const std::uint32_t> candidates,
                                          std::span<const Point2T<T>> pts, std::vector<std::uint32_t> members,
                                          unsigned D);

/// One box of the cutting's midpoint-split hierarchy. Entry 0 is the input
/// box; leaves are exactly the cells of range_partition. `containing` holds
/// only ranges that contain this box but not its parent.
template <class T>
struct CutNode {
  std::int64_t parent = -1;
  bool leaf = false;
  RangeCell<T> cell;
};

/// range_partition with the split hierarchy kept; same verification.
template <class T>
std::vector<CutNode<T>> range_partition_hierarchy(std::span<const PlanarRange<T>> ranges,
                                                  std::span<const std::uint32_t> candidates,
                                                  std::span<const Point2T<T>> pts,
                                                  std::vector<std::uint32_t> members, unsigned D);

struct BuildConfig {
  unsigned D = 4;
  unsigned r = 16;
  double N_exponent = 2.0 / 3.0;
  std::size_t leaf_point_cap = 4;

  void validate() const;
};

/// ceil(p^exponent), robust to floating error at exact powers.
std::size_t phase1_threshold(std::size_t p, double exponent);

struct TreeNode {
  unsigned phase = 1;
  unsigned depth = 0;
  std::int64_t parent = -1;
  Point2 box_lo, box_hi;  // in the coordinates of the phase's point role
  std::size_t point_count = 0;
  std::size_t crossing_count = 0;
  std::size_t containing_count = 0;
  std::int64_t biclique = -1;
  bool split = false;  // internal box of a phase-1 cutting, not a cell
  std::vector<std::size_t> children;
};

struct PartitionTree {
  std::vector<TreeNode> nodes;  // parents precede children; nodes[0] is the root
  BicliqueDecomposition dec;    // left = P ids, right = S ids
  std::vector<std::uint8_t> biclique_phase;  // per biclique: 1, 2, or 3 for explicit leaf pairs
  std::size_t threshold = 0;    // phase-1 stop: crossing ranges <= threshold
  bool integer_path = false;    // built on scaled integers rather than rationals

  nlohmann::json dump() const;
};

/// Two-phase tree over the incidence f(p, s) >= 0 between P (left role) and
/// S (right role). Throws ConfigurationError when f is not planar in each
/// role or not of the disk/half-plane shape.
PartitionTree build_two_phase_tree(const PlanarPolynomial& f, std::span<const std::vector<Rational>> features,
                                   std::span<const VertexId> P, std::span<const VertexId> S,
                                   const BuildConfig& cfg = {});

/// Single-polynomial predicate entry point; t != 1 is a ConfigurationError.
PartitionTree build_two_phase_tree(const PredicateSpec& spec, std::span<const std::vector<Rational>> features,
                                   std::span<const VertexId> P, std::span<const VertexId> S,
                                   const BuildConfig& cfg = {});

struct NuStats {
  std::vector<std::size_t> nu_P;  // by position in P
  std::vector<std::size_t> nu_S;  // by position in S
  std::size_t nu_max = 0;
  std::size_t nu_max_phase[3] = {0, 0, 0};  // phase 1, phase 2, explicit leaves
  unsigned depth = 0;
  std::size_t node_count = 0;
};

NuStats tree_nu_stats(const PartitionTree& tree, std::span<const VertexId> P, std::span<const VertexId> S);

struct ForestStats {
  std::size_t trees = 0;
  std::size_t nodes = 0;
  unsigned depth = 0;
};

/// Union of two-phase trees over the bipartization of 0..n-1: covers every
/// pair u < v with f(u, v) >= 0, or f(v, u) >= 0 when `reverse` is set.
BicliqueDecomposition ordered_pair_decomposition(const PlanarPolynomial& f,
                                                 std::span<const std::vector<Rational>> features, bool reverse,
                                                 const BuildConfig& cfg = {}, ForestStats* stats = nullptr);

}  // namespace geolabel
