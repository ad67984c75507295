#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geolabel/adjacency.hpp"
#include "geolabel/biclique.hpp"
#include "geolabel/geometry.hpp"
#include "geolabel/predicate.hpp"
#include "geolabel/semilinear.hpp"

namespace geolabel {

enum class Family {
  unit_disk,
  disk,
  point_halfplane,
  segment_intersection,
  semilinear_dnf,
  boxicity,
  polygon_visibility,
  terrain_visibility,
  capped_abstract,
  bichromatic_segments,
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);
std::vector<Family> all_families();

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Family knobs for generate_instance.
struct GenParams {
  Rational range = 8;            // coordinates drawn from [0, range]^2 (geometric families)
  std::string preset = "interval";  // semilinear_dnf: interval | permutation | circle | boxicity
  std::size_t dim = 3;           // boxicity dimension
  std::string polygon = "two_opt";  // polygon_visibility: two_opt | convex | comb
  std::string capped = "terrain";   // capped_abstract: terrain | closure
  std::optional<std::size_t> split;  // left/red count for bipartite families (default n/2)
};

/// Geometric graph instance. Per-vertex coordinates live in `features`:
///   unit_disk (cx, cy); disk (cx, cy, r); point_halfplane points (px, py)
///   then lines (a, b) for y = a x + b; segment_intersection
///   (m, q, cx, cy, dx, dy); semilinear_dnf preset coordinates; boxicity
///   (lo_1, hi_1, ..., lo_d, hi_d); polygon / terrain vertices (x, y) in
///   boundary order; bichromatic_segments (x0, y0, x1, y1), red first.
struct Instance {
  Family family = Family::unit_disk;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<Rational>> features;
  std::size_t split = 0;  // point_halfplane: #points; bichromatic_segments: #red
  std::string preset;  // semilinear_dnf preset, polygon or capped generator
  std::optional<DNFPredicate> dnf;
  AdjacencyMatrix matrix;       // capped_abstract
  std::vector<VertexId> order;  // capped_abstract

  std::vector<Point2> points() const;  // first two features of every vertex

  nlohmann::json to_json() const;
  static Instance from_json(const nlohmann::json& j);
};

Instance generate_instance(Family family, std::size_t n, std::uint64_t seed, const GenParams& params = {});

/// Ground-truth adjacency by direct exact evaluation.
bool oracle_adjacent(const Instance& inst, VertexId u, VertexId v);

/// Batch oracle: same answers as oracle_adjacent, with integer fast paths
/// prepared once per instance.
class AdjacencyOracle {
 public:
  explicit AdjacencyOracle(const Instance& inst);
  ~AdjacencyOracle();
  AdjacencyOracle(const AdjacencyOracle&) = delete;
  AdjacencyOracle& operator=(const AdjacencyOracle&) = delete;

  bool operator()(VertexId u, VertexId v) const;

 private:
  struct Impl;
  Impl* impl_;
};

/// Default brute-force budget: 4096 vertices, 1024 for polygon families.
std::size_t default_matrix_budget(Family f);

AdjacencyMatrix adjacency_matrix(const Instance& inst, std::size_t budget = 0);

/// Predicate of the semialgebraic families (unit_disk, point_halfplane,
/// segment_intersection).
std::optional<PredicateSpec> family_predicate(Family f);

}  // namespace geolabel
