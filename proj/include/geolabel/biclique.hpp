#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geolabel/adjacency.hpp"

namespace geolabel {

using VertexId = std::uint32_t;

/// Complete bipartite subgraph; its id is its index in the decomposition.
struct Biclique {
  std::vector<VertexId> left;   // sorted
  std::vector<VertexId> right;  // sorted
};

struct BicliqueDecomposition {
  std::size_t n = 0;
  std::vector<Biclique> bicliques;
  std::string provenance;

  nlohmann::json to_json() const;
  static BicliqueDecomposition from_json(const nlohmann::json& j);
};

struct ValidationReport {
  bool ok = true;
  // Counts are exact; the pair lists keep the first few offenders.
  std::size_t missing_count = 0;
  std::size_t double_count = 0;
  std::size_t nonedge_count = 0;
  std::vector<std::pair<VertexId, VertexId>> missing_edges;
  std::vector<std::pair<VertexId, VertexId>> double_covered;
  std::vector<std::pair<VertexId, VertexId>> covered_nonedges;
  std::string malformed;  // structural problem with a biclique, empty if none
};

ValidationReport validate_decomposition(const BicliqueDecomposition& dec, const AdjacencyMatrix& m);

struct DecompositionMetrics {
  std::size_t size = 0;   // sum of |left| + |right|
  std::size_t count = 0;  // number of bicliques
  std::vector<std::size_t> nu;
  std::size_t nu_max = 0;
};

DecompositionMetrics metrics(const BicliqueDecomposition& dec);

/// {u} x {higher-id neighbours of u} for every u with such neighbours.
BicliqueDecomposition star_decomposition(const AdjacencyMatrix& m);

/// Appends the bicliques of `part` to `into`.
void append_decomposition(BicliqueDecomposition& into, BicliqueDecomposition&& part);

}  // namespace geolabel
