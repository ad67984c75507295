#include "geolabel/biclique.hpp"

#include <algorithm>
#include <stdexcept>

namespace geolabel {

namespace {

constexpr std::size_t kReportLimit = 32;

void note(std::vector<std::pair<VertexId, VertexId>>& list, VertexId a, VertexId b) {
  if (list.size() < kReportLimit) list.emplace_back(std::min(a, b), std::max(a, b));
}

std::string check_shape(const Biclique& b, std::size_t n) {
  if (b.left.empty() || b.right.empty()) return "biclique with an empty side";
  for (const auto* side : {&b.left, &b.right}) {
    if (!std::is_sorted(side->begin(), side->end()) ||
        std::adjacent_find(side->begin(), side->end()) != side->end())
      return "biclique side not strictly sorted";
    if (side->back() >= n) return "biclique vertex id out of range";
  }
  std::vector<VertexId> common;
  std::set_intersection(b.left.begin(), b.left.end(), b.right.begin(), b.right.end(),
                        std::back_inserter(common));
  if (!common.empty()) return "biclique sides intersect";
  return {};
}

}  // namespace

nlohmann::json BicliqueDecomposition::to_json() const {
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& b : bicliques) bs.push_back({{"left", b.left}, {"right", b.right}});
  return {{"n", n}, {"bicliques", bs}, {"provenance", provenance}};
}

BicliqueDecomposition BicliqueDecomposition::from_json(const nlohmann::json& j) {
  BicliqueDecomposition d;
  d.n = j.at("n").get<std::size_t>();
  d.provenance = j.value("provenance", "");
  for (const auto& b : j.at("bicliques"))
    d.bicliques.push_back({b.at("left").get<std::vector<VertexId>>(), b.at("right").get<std::vector<VertexId>>()});
  return d;
}

ValidationReport validate_decomposition(const BicliqueDecomposition& dec, const AdjacencyMatrix& m) {
  if (dec.n != m.n()) throw std::invalid_argument("decomposition and matrix sizes differ");
  const std::size_t n = m.n();
  ValidationReport rep;
  std::vector<std::uint8_t> cover(n * n, 0);
  for (const auto& b : dec.bicliques) {
    if (auto why = check_shape(b, n); !why.empty()) {
      rep.ok = false;
      rep.malformed = why;
      return rep;
    }
    for (VertexId u : b.left) {
      for (VertexId v : b.right) {
        auto& c = cover[std::size_t{std::min(u, v)} * n + std::max(u, v)];
        if (c < 2) ++c;
      }
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      std::uint8_t c = cover[u * n + v];
      bool edge = m(u, v);
      if (edge && c == 0) {
        ++rep.missing_count;
        note(rep.missing_edges, u, v);
      } else if (c == 2) {
        ++rep.double_count;
        note(rep.double_covered, u, v);
      }
      if (!edge && c > 0) {
        ++rep.nonedge_count;
        note(rep.covered_nonedges, u, v);
      }
    }
  }
  rep.ok = rep.missing_count == 0 && rep.double_count == 0 && rep.nonedge_count == 0;
  return rep;
}

DecompositionMetrics metrics(const BicliqueDecomposition& dec) {
  DecompositionMetrics out;
  out.count = dec.bicliques.size();
  out.nu.assign(dec.n, 0);
  for (const auto& b : dec.bicliques) {
    out.size += b.left.size() + b.right.size();
    for (VertexId u : b.left) ++out.nu.at(u);
    for (VertexId v : b.right) ++out.nu.at(v);
  }
  for (auto c : out.nu) out.nu_max = std::max(out.nu_max, c);
  return out;
}

BicliqueDecomposition star_decomposition(const AdjacencyMatrix& m) {
  BicliqueDecomposition dec;
  dec.n = m.n();
  dec.provenance = "star";
  for (std::size_t u = 0; u < m.n(); ++u) {
    Biclique b;
    for (std::size_t v = u + 1; v < m.n(); ++v)
      if (m(u, v)) b.right.push_back(static_cast<VertexId>(v));
    if (b.right.empty()) continue;
    b.left.push_back(static_cast<VertexId>(u));
    dec.bicliques.push_back(std::move(b));
  }
  return dec;
}

void append_decomposition(BicliqueDecomposition& into, BicliqueDecomposition&& part) {
  if (into.n != part.n) throw std::invalid_argument("decomposition sizes differ");
  into.bicliques.insert(into.bicliques.end(), std::make_move_iterator(part.bicliques.begin()),
                        std::make_move_iterator(part.bicliques.end()));
}

}  // namespace geolabel
