#include <doctest.h>

#include "geolabel/biclique.hpp"

using namespace geolabel;

namespace {

AdjacencyMatrix from_edges(std::size_t n, std::initializer_list<std::pair<VertexId, VertexId>> edges) {
  AdjacencyMatrix m(n);
  for (auto [u, v] : edges) m.set(u, v);
  return m;
}

BicliqueDecomposition make_dec(std::size_t n, std::vector<Biclique> b) {
  BicliqueDecomposition d;
  d.n = n;
  d.bicliques = std::move(b);
  return d;
}

}  // namespace

TEST_CASE("validate_decomposition") {
  SUBCASE("lone edge") {
    auto m = from_edges(2, {{0, 1}});
    CHECK(validate_decomposition(make_dec(2, {{{0}, {1}}}), m).ok);
  }
  SUBCASE("triangle as a star plus an edge") {
    auto m = from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(validate_decomposition(make_dec(3, {{{0}, {1, 2}}, {{1}, {2}}}), m).ok);
  }
  SUBCASE("covered non-edge") {
    auto m = from_edges(3, {{0, 2}});
    auto rep = validate_decomposition(make_dec(3, {{{0, 1}, {2}}}), m);
    CHECK_FALSE(rep.ok);
    CHECK(rep.nonedge_count == 1);
    REQUIRE(rep.covered_nonedges.size() == 1);
    CHECK(rep.covered_nonedges[0] == std::pair<VertexId, VertexId>{1, 2});
  }
  SUBCASE("missing and doubled edges") {
    auto m = from_edges(3, {{0, 1}, {1, 2}});
    auto rep = validate_decomposition(make_dec(3, {{{0}, {1}}, {{1}, {0}}}), m);
    CHECK_FALSE(rep.ok);
    CHECK(rep.missing_count == 1);
    CHECK(rep.double_count == 1);
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(validate_decomposition(make_dec(4, {}), AdjacencyMatrix(3)), std::invalid_argument);
  }
}

TEST_CASE("metrics") {
  SUBCASE("three bicliques, sixteen edges, size fourteen") {
    // K_{2,4} + two K_{2,2} on disjoint edge sets.
    auto d = make_dec(8, {{{0, 1}, {2, 3, 4, 5}}, {{2, 3}, {6, 7}}, {{4, 5}, {6, 7}}});
    auto m = from_edges(8, {});
    for (const auto& b : d.bicliques)
      for (auto u : b.left)
        for (auto v : b.right) m.set(u, v);
    CHECK(m.edge_count() == 16);
    CHECK(validate_decomposition(d, m).ok);
    auto st = metrics(d);
    CHECK(st.size == 14);
    CHECK(st.count == 3);
    CHECK(st.nu_max == 2);
  }
  SUBCASE("single biclique") {
    auto st = metrics(make_dec(2, {{{0}, {1}}}));
    CHECK(st.size == 2);
    CHECK(st.count == 1);
    CHECK(st.nu_max == 1);
  }
}

TEST_CASE("star decomposition") {
  SUBCASE("K3") {
    auto d = star_decomposition(from_edges(3, {{0, 1}, {0, 2}, {1, 2}}));
    REQUIRE(d.bicliques.size() == 2);
    CHECK(d.bicliques[0].left == std::vector<VertexId>{0});
    CHECK(d.bicliques[0].right == std::vector<VertexId>{1, 2});
    CHECK(d.bicliques[1].left == std::vector<VertexId>{1});
    CHECK(d.bicliques[1].right == std::vector<VertexId>{2});
    CHECK(metrics(d).size == 5);
  }
  SUBCASE("K4") {
    AdjacencyMatrix m(4);
    for (VertexId u = 0; u < 4; ++u)
      for (VertexId v = u + 1; v < 4; ++v) m.set(u, v);
    auto d = star_decomposition(m);
    CHECK(metrics(d).size == 4 + 3 + 2);
    CHECK(validate_decomposition(d, m).ok);
  }
  SUBCASE("empty graph") { CHECK(star_decomposition(AdjacencyMatrix(5)).bicliques.empty()); }
  SUBCASE("path") {
    auto d = star_decomposition(from_edges(3, {{0, 1}, {1, 2}}));
    CHECK(d.bicliques.size() == 2);
    CHECK(metrics(d).nu == std::vector<std::size_t>{1, 2, 1});
  }
}

TEST_CASE("decomposition JSON round trip and append") {
  auto d = make_dec(4, {{{0}, {1, 2}}, {{3}, {1}}});
  d.provenance = "test";
  auto back = BicliqueDecomposition::from_json(d.to_json());
  CHECK(back.to_json() == d.to_json());

  auto more = make_dec(4, {{{2}, {3}}});
  append_decomposition(d, std::move(more));
  CHECK(d.bicliques.size() == 3);
  auto bad = make_dec(5, {});
  CHECK_THROWS_AS(append_decomposition(d, std::move(bad)), std::invalid_argument);
}
