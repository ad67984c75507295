#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "geolabel/labeling.hpp"
#include "geolabel/instance.hpp"

using namespace geolabel;

namespace {

BicliqueDecomposition make_dec(std::size_t n, std::vector<Biclique> b) {
  BicliqueDecomposition d;
  d.n = n;
  d.bicliques = std::move(b);
  return d;
}

AdjacencyMatrix random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  AdjacencyMatrix m(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) m.set(u, v);
  return m;
}

void check_decodes(const LabelSet& set, const AdjacencyMatrix& m) {
  auto dec = make_decoder(set.descriptor, set.labels);
  for (std::size_t u = 0; u < m.n(); ++u) {
    CHECK(dec->id(u) == u);
    for (std::size_t v = 0; v < m.n(); ++v)
      if (u != v) REQUIRE(dec->adjacent(u, v) == m(u, v));
  }
}

}  // namespace

TEST_CASE("bit strings") {
  BitString b;
  b.append_uint(5, 3);
  b.append_gamma(1);
  b.append_gamma(6);
  CHECK(b.size() == 3 + 1 + 5);
  BitReader r(b);
  CHECK(r.read_uint(3) == 5);
  CHECK(r.read_gamma() == 1);
  CHECK(r.read_gamma() == 6);
  CHECK(r.at_end());
  CHECK(BitString::from_dump(b.to_dump()) == b);
  CHECK_THROWS_AS(r.read_bit(), DecodeError);
  CHECK(gamma_length(1) == 1);
  CHECK(gamma_length(6) == 5);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(5) == 3);
}

TEST_CASE("biclique list labels") {
  SUBCASE("membership list with side bits") {
    // R = {0,1} x {2}, G = {3} x {0}, B = {1} x {3}
    auto d = make_dec(4, {{{0, 1}, {2}}, {{3}, {0}}, {{1}, {3}}});
    auto set = encode_from_bicliques(d);
    BitReader r(set.labels[0]);
    CHECK(r.read_uint(2) == 0);
    CHECK(r.read_gamma() == 3);
    CHECK(r.read_uint(2) == 0);
    CHECK(r.read_bit() == false);
    CHECK(r.read_uint(2) == 1);
    CHECK(r.read_bit() == true);
    CHECK(r.at_end());
    CHECK(set.labels[0].size() == 2 + gamma_length(3) + 2 * (2 + 1));
  }
  SUBCASE("isolated vertex") {
    auto d = make_dec(8, {{{0}, {1}}});
    auto set = encode_from_bicliques(d);
    CHECK(set.labels[5].size() == 3 + 1);
  }
  SUBCASE("K2") {
    auto set = encode_from_bicliques(make_dec(2, {{{0}, {1}}}));
    BitReader a(set.labels[0], 1), b(set.labels[1], 1);
    CHECK(a.read_gamma() == 2);
    CHECK(b.read_gamma() == 2);
    CHECK(a.read_bit() != b.read_bit());
    CHECK(decode_adjacent(set.descriptor, set.labels[0], set.labels[1]));
  }
  SUBCASE("shared biclique decides adjacency by sides") {
    std::vector<Biclique> b(6);
    for (VertexId k = 0; k < 5; ++k) b[k] = {{static_cast<VertexId>(4 + k)}, {static_cast<VertexId>(9 + k)}};
    b[5] = {{0, 2}, {1}};
    auto set = encode_from_bicliques(make_dec(16, b));
    CHECK(decode_adjacent(set.descriptor, set.labels[0], set.labels[1]));
    CHECK_FALSE(decode_adjacent(set.descriptor, set.labels[0], set.labels[2]));
    CHECK_FALSE(decode_adjacent(set.descriptor, set.labels[0], set.labels[3]));
    CHECK_THROWS_AS(decode_adjacent(set.descriptor, set.labels[0], set.labels[0]), std::invalid_argument);
  }
  SUBCASE("malformed labels") {
    auto set = encode_from_bicliques(make_dec(4, {{{0}, {1}}}));
    BitString extra = set.labels[0];
    extra.push_back(true);
    CHECK_THROWS_AS(decode_adjacent(set.descriptor, extra, set.labels[1]), DecodeError);
  }
  SUBCASE("structure check") {
    // 2-bit id, 3-bit gamma(2), then a 1-bit biclique id.
    auto set = encode_from_bicliques(make_dec(4, {{{0}, {2}}, {{1}, {2}}}));
    CHECK(biclique_structure_error(set).empty());
    auto moved = set;
    moved.labels[0].flip(5);  // 0 leaves biclique 0 for biclique 1
    CHECK(decode_adjacent(moved.descriptor, moved.labels[0], moved.labels[2]));
    CHECK(biclique_structure_error(moved) == "biclique 0 has members on one side only");
    auto twice = encode_from_bicliques(make_dec(3, {{{0}, {1}}, {{0}, {1}}}));
    CHECK(biclique_structure_error(twice) == "pair 0,1 covered twice");
    CHECK(biclique_structure_error(switch_encode(AdjacencyMatrix(3), std::vector<VertexId>{0, 1, 2})).empty());
  }
  SUBCASE("star decomposition of a random graph round-trips") {
    auto m = random_graph(40, 0.3, 2);
    check_decodes(encode_from_bicliques(star_decomposition(m)), m);
  }
}

TEST_CASE("bipartize") {
  SUBCASE("n = 2") {
    auto p = bipartize(2);
    REQUIRE(p.size() == 1);
    CHECK(p[0].lower == std::vector<VertexId>{0});
    CHECK(p[0].upper == std::vector<VertexId>{1});
  }
  SUBCASE("n = 4") {
    auto p = bipartize(4);
    REQUIRE(p.size() == 3);
    std::set<std::pair<std::vector<VertexId>, std::vector<VertexId>>> got;
    for (const auto& piece : p) got.insert({piece.lower, piece.upper});
    CHECK(got.count({{0, 1}, {2, 3}}) == 1);
    CHECK(got.count({{0}, {1}}) == 1);
    CHECK(got.count({{2}, {3}}) == 1);
  }
  SUBCASE("n = 8 puts every vertex in three pieces") {
    std::vector<int> count(8);
    for (const auto& piece : bipartize(8)) {
      for (auto v : piece.lower) ++count[v];
      for (auto v : piece.upper) ++count[v];
    }
    for (int c : count) CHECK(c == 3);
  }
  SUBCASE("pieces partition all pairs") {
    for (std::size_t n : {3, 5, 13, 100}) {
      AdjacencyMatrix seen(n);
      std::size_t pairs = 0;
      for (const auto& piece : bipartize(n))
        for (auto u : piece.lower)
          for (auto v : piece.upper) {
            REQUIRE_FALSE(seen(u, v));
            seen.set(u, v);
            ++pairs;
          }
      CHECK(pairs == n * (n - 1) / 2);
    }
  }
}

TEST_CASE("composition") {
  SUBCASE("constant-false phi ignores its sublabels") {
    PredicateSpec spec = unit_disk_predicate();
    spec.phi = BoolExpr::constant(false);
    std::vector<LabelSet> subs{empty_label_set(6), empty_label_set(6)};
    auto set = compose_predicate_labels(spec, std::move(subs));
    auto dec = make_decoder(set.descriptor, set.labels);
    for (std::size_t u = 0; u < 6; ++u)
      for (std::size_t v = u + 1; v < 6; ++v) CHECK_FALSE(dec->adjacent(u, v));
  }
  SUBCASE("wrong sublabel count") {
    CHECK_THROWS_AS(compose_predicate_labels(unit_disk_predicate(), {empty_label_set(3)}), std::invalid_argument);
  }
  SUBCASE("single polynomial f >= 0 decodes like its sublabels") {
    auto inst = generate_instance(Family::unit_disk, 48, 3);
    auto m = adjacency_matrix(inst);
    auto ge = encode_from_bicliques(star_decomposition(m));
    std::vector<LabelSet> subs{sign_pair_labels(ge, std::nullopt), empty_label_set(48)};
    auto set = compose_predicate_labels(unit_disk_predicate(), std::move(subs));
    check_decodes(set, m);
  }
}

TEST_CASE("switch rows") {
  SUBCASE("row codec") {
    std::vector<bool> bits{true, true, false, false, true};
    auto row = SwitchRow::from_bits(bits);
    CHECK(row.first);
    CHECK(row.switches == std::vector<std::uint32_t>{1, 3});
    for (std::size_t i = 0; i < bits.size(); ++i) CHECK(row.bit_at(i) == bits[i]);
  }
  SUBCASE("complete graph has at most two switches per row") {
    AdjacencyMatrix m(9);
    for (VertexId u = 0; u < 9; ++u)
      for (VertexId v = u + 1; v < 9; ++v) m.set(u, v);
    std::vector<VertexId> order{3, 1, 4, 0, 5, 8, 2, 6, 7};
    auto set = switch_encode(m, order);
    check_decodes(set, m);
    for (VertexId u = 0; u < 9; ++u) {
      std::vector<bool> row;
      for (auto v : order) row.push_back(m(u, v));
      CHECK(SwitchRow::from_bits(row).switches.size() <= 2);
    }
  }
  SUBCASE("empty graph has no switches") {
    AdjacencyMatrix m(7);
    std::vector<VertexId> order{0, 1, 2, 3, 4, 5, 6};
    auto set = switch_encode(m, order);
    for (const auto& l : set.labels) CHECK(l.size() == 3 + 3 + 1 + 1);
  }
  SUBCASE("random graph under a random permutation") {
    auto m = random_graph(50, 0.4, 9);
    std::vector<VertexId> order(50);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::shuffle(order.begin(), order.end(), std::mt19937_64(4));
    check_decodes(switch_encode(m, order), m);
  }
  SUBCASE("not a permutation") {
    std::vector<VertexId> order{0, 0, 1};
    CHECK_THROWS_AS(switch_encode(AdjacencyMatrix(3), order), std::invalid_argument);
  }
}

TEST_CASE("space-filling-curve order") {
  std::vector<Point2> one{{make_rational(3), make_rational(4)}};
  CHECK(sfc_order(one) == std::vector<VertexId>{0});

  // Corners listed in the curve's own visiting order stay put.
  std::vector<Point2> corners{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK(sfc_order(corners) == std::vector<VertexId>{0, 1, 2, 3});
  std::vector<Point2> shuffled{corners[2], corners[0], corners[3], corners[1]};
  CHECK(sfc_order(shuffled) == std::vector<VertexId>{1, 3, 0, 2});

  auto inst = generate_instance(Family::unit_disk, 300, 2);
  auto pts = inst.points();
  auto ord = sfc_order(pts);
  auto sorted = ord;
  std::sort(sorted.begin(), sorted.end());
  for (VertexId i = 0; i < 300; ++i) REQUIRE(sorted[i] == i);
}

TEST_CASE("shatter estimate") {
  CHECK(shatter_estimate(AdjacencyMatrix(20), 5, 10, 1) == 1);
  AdjacencyMatrix k(20);
  for (VertexId u = 0; u < 20; ++u)
    for (VertexId v = u + 1; v < 20; ++v) k.set(u, v);
  CHECK(shatter_estimate(k, 5, 20, 1) <= 6);
  CHECK_THROWS_AS(shatter_estimate(k, 21, 1, 1), std::invalid_argument);
}

TEST_CASE("label dump round trip") {
  auto m = random_graph(30, 0.2, 5);
  auto set = encode_from_bicliques(star_decomposition(m));
  std::stringstream ss;
  write_label_dump(ss, set);
  auto back = read_label_dump(ss);
  REQUIRE(back.labels.size() == set.labels.size());
  for (std::size_t i = 0; i < set.labels.size(); ++i) CHECK(back.labels[i] == set.labels[i]);
  check_decodes(back, m);

  std::stringstream bad("not json\n");
  CHECK_THROWS_AS(read_label_dump(bad), DecodeError);
}
