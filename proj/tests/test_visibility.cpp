#include <doctest.h>

#include <random>

#include "geolabel/instance.hpp"
#include "geolabel/schemes.hpp"
#include "geolabel/visibility.hpp"

using namespace geolabel;

namespace {

using R = Rational;

Point2 P(std::int64_t x, std::int64_t y) { return {R(x), R(y)}; }

Segment seg(Point2 a, Point2 b) { return {a, b}; }

std::vector<Point2> convex(std::size_t n) {
  std::vector<Point2> poly;
  for (std::size_t i = 0; i < n; ++i) poly.push_back(P(std::int64_t(i), std::int64_t(i * i)));
  return poly;
}

std::size_t part_size(std::size_t i, std::size_t j) { return j - i + 1; }

void check_chord(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  auto [i, j] = balanced_chord(poly);
  REQUIRE(i < j);
  CHECK(j - i >= 2);
  CHECK(!(i == 0 && j == n - 1));
  CHECK(polygon_visible(poly, i, j));
  const std::size_t bound = (2 * n + 2) / 3 + 1;
  CHECK(part_size(i, j) <= bound);
  CHECK(n - (j - i) + 1 <= bound);
}

void check_labels(const LabelSet& set, const AdjacencyMatrix& m) {
  auto dec = make_decoder(set.descriptor, set.labels);
  for (std::size_t u = 0; u < m.n(); ++u) {
    REQUIRE(dec->id(u) == u);
    for (std::size_t v = 0; v < m.n(); ++v)
      if (u != v) REQUIRE(dec->adjacent(u, v) == m(u, v));
  }
}

bool meets(const Segment& a, const Segment& b) { return segments_intersect<R>(a.a, a.b, b.a, b.b); }

/// x of the crossing of the supporting lines of two non-parallel segments.
R crossing_x(const Segment& s, const Segment& t) {
  R ms = (s.b.y - s.a.y) / (s.b.x - s.a.x), mt = (t.b.y - t.a.y) / (t.b.x - t.a.x);
  R qs = s.a.y - ms * s.a.x, qt = t.a.y - mt * t.a.x;
  return (qt - qs) / (ms - mt);
}

}  // namespace

TEST_CASE("visibility oracles") {
  std::vector<Point2> square{P(0, 0), P(4, 0), P(4, 4), P(0, 4)};
  CHECK(polygon_visible(square, 0, 2));
  // Notch: vertex 3 pokes in and blocks 2 from 4.
  std::vector<Point2> notch{P(0, 0), P(6, 0), P(6, 6), P(3, 1), P(0, 6)};
  CHECK_FALSE(polygon_visible(notch, 2, 4));
  CHECK(polygon_visible(notch, 0, 3));
  CHECK_THROWS_AS(polygon_visible(square, 1, 1), std::invalid_argument);

  std::vector<Point2> terrain{P(0, 0), P(1, 5), P(2, 0), P(3, 1)};
  CHECK_FALSE(terrain_visible(terrain, 0, 2));
  CHECK(terrain_visible(terrain, 1, 3));
}

TEST_CASE("balanced_chord") {
  SUBCASE("convex quadrilateral") {
    std::vector<Point2> quad{P(0, 0), P(4, 0), P(4, 4), P(0, 4)};
    auto [i, j] = balanced_chord(quad);
    CHECK(j - i == 2);
  }
  SUBCASE("convex n-gons") {
    for (std::size_t n : {5, 9, 30, 61}) check_chord(convex(n));
  }
  SUBCASE("random simple polygons") {
    for (std::uint64_t seed : {1, 2, 9}) {
      auto inst = generate_instance(Family::polygon_visibility, 64, seed);
      check_chord(inst.points());
    }
    GenParams comb;
    comb.polygon = "comb";
    check_chord(generate_instance(Family::polygon_visibility, 40, 3, comb).points());
  }
  SUBCASE("errors") {
    std::vector<Point2> tri{P(0, 0), P(1, 0), P(0, 1)};
    CHECK_THROWS_AS(balanced_chord(tri), std::invalid_argument);
    std::vector<Point2> bowtie{P(0, 0), P(2, 2), P(2, 0), P(0, 2)};
    CHECK_THROWS_AS(balanced_chord(bowtie), std::invalid_argument);
  }
}

TEST_CASE("bichromatic segments") {
  SUBCASE("one crossing pair, one disjoint pair") {
    BichromaticSegments segs;
    segs.red = {seg(P(0, 0), P(10, 10))};
    segs.blue = {seg(P(1, 9), P(11, -1)), seg(P(20, 0), P(30, 5))};
    auto set = hst_labels(segs);
    CHECK(decode_adjacent(set.descriptor, set.labels[0], set.labels[1]));
    CHECK_FALSE(decode_adjacent(set.descriptor, set.labels[0], set.labels[2]));
    CHECK_FALSE(decode_adjacent(set.descriptor, set.labels[1], set.labels[2]));
  }
  SUBCASE("validation") {
    BichromaticSegments same;
    same.red = {seg(P(0, 0), P(10, 10)), seg(P(1, 9), P(11, -1))};
    CHECK_THROWS_AS(same.validate(), std::invalid_argument);
    BichromaticSegments shared_x;
    shared_x.red = {seg(P(0, 0), P(10, 10))};
    shared_x.blue = {seg(P(10, 20), P(12, 30))};
    CHECK_THROWS_AS(shared_x.validate(), std::invalid_argument);
    CHECK_THROWS_AS(hst_labels(same), std::invalid_argument);
  }
  SUBCASE("128 + 128 pencil segments against the pair oracle") {
    auto inst = generate_instance(Family::bichromatic_segments, 256, 2);
    auto segs = segments_of(inst);
    REQUIRE(segs.red.size() == 128);
    auto set = hst_labels(segs);
    auto dec = make_decoder(set.descriptor, set.labels);
    for (std::size_t u = 0; u < 256; ++u)
      for (std::size_t v = 0; v < 256; ++v) {
        if (u == v) continue;
        bool expect = segs.is_red(u) != segs.is_red(v) && meets(segs.at(u), segs.at(v));
        REQUIRE(dec->adjacent(u, v) == expect);
      }
  }
  SUBCASE("tree diagnostics") {
    auto inst = generate_instance(Family::bichromatic_segments, 120, 5);
    auto segs = segments_of(inst);
    auto tree = build_hst(segs);
    auto diag = hst_diagnostics(tree, segs);
    CHECK(diag.max_nodes_per_segment <= diag.node_bound);
    CHECK(diag.unwitnessed == 0);
    CHECK(diag.witnessed_one_long + diag.witnessed_both_long == diag.intersecting_pairs);
    auto w = hst_widths(segs.size());
    CHECK(hst_labels(segs).stats().max_bits <= diag.node_bound * w.entry());
  }
}

TEST_CASE("slab ranks match exact crossings inside each slab") {
  auto inst = generate_instance(Family::bichromatic_segments, 80, 7);
  auto segs = segments_of(inst);
  auto tree = build_hst(segs);
  std::size_t checked = 0;
  for (std::size_t node = 0; node < tree.nodes.size(); ++node) {
    const auto& nd = tree.nodes[node];
    if (!nd.left_wall || !nd.right_wall) continue;
    for (bool long_is_red : {true, false}) {
      auto ranks = slab_ranks(tree, segs, node, long_is_red);
      for (auto [l, rank] : ranks.long_rank)
        for (const auto& [s, rho] : ranks.short_rho) {
          auto [lo, hi] = rho;
          bool formula = std::min(lo, hi) <= rank && rank < std::max(lo, hi);
          const auto& a = segs.at(l);
          const auto& b = segs.at(s);
          bool exact = false;
          if (meets(a, b)) {
            R x = crossing_x(a, b);
            exact = *nd.left_wall < x && x < *nd.right_wall;
          }
          REQUIRE(formula == exact);
          ++checked;
        }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("capped graphs") {
  SUBCASE("4-tuple witness") {
    AdjacencyMatrix m(4);
    m.set(0, 2);
    m.set(1, 3);
    std::vector<VertexId> order{0, 1, 2, 3};
    auto w = capped_check(m, order);
    REQUIRE(w);
    CHECK(w->i == 0);
    CHECK(w->j == 1);
    CHECK(w->k == 2);
    CHECK(w->l == 3);
    CHECK_THROWS_AS(capped_cross_realization(m, order, 2), RealizationError);
    m.set(0, 3);
    CHECK_FALSE(capped_check(m, order));
  }
  SUBCASE("complete graph") {
    AdjacencyMatrix m(6);
    for (VertexId u = 0; u < 6; ++u)
      for (VertexId v = u + 1; v < 6; ++v) m.set(u, v);
    std::vector<VertexId> order{0, 1, 2, 3, 4, 5};
    CHECK_FALSE(capped_check(m, order));
    auto cr = capped_cross_realization(m, order, 3);
    for (auto x : cr.min_n) CHECK(x == 3);
    for (auto x : cr.max_n) CHECK(x == 2);
  }
  SUBCASE("cross realization") {
    AdjacencyMatrix m(4);
    m.set(0, 2);
    m.set(1, 3);
    m.set(0, 3);
    std::vector<VertexId> order{0, 1, 2, 3};
    auto cr = capped_cross_realization(m, order, 2);
    CHECK(cr.min_n == std::vector<std::int64_t>{2, 3});
    CHECK(cr.max_n == std::vector<std::int64_t>{0, 1});
  }
  SUBCASE("no cross edges") {
    AdjacencyMatrix m(4);
    m.set(0, 1);
    std::vector<VertexId> order{0, 1, 2, 3};
    auto cr = capped_cross_realization(m, order, 2);
    CHECK(cr.min_n == std::vector<std::int64_t>{4, 4});
    CHECK(cr.max_n == std::vector<std::int64_t>{-1, -1});
  }
  SUBCASE("single edge") {
    AdjacencyMatrix m(2);
    m.set(0, 1);
    std::vector<VertexId> order{0, 1};
    check_labels(capped_labels(m, order), m);
  }
  SUBCASE("terrains are capped along x") {
    for (std::uint64_t seed : {1, 2, 3}) {
      auto inst = generate_instance(Family::terrain_visibility, 128, seed);
      auto m = adjacency_matrix(inst);
      std::vector<VertexId> order(128);
      std::iota(order.begin(), order.end(), VertexId{0});
      CHECK_FALSE(capped_check(m, order));
      check_labels(capped_labels(m, order), m);
    }
  }
  SUBCASE("closure of a random graph") {
    std::mt19937_64 rng(4);
    AdjacencyMatrix m(90);
    for (VertexId u = 0; u < 90; ++u)
      for (VertexId v = u + 1; v < 90; ++v)
        if (rng() % 16 == 0) m.set(u, v);
    std::vector<VertexId> order(90);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::shuffle(order.begin(), order.end(), rng);
    auto closed = capped_closure(m, order);
    CHECK_FALSE(capped_check(closed, order));
    for (VertexId u = 0; u < 90; ++u)
      for (VertexId v = u + 1; v < 90; ++v)
        if (m(u, v)) REQUIRE(closed(u, v));
    check_labels(capped_labels(closed, order), closed);
  }
}

TEST_CASE("polygon labels") {
  SUBCASE("convex polygon decodes as a complete graph") {
    auto poly = convex(20);
    auto set = polygon_labels(poly);
    AdjacencyMatrix k(20);
    for (VertexId u = 0; u < 20; ++u)
      for (VertexId v = u + 1; v < 20; ++v) k.set(u, v);
    check_labels(set, k);
  }
  SUBCASE("random and comb polygons") {
    Instance inst = generate_instance(Family::polygon_visibility, 128, 4);
    check_labels(polygon_labels(inst.points()), adjacency_matrix(inst));
    GenParams comb;
    comb.polygon = "comb";
    inst = generate_instance(Family::polygon_visibility, 96, 5, comb);
    check_labels(polygon_labels(inst.points()), adjacency_matrix(inst));
  }
  SUBCASE("supplied duals on a convex polygon") {
    // Everything sees everything: flat red segments stacked, steep blue
    // segments cutting through all of them.
    PolygonLabelOptions opt;
    opt.encoder = "hst_with_supplied_duals";
    opt.duals = [](std::span<const VertexId> red, std::span<const VertexId> blue) {
      BichromaticSegments s;
      for (std::size_t i = 0; i < red.size(); ++i)
        s.red.push_back(seg(P(std::int64_t(i), std::int64_t(10 * i)), P(1000 + std::int64_t(i), std::int64_t(10 * i + 1))));
      for (std::size_t j = 0; j < blue.size(); ++j)
        s.blue.push_back(seg(P(200 + 2 * std::int64_t(j), -1000), P(201 + 2 * std::int64_t(j), 100000)));
      return s;
    };
    auto poly = convex(24);
    auto set = polygon_labels(poly, opt);
    AdjacencyMatrix k(24);
    for (VertexId u = 0; u < 24; ++u)
      for (VertexId v = u + 1; v < 24; ++v) k.set(u, v);
    check_labels(set, k);

    opt.duals = [](std::span<const VertexId> red, std::span<const VertexId> blue) {
      BichromaticSegments s;
      for (std::size_t i = 0; i < red.size(); ++i)
        s.red.push_back(seg(P(std::int64_t(i), std::int64_t(10 * i)), P(1 + std::int64_t(i), std::int64_t(10 * i))));
      for (std::size_t j = 0; j < blue.size(); ++j)
        s.blue.push_back(seg(P(200 + 2 * std::int64_t(j), 0), P(201 + 2 * std::int64_t(j), 0)));
      return s;
    };
    CHECK_THROWS_AS(polygon_labels(poly, opt), std::invalid_argument);
    opt.duals = nullptr;
    CHECK_THROWS_AS(polygon_labels(poly, opt), std::invalid_argument);
  }
  SUBCASE("non-simple input") {
    std::vector<Point2> bowtie{P(0, 0), P(2, 2), P(2, 0), P(0, 2)};
    CHECK_THROWS_AS(polygon_labels(bowtie), std::invalid_argument);
  }
}
