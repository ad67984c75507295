#include <doctest.h>

#include <random>

#include "geolabel/instance.hpp"
#include "geolabel/predicate.hpp"
#include "geolabel/visibility.hpp"

using namespace geolabel;

namespace {

std::vector<Rational> pt(std::int64_t x, std::int64_t y) { return {make_rational(x), make_rational(y)}; }

Instance manual(Family f, std::vector<std::vector<Rational>> features) {
  Instance inst;
  inst.family = f;
  inst.n = features.size();
  inst.features = std::move(features);
  return inst;
}

}  // namespace

TEST_CASE("unit disk polynomial signs") {
  auto spec = unit_disk_predicate();
  auto o = pt(0, 0);
  CHECK(eval_sign(spec, 1, o, pt(2, 0)) == 0);
  CHECK(eval_sign(spec, 1, o, pt(0, 0)) == 1);
  CHECK(eval_sign(spec, 1, o, pt(3, 4)) == -1);
}

TEST_CASE("eval_sign rejects wrong arity") {
  auto spec = unit_disk_predicate();
  std::vector<Rational> short_u{make_rational(0)};
  CHECK_THROWS_AS(eval_sign(spec, 1, short_u, pt(1, 1)), std::invalid_argument);
}

TEST_CASE("built-in predicates validate and are symmetric where claimed") {
  for (auto spec : {unit_disk_predicate(), point_halfplane_predicate(), segment_predicate()})
    CHECK_NOTHROW(spec.validate());
  std::mt19937_64 rng(3);
  std::vector<std::vector<Rational>> samples;
  for (int i = 0; i < 24; ++i)
    samples.push_back({make_rational(static_cast<std::int64_t>(rng() % 64), 8),
                       make_rational(static_cast<std::int64_t>(rng() % 64), 8)});
  CHECK(symmetric_on(unit_disk_predicate(), samples));
}

TEST_CASE("oracle examples") {
  auto disks = manual(Family::unit_disk, {pt(0, 0), pt(2, 0)});
  CHECK(oracle_adjacent(disks, 0, 1));
  CHECK_THROWS_AS(oracle_adjacent(disks, 1, 1), std::invalid_argument);

  auto square = manual(Family::polygon_visibility, {pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)});
  for (VertexId u = 0; u < 4; ++u)
    for (VertexId v = u + 1; v < 4; ++v) CHECK(oracle_adjacent(square, u, v));

  auto valley = manual(Family::terrain_visibility, {pt(0, 5), pt(1, 0), pt(2, 5)});
  CHECK(oracle_adjacent(valley, 0, 2));
  auto spike = manual(Family::terrain_visibility, {pt(0, 0), pt(1, 5), pt(2, 0)});
  CHECK_FALSE(oracle_adjacent(spike, 0, 2));
  CHECK(oracle_adjacent(spike, 0, 1));
}

TEST_CASE("segment oracle: touching and collinear overlap count as intersecting") {
  CHECK(segments_intersect<std::int64_t>({0, 0}, {2, 0}, {2, 0}, {3, 5}));
  CHECK(segments_intersect<std::int64_t>({0, 0}, {4, 0}, {2, 0}, {6, 0}));
  CHECK_FALSE(segments_intersect<std::int64_t>({0, 0}, {1, 0}, {2, 0}, {6, 0}));
  CHECK_FALSE(segments_properly_cross<std::int64_t>({0, 0}, {2, 0}, {2, 0}, {3, 5}));
}

TEST_CASE("generators are deterministic and keep their invariants") {
  GenParams box4;
  box4.range = 4;
  auto a = generate_instance(Family::unit_disk, 4, 7, box4);
  auto b = generate_instance(Family::unit_disk, 4, 7, box4);
  REQUIRE(a.features.size() == 4);
  CHECK(a.to_json() == b.to_json());
  for (const auto& f : a.features) {
    CHECK(f[0] >= 0);
    CHECK(f[0] <= 4);
    CHECK(f[1] >= 0);
    CHECK(f[1] <= 4);
  }

  auto t = generate_instance(Family::terrain_visibility, 3, 1);
  REQUIRE(t.features.size() == 3);
  CHECK(t.features[0][0] < t.features[1][0]);
  CHECK(t.features[1][0] < t.features[2][0]);

  auto poly = generate_instance(Family::polygon_visibility, 64, 9);
  auto pts = poly.points();
  CHECK(is_simple_polygon<Rational>(pts));

  auto tri = generate_instance(Family::polygon_visibility, 3, 1);
  CHECK(tri.features.size() == 3);
  CHECK(is_simple_polygon<Rational>(tri.points()));
}

TEST_CASE("general position of generated coordinates") {
  for (auto fam : {Family::unit_disk, Family::disk}) {
    auto inst = generate_instance(fam, 200, 5);
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<Rational> vals;
      for (const auto& f : inst.features) vals.push_back(f[axis]);
      std::sort(vals.begin(), vals.end());
      CHECK(std::adjacent_find(vals.begin(), vals.end()) == vals.end());
    }
  }
  auto terrain = generate_instance(Family::terrain_visibility, 60, 2);
  auto tp = terrain.points();
  for (std::size_t i = 0; i < tp.size(); ++i)
    for (std::size_t j = i + 1; j < tp.size(); ++j)
      for (std::size_t k = j + 1; k < tp.size(); ++k) REQUIRE(orient(tp[i], tp[j], tp[k]) != 0);
}

TEST_CASE("generation reports failure for impossible polygons") {
  CHECK_THROWS(generate_instance(Family::polygon_visibility, 2, 1));
}

TEST_CASE("instance JSON round trip") {
  for (auto fam : all_families()) {
    auto inst = generate_instance(fam, 24, 11);
    auto back = Instance::from_json(inst.to_json());
    CHECK(back.to_json() == inst.to_json());
    for (VertexId u = 0; u < 24; ++u)
      for (VertexId v = u + 1; v < 24; ++v) REQUIRE(oracle_adjacent(back, u, v) == oracle_adjacent(inst, u, v));
  }
}

TEST_CASE("adjacency matrices") {
  auto far = manual(Family::unit_disk, {pt(0, 0), pt(5, 0)});
  CHECK(adjacency_matrix(far).edge_count() == 0);

  auto pentagon = manual(Family::polygon_visibility, {pt(0, 0), pt(4, 0), pt(5, 3), pt(2, 5), pt(-1, 3)});
  auto k5 = adjacency_matrix(pentagon);
  CHECK(k5.edge_count() == 10);

  auto row = manual(Family::unit_disk, {pt(0, 0), pt(1, 0), pt(4, 0)});
  auto m = adjacency_matrix(row);
  CHECK(m.edge_count() == 1);
  CHECK(m(0, 1));
  CHECK(m(1, 0));

  auto big = generate_instance(Family::unit_disk, 64, 1);
  CHECK_THROWS_AS(adjacency_matrix(big, 32), SizeError);
}

TEST_CASE("batch oracle agrees with the exact oracle") {
  for (auto fam : all_families()) {
    auto inst = generate_instance(fam, 40, 4);
    AdjacencyOracle fast(inst);
    for (VertexId u = 0; u < inst.n; ++u)
      for (VertexId v = 0; v < inst.n; ++v)
        if (u != v) REQUIRE(fast(u, v) == oracle_adjacent(inst, u, v));
  }
}
