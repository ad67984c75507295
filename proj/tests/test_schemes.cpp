#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "geolabel/schemes.hpp"

using namespace geolabel;

TEST_CASE("every scheme verifies on every compatible family") {
  for (auto fam : all_families()) {
    const std::size_t n = fam == Family::polygon_visibility ? 48 : 64;
    auto inst = generate_instance(fam, n, 3);
    for (const auto& scheme : valid_schemes(fam)) {
      CAPTURE(family_name(fam));
      CAPTURE(scheme);
      auto r = label_instance(inst, scheme);
      auto rep = verify_labels(inst, r.labels);
      CHECK(rep.ok());
      CHECK(rep.pairs == n * (n - 1) / 2);
      CHECK_FALSE(rep.sampled);
    }
  }
}

TEST_CASE("incompatible scheme is a usage error") {
  auto inst = generate_instance(Family::terrain_visibility, 16, 1);
  CHECK_THROWS_AS(label_instance(inst, "hst"), UsageError);
  CHECK_THROWS_AS(label_instance(inst, "no_such_scheme"), UsageError);
}

TEST_CASE("interval labels stay logarithmic") {
  GenParams p;
  p.preset = "interval";
  auto inst = generate_instance(Family::semilinear_dnf, 1024, 2, p);
  auto r = label_instance(inst, "semilinear");
  CHECK(r.labels.stats().max_bits <= 10 + 4 * 11 + 8);
}

TEST_CASE("verify catches corrupted labels") {
  auto inst = generate_instance(Family::unit_disk, 64, 2);
  auto r = label_instance(inst, "partition_tree");
  REQUIRE(verify_labels(inst, r.labels).ok());

  auto side_flip = r.labels;
  // Last bit of a non-empty membership list is a side bit.
  std::size_t v = 0;
  while (side_flip.labels[v].size() <= 6 + 1) ++v;
  side_flip.labels[v].flip(side_flip.labels[v].size() - 1);
  auto rep = verify_labels(inst, side_flip);
  CHECK_FALSE(rep.ok());
  CHECK(rep.mismatches > 0);
  CHECK_FALSE(rep.first_mismatches.empty());

  auto id_flip = r.labels;
  id_flip.labels[5].flip(0);
  CHECK_FALSE(verify_labels(inst, id_flip).ok());

  auto truncated = r.labels;
  truncated.labels[3] = BitString();
  auto bad = verify_labels(inst, truncated);
  CHECK_FALSE(bad.ok());
  CHECK_FALSE(bad.error.empty());
}

TEST_CASE("empty graph") {
  GenParams wide;
  wide.range = 1000000;
  auto inst = generate_instance(Family::unit_disk, 40, 1, wide);
  REQUIRE(adjacency_matrix(inst).edge_count() == 0);
  auto r = label_instance(inst, "partition_tree");
  auto rep = verify_labels(inst, r.labels);
  CHECK(rep.ok());
  CHECK(r.nu_max == 0);
}

TEST_CASE("sampled verification above the budget") {
  auto inst = generate_instance(Family::semilinear_dnf, 5000, 1);
  auto r = label_instance(inst, "semilinear");
  auto rep = verify_labels(inst, r.labels, 7, 20000);
  CHECK(rep.ok());
  CHECK(rep.sampled);
  CHECK(rep.sample_seed == 7);
  CHECK(rep.pairs == 20000);
  CHECK(rep.to_json().at("sampled") == true);
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({{1, 1}, {2, 2}, {4, 4}}) == doctest::Approx(1.0));
  CHECK(loglog_slope({{10, 5}, {100, 50}, {1000, 500}}) == doctest::Approx(1.0));
  CHECK(loglog_slope({{2, 3}, {4, 3}, {8, 3}}) == doctest::Approx(0.0));
  CHECK(loglog_slope({{4, 2}, {16, 4}, {64, 8}}) == doctest::Approx(0.5));
}

TEST_CASE("bench") {
  setenv("GEOLABEL_THREADS", "2", 1);
  CHECK(worker_threads() == 2);
  BenchConfig cfg;
  cfg.family = Family::unit_disk;
  cfg.ns = {64, 128};
  cfg.seeds = {1, 2};
  auto sum = run_bench(cfg);
  CHECK_FALSE(sum.failed);
  REQUIRE(sum.records.size() == 8);
  for (std::size_t i = 0; i < 4; ++i) CHECK(sum.records[i].scheme == "partition_tree");
  for (std::size_t i = 4; i < 8; ++i) CHECK(sum.records[i].scheme == "star");
  CHECK(sum.records[0].n == 64);
  CHECK(sum.records[0].seed == 1);
  CHECK(sum.records[1].seed == 2);
  CHECK(sum.baseline_slope_nu_max.has_value());
  for (const auto& rec : sum.records) CHECK(rec.verified);

  std::ostringstream csv;
  write_bench_csv(csv, sum.records);
  std::string header = csv.str().substr(0, csv.str().find('\n'));
  CHECK(header ==
        "family,n,seed,scheme,max_label_bits,total_label_bits,nu_max,decomposition_size,build_millis,verified");

  auto j = sum.to_json(cfg);
  CHECK(j.contains("slope_max_label_bits"));

  // Same seeds, same labels.
  auto again = run_bench(cfg);
  for (std::size_t i = 0; i < sum.records.size(); ++i)
    CHECK(again.records[i].total_label_bits == sum.records[i].total_label_bits);
  unsetenv("GEOLABEL_THREADS");
}

TEST_CASE("bench without a baseline") {
  BenchConfig cfg;
  cfg.family = Family::terrain_visibility;
  cfg.ns = {32, 64};
  cfg.baseline = false;
  auto sum = run_bench(cfg);
  CHECK(sum.records.size() == 2);
  CHECK_FALSE(sum.baseline_slope_max_label_bits.has_value());
}
