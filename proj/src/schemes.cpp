#include "geolabel/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <thread>

#include "geolabel/semilinear.hpp"
#include "geolabel/visibility.hpp"

namespace geolabel {

std::vector<std::string> valid_schemes(Family f) {
  switch (f) {
    case Family::unit_disk:
    case Family::point_halfplane:
    case Family::segment_intersection: return {"partition_tree", "star", "switch_rows"};
    case Family::disk: return {"star", "switch_rows"};
    case Family::semilinear_dnf: return {"semilinear", "star", "switch_rows"};
    case Family::boxicity: return {"boxicity", "semilinear", "star", "switch_rows"};
    case Family::polygon_visibility: return {"polygon", "star", "switch_rows"};
    case Family::terrain_visibility:
    case Family::capped_abstract: return {"capped", "star", "switch_rows"};
    case Family::bichromatic_segments: return {"hst", "star", "switch_rows"};
  }
  return {};
}

BichromaticSegments segments_of(const Instance& inst) {
  BichromaticSegments segs;
  for (std::size_t v = 0; v < inst.n; ++v) {
    const auto& f = inst.features[v];
    Segment s{{f[0], f[1]}, {f[2], f[3]}};
    (v < inst.split ? segs.red : segs.blue).push_back(s);
  }
  return segs;
}

namespace {

void add_metrics(LabelResult& r, const std::vector<const BicliqueDecomposition*>& decs, std::size_t n) {
  std::vector<std::size_t> nu(n, 0);
  for (const auto* d : decs) {
    auto m = metrics(*d);
    r.decomposition_size += m.size;
    for (std::size_t v = 0; v < n && v < m.nu.size(); ++v) nu[v] += m.nu[v];
  }
  r.nu_max = nu.empty() ? 0 : *std::max_element(nu.begin(), nu.end());
}

std::vector<VertexId> identity(std::size_t n) {
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), VertexId{0});
  return ids;
}

bool planar_points(Family f) {
  return f == Family::unit_disk || f == Family::disk || f == Family::polygon_visibility ||
         f == Family::terrain_visibility;
}

LabelResult partition_tree_labels(const Instance& inst, const LabelOptions& opt) {
  LabelResult r;
  const auto spec = family_predicate(inst.family).value();
  if (inst.family == Family::unit_disk) {
    auto dec = ordered_pair_decomposition(PlanarPolynomial(spec, 1), inst.features, false, opt.tree);
    r.labels = encode_from_bicliques(dec, Scheme::bipartite_hierarchy);
    add_metrics(r, {&dec}, inst.n);
    return r;
  }
  if (inst.family == Family::point_halfplane) {
    auto ids = identity(inst.n);
    std::span<const VertexId> P(ids.data(), inst.split), S(ids.data() + inst.split, inst.n - inst.split);
    auto tree = build_two_phase_tree(spec, inst.features, P, S, opt.tree);
    tree.dec.provenance = "partition_tree";
    r.labels = encode_from_bicliques(tree.dec);
    add_metrics(r, {&tree.dec}, inst.n);
    return r;
  }
  // One sign sublabel per polynomial and argument order.
  std::vector<LabelSet> subs;
  std::vector<BicliqueDecomposition> decs;
  const bool need_le = spec.phi.uses_non_strict();
  for (std::size_t i = 1; i <= spec.t(); ++i) {
    for (bool reverse : {false, true}) {
      if (reverse && spec.symmetric) {
        subs.push_back(empty_label_set(inst.n));
        continue;
      }
      decs.push_back(ordered_pair_decomposition(PlanarPolynomial(spec, i), inst.features, reverse, opt.tree));
      LabelSet ge = encode_from_bicliques(decs.back());
      std::optional<LabelSet> le;
      if (need_le) {
        decs.push_back(
            ordered_pair_decomposition(PlanarPolynomial(spec, i, true), inst.features, reverse, opt.tree));
        le = encode_from_bicliques(decs.back());
      }
      subs.push_back(sign_pair_labels(std::move(ge), std::move(le)));
    }
  }
  r.labels = compose_predicate_labels(spec, std::move(subs));
  std::vector<const BicliqueDecomposition*> ptrs;
  for (const auto& d : decs) ptrs.push_back(&d);
  add_metrics(r, ptrs, inst.n);
  return r;
}

}  // namespace

LabelResult label_instance(const Instance& inst, std::string_view scheme, const LabelOptions& options) {
  auto allowed = valid_schemes(inst.family);
  if (std::find(allowed.begin(), allowed.end(), scheme) == allowed.end()) {
    std::string list;
    for (const auto& s : allowed) list += (list.empty() ? "" : ", ") + s;
    throw UsageError("scheme '" + std::string(scheme) + "' does not apply to family " +
                     std::string(family_name(inst.family)) + "; valid: " + list);
  }
  LabelResult r;
  if (scheme == "partition_tree") return partition_tree_labels(inst, options);
  if (scheme == "star") {
    auto dec = star_decomposition(adjacency_matrix(inst));
    r.labels = encode_from_bicliques(dec);
    add_metrics(r, {&dec}, inst.n);
  } else if (scheme == "switch_rows") {
    auto order = planar_points(inst.family) ? sfc_order(inst.points()) : identity(inst.n);
    r.labels = switch_encode(adjacency_matrix(inst), order);
  } else if (scheme == "semilinear") {
    DNFPredicate dnf = inst.dnf ? *inst.dnf : boxicity_dnf(inst.features.empty() ? 0 : inst.features[0].size() / 2);
    r.labels = semilinear_labels(inst.features, dnf);
  } else if (scheme == "boxicity") {
    std::vector<Box> boxes;
    for (const auto& f : inst.features) {
      Box b;
      for (std::size_t j = 0; j + 1 < f.size(); j += 2) {
        b.lo.push_back(f[j]);
        b.hi.push_back(f[j + 1]);
      }
      boxes.push_back(std::move(b));
    }
    r.labels = boxicity_labels(boxes);
  } else if (scheme == "hst") {
    r.labels = hst_labels(segments_of(inst));
  } else if (scheme == "capped") {
    auto order = inst.family == Family::capped_abstract ? inst.order : identity(inst.n);
    r.labels = capped_labels(adjacency_matrix(inst), order);
  } else if (scheme == "polygon") {
    PolygonLabelOptions po;
    po.encoder = options.encoder;
    r.labels = polygon_labels(inst.points(), po);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Verification

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j{{"pairs", pairs}, {"mismatches", mismatches}, {"sampled", sampled}, {"ok", ok()}};
  if (sampled) j["sample_seed"] = sample_seed;
  if (!first_mismatches.empty()) j["first_mismatches"] = first_mismatches;
  if (!error.empty()) j["error"] = error;
  return j;
}

VerifyReport verify_labels(const Instance& inst, const LabelSet& labels, std::uint64_t sample_seed,
                           std::size_t sample) {
  VerifyReport rep;
  if (labels.labels.size() != inst.n || labels.descriptor.n != inst.n) {
    rep.error = "label count does not match the instance";
    return rep;
  }
  std::unique_ptr<LabelDecoder> dec;
  try {
    dec = make_decoder(labels.descriptor, labels.labels);
  } catch (const std::exception& e) {
    rep.error = std::string("decode error: ") + e.what();
    return rep;
  }
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (dec->id(i) != i) {
      rep.error = "label " + std::to_string(i) + " carries id " + std::to_string(dec->id(i));
      return rep;
    }
  }
  if (inst.n <= default_matrix_budget(inst.family)) {
    rep.error = biclique_structure_error(labels);
    if (!rep.error.empty()) return rep;
  }
  AdjacencyOracle oracle(inst);
  auto check = [&](VertexId u, VertexId v) {
    ++rep.pairs;
    if (dec->adjacent(u, v) != oracle(u, v)) {
      ++rep.mismatches;
      if (rep.first_mismatches.size() < 16) rep.first_mismatches.emplace_back(u, v);
    }
  };
  if (inst.n <= default_matrix_budget(inst.family)) {
    for (VertexId u = 0; u < inst.n; ++u)
      for (VertexId v = u + 1; v < inst.n; ++v) check(u, v);
  } else {
    rep.sampled = true;
    rep.sample_seed = sample_seed;
    std::mt19937_64 rng(sample_seed);
    for (std::size_t k = 0; k < sample; ++k) {
      auto u = static_cast<VertexId>(rng() % inst.n);
      auto v = static_cast<VertexId>(rng() % inst.n);
      while (v == u) v = static_cast<VertexId>(rng() % inst.n);
      check(std::min(u, v), std::max(u, v));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Benchmarks

unsigned worker_threads() {
  if (const char* env = std::getenv("GEOLABEL_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double loglog_slope(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (auto [x, y] : xy) {
    if (x <= 0 || y <= 0) continue;
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return 0;
  double den = k * sxx - sx * sx;
  return den == 0 ? 0 : (k * sxy - sx * sy) / den;
}

namespace {

BenchRecord bench_one(const Instance& inst, const std::string& scheme, const LabelOptions& opt) {
  BenchRecord rec;
  rec.family = family_name(inst.family);
  rec.n = inst.n;
  rec.seed = inst.seed;
  rec.scheme = scheme;
  auto t0 = std::chrono::steady_clock::now();
  LabelResult r = label_instance(inst, scheme, opt);
  auto t1 = std::chrono::steady_clock::now();
  rec.build_millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
  auto st = r.labels.stats();
  rec.max_label_bits = st.max_bits;
  rec.total_label_bits = st.total_bits;
  rec.nu_max = r.nu_max;
  rec.decomposition_size = r.decomposition_size;
  rec.verified = verify_labels(inst, r.labels).ok();
  return rec;
}

}  // namespace

BenchSummary run_bench(const BenchConfig& cfg) {
  if (cfg.ns.empty() || cfg.seeds.empty()) throw UsageError("bench needs at least one n and one seed");
  if (!std::is_sorted(cfg.ns.begin(), cfg.ns.end())) throw UsageError("bench sizes must be ascending");
  const std::string scheme = cfg.scheme.empty() ? valid_schemes(cfg.family).front() : cfg.scheme;
  const bool baseline = cfg.baseline && scheme != "star";

  struct Cell {
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (auto n : cfg.ns)
    for (auto s : cfg.seeds) cells.push_back({n, s});
  std::vector<BenchRecord> main(cells.size()), base(baseline ? cells.size() : 0);
  std::vector<std::string> errors(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cells.size();) {
      try {
        Instance inst = generate_instance(cfg.family, cells[k].n, cells[k].seed, cfg.params);
        main[k] = bench_one(inst, scheme, cfg.options);
        if (baseline) base[k] = bench_one(inst, "star", cfg.options);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(worker_threads(), static_cast<unsigned>(cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (!errors[k].empty())
      throw std::runtime_error("bench cell n=" + std::to_string(cells[k].n) + " seed=" +
                               std::to_string(cells[k].seed) + ": " + errors[k]);

  BenchSummary sum;
  sum.records = main;
  sum.records.insert(sum.records.end(), base.begin(), base.end());
  sum.failed = std::any_of(sum.records.begin(), sum.records.end(), [](const auto& r) { return !r.verified; });
  if (sum.failed) return sum;
  auto fit = [](const std::vector<BenchRecord>& recs, auto field) {
    std::vector<std::pair<double, double>> xy;
    for (const auto& r : recs) xy.emplace_back(static_cast<double>(r.n), static_cast<double>(field(r)));
    return loglog_slope(xy);
  };
  auto bits = [](const BenchRecord& r) { return r.max_label_bits; };
  auto nu = [](const BenchRecord& r) { return r.nu_max; };
  sum.slope_max_label_bits = fit(main, bits);
  sum.slope_nu_max = fit(main, nu);
  if (baseline) {
    sum.baseline_slope_max_label_bits = fit(base, bits);
    sum.baseline_slope_nu_max = fit(base, nu);
  }
  return sum;
}

nlohmann::json BenchSummary::to_json(const BenchConfig& cfg) const {
  nlohmann::json j{{"family", family_name(cfg.family)},
                   {"scheme", cfg.scheme.empty() ? valid_schemes(cfg.family).front() : cfg.scheme},
                   {"n", cfg.ns},
                   {"seeds", cfg.seeds},
                   {"records", records.size()},
                   {"status", failed ? "FAILED" : "OK"}};
  if (!failed) {
    j["slope_max_label_bits"] = slope_max_label_bits;
    j["slope_nu_max"] = slope_nu_max;
    if (baseline_slope_max_label_bits) j["baseline_slope_max_label_bits"] = *baseline_slope_max_label_bits;
    if (baseline_slope_nu_max) j["baseline_slope_nu_max"] = *baseline_slope_nu_max;
  }
  return j;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "family,n,seed,scheme,max_label_bits,total_label_bits,nu_max,decomposition_size,build_millis,verified\n";
  for (const auto& r : records) {
    out << r.family << ',' << r.n << ',' << r.seed << ',' << r.scheme << ',' << r.max_label_bits << ','
        << r.total_label_bits << ',' << r.nu_max << ',' << r.decomposition_size << ',' << r.build_millis << ','
        << (r.verified ? "true" : "false") << '\n';
  }
}

}  // namespace geolabel
