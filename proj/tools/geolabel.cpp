// geolabel: generate instances, build and verify labelings, run benchmarks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "geolabel/instance.hpp"
#include "geolabel/schemes.hpp"

using namespace geolabel;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kGeneration = 3, kIo = 4 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through `fn` to `path`, or to stdout when path is empty or "-".
template <class Fn>
void write_to(const std::string& path, Fn fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  fn(out);
  if (!out) throw IoError("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  try {
    return Instance::from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed instance " + path + ": " + e.what());
  }
}

LabelSet load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return read_label_dump(in);
  } catch (const std::exception& e) {
    throw IoError("malformed label dump " + path + ": " + e.what());
  }
}

struct TreeFlags {
  unsigned D = 4;
  unsigned r = 16;
  double N_exponent = 2.0 / 3.0;
  std::size_t leaf_cap = 4;
  std::string encoder = "switch_rows";

  void add(CLI::App* app) {
    app->add_option("--D", D, "Cutting parameter (phase-1 branching)");
    app->add_option("--r", r, "kd cells per phase-2 level (power of 4)");
    app->add_option("--N-exponent", N_exponent, "Phase-1 stop exponent");
    app->add_option("--leaf-cap", leaf_cap, "Phase-2 leaf point cap");
    app->add_option("--encoder", encoder, "Polygon cross encoder")->check(CLI::IsMember({"switch_rows", "hst_with_supplied_duals"}));
  }
  LabelOptions options() const {
    LabelOptions o;
    o.tree.D = D;
    o.tree.r = r;
    o.tree.N_exponent = N_exponent;
    o.tree.leaf_point_cap = leaf_cap;
    o.encoder = encoder;
    return o;
  }
};

struct GenFlags {
  std::string range = "8";
  std::string preset = "interval";
  std::size_t dim = 3;
  std::string polygon = "two_opt";
  std::string capped = "terrain";
  std::size_t split = 0;

  void add(CLI::App* app) {
    app->add_option("--range", range, "Coordinate box side, integer or p/q");
    app->add_option("--preset", preset, "semilinear_dnf preset")
        ->check(CLI::IsMember({"interval", "permutation", "circle", "boxicity"}));
    app->add_option("--dim", dim, "Boxicity dimension");
    app->add_option("--polygon", polygon, "Polygon generator")->check(CLI::IsMember({"two_opt", "convex", "comb"}));
    app->add_option("--capped", capped, "Capped generator")->check(CLI::IsMember({"terrain", "closure"}));
    app->add_option("--split", split, "Left/red vertex count for bipartite families (default n/2)");
  }
  GenParams params() const {
    GenParams p;
    try {
      p.range = Rational(range);
      p.range.canonicalize();
    } catch (const std::invalid_argument&) {
      throw CLI::ValidationError("--range", "not a rational: " + range);
    }
    p.preset = preset;
    p.dim = dim;
    p.polygon = polygon;
    p.capped = capped;
    if (split) p.split = split;
    return p;
  }
};

Family parse_family(const std::string& name) {
  try {
    return family_from_name(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjacency labeling schemes for geometric graphs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance as JSON");
  std::string gen_family, gen_out;
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 1;
  GenFlags gen_flags;
  gen->add_option("--family", gen_family, "Instance family")->required();
  gen->add_option("--n", gen_n, "Vertex count")->required();
  gen->add_option("--seed", gen_seed, "Generation seed");
  gen->add_option("--out,-o", gen_out, "Output file (default stdout)");
  gen_flags.add(gen);

  // label
  auto* label = app.add_subcommand("label", "Build labels for an instance");
  std::string label_instance_path, label_scheme, label_out;
  TreeFlags label_flags;
  label->add_option("--instance,-i", label_instance_path, "Instance JSON")->required();
  label->add_option("--scheme,-s", label_scheme, "Labeling scheme (default: the family's preferred one)");
  label->add_option("--out,-o", label_out, "Label dump file (default stdout)");
  label_flags.add(label);

  // verify
  auto* verify = app.add_subcommand("verify", "Check decoded adjacency against the oracle");
  std::string verify_instance_path, verify_labels_path;
  std::uint64_t verify_seed = 1;
  verify->add_option("--instance,-i", verify_instance_path, "Instance JSON")->required();
  verify->add_option("--labels,-l", verify_labels_path, "Label dump")->required();
  verify->add_option("--seed", verify_seed, "Pair sampler seed above the brute-force budget");

  // bench
  auto* bench = app.add_subcommand("bench", "Scaling benchmark over doubling sizes");
  std::string bench_family, bench_scheme, bench_csv, bench_summary;
  std::vector<std::size_t> bench_ns;
  std::vector<std::uint64_t> bench_seeds{1};
  bool bench_no_baseline = false;
  TreeFlags bench_flags;
  GenFlags bench_gen;
  bench->add_option("--family", bench_family, "Instance family")->required();
  bench->add_option("--n", bench_ns, "Ascending sizes")->required()->delimiter(',');
  bench->add_option("--seeds", bench_seeds, "Seeds per size")->delimiter(',');
  bench->add_option("--scheme,-s", bench_scheme, "Labeling scheme");
  bench->add_option("--csv", bench_csv, "CSV output (default stdout)");
  bench->add_option("--summary", bench_summary, "Summary JSON output (default stderr)");
  bench->add_flag("--no-baseline", bench_no_baseline, "Skip the star-decomposition baseline");
  bench_flags.add(bench);
  bench_gen.add(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      Instance inst = generate_instance(parse_family(gen_family), gen_n, gen_seed, gen_flags.params());
      write_to(gen_out, [&](std::ostream& out) { out << inst.to_json().dump() << '\n'; });
      return kOk;
    }
    if (*label) {
      Instance inst = load_instance(label_instance_path);
      std::string scheme = label_scheme.empty() ? valid_schemes(inst.family).front() : label_scheme;
      LabelResult r = label_instance(inst, scheme, label_flags.options());
      write_to(label_out, [&](std::ostream& out) { write_label_dump(out, r.labels); });
      auto st = r.labels.stats();
      std::cerr << "scheme=" << scheme << " n=" << inst.n << " max_label_bits=" << st.max_bits
                << " total_label_bits=" << st.total_bits << " nu_max=" << r.nu_max << '\n';
      return kOk;
    }
    if (*verify) {
      Instance inst = load_instance(verify_instance_path);
      LabelSet labels = load_labels(verify_labels_path);
      VerifyReport rep = verify_labels(inst, labels, verify_seed);
      std::cout << rep.to_json().dump() << '\n';
      return rep.ok() ? kOk : kMismatch;
    }
    if (*bench) {
      BenchConfig cfg;
      cfg.family = parse_family(bench_family);
      cfg.ns = bench_ns;
      cfg.seeds = bench_seeds;
      cfg.scheme = bench_scheme;
      cfg.options = bench_flags.options();
      cfg.params = bench_gen.params();
      cfg.baseline = !bench_no_baseline;
      BenchSummary sum = run_bench(cfg);
      write_to(bench_csv, [&](std::ostream& out) { write_bench_csv(out, sum.records); });
      std::string text = sum.to_json(cfg).dump(2);
      if (bench_summary.empty()) std::cerr << text << '\n';
      else write_to(bench_summary, [&](std::ostream& out) { out << text << '\n'; });
      return sum.failed ? kMismatch : kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const GenerationError& e) {
    std::cerr << "generation error: " << e.what() << '\n';
    return kGeneration;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
