#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geolabel/instance.hpp"
#include "geolabel/labeling.hpp"
#include "geolabel/partition_tree.hpp"
#include "geolabel/visibility.hpp"

namespace geolabel {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scheme names accepted for a family, the preferred one first.
std::vector<std::string> valid_schemes(Family f);

/// Red and blue segments of a bichromatic_segments instance.
BichromaticSegments segments_of(const Instance& inst);

struct LabelOptions {
  BuildConfig tree;
  std::string encoder = "switch_rows";  // polygon cross encoder
};

struct LabelResult {
  LabelSet labels;
  std::size_t nu_max = 0;              // biclique memberships, summed over sublabel sets
  std::size_t decomposition_size = 0;  // sum of biclique side sizes
};

/// Throws UsageError when the scheme does not apply to the family.
LabelResult label_instance(const Instance& inst, std::string_view scheme, const LabelOptions& options = {});

struct VerifyReport {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  bool sampled = false;
  std::uint64_t sample_seed = 0;
  std::vector<std::pair<VertexId, VertexId>> first_mismatches;
  std::string error;  // decode or structural failure; counts as a failure

  bool ok() const { return error.empty() && mismatches == 0; }
  nlohmann::json to_json() const;
};

/// Decodes every pair (or `sample` seeded random pairs when n exceeds the
/// family's matrix budget) and compares with the oracle. Also checks that
/// label i carries id i.
VerifyReport verify_labels(const Instance& inst, const LabelSet& labels, std::uint64_t sample_seed = 1,
                           std::size_t sample = 1'000'000);

struct BenchRecord {
  std::string family;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string scheme;
  std::size_t max_label_bits = 0;
  std::size_t total_label_bits = 0;
  std::size_t nu_max = 0;
  std::size_t decomposition_size = 0;
  double build_millis = 0;
  bool verified = false;
};

struct BenchConfig {
  Family family = Family::unit_disk;
  std::vector<std::size_t> ns;
  std::vector<std::uint64_t> seeds{1};
  std::string scheme;
  LabelOptions options;
  GenParams params;
  bool baseline = true;  // also run the star decomposition on each instance
};

struct BenchSummary {
  std::vector<BenchRecord> records;   // scheme records, then baseline records
  double slope_max_label_bits = 0;
  double slope_nu_max = 0;
  std::optional<double> baseline_slope_max_label_bits;
  std::optional<double> baseline_slope_nu_max;
  bool failed = false;  // some record did not verify; slopes are then not fitted

  nlohmann::json to_json(const BenchConfig& cfg) const;
};

/// Worker threads: GEOLABEL_THREADS when set, else the hardware count.
unsigned worker_threads();

BenchSummary run_bench(const BenchConfig& cfg);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

/// Least-squares slope of log(y) against log(x); records with y = 0 skipped.
double loglog_slope(const std::vector<std::pair<double, double>>& xy);

}  // namespace geolabel
