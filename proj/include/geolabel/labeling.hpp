#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geolabel/adjacency.hpp"
#include "geolabel/biclique.hpp"
#include "geolabel/bits.hpp"
#include "geolabel/geometry.hpp"
#include "geolabel/predicate.hpp"

namespace geolabel {

enum class Scheme {
  none,                 // empty sublabel placeholder
  biclique_list,
  bipartite_hierarchy,  // biclique_list over a union of per-piece decompositions
  dominance,
  switch_rows,
  sign_pair,            // (f >= 0, -f >= 0) biclique labels of one polynomial
  composed_phi,
  semilinear,
  boxicity,
  hst,
  capped,
  polygon,
};

std::string_view scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);

/// Everything the decoder needs besides the two labels.
struct SchemeDescriptor {
  Scheme scheme = Scheme::none;
  std::size_t n = 0;
  std::uint64_t bicliques = 0;  // biclique_list, bipartite_hierarchy
  unsigned levels = 0;          // bipartite_hierarchy, capped, polygon
  unsigned dims = 0;            // dominance, semilinear (l), boxicity (d)
  unsigned clauses = 0;         // semilinear (k)
  bool symmetric = true;        // composed_phi, semilinear
  bool has_le = false;          // sign_pair
  std::uint64_t nodes = 0;      // hst
  unsigned width = 0;           // hst rank width
  std::string encoder;          // polygon cross encoder
  std::optional<BoolExpr> phi;  // composed_phi
  std::vector<SchemeDescriptor> parts;

  nlohmann::json to_json() const;
  static SchemeDescriptor from_json(const nlohmann::json& j);
};

struct LabelStats {
  std::size_t max_bits = 0;
  std::size_t total_bits = 0;
};

struct LabelSet {
  SchemeDescriptor descriptor;
  std::vector<BitString> labels;

  LabelStats stats() const;
};

/// Label-pair decoder over a parsed label set. Parsing happens once, in
/// make_decoder; adjacent() then only touches the parsed form.
class LabelDecoder {
 public:
  virtual ~LabelDecoder() = default;
  virtual std::size_t size() const = 0;
  /// Vertex id carried by label i.
  virtual std::uint64_t id(std::size_t i) const = 0;
  virtual bool adjacent(std::size_t i, std::size_t j) const = 0;
};

/// Throws DecodeError if any label does not parse exactly.
std::unique_ptr<LabelDecoder> make_decoder(const SchemeDescriptor& desc, std::span<const BitString> labels);

/// Stateless decode of one pair; equal vertex ids are an argument error.
bool decode_adjacent(const SchemeDescriptor& desc, const BitString& a, const BitString& b);

// ---------------------------------------------------------------------------
// Biclique lists

/// [id][gamma(nu + 1)][(biclique id, side bit) ascending]; side 0 is left.
LabelSet encode_from_bicliques(const BicliqueDecomposition& dec, Scheme tag = Scheme::biclique_list);

/// Structural check of a biclique-list label set: every used biclique has
/// members on both sides and no pair shares two bicliques on opposite sides.
/// Returns an empty string when sound, else the first problem. Labels must
/// already parse; other schemes always return empty.
std::string biclique_structure_error(const LabelSet& set);

// ---------------------------------------------------------------------------
// Bipartization

struct BipartitePiece {
  unsigned level = 0;
  std::vector<VertexId> lower;
  std::vector<VertexId> upper;
};

/// Balanced recursive halving of `ids` (in the given order): one piece per
/// internal split, lower half x upper half.
std::vector<BipartitePiece> bipartize(std::span<const VertexId> ids);
std::vector<BipartitePiece> bipartize(std::size_t n);

// ---------------------------------------------------------------------------
// Multi-polynomial composition

/// Pairs the f >= 0 labels with the optional -f >= 0 labels of one polynomial.
LabelSet sign_pair_labels(LabelSet ge, std::optional<LabelSet> le);

/// Placeholder sublabel set (zero-length labels) for argument orders the
/// decoder never consults.
LabelSet empty_label_set(std::size_t n);

/// `subs` holds 2t sign_pair (or empty) label sets: entry 2(i-1) decodes
/// f_i(lower id, higher id), entry 2(i-1)+1 decodes f_i(higher id, lower id).
LabelSet compose_predicate_labels(const PredicateSpec& spec, std::vector<LabelSet> subs);

// ---------------------------------------------------------------------------
// Switch rows

/// One row as first bit plus ascending switch positions (bit p != bit p+1).
struct SwitchRow {
  bool first = false;
  std::vector<std::uint32_t> switches;

  bool bit_at(std::uint64_t column) const;
  static SwitchRow from_bits(const std::vector<bool>& row);
};

/// [column][first][gamma(switches + 1)][positions], all fixed fields
/// ceil(log2 universe) bits wide.
void write_switch_row(BitString& out, std::uint64_t column, const SwitchRow& row, std::size_t universe);
SwitchRow read_switch_row(BitReader& in, std::uint64_t& column, std::size_t universe);

/// order[k] is the vertex placed at column k.
LabelSet switch_encode(const AdjacencyMatrix& m, std::span<const VertexId> order);

/// Hilbert order (order-16 curve over the bounding box), ties by id.
std::vector<VertexId> sfc_order(std::span<const Point2> points);

/// Largest number of distinct row projections seen over `trials` random
/// column subsets of size mm.
std::size_t shatter_estimate(const AdjacencyMatrix& m, std::size_t mm, std::size_t trials,
                             std::uint64_t seed);

// ---------------------------------------------------------------------------
// Label dump: descriptor JSON on the first line, then one "len:hex" per vertex.

void write_label_dump(std::ostream& out, const LabelSet& set);
LabelSet read_label_dump(std::istream& in);

}  // namespace geolabel
