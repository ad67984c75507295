#include "geolabel/labeling.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "codec.hpp"
#include "geolabel/semilinear.hpp"
#include "geolabel/visibility.hpp"

namespace geolabel {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 12> kSchemeNames{{
    {Scheme::none, "none"},
    {Scheme::biclique_list, "biclique_list"},
    {Scheme::bipartite_hierarchy, "bipartite_hierarchy"},
    {Scheme::dominance, "dominance"},
    {Scheme::switch_rows, "switch_rows"},
    {Scheme::sign_pair, "sign_pair"},
    {Scheme::composed_phi, "composed_phi"},
    {Scheme::semilinear, "semilinear"},
    {Scheme::boxicity, "boxicity"},
    {Scheme::hst, "hst"},
    {Scheme::capped, "capped"},
    {Scheme::polygon, "polygon"},
}};

}  // namespace

std::string_view scheme_name(Scheme s) {
  for (auto [tag, name] : kSchemeNames)
    if (tag == s) return name;
  return "none";
}

Scheme scheme_from_name(std::string_view name) {
  for (auto [tag, n] : kSchemeNames)
    if (n == name) return tag;
  throw std::invalid_argument("unknown scheme tag: " + std::string(name));
}

nlohmann::json SchemeDescriptor::to_json() const {
  nlohmann::json j{{"scheme", scheme_name(scheme)}, {"n", n}};
  if (bicliques) j["bicliques"] = bicliques;
  if (levels) j["levels"] = levels;
  if (dims) j["dims"] = dims;
  if (clauses) j["clauses"] = clauses;
  if (!symmetric) j["symmetric"] = false;
  if (has_le) j["has_le"] = true;
  if (nodes) j["nodes"] = nodes;
  if (width) j["width"] = width;
  if (!encoder.empty()) j["encoder"] = encoder;
  if (phi) j["phi"] = phi->to_json();
  if (!parts.empty()) {
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : parts) ps.push_back(p.to_json());
    j["parts"] = ps;
  }
  return j;
}

SchemeDescriptor SchemeDescriptor::from_json(const nlohmann::json& j) {
  SchemeDescriptor d;
  d.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  d.n = j.at("n").get<std::size_t>();
  d.bicliques = j.value("bicliques", std::uint64_t{0});
  d.levels = j.value("levels", 0U);
  d.dims = j.value("dims", 0U);
  d.clauses = j.value("clauses", 0U);
  d.symmetric = j.value("symmetric", true);
  d.has_le = j.value("has_le", false);
  d.nodes = j.value("nodes", std::uint64_t{0});
  d.width = j.value("width", 0U);
  d.encoder = j.value("encoder", "");
  if (j.contains("phi")) d.phi = BoolExpr::from_json(j.at("phi"));
  if (j.contains("parts"))
    for (const auto& p : j.at("parts")) d.parts.push_back(from_json(p));
  return d;
}

LabelStats LabelSet::stats() const {
  LabelStats s;
  for (const auto& l : labels) {
    s.max_bits = std::max(s.max_bits, l.size());
    s.total_bits += l.size();
  }
  return s;
}

namespace detail {
namespace {

class NoneCodec {
 public:
  struct Parsed {};
  explicit NoneCodec(const SchemeDescriptor&) {}
  Parsed parse(BitReader&) const { return {}; }
  std::uint64_t id(const Parsed&) const { return 0; }
  bool adjacent(const Parsed&, const Parsed&) const { return false; }
};

class SignPairCodec {
 public:
  struct Parsed {
    BicliqueListCodec::Parsed ge;
    std::optional<BicliqueListCodec::Parsed> le;
  };

  explicit SignPairCodec(const SchemeDescriptor& d)
      : ge_(d.parts.at(0)), le_(d.has_le ? std::optional<BicliqueListCodec>(d.parts.at(1)) : std::nullopt) {}

  Parsed parse(BitReader& r) const {
    Parsed p;
    p.ge = ge_.parse(r);
    if (le_) {
      p.le = le_->parse(r);
      if (p.le->id != p.ge.id) throw DecodeError("sign sublabels disagree on the vertex id");
    }
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.ge.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const { return ge_.adjacent(a.ge, b.ge); }

  /// Sign of f on the pair: -1, 0 or +1. Without the -f sublabels only the
  /// strict/non-strict split is known and zero is reported as +1.
  int sign(const Parsed& a, const Parsed& b) const {
    bool ge = ge_.adjacent(a.ge, b.ge);
    if (!ge) return -1;
    if (le_ && le_->adjacent(*a.le, *b.le)) return 0;
    return 1;
  }

 private:
  BicliqueListCodec ge_;
  std::optional<BicliqueListCodec> le_;
};

class ComposedCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    std::vector<std::optional<SignPairCodec::Parsed>> subs;
  };

  explicit ComposedCodec(const SchemeDescriptor& d)
      : n_(d.n), t_(d.parts.size() / 2), symmetric_(d.symmetric), phi_(d.phi.value_or(BoolExpr::constant(false))) {
    for (const auto& p : d.parts) {
      if (p.scheme == Scheme::none) subs_.emplace_back(std::nullopt);
      else if (p.scheme == Scheme::sign_pair) subs_.emplace_back(SignPairCodec(p));
      else throw DecodeError("composed label part must be sign_pair or none");
    }
  }

  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    for (const auto& codec : subs_) {
      std::uint64_t len = r.read_gamma() - 1;
      BitReader sub = r.sub(len);
      if (!codec) {
        sub.expect_end();
        p.subs.emplace_back(std::nullopt);
        continue;
      }
      auto parsed = codec->parse(sub);
      sub.expect_end();
      if (parsed.ge.id != p.id) throw DecodeError("sublabel carries a different vertex id");
      p.subs.emplace_back(std::move(parsed));
    }
    return p;
  }

  std::uint64_t id(const Parsed& p) const { return p.id; }

  bool adjacent(const Parsed& a, const Parsed& b) const {
    const Parsed& lo = a.id < b.id ? a : b;
    const Parsed& hi = a.id < b.id ? b : a;
    if (holds(lo, hi, 0)) return true;
    return !symmetric_ && holds(lo, hi, 1);
  }

 private:
  bool holds(const Parsed& lo, const Parsed& hi, std::size_t order) const {
    std::vector<int> signs(t_, 1);
    for (std::size_t i = 0; i < t_; ++i) {
      const auto& codec = subs_[2 * i + order];
      if (codec) signs[i] = codec->sign(*lo.subs[2 * i + order], *hi.subs[2 * i + order]);
    }
    return phi_.eval([&](int atom) {
      int s = signs[(atom - 1) / 3];
      switch ((atom - 1) % 3) {
        case 0: return s < 0;
        case 1: return s == 0;
        default: return s <= 0;
      }
    });
  }

  std::size_t n_;
  std::size_t t_;
  bool symmetric_;
  BoolExpr phi_;
  std::vector<std::optional<SignPairCodec>> subs_;
};

}  // namespace
}  // namespace detail

std::unique_ptr<LabelDecoder> make_decoder(const SchemeDescriptor& desc, std::span<const BitString> labels) {
  using namespace detail;
  switch (desc.scheme) {
    case Scheme::none: return make_codec_decoder<NoneCodec>(desc, labels);
    case Scheme::biclique_list:
    case Scheme::bipartite_hierarchy: return make_codec_decoder<BicliqueListCodec>(desc, labels);
    case Scheme::switch_rows: return make_codec_decoder<SwitchRowsCodec>(desc, labels);
    case Scheme::sign_pair: return make_codec_decoder<SignPairCodec>(desc, labels);
    case Scheme::composed_phi: return make_codec_decoder<ComposedCodec>(desc, labels);
    case Scheme::dominance: return make_dominance_decoder(desc, labels);
    case Scheme::semilinear: return make_semilinear_decoder(desc, labels);
    case Scheme::boxicity: return make_boxicity_decoder(desc, labels);
    case Scheme::hst: return make_hst_decoder(desc, labels);
    case Scheme::capped: return make_capped_decoder(desc, labels);
    case Scheme::polygon: return make_polygon_decoder(desc, labels);
  }
  throw DecodeError("unsupported scheme");
}

bool decode_adjacent(const SchemeDescriptor& desc, const BitString& a, const BitString& b) {
  std::array<BitString, 2> pair{a, b};
  auto dec = make_decoder(desc, pair);
  if (dec->id(0) == dec->id(1)) throw std::invalid_argument("decode_adjacent needs two distinct vertices");
  return dec->adjacent(0, 1);
}

LabelSet encode_from_bicliques(const BicliqueDecomposition& dec, Scheme tag) {
  const std::size_t n = dec.n;
  const std::uint64_t b = dec.bicliques.size();
  std::vector<std::vector<std::uint64_t>> entries(n);
  for (std::uint64_t k = 0; k < b; ++k) {
    for (VertexId u : dec.bicliques[k].left) entries.at(u).push_back(k << 1);
    for (VertexId v : dec.bicliques[k].right) entries.at(v).push_back((k << 1) | 1U);
  }
  LabelSet out;
  out.descriptor.scheme = tag;
  out.descriptor.n = n;
  out.descriptor.bicliques = b;
  const unsigned idw = ceil_log2(n), bw = ceil_log2(b);
  out.labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& l = out.labels[v];
    l.append_uint(v, idw);
    l.append_gamma(entries[v].size() + 1);
    for (auto e : entries[v]) {
      l.append_uint(e >> 1, bw);
      l.push_back(e & 1U);
    }
  }
  return out;
}

std::string biclique_structure_error(const LabelSet& set) {
  const auto& d = set.descriptor;
  if (d.scheme != Scheme::biclique_list && d.scheme != Scheme::bipartite_hierarchy) return {};
  detail::BicliqueListCodec codec(d);
  std::vector<std::array<std::vector<VertexId>, 2>> sides(d.bicliques);
  for (std::size_t v = 0; v < set.labels.size(); ++v) {
    BitReader r(set.labels[v]);
    for (auto e : codec.parse(r).entries) sides[e >> 1][e & 1U].push_back(static_cast<VertexId>(v));
  }
  const std::size_t n = set.labels.size();
  std::vector<std::uint8_t> covered(n * n, 0);
  for (std::size_t k = 0; k < sides.size(); ++k) {
    const auto& [left, right] = sides[k];
    if (left.empty() != right.empty())
      return "biclique " + std::to_string(k) + " has members on one side only";
    for (auto u : left)
      for (auto v : right) {
        auto& c = covered[std::min(u, v) * n + std::max(u, v)];
        if (c++) return "pair " + std::to_string(u) + "," + std::to_string(v) + " covered twice";
      }
  }
  return {};
}

std::vector<BipartitePiece> bipartize(std::span<const VertexId> ids) {
  std::vector<BipartitePiece> pieces;
  struct Frame {
    std::size_t lo, hi;
    unsigned level;
  };
  std::vector<Frame> stack{{0, ids.size(), 0}};
  while (!stack.empty()) {
    auto [lo, hi, level] = stack.back();
    stack.pop_back();
    if (hi - lo < 2) continue;
    std::size_t mid = lo + (hi - lo + 1) / 2;
    BipartitePiece p;
    p.level = level;
    p.lower.assign(ids.begin() + lo, ids.begin() + mid);
    p.upper.assign(ids.begin() + mid, ids.begin() + hi);
    pieces.push_back(std::move(p));
    stack.push_back({mid, hi, level + 1});
    stack.push_back({lo, mid, level + 1});
  }
  return pieces;
}

std::vector<BipartitePiece> bipartize(std::size_t n) {
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), VertexId{0});
  return bipartize(ids);
}

LabelSet sign_pair_labels(LabelSet ge, std::optional<LabelSet> le) {
  LabelSet out;
  out.descriptor.scheme = Scheme::sign_pair;
  out.descriptor.n = ge.descriptor.n;
  out.descriptor.has_le = le.has_value();
  out.descriptor.parts.push_back(ge.descriptor);
  if (le) {
    if (le->labels.size() != ge.labels.size()) throw std::invalid_argument("sign sublabel sets differ in size");
    out.descriptor.parts.push_back(le->descriptor);
  }
  out.labels = std::move(ge.labels);
  if (le)
    for (std::size_t v = 0; v < out.labels.size(); ++v) out.labels[v].append(le->labels[v]);
  return out;
}

LabelSet empty_label_set(std::size_t n) {
  LabelSet out;
  out.descriptor.scheme = Scheme::none;
  out.descriptor.n = n;
  out.labels.resize(n);
  return out;
}

LabelSet compose_predicate_labels(const PredicateSpec& spec, std::vector<LabelSet> subs) {
  if (subs.size() != 2 * spec.t()) throw std::invalid_argument("composition needs 2t sublabel sets");
  const std::size_t n = subs.empty() ? 0 : subs[0].labels.size();
  LabelSet out;
  out.descriptor.scheme = Scheme::composed_phi;
  out.descriptor.n = n;
  out.descriptor.symmetric = spec.symmetric;
  out.descriptor.phi = spec.phi;
  for (auto& s : subs) {
    if (s.labels.size() != n) throw std::invalid_argument("sublabel sets differ in size");
    if (s.descriptor.scheme != Scheme::sign_pair && s.descriptor.scheme != Scheme::none)
      throw std::invalid_argument("sublabel sets must be sign_pair or none");
    out.descriptor.parts.push_back(s.descriptor);
  }
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& l = out.labels[v];
    l.append_uint(v, idw);
    for (const auto& s : subs) {
      l.append_gamma(s.labels[v].size() + 1);
      l.append(s.labels[v]);
    }
  }
  return out;
}

bool SwitchRow::bit_at(std::uint64_t column) const {
  auto below = std::lower_bound(switches.begin(), switches.end(), column) - switches.begin();
  return first ^ ((below & 1) != 0);
}

SwitchRow SwitchRow::from_bits(const std::vector<bool>& row) {
  SwitchRow r;
  if (row.empty()) return r;
  r.first = row[0];
  for (std::size_t p = 0; p + 1 < row.size(); ++p)
    if (row[p] != row[p + 1]) r.switches.push_back(static_cast<std::uint32_t>(p));
  return r;
}

void write_switch_row(BitString& out, std::uint64_t column, const SwitchRow& row, std::size_t universe) {
  const unsigned w = ceil_log2(universe);
  out.append_uint(column, w);
  out.push_back(row.first);
  out.append_gamma(row.switches.size() + 1);
  for (auto p : row.switches) out.append_uint(p, w);
}

SwitchRow read_switch_row(BitReader& in, std::uint64_t& column, std::size_t universe) {
  const unsigned w = ceil_log2(universe);
  column = in.read_uint(w);
  if (column >= universe) throw DecodeError("switch column out of range");
  SwitchRow r;
  r.first = in.read_bit();
  std::uint64_t count = in.read_gamma() - 1;
  if (count + 1 > std::max<std::size_t>(universe, 1)) throw DecodeError("too many switches");
  for (std::uint64_t k = 0; k < count; ++k) {
    std::uint64_t p = in.read_uint(w);
    if (p + 1 >= universe) throw DecodeError("switch position out of range");
    if (!r.switches.empty() && r.switches.back() >= p) throw DecodeError("switch positions not ascending");
    r.switches.push_back(static_cast<std::uint32_t>(p));
  }
  return r;
}

LabelSet switch_encode(const AdjacencyMatrix& m, std::span<const VertexId> order) {
  const std::size_t n = m.n();
  if (order.size() != n) throw std::invalid_argument("order is not a permutation of the vertices");
  std::vector<std::uint64_t> column(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (order[k] >= n || column[order[k]] != n) throw std::invalid_argument("order is not a permutation");
    column[order[k]] = k;
  }
  LabelSet out;
  out.descriptor.scheme = Scheme::switch_rows;
  out.descriptor.n = n;
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n);
  std::vector<bool> row(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < n; ++k) row[k] = m(v, order[k]);
    out.labels[v].append_uint(v, idw);
    write_switch_row(out.labels[v], column[v], SwitchRow::from_bits(row), n);
  }
  return out;
}

namespace {

std::uint64_t hilbert_index(std::uint32_t side, std::uint32_t x, std::uint32_t y) {
  std::uint64_t d = 0;
  for (std::uint32_t s = side / 2; s > 0; s /= 2) {
    std::uint32_t rx = (x & s) ? 1 : 0;
    std::uint32_t ry = (y & s) ? 1 : 0;
    d += std::uint64_t{s} * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = side - 1 - x;
        y = side - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

std::uint32_t grid_cell(const Rational& v, const Rational& lo, const Rational& hi, std::uint32_t cells) {
  if (hi == lo) return 0;
  Rational t = (v - lo) / (hi - lo) * (cells - 1);
  return static_cast<std::uint32_t>(floor_of(t).get_ui());
}

}  // namespace

std::vector<VertexId> sfc_order(std::span<const Point2> points) {
  constexpr std::uint32_t side = 1U << 16;
  std::vector<VertexId> order(points.size());
  std::iota(order.begin(), order.end(), VertexId{0});
  if (points.empty()) return order;
  Rational x0 = points[0].x, x1 = x0, y0 = points[0].y, y1 = y0;
  for (const auto& p : points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  std::vector<std::uint64_t> key(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    key[i] = hilbert_index(side, grid_cell(points[i].x, x0, x1, side), grid_cell(points[i].y, y0, y1, side));
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return key[a] < key[b]; });
  return order;
}

std::size_t shatter_estimate(const AdjacencyMatrix& m, std::size_t mm, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = m.n();
  if (mm > n) throw std::invalid_argument("sample size exceeds vertex count");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> cols(n);
  std::size_t best = n ? 1 : 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    for (std::size_t k = 0; k < mm; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, n - 1);
      std::swap(cols[k], cols[pick(rng)]);
    }
    std::unordered_set<std::string> seen;
    std::string key(mm, '0');
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t k = 0; k < mm; ++k) key[k] = m(u, cols[k]) ? '1' : '0';
      seen.insert(key);
    }
    best = std::max(best, seen.size());
  }
  return best;
}

void write_label_dump(std::ostream& out, const LabelSet& set) {
  out << set.descriptor.to_json().dump() << '\n';
  for (const auto& l : set.labels) out << l.to_dump() << '\n';
}

LabelSet read_label_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DecodeError("label dump is empty");
  LabelSet set;
  try {
    set.descriptor = SchemeDescriptor::from_json(nlohmann::json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("bad descriptor header: ") + e.what());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    set.labels.push_back(BitString::from_dump(line));
  }
  if (set.labels.size() != set.descriptor.n) throw DecodeError("label count differs from descriptor n");
  return set;
}

}  // namespace geolabel
