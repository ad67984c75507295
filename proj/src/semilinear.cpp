#include "geolabel/semilinear.hpp"

#include <algorithm>
#include <numeric>

#include "codec.hpp"

namespace geolabel {

Rational LinearForm::operator()(std::span<const Rational> x) const {
  if (x.size() != dim()) throw std::invalid_argument("linear form applied to a point of wrong dimension");
  Rational acc = coef.empty() ? Rational(0) : coef[0];
  for (std::size_t i = 0; i < x.size(); ++i)
    if (coef[i + 1] != 0) acc += coef[i + 1] * x[i];
  return acc;
}

void DNFPredicate::validate() const {
  if (clauses.size() != k) throw std::invalid_argument("DNF clause count differs from k");
  for (const auto& c : clauses) {
    if (c.size() != l) throw std::invalid_argument("DNF clause length differs from l");
    for (const auto& lit : c)
      if (lit.g.dim() != d || lit.h.dim() != d) throw std::invalid_argument("DNF literal has wrong dimension");
  }
}

bool DNFPredicate::holds(std::span<const Rational> x, std::span<const Rational> y) const {
  for (const auto& c : clauses) {
    bool all = true;
    for (const auto& lit : c) {
      if (lit.g(x) + lit.h(y) >= 0) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool DNFPredicate::adjacent(std::span<const Rational> u, std::span<const Rational> v) const {
  return holds(u, v) || (!symmetric && holds(v, u));
}

namespace {

nlohmann::json form_to_json(const LinearForm& f) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : f.coef) a.push_back(rational_to_json(c));
  return a;
}

LinearForm form_from_json(const nlohmann::json& j) {
  LinearForm f;
  for (const auto& c : j) f.coef.push_back(rational_from_json(c));
  return f;
}

// Literal x_a - y_b < 0 on 1-based coordinates, with d coordinates per role.
Literal less(std::size_t d, std::size_t a, std::size_t b) {
  Literal lit;
  lit.g.coef.assign(d + 1, 0);
  lit.h.coef.assign(d + 1, 0);
  lit.g.coef[a] = 1;
  lit.h.coef[b] = -1;
  return lit;
}

// Literal y_b - x_a < 0, i.e. y_b < x_a.
Literal greater(std::size_t d, std::size_t a, std::size_t b) {
  Literal lit;
  lit.g.coef.assign(d + 1, 0);
  lit.h.coef.assign(d + 1, 0);
  lit.g.coef[a] = -1;
  lit.h.coef[b] = 1;
  return lit;
}

struct Keyed {
  Rational value;
  int kind;
  std::uint32_t vertex;
};

/// Position of every entry in the (value, kind, vertex) order.
std::vector<std::uint32_t> positions(const std::vector<Keyed>& items) {
  std::vector<std::uint32_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0U);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto& x = items[a];
    const auto& y = items[b];
    if (int c = cmp(x.value, y.value); c != 0) return c < 0;
    if (x.kind != y.kind) return x.kind < y.kind;
    return x.vertex < y.vertex;
  });
  std::vector<std::uint32_t> pos(items.size());
  for (std::uint32_t r = 0; r < idx.size(); ++r) pos[idx[r]] = r;
  return pos;
}

}  // namespace

nlohmann::json DNFPredicate::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : clauses) {
    nlohmann::json lits = nlohmann::json::array();
    for (const auto& lit : c) lits.push_back({{"g", form_to_json(lit.g)}, {"h", form_to_json(lit.h)}});
    cs.push_back(lits);
  }
  return {{"k", k}, {"l", l}, {"d", d}, {"clauses", cs}, {"symmetric", symmetric}};
}

DNFPredicate DNFPredicate::from_json(const nlohmann::json& j) {
  DNFPredicate p;
  p.k = j.at("k").get<std::size_t>();
  p.l = j.at("l").get<std::size_t>();
  p.symmetric = j.value("symmetric", true);
  for (const auto& c : j.at("clauses")) {
    std::vector<Literal> lits;
    for (const auto& lit : c) lits.push_back({form_from_json(lit.at("g")), form_from_json(lit.at("h"))});
    p.clauses.push_back(std::move(lits));
  }
  if (j.contains("d")) p.d = j.at("d").get<std::size_t>();
  else if (!p.clauses.empty() && !p.clauses[0].empty()) p.d = p.clauses[0][0].g.dim();
  p.validate();
  return p;
}

std::pair<LinearForm, LinearForm> split_linear(const Polynomial& f, std::size_t d_left, std::size_t d_right) {
  if (f.nvars() != d_left + d_right) throw std::invalid_argument("polynomial arity differs from d_left + d_right");
  LinearForm g, h;
  g.coef.assign(d_left + 1, 0);
  h.coef.assign(d_right + 1, 0);
  for (const auto& t : f.terms()) {
    unsigned total = 0;
    std::size_t var = 0;
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      total += t.exps[i];
      if (t.exps[i]) var = i;
    }
    if (total == 0) g.coef[0] += t.coef;
    else if (total > 1) throw NotSemilinearError("monomial of degree above one (cross or power term)");
    else if (var < d_left) g.coef[var + 1] += t.coef;
    else h.coef[var - d_left + 1] += t.coef;
  }
  return {g, h};
}

namespace detail {
namespace {

unsigned rank_width(std::size_t n) { return ceil_log2(2 * n); }

class DominanceCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    bool side = false;
    std::vector<std::uint32_t> ranks;
  };
  explicit DominanceCodec(const SchemeDescriptor& d) : n_(d.n), l_(d.dims) {}
  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    p.side = r.read_bit();
    for (unsigned j = 0; j < l_; ++j) p.ranks.push_back(static_cast<std::uint32_t>(r.read_uint(rank_width(n_))));
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const {
    if (a.side == b.side) return false;
    const Parsed& lo = a.side ? b : a;
    const Parsed& hi = a.side ? a : b;
    for (unsigned j = 0; j < l_; ++j)
      if (!(lo.ranks[j] < hi.ranks[j])) return false;
    return true;
  }

 private:
  std::size_t n_;
  unsigned l_;
};

class SemilinearCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    std::vector<std::uint32_t> g;  // k * l
    std::vector<std::uint32_t> h;
  };
  explicit SemilinearCodec(const SchemeDescriptor& d) : n_(d.n), k_(d.clauses), l_(d.dims), symmetric_(d.symmetric) {}
  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    const unsigned w = rank_width(n_);
    for (unsigned i = 0; i < k_; ++i) {
      for (unsigned j = 0; j < l_; ++j) p.g.push_back(static_cast<std::uint32_t>(r.read_uint(w)));
      for (unsigned j = 0; j < l_; ++j) p.h.push_back(static_cast<std::uint32_t>(r.read_uint(w)));
    }
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const {
    return holds(a, b) || (!symmetric_ && holds(b, a));
  }

 private:
  bool holds(const Parsed& x, const Parsed& y) const {
    for (unsigned i = 0; i < k_; ++i) {
      bool all = true;
      for (unsigned j = 0; j < l_ && all; ++j) all = x.g[i * l_ + j] < y.h[i * l_ + j];
      if (all) return true;
    }
    return false;
  }
  std::size_t n_;
  unsigned k_, l_;
  bool symmetric_;
};

class BoxicityCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    std::vector<std::uint32_t> lo, hi;
  };
  explicit BoxicityCodec(const SchemeDescriptor& d) : n_(d.n), d_(d.dims) {}
  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    const unsigned w = rank_width(n_);
    for (unsigned j = 0; j < d_; ++j) {
      p.lo.push_back(static_cast<std::uint32_t>(r.read_uint(w)));
      p.hi.push_back(static_cast<std::uint32_t>(r.read_uint(w)));
    }
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const {
    for (unsigned j = 0; j < d_; ++j)
      if (!(a.lo[j] < b.hi[j] && b.lo[j] < a.hi[j])) return false;
    return true;
  }

 private:
  std::size_t n_;
  unsigned d_;
};

}  // namespace
}  // namespace detail

LabelSet dominance_labels(std::span<const std::vector<Rational>> left,
                          std::span<const std::vector<Rational>> right, std::size_t l) {
  const std::size_t nl = left.size(), n = left.size() + right.size();
  for (const auto* side : {&left, &right})
    for (const auto& p : *side)
      if (p.size() != l) throw std::invalid_argument("dominance point has wrong dimension");
  std::vector<std::vector<std::uint32_t>> rank(l);
  for (std::size_t j = 0; j < l; ++j) {
    std::vector<Keyed> items;
    items.reserve(n);
    // A left value ranks after an equal right value, so ties compare false.
    for (std::size_t v = 0; v < nl; ++v) items.push_back({left[v][j], 1, static_cast<std::uint32_t>(v)});
    for (std::size_t v = 0; v < right.size(); ++v)
      items.push_back({right[v][j], 0, static_cast<std::uint32_t>(nl + v)});
    rank[j] = positions(items);
  }
  LabelSet out;
  out.descriptor.scheme = Scheme::dominance;
  out.descriptor.n = n;
  out.descriptor.dims = static_cast<unsigned>(l);
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n), w = detail::rank_width(n);
  for (std::size_t v = 0; v < n; ++v) {
    out.labels[v].append_uint(v, idw);
    out.labels[v].push_back(v >= nl);
    for (std::size_t j = 0; j < l; ++j) out.labels[v].append_uint(rank[j][v], w);
  }
  return out;
}

LabelSet semilinear_labels(std::span<const std::vector<Rational>> vertices, const DNFPredicate& dnf) {
  dnf.validate();
  const std::size_t n = vertices.size();
  for (const auto& v : vertices)
    if (v.size() != dnf.d) throw std::invalid_argument("vertex dimension differs from the DNF");
  // g_rank[i][j][v] and h_rank[i][j][v]: positions among the 2n values
  // g_ij(*) and -h_ij(*); at equal values -h comes first so g < -h is false.
  std::vector<std::vector<std::uint32_t>> g_rank, h_rank;
  for (const auto& clause : dnf.clauses) {
    for (const auto& lit : clause) {
      std::vector<Keyed> items;
      items.reserve(2 * n);
      for (std::size_t v = 0; v < n; ++v) items.push_back({lit.g(vertices[v]), 1, static_cast<std::uint32_t>(v)});
      for (std::size_t v = 0; v < n; ++v) items.push_back({-lit.h(vertices[v]), 0, static_cast<std::uint32_t>(v)});
      auto pos = positions(items);
      g_rank.emplace_back(pos.begin(), pos.begin() + n);
      h_rank.emplace_back(pos.begin() + n, pos.end());
    }
  }
  LabelSet out;
  out.descriptor.scheme = Scheme::semilinear;
  out.descriptor.n = n;
  out.descriptor.clauses = static_cast<unsigned>(dnf.k);
  out.descriptor.dims = static_cast<unsigned>(dnf.l);
  out.descriptor.symmetric = dnf.symmetric;
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n), w = detail::rank_width(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& lab = out.labels[v];
    lab.append_uint(v, idw);
    for (std::size_t i = 0; i < dnf.k; ++i) {
      for (std::size_t j = 0; j < dnf.l; ++j) lab.append_uint(g_rank[i * dnf.l + j][v], w);
      for (std::size_t j = 0; j < dnf.l; ++j) lab.append_uint(h_rank[i * dnf.l + j][v], w);
    }
  }
  return out;
}

bool boxes_intersect(const Box& a, const Box& b) {
  for (std::size_t j = 0; j < a.lo.size(); ++j)
    if (a.hi[j] < b.lo[j] || b.hi[j] < a.lo[j]) return false;
  return true;
}

LabelSet boxicity_labels(std::span<const Box> boxes) {
  const std::size_t n = boxes.size();
  const std::size_t d = n ? boxes[0].lo.size() : 0;
  for (const auto& b : boxes) {
    if (b.lo.size() != d || b.hi.size() != d) throw std::invalid_argument("boxes differ in dimension");
    for (std::size_t j = 0; j < d; ++j)
      if (!(b.lo[j] < b.hi[j])) throw std::invalid_argument("degenerate box");
  }
  std::vector<std::vector<std::uint32_t>> lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Keyed> items;
    items.reserve(2 * n);
    for (std::size_t v = 0; v < n; ++v) items.push_back({boxes[v].lo[j], 0, static_cast<std::uint32_t>(v)});
    for (std::size_t v = 0; v < n; ++v) items.push_back({boxes[v].hi[j], 1, static_cast<std::uint32_t>(v)});
    auto pos = positions(items);
    lo[j].assign(pos.begin(), pos.begin() + n);
    hi[j].assign(pos.begin() + n, pos.end());
  }
  LabelSet out;
  out.descriptor.scheme = Scheme::boxicity;
  out.descriptor.n = n;
  out.descriptor.dims = static_cast<unsigned>(d);
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n), w = detail::rank_width(n);
  for (std::size_t v = 0; v < n; ++v) {
    out.labels[v].append_uint(v, idw);
    for (std::size_t j = 0; j < d; ++j) {
      out.labels[v].append_uint(lo[j][v], w);
      out.labels[v].append_uint(hi[j][v], w);
    }
  }
  return out;
}

DNFPredicate interval_dnf() {
  // [a, b] and [c, d] overlap (open) iff a < d and c < b.
  DNFPredicate p;
  p.k = 1;
  p.l = 2;
  p.d = 2;
  p.clauses = {{less(2, 1, 2), greater(2, 2, 1)}};
  return p;
}

DNFPredicate permutation_dnf() {
  DNFPredicate p;
  p.k = 2;
  p.l = 2;
  p.d = 2;
  p.clauses = {{less(2, 1, 1), greater(2, 2, 2)}, {greater(2, 1, 1), less(2, 2, 2)}};
  return p;
}

DNFPredicate circle_dnf() {
  // Chords (s, t) and (s', t') cross iff s < s' < t < t' or s' < s < t' < t.
  DNFPredicate p;
  p.k = 2;
  p.l = 3;
  p.d = 2;
  p.clauses = {{less(2, 1, 1), greater(2, 2, 1), less(2, 2, 2)},
               {greater(2, 1, 1), less(2, 1, 2), greater(2, 2, 2)}};
  return p;
}

DNFPredicate boxicity_dnf(std::size_t d) {
  DNFPredicate p;
  p.k = 1;
  p.l = 2 * d;
  p.d = 2 * d;
  std::vector<Literal> clause;
  for (std::size_t j = 0; j < d; ++j) {
    clause.push_back(less(2 * d, 2 * j + 1, 2 * j + 2));     // lo_u < hi_v
    clause.push_back(greater(2 * d, 2 * j + 2, 2 * j + 1));  // lo_v < hi_u
  }
  p.clauses = {clause};
  return p;
}

DNFPredicate dnf_preset(const std::string& name, std::size_t d) {
  if (name == "interval") return interval_dnf();
  if (name == "permutation") return permutation_dnf();
  if (name == "circle") return circle_dnf();
  if (name == "boxicity") return boxicity_dnf(d);
  throw std::invalid_argument("unknown DNF preset: " + name);
}

std::unique_ptr<LabelDecoder> make_dominance_decoder(const SchemeDescriptor& d, std::span<const BitString> labels) {
  return detail::make_codec_decoder<detail::DominanceCodec>(d, labels);
}
std::unique_ptr<LabelDecoder> make_semilinear_decoder(const SchemeDescriptor& d, std::span<const BitString> labels) {
  return detail::make_codec_decoder<detail::SemilinearCodec>(d, labels);
}
std::unique_ptr<LabelDecoder> make_boxicity_decoder(const SchemeDescriptor& d, std::span<const BitString> labels) {
  return detail::make_codec_decoder<detail::BoxicityCodec>(d, labels);
}

}  // namespace geolabel
