#include "geolabel/visibility.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "codec.hpp"

namespace geolabel {

namespace {

Rational y_at(const Segment& s, const Rational& x) {
  return s.a.y + (x - s.a.x) * (s.b.y - s.a.y) / (s.b.x - s.a.x);
}

std::string pair_text(std::size_t a, std::size_t b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// Balanced chord

std::pair<std::size_t, std::size_t> balanced_chord(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 4) throw std::invalid_argument("balanced_chord needs at least four vertices");
  if (!is_simple_polygon(poly)) throw std::invalid_argument("polygon is not simple");
  const std::size_t bound = (2 * n + 2) / 3 + 1;
  auto parts = [n](std::size_t a, std::size_t b) {
    std::size_t one = b - a + 1;
    return std::max(one, n - (b - a) + 1);
  };

  // Ear clipping; every clipped ear contributes the diagonal (prev, next).
  const int turn = sgn(twice_signed_area(poly));
  std::vector<std::size_t> ring(n);
  std::iota(ring.begin(), ring.end(), std::size_t{0});
  std::pair<std::size_t, std::size_t> best{0, 0};
  std::size_t best_worst = std::numeric_limits<std::size_t>::max();
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    bool clipped = false;
    for (std::size_t k = 0; k < m && !clipped; ++k) {
      std::size_t p = ring[(k + m - 1) % m], c = ring[k], q = ring[(k + 1) % m];
      if (orient(poly[p], poly[c], poly[q]) != turn) continue;
      bool empty = true;
      for (std::size_t r : ring) {
        if (r == p || r == c || r == q) continue;
        if (orient(poly[p], poly[c], poly[r]) * turn >= 0 && orient(poly[c], poly[q], poly[r]) * turn >= 0 &&
            orient(poly[q], poly[p], poly[r]) * turn >= 0) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      std::size_t a = std::min(p, q), b = std::max(p, q);
      if (b - a >= 2 && !(a == 0 && b == n - 1)) {
        std::size_t worst = parts(a, b);
        if (worst < best_worst) {
          best_worst = worst;
          best = {a, b};
        }
      }
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(k));
      clipped = true;
    }
    if (!clipped) throw std::invalid_argument("ear clipping stalled; polygon is not simple");
  }
  if (best_worst <= bound) return best;

  // Fallback: scan every diagonal.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 2; b < n; ++b) {
      if (a == 0 && b == n - 1) continue;
      std::size_t worst = parts(a, b);
      if (worst >= best_worst || !polygon_visible(poly, a, b)) continue;
      best_worst = worst;
      best = {a, b};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Hereditary segment tree

void BichromaticSegments::validate() const {
  std::vector<Rational> xs;
  for (std::size_t id = 0; id < size(); ++id) {
    const auto& s = at(id);
    if (!(s.a.x < s.b.x)) throw std::invalid_argument("segment " + std::to_string(id) + " is not left-to-right");
    xs.push_back(s.a.x);
    xs.push_back(s.b.x);
  }
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw std::invalid_argument("segment endpoints share an x coordinate");
  for (const auto* side : {&red, &blue})
    for (std::size_t i = 0; i < side->size(); ++i)
      for (std::size_t j = i + 1; j < side->size(); ++j)
        if (segments_intersect((*side)[i].a, (*side)[i].b, (*side)[j].a, (*side)[j].b))
          throw std::invalid_argument("two segments of the same colour intersect");
}

namespace {

struct HSTBuilder {
  const BichromaticSegments& segs;
  HereditarySegmentTree tree;
  std::vector<Rational> xs;                 // sorted endpoint abscissae
  std::vector<std::uint32_t> first, last;   // endpoint indices per segment

  explicit HSTBuilder(const BichromaticSegments& s) : segs(s) {}

  std::int32_t build(std::uint32_t lo, std::uint32_t hi) {
    auto id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
      auto& node = tree.nodes.back();
      node.lo = lo;
      node.hi = hi;
      if (lo > 0) node.left_wall = xs[lo - 1];
      if (hi < xs.size()) node.right_wall = xs[hi];
    }
    if (hi > lo) {
      std::uint32_t mid = lo + (hi - lo) / 2;
      std::int32_t c0 = build(lo, mid);
      std::int32_t c1 = build(mid + 1, hi);
      tree.nodes[id].child[0] = c0;
      tree.nodes[id].child[1] = c1;
    }
    return id;
  }

  void insert(std::int32_t id, std::uint32_t s, int colour) {
    auto& node = tree.nodes[id];
    auto inside = [&](std::uint32_t e) { return node.lo <= e && e < node.hi; };
    if (inside(first[s]) || inside(last[s])) {
      node.short_ids[colour].push_back(s);
      for (auto c : node.child)
        if (c >= 0) insert(c, s, colour);
    } else if (node.lo >= first[s] + 1 && node.hi <= last[s]) {
      node.long_ids[colour].push_back(s);
    }
  }
};

/// Number of segments in `longs` (sorted bottom to top) strictly below p.
std::uint32_t rho(const BichromaticSegments& segs, const std::vector<std::uint32_t>& longs, const Point2& p) {
  std::size_t lo = 0, hi = longs.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    int c = cmp(y_at(segs.at(longs[mid]), p.x), p.y);
    if (c == 0) throw std::invalid_argument("segment endpoint lies on a segment of the other colour");
    if (c < 0) lo = mid + 1;
    else hi = mid;
  }
  return static_cast<std::uint32_t>(lo);
}

std::pair<Point2, Point2> clipped(const Segment& s, const HSTNode& node) {
  Rational x0 = node.left_wall && *node.left_wall > s.a.x ? *node.left_wall : s.a.x;
  Rational x1 = node.right_wall && *node.right_wall < s.b.x ? *node.right_wall : s.b.x;
  return {{x0, y_at(s, x0)}, {x1, y_at(s, x1)}};
}

bool straddles(std::uint32_t rank, std::uint32_t a, std::uint32_t b) {
  return std::min(a, b) <= rank && rank < std::max(a, b);
}

}  // namespace

HereditarySegmentTree build_hst(const BichromaticSegments& segs) {
  segs.validate();
  const std::size_t n = segs.size();
  HSTBuilder b(segs);
  std::vector<std::pair<Rational, std::uint32_t>> ends;  // (x, 2 * segment + is_right)
  for (std::uint32_t s = 0; s < n; ++s) {
    ends.emplace_back(segs.at(s).a.x, 2 * s);
    ends.emplace_back(segs.at(s).b.x, 2 * s + 1);
  }
  std::sort(ends.begin(), ends.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
  b.first.resize(n);
  b.last.resize(n);
  for (std::uint32_t k = 0; k < ends.size(); ++k) {
    b.xs.push_back(ends[k].first);
    auto tag = ends[k].second;
    (tag & 1 ? b.last : b.first)[tag >> 1] = k;
  }
  b.build(0, static_cast<std::uint32_t>(ends.size()));
  for (std::uint32_t s = 0; s < n; ++s) b.insert(0, s, segs.is_red(s) ? 0 : 1);

  auto& tree = b.tree;
  tree.entries.assign(n, {});
  for (std::uint32_t id = 0; id < tree.nodes.size(); ++id) {
    auto& node = tree.nodes[id];
    for (int c = 0; c < 2; ++c) {
      auto& longs = node.long_ids[c];
      if (longs.empty()) continue;
      if (!node.left_wall || !node.right_wall) throw std::logic_error("long segment on an unbounded slab");
      Rational mid = (*node.left_wall + *node.right_wall) / 2;
      std::vector<std::pair<Rational, std::uint32_t>> keyed;
      for (auto s : longs) keyed.emplace_back(y_at(segs.at(s), mid), s);
      std::sort(keyed.begin(), keyed.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
      for (std::size_t k = 0; k + 1 < keyed.size(); ++k)
        if (keyed[k].first == keyed[k + 1].first) throw std::invalid_argument("same-colour segments meet");
      for (std::size_t k = 0; k < keyed.size(); ++k) longs[k] = keyed[k].second;
    }
    for (int c = 0; c < 2; ++c) {
      const auto& other = node.long_ids[1 - c];
      for (std::uint32_t r = 0; r < node.long_ids[c].size(); ++r) {
        std::uint32_t s = node.long_ids[c][r];
        auto [p, q] = clipped(segs.at(s), node);
        tree.entries[s].push_back({id, true, r, rho(segs, other, p), rho(segs, other, q)});
      }
      for (std::uint32_t s : node.short_ids[c]) {
        auto [p, q] = clipped(segs.at(s), node);
        tree.entries[s].push_back({id, false, 0, rho(segs, other, p), rho(segs, other, q)});
      }
    }
  }
  for (auto& list : tree.entries)
    std::sort(list.begin(), list.end(), [](const HSTEntry& x, const HSTEntry& y) { return x.node < y.node; });
  return tree;
}

SlabRanks slab_ranks(const HereditarySegmentTree& tree, const BichromaticSegments& segs, std::size_t node,
                     bool long_is_red) {
  const auto& nd = tree.nodes.at(node);
  const int lc = long_is_red ? 0 : 1;
  SlabRanks out;
  for (std::uint32_t r = 0; r < nd.long_ids[lc].size(); ++r) out.long_rank.emplace_back(nd.long_ids[lc][r], r);
  for (std::uint32_t s : nd.short_ids[1 - lc]) {
    auto [p, q] = clipped(segs.at(s), nd);
    out.short_rho.push_back({s, {rho(segs, nd.long_ids[lc], p), rho(segs, nd.long_ids[lc], q)}});
  }
  return out;
}

namespace {

/// Which kinds of common node decode the pair (u, v) as crossing.
std::pair<bool, bool> witnesses(const std::vector<HSTEntry>& u, const std::vector<HSTEntry>& v) {
  bool one_long = false, both_long = false;
  auto i = u.begin(), j = v.begin();
  while (i != u.end() && j != v.end()) {
    if (i->node < j->node) {
      ++i;
    } else if (j->node < i->node) {
      ++j;
    } else {
      if (i->is_long && !j->is_long) one_long |= straddles(i->rank, j->rho_lo, j->rho_hi);
      else if (!i->is_long && j->is_long) one_long |= straddles(j->rank, i->rho_lo, i->rho_hi);
      else if (i->is_long && j->is_long) both_long |= straddles(j->rank, i->rho_lo, i->rho_hi);
      ++i;
      ++j;
    }
  }
  return {one_long, both_long};
}

}  // namespace

HSTDiagnostics hst_diagnostics(const HereditarySegmentTree& tree, const BichromaticSegments& segs) {
  HSTDiagnostics d;
  d.node_bound = 4 * ceil_log2(2 * segs.size());
  for (const auto& e : tree.entries) d.max_nodes_per_segment = std::max(d.max_nodes_per_segment, e.size());
  for (std::size_t r = 0; r < segs.red.size(); ++r) {
    for (std::size_t b = 0; b < segs.blue.size(); ++b) {
      const auto& x = segs.red[r];
      const auto& y = segs.blue[b];
      if (!segments_intersect(x.a, x.b, y.a, y.b)) continue;
      ++d.intersecting_pairs;
      auto [one, both] = witnesses(tree.entries[r], tree.entries[segs.red.size() + b]);
      if (one) ++d.witnessed_one_long;
      else if (both) ++d.witnessed_both_long;
      else ++d.unwitnessed;
    }
  }
  return d;
}

HSTWidths hst_widths(std::size_t segments) {
  return {ceil_log2(4 * segments + 1), ceil_log2(segments + 1)};
}

namespace detail {
namespace {

void write_hst_body(BitString& out, bool blue, const std::vector<HSTEntry>& entries, HSTWidths w) {
  out.push_back(blue);
  out.append_gamma(entries.size() + 1);
  for (const auto& e : entries) {
    out.append_uint(e.node, w.node);
    out.push_back(e.is_long);
    if (e.is_long) out.append_uint(e.rank, w.rank);
    out.append_uint(e.rho_lo, w.rank);
    out.append_uint(e.rho_hi, w.rank);
  }
}

struct HSTBody {
  bool blue = false;
  std::vector<HSTEntry> entries;
};

HSTBody read_hst_body(BitReader& r, HSTWidths w, std::uint64_t node_limit) {
  HSTBody b;
  b.blue = r.read_bit();
  std::uint64_t count = r.read_gamma() - 1;
  if (count > node_limit) throw DecodeError("more tree entries than tree nodes");
  for (std::uint64_t k = 0; k < count; ++k) {
    HSTEntry e;
    e.node = static_cast<std::uint32_t>(r.read_uint(w.node));
    if (e.node >= node_limit) throw DecodeError("tree node id out of range");
    if (!b.entries.empty() && b.entries.back().node >= e.node) throw DecodeError("tree entries not ascending");
    e.is_long = r.read_bit();
    if (e.is_long) e.rank = static_cast<std::uint32_t>(r.read_uint(w.rank));
    e.rho_lo = static_cast<std::uint32_t>(r.read_uint(w.rank));
    e.rho_hi = static_cast<std::uint32_t>(r.read_uint(w.rank));
    b.entries.push_back(e);
  }
  return b;
}

bool hst_adjacent(const HSTBody& a, const HSTBody& b) {
  if (a.blue == b.blue) return false;
  auto [one, both] = witnesses(a.entries, b.entries);
  return one || both;
}

class HSTCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    HSTBody body;
  };
  explicit HSTCodec(const SchemeDescriptor& d) : n_(d.n), w_(hst_widths(d.n)) {}
  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    p.body = read_hst_body(r, w_, 4 * n_ + 1);
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const { return hst_adjacent(a.body, b.body); }

 private:
  std::size_t n_;
  HSTWidths w_;
};

}  // namespace
}  // namespace detail

LabelSet hst_labels(const BichromaticSegments& segs) {
  auto tree = build_hst(segs);
  const std::size_t n = segs.size();
  const std::size_t bound = 4 * ceil_log2(2 * n);
  for (std::size_t s = 0; s < n; ++s)
    if (tree.entries[s].size() > bound)
      throw std::logic_error("segment " + std::to_string(s) + " stored at more than 4 ceil(log2 2n) nodes");
  LabelSet out;
  out.descriptor.scheme = Scheme::hst;
  out.descriptor.n = n;
  out.descriptor.nodes = tree.nodes.size();
  out.descriptor.width = hst_widths(n).rank;
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n);
  for (std::size_t s = 0; s < n; ++s) {
    out.labels[s].append_uint(s, idw);
    detail::write_hst_body(out.labels[s], !segs.is_red(s), tree.entries[s], hst_widths(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Capped graphs

std::optional<CappedWitness> capped_check(const AdjacencyMatrix& m, std::span<const VertexId> order,
                                          std::uint64_t seed) {
  const std::size_t n = order.size();
  if (n != m.n()) throw std::invalid_argument("order does not cover the matrix");
  auto e = [&](std::size_t a, std::size_t b) { return m(order[a], order[b]); };
  if (n <= 128) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = i + 3; l < n; ++l) {
        if (e(i, l)) continue;
        std::size_t j = i + 1;
        while (j < l && !e(j, l)) ++j;
        std::size_t k = l - 1;
        while (k > i && !e(i, k)) --k;
        if (j < k) return CappedWitness{order[i], order[j], order[k], order[l]};
      }
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int t = 0; t < 1'000'000; ++t) {
    std::size_t q[4];
    for (auto& x : q) x = pick(rng);
    std::sort(q, q + 4);
    if (q[0] == q[1] || q[1] == q[2] || q[2] == q[3]) continue;
    if (e(q[0], q[2]) && e(q[1], q[3]) && !e(q[0], q[3]))
      return CappedWitness{order[q[0]], order[q[1]], order[q[2]], order[q[3]]};
  }
  return std::nullopt;
}

CrossRealization capped_cross_realization(const AdjacencyMatrix& m, std::span<const VertexId> order,
                                          std::size_t lo, std::size_t split, std::size_t hi) {
  if (!(lo <= split && split <= hi && hi <= order.size())) throw std::invalid_argument("bad split range");
  auto e = [&](std::size_t a, std::size_t b) { return m(order[a], order[b]); };
  CrossRealization r;
  r.min_n.assign(split - lo, static_cast<std::int64_t>(hi));
  r.max_n.assign(hi - split, static_cast<std::int64_t>(lo) - 1);
  for (std::size_t i = lo; i < split; ++i) {
    for (std::size_t j = split; j < hi; ++j) {
      if (!e(i, j)) continue;
      r.min_n[i - lo] = std::min<std::int64_t>(r.min_n[i - lo], j);
      r.max_n[j - split] = std::max<std::int64_t>(r.max_n[j - split], i);
    }
  }
  for (std::size_t i = lo; i < split; ++i) {
    for (std::size_t j = split; j < hi; ++j) {
      bool formula = r.min_n[i - lo] <= static_cast<std::int64_t>(j) && static_cast<std::int64_t>(i) <= r.max_n[j - split];
      if (formula != e(i, j))
        throw RealizationError("cross pair at positions " + pair_text(i, j) +
                               (formula ? " decodes as an edge but is not one"
                                        : " is an edge the realization misses") +
                               "; the graph is not capped under this order");
    }
  }
  return r;
}

CrossRealization capped_cross_realization(const AdjacencyMatrix& m, std::span<const VertexId> order,
                                          std::size_t split) {
  return capped_cross_realization(m, order, 0, split, order.size());
}

AdjacencyMatrix capped_closure(const AdjacencyMatrix& m, std::span<const VertexId> order) {
  AdjacencyMatrix out = m;
  const std::size_t n = order.size();
  auto e = [&](std::size_t a, std::size_t b) { return out(order[a], order[b]); };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = i + 3; l < n; ++l) {
        if (e(i, l)) continue;
        std::size_t j = i + 1;
        while (j < l && !e(j, l)) ++j;
        std::size_t k = l - 1;
        while (k > i && !e(i, k)) --k;
        if (j < k) {
          out.set(order[i], order[l]);
          changed = true;
        }
      }
    }
  }
  return out;
}

namespace {

void capped_levels(const AdjacencyMatrix& m, std::span<const VertexId> order, std::size_t lo, std::size_t hi,
                   unsigned w, std::vector<BitString>& labels) {
  if (hi - lo < 2) return;
  std::size_t split = lo + (hi - lo) / 2;
  auto r = capped_cross_realization(m, order, lo, split, hi);
  for (std::size_t i = lo; i < split; ++i) {
    labels[order[i]].push_back(false);
    labels[order[i]].append_uint(static_cast<std::uint64_t>(r.min_n[i - lo]), w);
  }
  for (std::size_t j = split; j < hi; ++j) {
    labels[order[j]].push_back(true);
    labels[order[j]].append_uint(static_cast<std::uint64_t>(r.max_n[j - split] + 1), w);
  }
  capped_levels(m, order, lo, split, w, labels);
  capped_levels(m, order, split, hi, w, labels);
}

}  // namespace

LabelSet capped_labels(const AdjacencyMatrix& m, std::span<const VertexId> order) {
  const std::size_t n = m.n();
  if (order.size() != n) throw std::invalid_argument("order does not cover the matrix");
  std::vector<std::size_t> pos(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (order[k] >= n || pos[order[k]] != n) throw std::invalid_argument("order is not a permutation");
    pos[order[k]] = k;
  }
  LabelSet out;
  out.descriptor.scheme = Scheme::capped;
  out.descriptor.n = n;
  out.descriptor.levels = ceil_log2(n);
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n);
  for (std::size_t v = 0; v < n; ++v) {
    out.labels[v].append_uint(v, idw);
    out.labels[v].append_uint(pos[v], idw);
  }
  capped_levels(m, order, 0, n, ceil_log2(n + 1), out.labels);
  return out;
}

namespace detail {
namespace {

class CappedCodec {
 public:
  struct Parsed {
    std::uint64_t id = 0;
    std::uint64_t pos = 0;
    std::vector<std::uint64_t> values;  // one per halving level
  };
  explicit CappedCodec(const SchemeDescriptor& d) : n_(d.n) {}

  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    p.pos = r.read_uint(ceil_log2(n_));
    if (p.pos >= n_) throw DecodeError("position out of range");
    const unsigned w = ceil_log2(n_ + 1);
    for (std::size_t lo = 0, hi = n_; hi - lo >= 2;) {
      std::size_t mid = lo + (hi - lo) / 2;
      bool side = p.pos >= mid;
      if (r.read_bit() != side) throw DecodeError("side bit disagrees with the position");
      std::uint64_t v = r.read_uint(w);
      if (v > n_) throw DecodeError("realization value out of range");
      p.values.push_back(v);
      (side ? lo : hi) = mid;
    }
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const {
    std::size_t level = 0;
    for (std::size_t lo = 0, hi = n_; hi - lo >= 2; ++level) {
      std::size_t mid = lo + (hi - lo) / 2;
      bool sa = a.pos >= mid, sb = b.pos >= mid;
      if (sa != sb) {
        const Parsed& l = sa ? b : a;
        const Parsed& r = sa ? a : b;
        return l.values[level] <= r.pos && l.pos < r.values[level];
      }
      (sa ? lo : hi) = mid;
    }
    return false;
  }

 private:
  std::size_t n_;
};

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// Polygon visibility labels

namespace {

AdjacencyMatrix visibility_matrix(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  AdjacencyMatrix m(n);
  if (auto ints = scaled_points(poly)) {
    std::span<const Point2T<std::int64_t>> pts(*ints);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (polygon_visible_t<std::int64_t>(pts, u, v)) m.set(u, v);
  } else {
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (polygon_visible(poly, u, v)) m.set(u, v);
  }
  return m;
}

struct PolygonBuilder {
  std::span<const Point2> poly;
  const AdjacencyMatrix& m;
  const PolygonLabelOptions& opt;
  std::vector<BitString> payload;  // per vertex: concatenated levels
  std::vector<unsigned> levels;

  void emit(const std::vector<VertexId>& l1, const std::vector<VertexId>& l2) {
    const std::size_t n = poly.size();
    if (opt.encoder == "switch_rows") {
      for (std::size_t c = 0; c < l1.size(); ++c) {
        std::vector<bool> row(l2.size());
        for (std::size_t k = 0; k < l2.size(); ++k) row[k] = m(l1[c], l2[k]);
        payload[l1[c]].push_back(false);
        write_switch_row(payload[l1[c]], c, SwitchRow::from_bits(row), n);
        ++levels[l1[c]];
      }
      for (std::size_t c = 0; c < l2.size(); ++c) {
        payload[l2[c]].push_back(true);
        write_switch_row(payload[l2[c]], c, SwitchRow{}, n);
        ++levels[l2[c]];
      }
      return;
    }
    if (!opt.duals) throw std::invalid_argument("hst cross encoder needs a dual segment provider");
    BichromaticSegments duals = opt.duals(l1, l2);
    if (duals.red.size() != l1.size() || duals.blue.size() != l2.size())
      throw std::invalid_argument("dual segment counts do not match the split");
    auto tree = build_hst(duals);
    const HSTWidths w = hst_widths(n);
    std::vector<detail::HSTBody> bodies(duals.size());
    for (std::size_t s = 0; s < duals.size(); ++s) bodies[s] = {!duals.is_red(s), tree.entries[s]};
    for (std::size_t a = 0; a < l1.size(); ++a)
      for (std::size_t b = 0; b < l2.size(); ++b)
        if (detail::hst_adjacent(bodies[a], bodies[l1.size() + b]) != m(l1[a], l2[b]))
          throw std::invalid_argument("dual segments disagree with cross visibility at " + pair_text(l1[a], l2[b]));
    for (std::size_t s = 0; s < duals.size(); ++s) {
      VertexId v = s < l1.size() ? l1[s] : l2[s - l1.size()];
      payload[v].push_back(s >= l1.size());
      detail::write_hst_body(payload[v], bodies[s].blue, bodies[s].entries, w);
      ++levels[v];
    }
  }

  void recurse(const std::vector<VertexId>& q, const std::vector<VertexId>& l) {
    if (l.size() <= 1) return;
    if (q.size() < 4) {
      std::vector<VertexId> l1{l[0]}, l2(l.begin() + 1, l.end());
      emit(l1, l2);
      recurse(q, l2);
      return;
    }
    std::vector<Point2> sub;
    for (auto v : q) sub.push_back(poly[v]);
    auto [a, b] = balanced_chord(sub);
    std::vector<VertexId> q1(q.begin() + a, q.begin() + b + 1);
    std::vector<VertexId> q2(q.begin() + b, q.end());
    q2.insert(q2.end(), q.begin(), q.begin() + a + 1);
    const bool ends_to_first = q1.size() <= q2.size();
    std::vector<VertexId> l1, l2;
    for (auto v : l) {
      if (v == q[a] || v == q[b]) (ends_to_first ? l1 : l2).push_back(v);
      else if (std::find(q1.begin(), q1.end(), v) != q1.end()) l1.push_back(v);
      else l2.push_back(v);
    }
    std::sort(l1.begin(), l1.end());
    std::sort(l2.begin(), l2.end());
    if (l1.empty()) return recurse(q2, l2);
    if (l2.empty()) return recurse(q1, l1);
    emit(l1, l2);
    recurse(q1, l1);
    recurse(q2, l2);
  }
};

}  // namespace

LabelSet polygon_labels(std::span<const Point2> poly, const PolygonLabelOptions& options) {
  const std::size_t n = poly.size();
  if (n < 3 || !is_simple_polygon(poly)) throw std::invalid_argument("polygon is not simple");
  if (options.encoder != "switch_rows" && options.encoder != "hst_with_supplied_duals")
    throw std::invalid_argument("unknown cross encoder: " + options.encoder);
  AdjacencyMatrix m = visibility_matrix(poly);
  PolygonBuilder b{poly, m, options, std::vector<BitString>(n), std::vector<unsigned>(n, 0)};
  std::vector<VertexId> all(n);
  std::iota(all.begin(), all.end(), VertexId{0});
  b.recurse(all, all);

  LabelSet out;
  out.descriptor.scheme = Scheme::polygon;
  out.descriptor.n = n;
  out.descriptor.encoder = options.encoder;
  out.descriptor.levels = *std::max_element(b.levels.begin(), b.levels.end());
  out.labels.resize(n);
  const unsigned idw = ceil_log2(n);
  for (std::size_t v = 0; v < n; ++v) {
    out.labels[v].append_uint(v, idw);
    out.labels[v].append_gamma(b.levels[v] + 1);
    out.labels[v].append(b.payload[v]);
  }
  return out;
}

namespace detail {
namespace {

class PolygonCodec {
 public:
  struct Level {
    bool side = false;
    std::uint64_t column = 0;
    SwitchRow row;
    HSTBody body;
  };
  struct Parsed {
    std::uint64_t id = 0;
    std::vector<Level> levels;
  };

  explicit PolygonCodec(const SchemeDescriptor& d) : n_(d.n), hst_(d.encoder == "hst_with_supplied_duals") {}

  Parsed parse(BitReader& r) const {
    Parsed p;
    p.id = read_id(r, n_);
    std::uint64_t count = r.read_gamma() - 1;
    if (count > n_) throw DecodeError("more split levels than vertices");
    for (std::uint64_t k = 0; k < count; ++k) {
      Level lv;
      lv.side = r.read_bit();
      if (hst_) {
        lv.body = read_hst_body(r, hst_widths(n_), 4 * n_ + 1);
        if (lv.body.blue != lv.side) throw DecodeError("colour bit disagrees with the side bit");
      } else {
        lv.row = read_switch_row(r, lv.column, n_);
      }
      p.levels.push_back(std::move(lv));
    }
    return p;
  }
  std::uint64_t id(const Parsed& p) const { return p.id; }
  bool adjacent(const Parsed& a, const Parsed& b) const {
    const std::size_t depth = std::min(a.levels.size(), b.levels.size());
    for (std::size_t k = 0; k < depth; ++k) {
      const Level& x = a.levels[k];
      const Level& y = b.levels[k];
      if (x.side == y.side) continue;
      if (hst_) return hst_adjacent(x.body, y.body);
      const Level& left = x.side ? y : x;
      const Level& right = x.side ? x : y;
      return left.row.bit_at(right.column);
    }
    return false;
  }

 private:
  std::size_t n_;
  bool hst_;
};

}  // namespace
}  // namespace detail

std::unique_ptr<LabelDecoder> make_hst_decoder(const SchemeDescriptor& d, std::span<const BitString> labels) {
  return detail::make_codec_decoder<detail::HSTCodec>(d, labels);
}
std::unique_ptr<LabelDecoder> make_capped_decoder(const SchemeDescriptor& d, std::span<const BitString> labels) {
  return detail::make_codec_decoder<detail::CappedCodec>(d, labels);
}
std::unique_ptr<LabelDecoder> make_polygon_decoder(const SchemeDescriptor& d, std::span<const BitString> labels) {
  return detail::make_codec_decoder<detail::PolygonCodec>(d, labels);
}

}  // namespace geolabel
