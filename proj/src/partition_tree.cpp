#include "geolabel/partition_tree.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <type_traits>
#include <unordered_map>

#include "geolabel/labeling.hpp"

namespace geolabel {

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::disjoint: return "disjoint";
    case Relation::crosses: return "crosses";
    case Relation::contains: return "contains";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Geometry of cells

template <class T>
Relation classify(const PlanarRange<T>& q, const CellBox<T>& box) {
  if (q.a > T(0)) throw ConfigurationError("range is the outside of a disk");
  const Point2T<T> corners[4] = {box.lo, {box.hi.x, box.lo.y}, {box.lo.x, box.hi.y}, box.hi};
  bool all_in = true, any_in = false;
  for (const auto& c : corners) {
    bool in = q.at(c) >= T(0);
    all_in = all_in && in;
    any_in = any_in || in;
  }
  // f is concave, so its minimum over the box sits at a corner.
  if (all_in) return Relation::contains;
  if (any_in) return Relation::crosses;
  if (q.a == T(0)) return Relation::disjoint;

  // Maximum of the separable concave parts, scaled by 4A where A = -a.
  const T A = -q.a;
  const T two_a = A + A;
  const T four_a = two_a + two_a;
  auto part = [&](const T& b, const T& l, const T& h) -> T {
    if (two_a * l <= b && b <= two_a * h) return b * b;
    const T& z = b < two_a * l ? l : h;
    return four_a * (b * z - A * z * z);
  };
  T peak = part(q.b, box.lo.x, box.hi.x) + part(q.c, box.lo.y, box.hi.y) + four_a * q.d;
  return peak >= T(0) ? Relation::crosses : Relation::disjoint;
}

template <class T>
CellBox<T> bounding_box(std::span<const Point2T<T>> pts, std::span<const std::uint32_t> members) {
  if (members.empty()) throw std::invalid_argument("bounding box of no points");
  CellBox<T> b{pts[members[0]], pts[members[0]]};
  for (auto m : members) {
    const auto& p = pts[m];
    if (p.x < b.lo.x) b.lo.x = p.x;
    if (p.y < b.lo.y) b.lo.y = p.y;
    if (b.hi.x < p.x) b.hi.x = p.x;
    if (b.hi.y < p.y) b.hi.y = p.y;
  }
  return b;
}

namespace {

bool is_power_of_four(unsigned r) { return r >= 1 && (r & (r - 1)) == 0 && (std::countr_zero(r) % 2 == 0); }

template <class T>
const T& coord(const Point2T<T>& p, int axis) {
  return axis == 0 ? p.x : p.y;
}

}  // namespace

template <class T>
std::vector<PointCell<T>> point_partition(std::span<const Point2T<T>> pts, std::vector<std::uint32_t> members,
                                          unsigned r) {
  if (!is_power_of_four(r)) throw std::invalid_argument("point_partition: r must be a power of 4");
  if (r > members.size()) throw std::invalid_argument("point_partition: r exceeds the point count");
  std::vector<std::vector<std::uint32_t>> groups{std::move(members)};
  const int levels = std::countr_zero(r);
  for (int level = 0; level < levels; ++level) {
    const int axis = level % 2;
    std::vector<std::vector<std::uint32_t>> next;
    for (auto& g : groups) {
      std::sort(g.begin(), g.end(), [&](std::uint32_t u, std::uint32_t v) {
        const T& a = coord(pts[u], axis);
        const T& b = coord(pts[v], axis);
        return a < b || (a == b && u < v);
      });
      const std::size_t half = (g.size() + 1) / 2;
      next.emplace_back(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(half));
      if (half < g.size()) next.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(half), g.end());
    }
    groups = std::move(next);
  }
  std::vector<PointCell<T>> cells;
  for (auto& g : groups) {
    PointCell<T> c;
    c.box = bounding_box<T>(pts, g);
    c.members = std::move(g);
    cells.push_back(std::move(c));
  }
  return cells;
}

template <class T>
std::size_t axis_line_crossings(std::span<const PointCell<T>> cells, int axis, const T& value) {
  std::size_t count = 0;
  for (const auto& c : cells)
    if (!(value < coord(c.box.lo, axis)) && !(coord(c.box.hi, axis) < value)) ++count;
  return count;
}

template <class T>
std::vector<CutNode<T>> range_partition_hierarchy(std::span<const PlanarRange<T>> ranges,
                                                  std::span<const std::uint32_t> candidates,
                                                  std::span<const Point2T<T>> pts,
                                                  std::vector<std::uint32_t> members, unsigned D) {
  if (D < 2) throw std::invalid_argument("range_partition: D must be at least 2");
  if (members.empty()) return {};
  const std::size_t m = candidates.size();
  auto over = [&](std::size_t crossing) { return crossing * D > m; };

  auto make_cell = [&](std::vector<std::uint32_t> mem, std::span<const std::uint32_t> cand) {
    RangeCell<T> c;
    c.box = bounding_box<T>(pts, mem);
    c.members = std::move(mem);
    for (auto k : cand) {
      switch (classify(ranges[k], c.box)) {
        case Relation::crosses: c.crossing.push_back(k); break;
        case Relation::contains: c.containing.push_back(k); break;
        case Relation::disjoint: break;
      }
    }
    return c;
  };

  std::vector<CutNode<T>> nodes;
  nodes.push_back({-1, false, make_cell(std::move(members), candidates)});
  std::deque<std::size_t> work{0};
  while (!work.empty()) {
    const std::size_t at = work.front();
    work.pop_front();
    const RangeCell<T>& c = nodes[at].cell;
    if (!over(c.crossing.size()) || c.box.lo == c.box.hi) {
      nodes[at].leaf = true;
      continue;
    }
    const int axis = (c.box.hi.x - c.box.lo.x) < (c.box.hi.y - c.box.lo.y) ? 1 : 0;
    const T mid = midpoint(coord(c.box.lo, axis), coord(c.box.hi, axis));
    std::vector<std::uint32_t> low, high;
    for (auto k : c.members) (coord(pts[k], axis) <= mid ? low : high).push_back(k);
    auto lc = make_cell(std::move(low), c.crossing);
    auto hc = make_cell(std::move(high), nodes[at].cell.crossing);
    const auto parent = static_cast<std::int64_t>(at);
    nodes.push_back({parent, false, std::move(lc)});
    work.push_back(nodes.size() - 1);
    nodes.push_back({parent, false, std::move(hc)});
    work.push_back(nodes.size() - 1);
  }

  for (const auto& node : nodes) {
    if (!node.leaf) continue;
    std::size_t crossing = 0;
    for (auto k : candidates)
      if (classify(ranges[k], node.cell.box) == Relation::crosses) ++crossing;
    if (over(crossing) || crossing != node.cell.crossing.size())
      throw PartitionError("cell crossed by " + std::to_string(crossing) + " of " + std::to_string(m) +
                           " ranges with D = " + std::to_string(D));
  }
  return nodes;
}

template <class T>
std::vector<RangeCell<T>> range_partition(std::span<const PlanarRange<T>> ranges,
                                          std::span<const std::uint32_t> candidates,
                                          std::span<const Point2T<T>> pts, std::vector<std::uint32_t> members,
                                          unsigned D) {
  auto nodes = range_partition_hierarchy(ranges, candidates, pts, std::move(members), D);
  // Leaves inherit the containment recorded on their ancestors.
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto& up = nodes[static_cast<std::size_t>(nodes[i].parent)].cell.containing;
    auto& own = nodes[i].cell.containing;
    own.insert(own.end(), up.begin(), up.end());
  }
  std::vector<RangeCell<T>> done;
  for (auto& node : nodes)
    if (node.leaf) done.push_back(std::move(node.cell));
  return done;
}

#define GEOLABEL_INSTANTIATE(T)                                                                             \
  template Relation classify(const PlanarRange<T>&, const CellBox<T>&);                                    \
  template CellBox<T> bounding_box(std::span<const Point2T<T>>, std::span<const std::uint32_t>);           \
  template std::vector<PointCell<T>> point_partition(std::span<const Point2T<T>>, std::vector<std::uint32_t>, \
                                                     unsigned);                                             \
  template std::size_t axis_line_crossings(std::span<const PointCell<T>>, int, const T&);                  \
  template std::vector<RangeCell<T>> range_partition(std::span<const PlanarRange<T>>,                      \
                                                     std::span<const std::uint32_t>,                        \
                                                     std::span<const Point2T<T>>, std::vector<std::uint32_t>, \
                                                     unsigned);                                             \
  template std::vector<CutNode<T>> range_partition_hierarchy(                                              \
      std::span<const PlanarRange<T>>, std::span<const std::uint32_t>, std::span<const Point2T<T>>,        \
      std::vector<std::uint32_t>, unsigned);
GEOLABEL_INSTANTIATE(Checked)
GEOLABEL_INSTANTIATE(Rational)
#undef GEOLABEL_INSTANTIATE

// ---------------------------------------------------------------------------
// Two-phase tree

void BuildConfig::validate() const {
  if (D < 2) throw ConfigurationError("D must be at least 2");
  if (r < 4 || !is_power_of_four(r)) throw ConfigurationError("r must be a power of 4, at least 4");
  if (!(N_exponent > 0 && N_exponent < 1)) throw ConfigurationError("N_exponent must lie in (0, 1)");
  if (leaf_point_cap < 3) throw ConfigurationError("leaf_point_cap must be at least 3 (kd steps need 4 points)");
}

std::size_t phase1_threshold(std::size_t p, double exponent) {
  if (p == 0) return 0;
  auto n = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(p), exponent) - 1e-9));
  return std::max<std::size_t>(n, 1);
}

namespace {

Rational as_rational(const Rational& x) { return x; }
Rational as_rational(Checked x) { return make_rational(static_cast<std::int64_t>(x.raw())); }

/// Points of one role with their integer scale (1 on the rational path).
template <class T>
struct RoleSpace {
  std::vector<Point2T<T>> pts;
  Rational scale = 1;
};

/// Thrown internally when the integer view is unavailable.
struct NoIntegerView {};

template <class T>
RoleSpace<T> role_space(const std::vector<Point2>& pts) {
  RoleSpace<T> out;
  if constexpr (std::is_same_v<T, Rational>) {
    out.pts.assign(pts.begin(), pts.end());
  } else {
    std::vector<Rational> flat;
    for (const auto& p : pts) {
      flat.push_back(p.x);
      flat.push_back(p.y);
    }
    auto s = scale_to_integers(flat);
    if (!s) throw NoIntegerView{};
    out.scale = Rational(s->denominator);
    for (std::size_t i = 0; i < pts.size(); ++i)
      out.pts.push_back({Checked(s->values[2 * i]), Checked(s->values[2 * i + 1])});
  }
  return out;
}

/// The form in coordinates multiplied by `scale`, made integral when T is
/// Checked. Positive rescaling keeps the range unchanged.
template <class T>
PlanarRange<T> to_range(const QuadraticForm& q, const Rational& scale, std::uint32_t owner) {
  PlanarRange<T> r;
  r.owner = owner;
  if constexpr (std::is_same_v<T, Rational>) {
    r.a = q.a;
    r.b = q.b;
    r.c = q.c;
    r.d = q.d;
  } else {
    Rational v[4] = {q.a, q.b * scale, q.c * scale, q.d * scale * scale};
    auto s = scale_to_integers(v, 62);
    if (!s) throw NoIntegerView{};
    r.a = Checked(s->values[0]);
    r.b = Checked(s->values[1]);
    r.c = Checked(s->values[2]);
    r.d = Checked(s->values[3]);
  }
  if (r.a > T(0)) throw ConfigurationError("range is the outside of a disk; swap the polynomial sign");
  return r;
}

template <class T>
class TreeBuilder {
 public:
  TreeBuilder(const PlanarPolynomial& f, std::span<const std::vector<Rational>> features,
              std::span<const VertexId> P, std::span<const VertexId> S, const BuildConfig& cfg)
      : P_(P), S_(S), cfg_(cfg) {
    std::vector<Point2> p_raw, s_raw;
    for (auto v : P) p_raw.push_back(f.left_point(features[v]));
    for (auto v : S) s_raw.push_back(f.right_point(features[v]));
    p_ = role_space<T>(p_raw);
    s_ = role_space<T>(s_raw);
    for (std::uint32_t i = 0; i < P.size(); ++i) p_ranges_.push_back(to_range<T>(f.range_of_left(p_raw[i]), s_.scale, i));
    for (std::uint32_t i = 0; i < S.size(); ++i) s_ranges_.push_back(to_range<T>(f.range_of_right(s_raw[i]), p_.scale, i));
    tree_.dec.n = features.size();
    tree_.threshold = phase1_threshold(P.size(), cfg.N_exponent);
    tree_.integer_path = !std::is_same_v<T, Rational>;
  }

  PartitionTree build() && {
    if (P_.empty() || S_.empty()) return std::move(tree_);
    std::vector<std::uint32_t> members(S_.size());
    std::iota(members.begin(), members.end(), 0u);
    std::vector<std::uint32_t> all(P_.size());
    std::iota(all.begin(), all.end(), 0u);
    CellBox<T> box = bounding_box<T>(s_.pts, members);
    std::vector<std::uint32_t> crossing, containing;
    for (auto k : all) {
      switch (classify(p_ranges_[k], box)) {
        case Relation::crosses: crossing.push_back(k); break;
        case Relation::contains: containing.push_back(k); break;
        case Relation::disjoint: break;
      }
    }
    phase1(-1, 0, box, std::move(members), containing, std::move(crossing));
    return std::move(tree_);
  }

 private:
  std::size_t add_node(unsigned phase, std::int64_t parent, unsigned depth, const CellBox<T>& box,
                       const Rational& scale, std::size_t points, std::size_t crossing, std::size_t containing) {
    TreeNode node;
    node.phase = phase;
    node.parent = parent;
    node.depth = depth;
    node.box_lo = {as_rational(box.lo.x) / scale, as_rational(box.lo.y) / scale};
    node.box_hi = {as_rational(box.hi.x) / scale, as_rational(box.hi.y) / scale};
    node.point_count = points;
    node.crossing_count = crossing;
    node.containing_count = containing;
    tree_.nodes.push_back(std::move(node));
    const std::size_t id = tree_.nodes.size() - 1;
    if (parent >= 0) tree_.nodes[static_cast<std::size_t>(parent)].children.push_back(id);
    return id;
  }

  void emit(std::size_t node, std::span<const std::uint32_t> p_pos, std::span<const std::uint32_t> s_pos,
            std::uint8_t phase) {
    if (p_pos.empty() || s_pos.empty()) return;
    Biclique b;
    for (auto k : p_pos) b.left.push_back(P_[k]);
    for (auto k : s_pos) b.right.push_back(S_[k]);
    std::sort(b.left.begin(), b.left.end());
    std::sort(b.right.begin(), b.right.end());
    if (phase != 3) tree_.nodes[node].biclique = static_cast<std::int64_t>(tree_.dec.bicliques.size());
    tree_.dec.bicliques.push_back(std::move(b));
    tree_.biclique_phase.push_back(phase);
  }

  /// Region crossings that split no points of the cell: those holding every
  /// point move to `containing`, those holding none are dropped.
  static void refine(const std::vector<PlanarRange<T>>& ranges, const std::vector<Point2T<T>>& pts,
                     std::span<const std::uint32_t> members, std::vector<std::uint32_t>& containing,
                     std::vector<std::uint32_t>& crossing) {
    std::size_t kept = 0;
    for (auto k : crossing) {
      std::size_t in = 0;
      for (auto m : members)
        if (ranges[k].at(pts[m]) >= T(0)) ++in;
      if (in == members.size()) containing.push_back(k);
      else if (in > 0) crossing[kept++] = k;
    }
    crossing.resize(kept);
  }

  // S-space: members are S positions, ranges are P positions. Internal boxes
  // of each cutting become split nodes so that a range containing a whole
  // subtree of cells is recorded once.
  void phase1(std::int64_t parent, unsigned depth, const CellBox<T>& box, std::vector<std::uint32_t> members,
              std::vector<std::uint32_t> containing, std::vector<std::uint32_t> crossing) {
    refine(p_ranges_, s_.pts, members, containing, crossing);
    const std::size_t id =
        add_node(1, parent, depth, box, s_.scale, members.size(), crossing.size(), containing.size());
    emit(id, owners_of(containing), members, 1);
    if (crossing.empty()) return;
    if (crossing.size() <= tree_.threshold) {
      phase2_root(id, depth + 1, members, crossing);
      return;
    }
    auto cut = range_partition_hierarchy<T>(p_ranges_, crossing, s_.pts, std::move(members), cfg_.D);
    std::vector<std::int64_t> ids(cut.size(), static_cast<std::int64_t>(id));
    for (std::size_t i = 1; i < cut.size(); ++i) {
      auto& c = cut[i].cell;
      const std::int64_t up = ids[static_cast<std::size_t>(cut[i].parent)];
      if (cut[i].leaf) {
        phase1(up, depth + 1, c.box, std::move(c.members), std::move(c.containing), std::move(c.crossing));
        continue;
      }
      const std::size_t sid =
          add_node(1, up, depth + 1, c.box, s_.scale, c.members.size(), c.crossing.size(), c.containing.size());
      tree_.nodes[sid].split = true;
      emit(sid, owners_of(c.containing), c.members, 1);
      ids[i] = static_cast<std::int64_t>(sid);
    }
  }

  std::vector<std::uint32_t> owners_of(std::span<const std::uint32_t> ranges) const {
    std::vector<std::uint32_t> out;
    for (auto k : ranges) out.push_back(p_ranges_[k].owner);
    return out;
  }

  // P-space: points are P positions, ranges are S positions.
  void phase2_root(std::size_t parent, unsigned depth, const std::vector<std::uint32_t>& s_members,
                   const std::vector<std::uint32_t>& p_crossing) {
    std::vector<std::uint32_t> points;
    for (auto k : p_crossing) points.push_back(p_ranges_[k].owner);
    phase2(static_cast<std::int64_t>(parent), depth, std::move(points), s_members);
  }

  void phase2(std::int64_t parent, unsigned depth, std::vector<std::uint32_t> points,
              std::span<const std::uint32_t> candidates) {
    CellBox<T> box = bounding_box<T>(p_.pts, points);
    std::vector<std::uint32_t> crossing, containing;
    for (auto k : candidates) {
      switch (classify(s_ranges_[k], box)) {
        case Relation::crosses: crossing.push_back(k); break;
        case Relation::contains: containing.push_back(k); break;
        case Relation::disjoint: break;
      }
    }
    refine(s_ranges_, p_.pts, points, containing, crossing);
    const std::size_t id =
        add_node(2, parent, depth, box, p_.scale, points.size(), crossing.size(), containing.size());
    emit(id, points, containing, 2);
    if (crossing.empty()) return;
    if (points.size() <= cfg_.leaf_point_cap) {
      for (auto p : points) {
        std::vector<std::uint32_t> hit;
        for (auto s : crossing)
          if (s_ranges_[s].at(p_.pts[p]) >= T(0)) hit.push_back(s);
        emit(id, std::span<const std::uint32_t>(&p, 1), hit, 3);
      }
      return;
    }
    unsigned r = cfg_.r;
    while (r > 4 && r > points.size()) r /= 4;
    for (auto& c : point_partition<T>(p_.pts, std::move(points), r))
      phase2(static_cast<std::int64_t>(id), depth + 1, std::move(c.members), crossing);
  }

  std::span<const VertexId> P_, S_;
  const BuildConfig& cfg_;
  RoleSpace<T> p_, s_;
  std::vector<PlanarRange<T>> p_ranges_;  // in S-space, owner = P position
  std::vector<PlanarRange<T>> s_ranges_;  // in P-space, owner = S position
  PartitionTree tree_;
};

}  // namespace

PartitionTree build_two_phase_tree(const PlanarPolynomial& f, std::span<const std::vector<Rational>> features,
                                   std::span<const VertexId> P, std::span<const VertexId> S,
                                   const BuildConfig& cfg) {
  cfg.validate();
  try {
    return TreeBuilder<Checked>(f, features, P, S, cfg).build();
  } catch (const NoIntegerView&) {
  } catch (const ArithmeticOverflow&) {
  }
  return TreeBuilder<Rational>(f, features, P, S, cfg).build();
}

PartitionTree build_two_phase_tree(const PredicateSpec& spec, std::span<const std::vector<Rational>> features,
                                   std::span<const VertexId> P, std::span<const VertexId> S,
                                   const BuildConfig& cfg) {
  if (spec.t() != 1) throw ConfigurationError("partition trees take a single polynomial; compose instead");
  try {
    return build_two_phase_tree(PlanarPolynomial(spec, 1), features, P, S, cfg);
  } catch (const ConfigurationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigurationError(e.what());
  }
}

NuStats tree_nu_stats(const PartitionTree& tree, std::span<const VertexId> P, std::span<const VertexId> S) {
  NuStats st;
  st.node_count = tree.nodes.size();
  for (const auto& node : tree.nodes) st.depth = std::max(st.depth, node.depth);
  std::unordered_map<VertexId, std::size_t> p_at, s_at;
  for (std::size_t k = 0; k < P.size(); ++k) p_at[P[k]] = k;
  for (std::size_t k = 0; k < S.size(); ++k) s_at[S[k]] = k;
  st.nu_P.assign(P.size(), 0);
  st.nu_S.assign(S.size(), 0);
  std::vector<std::array<std::size_t, 3>> by_phase_p(P.size()), by_phase_s(S.size());
  for (std::size_t b = 0; b < tree.dec.bicliques.size(); ++b) {
    const std::size_t ph = tree.biclique_phase[b] - 1u;
    for (auto v : tree.dec.bicliques[b].left) {
      auto k = p_at.at(v);
      ++st.nu_P[k];
      ++by_phase_p[k][ph];
    }
    for (auto v : tree.dec.bicliques[b].right) {
      auto k = s_at.at(v);
      ++st.nu_S[k];
      ++by_phase_s[k][ph];
    }
  }
  for (auto x : st.nu_P) st.nu_max = std::max(st.nu_max, x);
  for (auto x : st.nu_S) st.nu_max = std::max(st.nu_max, x);
  for (int ph = 0; ph < 3; ++ph) {
    for (const auto& c : by_phase_p) st.nu_max_phase[ph] = std::max(st.nu_max_phase[ph], c[ph]);
    for (const auto& c : by_phase_s) st.nu_max_phase[ph] = std::max(st.nu_max_phase[ph], c[ph]);
  }
  return st;
}

nlohmann::json PartitionTree::dump() const {
  nlohmann::json nodes_json = nlohmann::json::array();
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const auto& n = nodes[id];
    nodes_json.push_back({{"id", id},
                          {"phase", n.phase},
                          {"split", n.split},
                          {"depth", n.depth},
                          {"parent", n.parent},
                          {"box",
                           {rational_to_json(n.box_lo.x), rational_to_json(n.box_lo.y), rational_to_json(n.box_hi.x),
                            rational_to_json(n.box_hi.y)}},
                          {"points", n.point_count},
                          {"crossing", n.crossing_count},
                          {"containing", n.containing_count},
                          {"biclique", n.biclique},
                          {"children", n.children}});
  }
  return {{"threshold", threshold}, {"integer_path", integer_path}, {"nodes", nodes_json}};
}

BicliqueDecomposition ordered_pair_decomposition(const PlanarPolynomial& f,
                                                 std::span<const std::vector<Rational>> features, bool reverse,
                                                 const BuildConfig& cfg, ForestStats* stats) {
  BicliqueDecomposition out;
  out.n = features.size();
  out.provenance = "partition_tree";
  for (auto& piece : bipartize(features.size())) {
    const auto& P = reverse ? piece.upper : piece.lower;
    const auto& S = reverse ? piece.lower : piece.upper;
    auto tree = build_two_phase_tree(f, features, P, S, cfg);
    if (stats) {
      ++stats->trees;
      stats->nodes += tree.nodes.size();
      for (const auto& node : tree.nodes) stats->depth = std::max(stats->depth, node.depth);
    }
    append_decomposition(out, std::move(tree.dec));
  }
  return out;
}

}  // namespace geolabel
