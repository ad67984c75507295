#include "geolabel/instance.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>

#include "geolabel/visibility.hpp"

namespace geolabel {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 10> kFamilyNames{{
    {Family::unit_disk, "unit_disk"},
    {Family::disk, "disk"},
    {Family::point_halfplane, "point_halfplane"},
    {Family::segment_intersection, "segment_intersection"},
    {Family::semilinear_dnf, "semilinear_dnf"},
    {Family::boxicity, "boxicity"},
    {Family::polygon_visibility, "polygon_visibility"},
    {Family::terrain_visibility, "terrain_visibility"},
    {Family::capped_abstract, "capped_abstract"},
    {Family::bichromatic_segments, "bichromatic_segments"},
}};

}  // namespace

std::string_view family_name(Family f) {
  for (auto [fam, name] : kFamilyNames)
    if (fam == f) return name;
  return "?";
}

Family family_from_name(std::string_view name) {
  for (auto [fam, n] : kFamilyNames)
    if (n == name) return fam;
  throw std::invalid_argument("unknown family: " + std::string(name));
}

std::vector<Family> all_families() {
  std::vector<Family> out;
  for (auto [fam, name] : kFamilyNames) out.push_back(fam);
  return out;
}

std::vector<Point2> Instance::points() const {
  std::vector<Point2> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back({f.at(0), f.at(1)});
  return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

using Rng = std::mt19937_64;

std::uint64_t draw(Rng& rng, std::uint64_t bound) { return rng() % bound; }

[[noreturn]] void give_up(Family f, std::uint64_t seed, const std::string& why) {
  throw GenerationError(std::string(family_name(f)) + " generator (seed " + std::to_string(seed) + "): " + why);
}

/// `count` distinct grid indices in [0, grid), in draw order.
std::vector<std::uint64_t> distinct_indices(Rng& rng, std::size_t count, std::uint64_t grid) {
  if (count > grid) throw GenerationError("grid too coarse for the requested size");
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> out;
  while (out.size() < count) {
    auto k = draw(rng, grid);
    if (seen.insert(k).second) out.push_back(k);
  }
  return out;
}

Rational grid_value(const Rational& range, std::uint64_t k, unsigned bits) {
  Rational q(mpz_class(static_cast<unsigned long>(k)), mpz_class(mpz_class(1) << bits));
  q.canonicalize();
  return range * q;
}

using IPoint = Point2T<std::int64_t>;

bool collinear_with_any(const std::vector<IPoint>& pts, const IPoint& p) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (orient(pts[i], pts[j], p) == 0) return true;
  return false;
}

void set_points(Instance& inst, const std::vector<IPoint>& pts) {
  inst.features.clear();
  for (const auto& p : pts) inst.features.push_back({Rational(static_cast<long>(p.x)), Rational(static_cast<long>(p.y))});
}

bool edges_cross(const std::vector<IPoint>& poly, std::size_t i, std::size_t j) {
  const std::size_t n = poly.size();
  return segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]);
}

std::vector<IPoint> two_opt_polygon(Rng& rng, std::size_t n, std::uint64_t seed) {
  const auto side = static_cast<std::int64_t>(std::max<std::size_t>(64, 8 * n));
  std::vector<IPoint> pts;
  std::size_t attempts = 0;
  while (pts.size() < n) {
    if (++attempts > 100 * n + 1000) give_up(Family::polygon_visibility, seed, "could not place points in general position");
    IPoint p{static_cast<std::int64_t>(draw(rng, side)), static_cast<std::int64_t>(draw(rng, side))};
    if (std::find(pts.begin(), pts.end(), p) != pts.end() || collinear_with_any(pts, p)) continue;
    pts.push_back(p);
  }
  std::shuffle(pts.begin(), pts.end(), rng);
  // Cyclic 2-opt scan: reverse the chain between any two crossing edges.
  // Each move shortens the tour, so the scan terminates.
  const std::size_t budget = 50 * n * n + 1000;
  std::size_t moves = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (!edges_cross(pts, i, j)) continue;
        std::reverse(pts.begin() + static_cast<std::ptrdiff_t>(i + 1), pts.begin() + static_cast<std::ptrdiff_t>(j + 1));
        changed = true;
        if (++moves > budget) give_up(Family::polygon_visibility, seed, "2-opt did not reach a simple polygon");
      }
    }
  }
  return pts;
}

std::vector<IPoint> comb_polygon(Rng& rng, std::size_t n, std::uint64_t seed) {
  if (n < 4) give_up(Family::polygon_visibility, seed, "comb needs at least four vertices");
  const std::size_t m = n - 2;
  // Each tooth tip is redrawn until it avoids every line through two earlier
  // tips; the jitter range outgrows the number of such lines.
  const auto jitter = static_cast<std::int64_t>(std::max<std::size_t>(16, n * n));
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<IPoint> pts;
    for (std::size_t i = 0; i < m; ++i) {
      const auto x = static_cast<std::int64_t>(4 * i);
      const std::int64_t base = (i % 2 ? 4 : 1) * jitter;
      IPoint p{x, base + static_cast<std::int64_t>(draw(rng, static_cast<std::uint64_t>(jitter)))};
      for (int redraw = 0; redraw < 256 && collinear_with_any(pts, p); ++redraw)
        p.y = base + static_cast<std::int64_t>(draw(rng, static_cast<std::uint64_t>(jitter)));
      pts.push_back(p);
    }
    pts.push_back({static_cast<std::int64_t>(4 * (m - 1) + 1), 0});
    pts.push_back({-1, 0});
    bool ok = true;
    for (std::size_t k = 2; k < pts.size() && ok; ++k)
      ok = !collinear_with_any(std::vector<IPoint>(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(k)), pts[k]);
    if (ok) return pts;
  }
  give_up(Family::polygon_visibility, seed, "comb perturbation kept producing collinear triples");
}

std::vector<IPoint> random_terrain(Rng& rng, std::size_t n, std::uint64_t seed, Family f) {
  auto xs = distinct_indices(rng, n, 16 * n);
  std::sort(xs.begin(), xs.end());
  std::vector<IPoint> pts;
  for (auto x : xs) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) give_up(f, seed, "could not avoid collinear terrain vertices");
      IPoint p{static_cast<std::int64_t>(x), static_cast<std::int64_t>(draw(rng, 8 * n))};
      if (!collinear_with_any(pts, p)) {
        pts.push_back(p);
        break;
      }
    }
  }
  return pts;
}

AdjacencyMatrix terrain_matrix(const std::vector<IPoint>& pts) {
  AdjacencyMatrix m(pts.size());
  std::span<const IPoint> s(pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (terrain_visible_t<std::int64_t>(s, i, j)) m.set(i, j);
  return m;
}

void gen_unit_disk(Instance& inst, Rng& rng, const GenParams& p, bool radii) {
  const unsigned bits = 16;
  auto xs = distinct_indices(rng, inst.n, (1u << bits) + 1);
  auto ys = distinct_indices(rng, inst.n, (1u << bits) + 1);
  for (std::size_t i = 0; i < inst.n; ++i) {
    std::vector<Rational> f{grid_value(p.range, xs[i], bits), grid_value(p.range, ys[i], bits)};
    if (radii) f.push_back(make_rational(1, 2) + grid_value(1, draw(rng, 256), 8));
    inst.features.push_back(std::move(f));
  }
}

void gen_point_halfplane(Instance& inst, Rng& rng, const GenParams& p) {
  inst.split = p.split.value_or(inst.n / 2);
  if (inst.split > inst.n) throw std::invalid_argument("split exceeds n");
  const unsigned bits = 16;
  auto xs = distinct_indices(rng, inst.split, (1u << bits) + 1);
  auto ys = distinct_indices(rng, inst.split, (1u << bits) + 1);
  for (std::size_t i = 0; i < inst.split; ++i)
    inst.features.push_back({grid_value(p.range, xs[i], bits), grid_value(p.range, ys[i], bits)});
  for (std::size_t i = inst.split; i < inst.n; ++i) {
    Rational a = make_rational(static_cast<std::int64_t>(draw(rng, 513)) - 256, 256);
    Rational b = grid_value(p.range, draw(rng, (1u << bits) + 1), bits) - a * p.range / 2;
    inst.features.push_back({a, b});
  }
}

/// Sign of the line of segment s (m, q) at point (x, y).
int line_side(const std::vector<Rational>& s, const Rational& x, const Rational& y) {
  return sgn(y - s[0] * x - s[1]);
}

bool general_position_pair(const std::vector<Rational>& s, const std::vector<Rational>& t) {
  return line_side(s, t[2], t[3]) != 0 && line_side(s, t[4], t[5]) != 0 && line_side(t, s[2], s[3]) != 0 &&
         line_side(t, s[4], s[5]) != 0;
}

void gen_segments(Instance& inst, Rng& rng, const GenParams& p) {
  const std::size_t budget = 1000 * inst.n + 1000;
  for (std::size_t attempts = 0; inst.features.size() < inst.n; ++attempts) {
    if (attempts > budget) give_up(inst.family, inst.seed, "could not avoid degenerate orientations");
    Rational cx = grid_value(p.range, draw(rng, 512), 9);
    Rational len = grid_value(p.range, 1 + draw(rng, 512), 11);
    Rational dx = cx + len;
    Rational m = make_rational(static_cast<std::int64_t>(draw(rng, 513)) - 256, 256);
    Rational cy0 = grid_value(p.range, draw(rng, 512), 9);
    Rational q = cy0 - m * cx;
    std::vector<Rational> s{m, q, cx, Rational(m * cx + q), dx, Rational(m * dx + q)};
    bool ok = true;
    for (const auto& t : inst.features)
      if (!general_position_pair(s, t)) {
        ok = false;
        break;
      }
    if (ok) inst.features.push_back(std::move(s));
  }
}

Point2 circle_point(const Rational& tau) {
  Rational d = 1 + tau * tau;
  return {(1 - tau * tau) / d, 2 * tau / d};
}

void gen_dnf(Instance& inst, Rng& rng, const GenParams& p, const std::string& preset) {
  const unsigned bits = 20;
  const std::uint64_t grid = 1u << bits;
  const std::size_t n = inst.n;
  inst.preset = preset;
  inst.dnf = dnf_preset(preset, p.dim);
  if (preset == "interval" || preset == "circle") {
    auto ks = distinct_indices(rng, 2 * n, grid);
    for (std::size_t i = 0; i < n; ++i) {
      auto lo = std::min(ks[2 * i], ks[2 * i + 1]), hi = std::max(ks[2 * i], ks[2 * i + 1]);
      if (preset == "interval") {
        inst.features.push_back({grid_value(p.range, lo, bits), grid_value(p.range, hi, bits)});
      } else {
        // Chord parameters in [-4, 4).
        inst.features.push_back({grid_value(8, lo, bits) - 4, grid_value(8, hi, bits) - 4});
      }
    }
  } else if (preset == "permutation") {
    auto as = distinct_indices(rng, n, grid);
    auto bs = distinct_indices(rng, n, grid);
    for (std::size_t i = 0; i < n; ++i)
      inst.features.push_back({grid_value(p.range, as[i], bits), grid_value(p.range, bs[i], bits)});
  } else if (preset == "boxicity") {
    inst.features.assign(n, std::vector<Rational>(2 * p.dim));
    for (std::size_t axis = 0; axis < p.dim; ++axis) {
      auto ks = distinct_indices(rng, 2 * n, grid);
      for (std::size_t i = 0; i < n; ++i) {
        auto lo = std::min(ks[2 * i], ks[2 * i + 1]), hi = std::max(ks[2 * i], ks[2 * i + 1]);
        inst.features[i][2 * axis] = grid_value(p.range, lo, bits);
        inst.features[i][2 * axis + 1] = grid_value(p.range, hi, bits);
      }
    }
  } else {
    throw std::invalid_argument("unknown DNF preset: " + preset);
  }
}

void gen_polygon(Instance& inst, Rng& rng, const GenParams& p) {
  inst.preset = p.polygon;
  std::vector<IPoint> pts;
  if (p.polygon == "two_opt") {
    pts = two_opt_polygon(rng, inst.n, inst.seed);
  } else if (p.polygon == "convex") {
    for (std::size_t i = 0; i < inst.n; ++i)
      pts.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(i * i)});
  } else if (p.polygon == "comb") {
    pts = comb_polygon(rng, inst.n, inst.seed);
  } else {
    throw std::invalid_argument("unknown polygon generator: " + p.polygon);
  }
  if (!is_simple_polygon<std::int64_t>(pts)) give_up(inst.family, inst.seed, "polygon is not simple");
  set_points(inst, pts);
}

void gen_capped(Instance& inst, Rng& rng, const GenParams& p) {
  inst.preset = p.capped;
  inst.order.resize(inst.n);
  std::iota(inst.order.begin(), inst.order.end(), VertexId{0});
  if (p.capped == "terrain") {
    auto pts = random_terrain(rng, inst.n, inst.seed, inst.family);
    set_points(inst, pts);
    inst.matrix = terrain_matrix(pts);
  } else if (p.capped == "closure") {
    AdjacencyMatrix m(inst.n);
    for (std::size_t u = 0; u < inst.n; ++u)
      for (std::size_t v = u + 1; v < inst.n; ++v)
        if (draw(rng, 8) == 0) m.set(u, v);
    inst.matrix = capped_closure(m, inst.order);
  } else {
    throw std::invalid_argument("unknown capped generator: " + p.capped);
  }
}

std::vector<Rational> segment_features(const Segment& s) { return {s.a.x, s.a.y, s.b.x, s.b.y}; }

/// Red segments lie on lines through (-56, 4), blue ones on lines through
/// (4, -56); lines of one pencil meet only at its apex, outside the box.
void gen_bichromatic(Instance& inst, Rng& rng, const GenParams& p) {
  inst.split = p.split.value_or(inst.n / 2);
  if (inst.split > inst.n) throw std::invalid_argument("split exceeds n");
  const Point2 red_apex{-56, 4}, blue_apex{4, -56};
  const unsigned bits = 20;
  const std::uint64_t grid = (1u << bits) + 1;
  const Rational half = p.range / 2;
  for (int attempt = 0; attempt < 32; ++attempt) {
    BichromaticSegments segs;
    for (std::size_t i = 0; i < inst.n; ++i) {
      const bool red = i < inst.split;
      for (;;) {
        Rational t = grid_value(p.range, draw(rng, grid), bits);
        Rational u = grid_value(p.range, draw(rng, grid), bits);
        Rational w = grid_value(p.range, draw(rng, grid), bits);
        if (u == w) continue;
        if (u > w) std::swap(u, w);
        if (red) {
          // Line through the apex and (half, t); endpoints at x = u, w.
          Rational slope = (t - red_apex.y) / (half - red_apex.x);
          auto at = [&](const Rational& x) { return Point2{x, red_apex.y + slope * (x - red_apex.x)}; };
          segs.red.push_back({at(u), at(w)});
        } else {
          // Line through the apex and (t, half); endpoints at y = u, w.
          if (t == blue_apex.x) continue;
          Rational inv = (t - blue_apex.x) / (half - blue_apex.y);
          auto at = [&](const Rational& y) { return Point2{blue_apex.x + inv * (y - blue_apex.y), y}; };
          Point2 a = at(u), b = at(w);
          if (b.x < a.x) std::swap(a, b);
          segs.blue.push_back({a, b});
        }
        break;
      }
    }
    // General position: distinct endpoint abscissae, no endpoint on a line
    // of the other colour, no crossing abscissa equal to an endpoint's.
    std::set<Rational> xs;
    bool ok = true;
    for (std::size_t s = 0; s < segs.size() && ok; ++s) {
      ok = xs.insert(segs.at(s).a.x).second && xs.insert(segs.at(s).b.x).second;
    }
    for (std::size_t r = 0; r < segs.red.size() && ok; ++r) {
      for (std::size_t b = 0; b < segs.blue.size() && ok; ++b) {
        const auto& R = segs.red[r];
        const auto& B = segs.blue[b];
        if (orient(R.a, R.b, B.a) == 0 || orient(R.a, R.b, B.b) == 0 || orient(B.a, B.b, R.a) == 0 ||
            orient(B.a, B.b, R.b) == 0) {
          ok = false;
          break;
        }
        // Abscissa of the line crossing.
        Rational mr = (R.b.y - R.a.y) / (R.b.x - R.a.x);
        Rational mb = (B.b.y - B.a.y) / (B.b.x - B.a.x);
        Rational x = (B.a.y - R.a.y + mr * R.a.x - mb * B.a.x) / (mr - mb);
        if (xs.count(x)) ok = false;
      }
    }
    if (!ok) continue;
    segs.validate();
    for (std::size_t s = 0; s < segs.size(); ++s) inst.features.push_back(segment_features(segs.at(s)));
    return;
  }
  give_up(inst.family, inst.seed, "no general-position sample within 32 attempts");
}

}  // namespace

Instance generate_instance(Family family, std::size_t n, std::uint64_t seed, const GenParams& params) {
  if (n < 2) throw std::invalid_argument("instances need at least two vertices");
  if (params.range <= 0) throw std::invalid_argument("coordinate range must be positive");
  Instance inst;
  inst.family = family;
  inst.n = n;
  inst.seed = seed;
  Rng rng(seed);
  switch (family) {
    case Family::unit_disk: gen_unit_disk(inst, rng, params, false); break;
    case Family::disk: gen_unit_disk(inst, rng, params, true); break;
    case Family::point_halfplane: gen_point_halfplane(inst, rng, params); break;
    case Family::segment_intersection: gen_segments(inst, rng, params); break;
    case Family::semilinear_dnf: gen_dnf(inst, rng, params, params.preset); break;
    case Family::boxicity: gen_dnf(inst, rng, params, "boxicity"); break;
    case Family::polygon_visibility: gen_polygon(inst, rng, params); break;
    case Family::terrain_visibility: set_points(inst, random_terrain(rng, n, seed, family)); break;
    case Family::capped_abstract: gen_capped(inst, rng, params); break;
    case Family::bichromatic_segments: gen_bichromatic(inst, rng, params); break;
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Oracles

std::optional<PredicateSpec> family_predicate(Family f) {
  switch (f) {
    case Family::unit_disk: return unit_disk_predicate();
    case Family::point_halfplane: return point_halfplane_predicate();
    case Family::segment_intersection: return segment_predicate();
    default: return std::nullopt;
  }
}

bool oracle_adjacent(const Instance& inst, VertexId u, VertexId v) {
  if (u == v) throw std::invalid_argument("adjacency of a vertex with itself");
  if (u >= inst.n || v >= inst.n) throw std::out_of_range("vertex id out of range");
  if (inst.family == Family::capped_abstract) return inst.matrix(u, v);
  const auto& a = inst.features.at(u);
  const auto& b = inst.features.at(v);
  switch (inst.family) {
    case Family::unit_disk: {
      Rational dx = a[0] - b[0], dy = a[1] - b[1];
      return dx * dx + dy * dy <= 4;
    }
    case Family::disk: {
      Rational dx = a[0] - b[0], dy = a[1] - b[1], r = a[2] + b[2];
      return dx * dx + dy * dy <= r * r;
    }
    case Family::point_halfplane: {
      if ((u < inst.split) == (v < inst.split)) return false;
      const auto& pt = u < inst.split ? a : b;
      const auto& line = u < inst.split ? b : a;
      return pt[1] >= line[0] * pt[0] + line[1];
    }
    case Family::segment_intersection:
      return segments_intersect(Point2{a[2], a[3]}, Point2{a[4], a[5]}, Point2{b[2], b[3]}, Point2{b[4], b[5]});
    case Family::semilinear_dnf:
      if (inst.preset == "circle") {
        return segments_intersect(circle_point(a[0]), circle_point(a[1]), circle_point(b[0]), circle_point(b[1]));
      }
      return inst.dnf.value().adjacent(a, b);
    case Family::boxicity:
      for (std::size_t j = 0; j + 1 < a.size(); j += 2)
        if (a[j + 1] < b[j] || b[j + 1] < a[j]) return false;
      return true;
    case Family::polygon_visibility: {
      auto pts = inst.points();
      return polygon_visible(pts, u, v);
    }
    case Family::terrain_visibility: {
      auto pts = inst.points();
      return terrain_visible(pts, u, v);
    }
    case Family::capped_abstract: return inst.matrix(u, v);
    case Family::bichromatic_segments:
      return segments_intersect(Point2{a[0], a[1]}, Point2{a[2], a[3]}, Point2{b[0], b[1]}, Point2{b[2], b[3]});
  }
  return false;
}

struct AdjacencyOracle::Impl {
  const Instance& inst;
  std::vector<IPoint> pts;       // integer view of the relevant points
  std::vector<IPoint> ends;      // segment endpoints, two per vertex
  __int128 reach = 0;            // unit disk: (2 * scale)^2
  bool fast = false;

  explicit Impl(const Instance& i) : inst(i) {
    switch (inst.family) {
      case Family::unit_disk: {
        std::vector<Rational> flat;
        for (const auto& f : inst.features) {
          flat.push_back(f[0]);
          flat.push_back(f[1]);
        }
        if (auto s = scale_to_integers(flat)) {
          for (std::size_t k = 0; k < inst.n; ++k) pts.push_back({s->values[2 * k], s->values[2 * k + 1]});
          __int128 scale = s->denominator.get_si();
          reach = 4 * scale * scale;
          fast = true;
        }
        break;
      }
      case Family::polygon_visibility:
      case Family::terrain_visibility:
        if (auto s = scaled_points(inst.points())) {
          pts = std::move(*s);
          fast = true;
        }
        break;
      case Family::segment_intersection:
      case Family::bichromatic_segments: {
        const std::size_t off = inst.family == Family::segment_intersection ? 2 : 0;
        std::vector<Point2> raw;
        for (const auto& f : inst.features) {
          raw.push_back({f[off], f[off + 1]});
          raw.push_back({f[off + 2], f[off + 3]});
        }
        if (auto s = scaled_points(raw)) {
          ends = std::move(*s);
          fast = true;
        }
        break;
      }
      default: break;
    }
  }

  bool operator()(VertexId u, VertexId v) const {
    if (!fast || u == v || u >= inst.n || v >= inst.n) return oracle_adjacent(inst, u, v);
    switch (inst.family) {
      case Family::unit_disk: {
        __int128 dx = pts[u].x - pts[v].x, dy = pts[u].y - pts[v].y;
        return dx * dx + dy * dy <= reach;
      }
      case Family::polygon_visibility: return polygon_visible_t<std::int64_t>(pts, u, v);
      case Family::terrain_visibility: return terrain_visible_t<std::int64_t>(pts, u, v);
      default:
        return segments_intersect(ends[2 * u], ends[2 * u + 1], ends[2 * v], ends[2 * v + 1]);
    }
  }
};

AdjacencyOracle::AdjacencyOracle(const Instance& inst) : impl_(new Impl(inst)) {}
AdjacencyOracle::~AdjacencyOracle() { delete impl_; }
bool AdjacencyOracle::operator()(VertexId u, VertexId v) const { return (*impl_)(u, v); }

std::size_t default_matrix_budget(Family f) { return f == Family::polygon_visibility ? 1024 : 4096; }

AdjacencyMatrix adjacency_matrix(const Instance& inst, std::size_t budget) {
  if (budget == 0) budget = default_matrix_budget(inst.family);
  if (inst.n > budget)
    throw SizeError("adjacency matrix of " + std::to_string(inst.n) + " vertices exceeds the budget of " +
                    std::to_string(budget));
  if (inst.family == Family::capped_abstract) return inst.matrix;
  AdjacencyMatrix m(inst.n);
  AdjacencyOracle oracle(inst);
  for (VertexId u = 0; u < inst.n; ++u)
    for (VertexId v = u + 1; v < inst.n; ++v)
      if (oracle(u, v)) m.set(u, v);
  return m;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json Instance::to_json() const {
  nlohmann::json payload = nlohmann::json::array();
  for (const auto& f : features) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& q : f) row.push_back(rational_to_json(q));
    payload.push_back(std::move(row));
  }
  nlohmann::json j{{"family", family_name(family)}, {"n", n}, {"seed", seed}, {"payload", std::move(payload)}};
  if (family == Family::point_halfplane || family == Family::bichromatic_segments) j["split"] = split;
  if (!preset.empty()) j["preset"] = preset;
  if (dnf) j["dnf"] = dnf->to_json();
  if (family == Family::capped_abstract) {
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (matrix(u, v)) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    j["order"] = order;
  }
  return j;
}

Instance Instance::from_json(const nlohmann::json& j) {
  Instance inst;
  inst.family = family_from_name(j.at("family").get<std::string>());
  inst.n = j.at("n").get<std::size_t>();
  inst.seed = j.value("seed", std::uint64_t{0});
  for (const auto& row : j.at("payload")) {
    std::vector<Rational> f;
    for (const auto& q : row) f.push_back(rational_from_json(q));
    inst.features.push_back(std::move(f));
  }
  if (!inst.features.empty() && inst.features.size() != inst.n)
    throw std::invalid_argument("payload size does not match n");
  inst.split = j.value("split", std::size_t{0});
  inst.preset = j.value("preset", std::string{});
  if (j.contains("dnf")) inst.dnf = DNFPredicate::from_json(j.at("dnf"));
  if (inst.family == Family::capped_abstract) {
    inst.matrix = AdjacencyMatrix(inst.n);
    for (const auto& e : j.at("edges")) {
      auto u = e.at(0).get<std::size_t>(), v = e.at(1).get<std::size_t>();
      if (u >= inst.n || v >= inst.n) throw std::invalid_argument("edge endpoint out of range");
      inst.matrix.set(u, v);
    }
    inst.order = j.at("order").get<std::vector<VertexId>>();
  }
  return inst;
}

}  // namespace geolabel
