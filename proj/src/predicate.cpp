#include "geolabel/predicate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace geolabel {

namespace {

constexpr std::size_t kUnused = std::numeric_limits<std::size_t>::max();

std::vector<std::uint8_t> mono(std::size_t nvars, std::initializer_list<std::pair<std::size_t, int>> powers) {
  std::vector<std::uint8_t> e(nvars, 0);
  for (auto [i, p] : powers) e.at(i) = static_cast<std::uint8_t>(p);
  return e;
}

}  // namespace

BoolExpr BoolExpr::constant(bool value) {
  BoolExpr e;
  e.op_ = Op::constant;
  e.value_ = value;
  return e;
}

BoolExpr BoolExpr::atom(int index) {
  if (index < 1) throw std::invalid_argument("atom index must be >= 1");
  BoolExpr e;
  e.op_ = Op::atom;
  e.index_ = index;
  return e;
}

BoolExpr BoolExpr::negate(BoolExpr inner) {
  BoolExpr e;
  e.op_ = Op::negate;
  e.args_.push_back(std::move(inner));
  return e;
}

BoolExpr BoolExpr::all(std::vector<BoolExpr> args) {
  BoolExpr e;
  e.op_ = Op::all;
  e.args_ = std::move(args);
  return e;
}

BoolExpr BoolExpr::any(std::vector<BoolExpr> args) {
  BoolExpr e;
  e.op_ = Op::any;
  e.args_ = std::move(args);
  return e;
}

BoolExpr BoolExpr::exclusive(BoolExpr a, BoolExpr b) {
  return any({all({a, negate(b)}), all({negate(a), b})});
}

int BoolExpr::max_atom() const {
  int best = op_ == Op::atom ? index_ : 0;
  for (const auto& a : args_) best = std::max(best, a.max_atom());
  return best;
}

int BoolExpr::min_atom() const {
  int best = op_ == Op::atom ? index_ : std::numeric_limits<int>::max();
  for (const auto& a : args_) best = std::min(best, a.min_atom());
  return best;
}

bool BoolExpr::uses_non_strict() const {
  if (op_ == Op::atom && (index_ - 1) % 3 != 0) return true;
  return std::any_of(args_.begin(), args_.end(), [](const BoolExpr& a) { return a.uses_non_strict(); });
}

nlohmann::json BoolExpr::to_json() const {
  switch (op_) {
    case Op::constant: return {{"op", "const"}, {"value", value_}};
    case Op::atom: return {{"op", "atom"}, {"index", index_}};
    default: break;
  }
  nlohmann::json args = nlohmann::json::array();
  for (const auto& a : args_) args.push_back(a.to_json());
  const char* name = op_ == Op::negate ? "not" : (op_ == Op::all ? "and" : "or");
  return {{"op", name}, {"args", args}};
}

BoolExpr BoolExpr::from_json(const nlohmann::json& j) {
  auto op = j.at("op").get<std::string>();
  if (op == "const") return constant(j.at("value").get<bool>());
  if (op == "atom") return atom(j.at("index").get<int>());
  std::vector<BoolExpr> args;
  for (const auto& a : j.at("args")) args.push_back(from_json(a));
  if (op == "not") {
    if (args.size() != 1) throw std::invalid_argument("'not' takes exactly one argument");
    return negate(std::move(args[0]));
  }
  if (op == "and") return all(std::move(args));
  if (op == "or") return any(std::move(args));
  throw std::invalid_argument("unknown boolean operator: " + op);
}

void PredicateSpec::validate() const {
  const std::size_t nv = d_left + d_right;
  const unsigned max_degree = std::max<unsigned>(static_cast<unsigned>(t()), 2);
  for (const auto& p : polys) {
    if (p.nvars() != nv) throw std::invalid_argument("polynomial arity differs from d_left + d_right");
    if (p.degree() > max_degree) throw std::invalid_argument("polynomial degree exceeds max(t, 2)");
  }
  if (phi.max_atom() > static_cast<int>(3 * t())) throw std::invalid_argument("phi references an atom beyond 3t");
}

nlohmann::json PredicateSpec::to_json() const {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : polys) ps.push_back(p.to_json());
  return {{"d_left", d_left}, {"d_right", d_right}, {"polys", ps}, {"phi", phi.to_json()},
          {"symmetric", symmetric}};
}

PredicateSpec PredicateSpec::from_json(const nlohmann::json& j) {
  PredicateSpec s;
  s.d_left = j.at("d_left").get<std::size_t>();
  s.d_right = j.at("d_right").get<std::size_t>();
  for (const auto& p : j.at("polys")) s.polys.push_back(Polynomial::from_json(p));
  s.phi = BoolExpr::from_json(j.at("phi"));
  s.symmetric = j.value("symmetric", true);
  s.validate();
  return s;
}

namespace {

std::vector<Rational> joined(const PredicateSpec& spec, std::span<const Rational> u,
                             std::span<const Rational> v) {
  if (u.size() != spec.d_left || v.size() != spec.d_right)
    throw std::invalid_argument("point dimension does not match predicate roles");
  std::vector<Rational> vals(u.begin(), u.end());
  vals.insert(vals.end(), v.begin(), v.end());
  return vals;
}

}  // namespace

int eval_sign(const PredicateSpec& spec, std::size_t i, std::span<const Rational> u,
              std::span<const Rational> v) {
  if (i < 1 || i > spec.t()) throw std::invalid_argument("polynomial index out of range");
  return sgn(spec.polys[i - 1].evaluate(joined(spec, u, v)));
}

bool predicate_holds(const PredicateSpec& spec, std::span<const Rational> u,
                     std::span<const Rational> v) {
  auto vals = joined(spec, u, v);
  std::vector<int> signs(spec.t());
  for (std::size_t i = 0; i < spec.t(); ++i) signs[i] = sgn(spec.polys[i].evaluate(vals));
  return spec.phi.eval([&](int atom) {
    int s = signs[(atom - 1) / 3];
    switch ((atom - 1) % 3) {
      case 0: return s < 0;
      case 1: return s == 0;
      default: return s <= 0;
    }
  });
}

bool predicate_adjacent(const PredicateSpec& spec, std::span<const Rational> u,
                        std::span<const Rational> v) {
  if (predicate_holds(spec, u, v)) return true;
  return !spec.symmetric && predicate_holds(spec, v, u);
}

bool symmetric_on(const PredicateSpec& spec, std::span<const std::vector<Rational>> samples) {
  for (std::size_t a = 0; a < samples.size(); ++a)
    for (std::size_t b = a + 1; b < samples.size(); ++b)
      if (predicate_holds(spec, samples[a], samples[b]) != predicate_holds(spec, samples[b], samples[a]))
        return false;
  return true;
}

PredicateSpec unit_disk_predicate() {
  PredicateSpec s;
  s.d_left = s.d_right = 2;
  Polynomial f(4);
  f.add_term(4, mono(4, {}));
  for (std::size_t k = 0; k < 2; ++k) {
    // -(x_k - y_k)^2 = -x_k^2 + 2 x_k y_k - y_k^2
    f.add_term(-1, mono(4, {{k, 2}}));
    f.add_term(2, mono(4, {{k, 1}, {k + 2, 1}}));
    f.add_term(-1, mono(4, {{k + 2, 2}}));
  }
  s.polys.push_back(std::move(f));
  s.phi = BoolExpr::negate(BoolExpr::atom(atom_less(1)));
  s.symmetric = true;
  return s;
}

PredicateSpec point_halfplane_predicate() {
  PredicateSpec s;
  s.d_left = s.d_right = 2;
  Polynomial f(4);
  f.add_term(1, mono(4, {{1, 1}}));
  f.add_term(-1, mono(4, {{0, 1}, {2, 1}}));
  f.add_term(-1, mono(4, {{3, 1}}));
  s.polys.push_back(std::move(f));
  s.phi = BoolExpr::negate(BoolExpr::atom(atom_less(1)));
  s.symmetric = false;
  return s;
}

PredicateSpec segment_predicate() {
  // Feature layout per segment: (m, q, cx, cy, dx, dy) with y = m x + q the
  // supporting line and c, d the endpoints.
  constexpr std::size_t M = 0, Q = 1, CX = 2, CY = 3, DX = 4, DY = 5, R = 6;
  PredicateSpec s;
  s.d_left = s.d_right = 6;
  auto side = [](std::size_t line_off, std::size_t pt_off, std::size_t px, std::size_t py) {
    Polynomial f(12);
    f.add_term(1, mono(12, {{pt_off + py, 1}}));
    f.add_term(-1, mono(12, {{line_off + M, 1}, {pt_off + px, 1}}));
    f.add_term(-1, mono(12, {{line_off + Q, 1}}));
    return f;
  };
  s.polys.push_back(side(0, R, CX, CY));
  s.polys.push_back(side(0, R, DX, DY));
  s.polys.push_back(side(R, 0, CX, CY));
  s.polys.push_back(side(R, 0, DX, DY));
  auto a = [](int i) { return BoolExpr::atom(atom_less(i)); };
  s.phi = BoolExpr::all({BoolExpr::exclusive(a(1), a(2)), BoolExpr::exclusive(a(3), a(4))});
  s.symmetric = true;
  return s;
}

PlanarPolynomial::PlanarPolynomial(const PredicateSpec& spec, std::size_t i, bool negate) {
  if (i < 1 || i > spec.t()) throw std::invalid_argument("polynomial index out of range");
  const Polynomial& p = spec.polys[i - 1];
  std::vector<std::size_t> lv, rv;
  for (std::size_t k = 0; k < spec.d_left; ++k)
    if (p.uses_var(k)) lv.push_back(k);
  for (std::size_t k = 0; k < spec.d_right; ++k)
    if (p.uses_var(spec.d_left + k)) rv.push_back(k);
  if (lv.size() > 2 || rv.size() > 2)
    throw std::invalid_argument("polynomial is not planar in each argument role");
  left_vars_ = {kUnused, kUnused};
  right_vars_ = {kUnused, kUnused};
  for (std::size_t k = 0; k < lv.size(); ++k) left_vars_[k] = lv[k];
  for (std::size_t k = 0; k < rv.size(); ++k) right_vars_[k] = rv[k];

  f_ = Polynomial(4);
  for (const auto& term : p.terms()) {
    std::vector<std::uint8_t> e(4, 0);
    for (std::size_t k = 0; k < 2; ++k) {
      if (left_vars_[k] != kUnused) e[k] = term.exps[left_vars_[k]];
      if (right_vars_[k] != kUnused) e[2 + k] = term.exps[spec.d_left + right_vars_[k]];
    }
    f_.add_term(negate ? Rational(-term.coef) : term.coef, std::move(e));
  }
}

Point2 PlanarPolynomial::left_point(std::span<const Rational> features) const {
  Point2 p;
  if (left_vars_[0] != kUnused) p.x = features[left_vars_[0]];
  if (left_vars_[1] != kUnused) p.y = features[left_vars_[1]];
  return p;
}

Point2 PlanarPolynomial::right_point(std::span<const Rational> features) const {
  Point2 p;
  if (right_vars_[0] != kUnused) p.x = features[right_vars_[0]];
  if (right_vars_[1] != kUnused) p.y = features[right_vars_[1]];
  return p;
}

QuadraticForm PlanarPolynomial::restrict(bool fix_left, const Point2& fixed) const {
  const std::size_t fo = fix_left ? 0 : 2;
  const std::size_t vo = fix_left ? 2 : 0;
  Rational sq1 = 0, sq2 = 0, cross = 0;
  QuadraticForm q{0, 0, 0, 0};
  for (const auto& t : f_.terms()) {
    Rational c = t.coef;
    for (unsigned k = 0; k < t.exps[fo]; ++k) c *= fixed.x;
    for (unsigned k = 0; k < t.exps[fo + 1]; ++k) c *= fixed.y;
    unsigned e1 = t.exps[vo], e2 = t.exps[vo + 1];
    if (e1 == 2 && e2 == 0) sq1 += c;
    else if (e1 == 0 && e2 == 2) sq2 += c;
    else if (e1 == 1 && e2 == 1) cross += c;
    else if (e1 == 1 && e2 == 0) q.b += c;
    else if (e1 == 0 && e2 == 1) q.c += c;
    else if (e1 == 0 && e2 == 0) q.d += c;
    else throw std::invalid_argument("range boundary has degree above two");
  }
  if (sq1 != sq2 || cross != 0)
    throw std::invalid_argument("range is neither a disk nor a halfplane");
  q.a = sq1;
  return q;
}

QuadraticForm PlanarPolynomial::range_of_left(const Point2& p) const { return restrict(true, p); }
QuadraticForm PlanarPolynomial::range_of_right(const Point2& s) const { return restrict(false, s); }

Rational PlanarPolynomial::evaluate(const Point2& p, const Point2& s) const {
  std::array<Rational, 4> v{p.x, p.y, s.x, s.y};
  return f_.evaluate(v);
}

}  // namespace geolabel
