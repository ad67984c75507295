#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "geolabel/geometry.hpp"
#include "geolabel/polynomial.hpp"

namespace geolabel {

// Sign atoms are numbered 1..3t: for polynomial i (1-based), atom 3(i-1)+1 is
// f_i < 0, +2 is f_i = 0 and +3 is f_i <= 0.
constexpr int atom_less(int i) { return 3 * (i - 1) + 1; }
constexpr int atom_equal(int i) { return 3 * (i - 1) + 2; }
constexpr int atom_less_equal(int i) { return 3 * (i - 1) + 3; }

/// Boolean expression tree over sign atoms.
class BoolExpr {
 public:
  enum class Op { constant, atom, negate, all, any };

  BoolExpr() = default;
  static BoolExpr constant(bool value);
  static BoolExpr atom(int index);
  static BoolExpr negate(BoolExpr e);
  static BoolExpr all(std::vector<BoolExpr> args);
  static BoolExpr any(std::vector<BoolExpr> args);
  static BoolExpr exclusive(BoolExpr a, BoolExpr b);

  Op op() const { return op_; }
  int index() const { return index_; }
  const std::vector<BoolExpr>& args() const { return args_; }

  template <class AtomFn>
  bool eval(AtomFn&& atom_value) const {
    switch (op_) {
      case Op::constant: return value_;
      case Op::atom: return atom_value(index_);
      case Op::negate: return !args_[0].eval(atom_value);
      case Op::all:
        for (const auto& a : args_)
          if (!a.eval(atom_value)) return false;
        return true;
      case Op::any:
        for (const auto& a : args_)
          if (a.eval(atom_value)) return true;
        return false;
    }
    return false;
  }

  int max_atom() const;
  int min_atom() const;
  /// True if some atom with (index - 1) % 3 in {1, 2} occurs, i.e. the
  /// expression needs the sign of -f as well as the sign of f.
  bool uses_non_strict() const;

  nlohmann::json to_json() const;
  static BoolExpr from_json(const nlohmann::json& j);

 private:
  Op op_ = Op::constant;
  bool value_ = false;
  int index_ = 0;
  std::vector<BoolExpr> args_;
};

struct PredicateSpec {
  std::size_t d_left = 0;
  std::size_t d_right = 0;
  std::vector<Polynomial> polys;  // over (x_1..x_dL, y_1..y_dR)
  BoolExpr phi;
  /// Phi(u, v) == Phi(v, u) for all inputs. Otherwise adjacency is
  /// Phi(u, v) or Phi(v, u).
  bool symmetric = true;

  std::size_t t() const { return polys.size(); }

  /// Throws std::invalid_argument on arity, degree or atom-range violations.
  void validate() const;

  nlohmann::json to_json() const;
  static PredicateSpec from_json(const nlohmann::json& j);
};

/// Exact sign of f_i(u, v); i is 1-based.
int eval_sign(const PredicateSpec& spec, std::size_t i, std::span<const Rational> u,
              std::span<const Rational> v);

/// Phi evaluated on the sign atoms of (u, v).
bool predicate_holds(const PredicateSpec& spec, std::span<const Rational> u,
                     std::span<const Rational> v);

/// Undirected adjacency induced by the predicate.
bool predicate_adjacent(const PredicateSpec& spec, std::span<const Rational> u,
                        std::span<const Rational> v);

/// Checks Phi(u, v) == Phi(v, u) over all ordered pairs of the samples.
bool symmetric_on(const PredicateSpec& spec, std::span<const std::vector<Rational>> samples);

// Built-in predicates.
PredicateSpec unit_disk_predicate();         // 4 - |x - y|^2 >= 0
PredicateSpec point_halfplane_predicate();   // left (px, py), right (a, b): py - a px - b >= 0
PredicateSpec segment_predicate();           // features (m, q, cx, cy, dx, dy)

/// a (z1^2 + z2^2) + b z1 + c z2 + d; the range is the set where it is >= 0.
struct QuadraticForm {
  Rational a, b, c, d;
  Rational operator()(const Point2& z) const { return a * (z.x * z.x + z.y * z.y) + b * z.x + c * z.y + d; }
};

/// One polynomial of a predicate viewed as a function of two planar points:
/// each role uses at most two of its coordinates.
class PlanarPolynomial {
 public:
  /// i is 1-based; with negate the view is of -f_i.
  PlanarPolynomial(const PredicateSpec& spec, std::size_t i, bool negate = false);

  Point2 left_point(std::span<const Rational> features) const;
  Point2 right_point(std::span<const Rational> features) const;

  /// { y : f(p, y) >= 0 } for a fixed left point p.
  QuadraticForm range_of_left(const Point2& p) const;
  /// { x : f(x, s) >= 0 } for a fixed right point s.
  QuadraticForm range_of_right(const Point2& s) const;

  Rational evaluate(const Point2& p, const Point2& s) const;

  const std::array<std::size_t, 2>& left_vars() const { return left_vars_; }
  const std::array<std::size_t, 2>& right_vars() const { return right_vars_; }

 private:
  QuadraticForm restrict(bool fix_left, const Point2& fixed) const;

  std::array<std::size_t, 2> left_vars_{};
  std::array<std::size_t, 2> right_vars_{};
  Polynomial f_;  // over (u1, u2, v1, v2)
};

}  // namespace geolabel
