#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geolabel/labeling.hpp"
#include "geolabel/polynomial.hpp"
#include "geolabel/rational.hpp"

namespace geolabel {

class NotSemilinearError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// coef[0] + sum_i coef[i] * x_i
struct LinearForm {
  std::vector<Rational> coef;

  Rational operator()(std::span<const Rational> x) const;
  std::size_t dim() const { return coef.empty() ? 0 : coef.size() - 1; }
};

/// One strict literal g(x) + h(y) < 0.
struct Literal {
  LinearForm g;
  LinearForm h;
};

/// OR over k clauses of AND over l strict literals; both roles have d
/// coordinates.
struct DNFPredicate {
  std::size_t k = 0;
  std::size_t l = 0;
  std::size_t d = 0;
  std::vector<std::vector<Literal>> clauses;
  bool symmetric = true;

  void validate() const;
  bool holds(std::span<const Rational> x, std::span<const Rational> y) const;
  bool adjacent(std::span<const Rational> u, std::span<const Rational> v) const;

  nlohmann::json to_json() const;
  static DNFPredicate from_json(const nlohmann::json& j);
};

/// f(x, y) = g(x) + h(y); the constant goes to g. Throws NotSemilinearError on
/// a mixed or non-linear monomial.
std::pair<LinearForm, LinearForm> split_linear(const Polynomial& f, std::size_t d_left, std::size_t d_right);

/// Vertices 0..|left|-1 are the left points, the rest the right points; an
/// edge joins p (left) and s (right) iff p_j < s_j on every axis.
LabelSet dominance_labels(std::span<const std::vector<Rational>> left,
                          std::span<const std::vector<Rational>> right, std::size_t l);

LabelSet semilinear_labels(std::span<const std::vector<Rational>> vertices, const DNFPredicate& dnf);

/// Closed axis-aligned box.
struct Box {
  std::vector<Rational> lo;
  std::vector<Rational> hi;
};

bool boxes_intersect(const Box& a, const Box& b);

LabelSet boxicity_labels(std::span<const Box> boxes);

// Presets. Vertex coordinates: interval (a, b) with a < b; permutation (a, b)
// = positions on two parallel lines; circle (s, t) with s < t = chord
// endpoint parameters; boxicity (lo_1, hi_1, ..., lo_d, hi_d).
DNFPredicate interval_dnf();
DNFPredicate permutation_dnf();
DNFPredicate circle_dnf();
DNFPredicate boxicity_dnf(std::size_t d);
DNFPredicate dnf_preset(const std::string& name, std::size_t d = 3);

std::unique_ptr<LabelDecoder> make_dominance_decoder(const SchemeDescriptor& d, std::span<const BitString> labels);
std::unique_ptr<LabelDecoder> make_semilinear_decoder(const SchemeDescriptor& d, std::span<const BitString> labels);
std::unique_ptr<LabelDecoder> make_boxicity_decoder(const SchemeDescriptor& d, std::span<const BitString> labels);

}  // namespace geolabel
