#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "geolabel/rational.hpp"

namespace geolabel {

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  struct Term {
    Rational coef;
    std::vector<std::uint8_t> exps;
  };

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  std::size_t nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Adds coef * prod x_i^exps[i]; like terms are merged.
  Polynomial& add_term(const Rational& coef, std::vector<std::uint8_t> exps);

  Rational evaluate(std::span<const Rational> values) const;
  int sign_at(std::span<const Rational> values) const { return sgn(evaluate(values)); }

  unsigned degree() const;
  bool uses_var(std::size_t i) const;

  Polynomial operator-() const;

  // Convenience constructors.
  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);

  /// {"nvars": k, "terms": [{"coef": [num, den], "exps": [...]}, ...]}
  nlohmann::json to_json() const;
  static Polynomial from_json(const nlohmann::json& j);

 private:
  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

}  // namespace geolabel
