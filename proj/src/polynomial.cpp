#include "geolabel/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace geolabel {

Polynomial& Polynomial::add_term(const Rational& coef, std::vector<std::uint8_t> exps) {
  if (exps.size() != nvars_) throw std::invalid_argument("monomial arity does not match polynomial");
  if (coef == 0) return *this;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->exps == exps) {
      it->coef += coef;
      if (it->coef == 0) terms_.erase(it);
      return *this;
    }
  }
  terms_.push_back({coef, std::move(exps)});
  return *this;
}

Rational Polynomial::evaluate(std::span<const Rational> values) const {
  if (values.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
  Rational acc = 0;
  Rational mono;
  for (const auto& t : terms_) {
    mono = t.coef;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned e = 0; e < t.exps[i]; ++e) mono *= values[i];
    acc += mono;
  }
  return acc;
}

unsigned Polynomial::degree() const {
  unsigned best = 0;
  for (const auto& t : terms_) {
    unsigned d = 0;
    for (auto e : t.exps) d += e;
    best = std::max(best, d);
  }
  return best;
}

bool Polynomial::uses_var(std::size_t i) const {
  return std::any_of(terms_.begin(), terms_.end(), [i](const Term& t) { return t.exps[i] > 0; });
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coef = -t.coef;
  return out;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(c, std::vector<std::uint8_t>(nvars, 0));
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  Polynomial p(nvars);
  std::vector<std::uint8_t> e(nvars, 0);
  e.at(i) = 1;
  p.add_term(1, std::move(e));
  return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  Polynomial out = a;
  for (const auto& t : b.terms_) out.add_term(t.coef, t.exps);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  Polynomial out(a.nvars_);
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      std::vector<std::uint8_t> e(a.nvars_);
      for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = s.exps[i] + t.exps[i];
      out.add_term(s.coef * t.coef, std::move(e));
    }
  }
  return out;
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
  Polynomial out(p.nvars_);
  for (const auto& t : p.terms_) out.add_term(c * t.coef, t.exps);
  return out;
}

nlohmann::json Polynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    std::vector<int> e(t.exps.begin(), t.exps.end());
    terms.push_back({{"coef", rational_to_json(t.coef)}, {"exps", e}});
  }
  return {{"nvars", nvars_}, {"terms", terms}};
}

Polynomial Polynomial::from_json(const nlohmann::json& j) {
  Polynomial p(j.at("nvars").get<std::size_t>());
  for (const auto& t : j.at("terms")) {
    auto e = t.at("exps").get<std::vector<int>>();
    std::vector<std::uint8_t> exps;
    for (int v : e) {
      if (v < 0 || v > 255) throw std::invalid_argument("monomial exponent out of range");
      exps.push_back(static_cast<std::uint8_t>(v));
    }
    p.add_term(rational_from_json(t.at("coef")), std::move(exps));
  }
  return p;
}

}  // namespace geolabel
