#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace geolabel {

using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational q{mpz_class{static_cast<long>(num)}, mpz_class{static_cast<long>(den)}};
  q.canonicalize();
  return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational midpoint(const Rational& lo, const Rational& hi) { return (lo + hi) / 2; }

// Coordinates travel as [numerator, denominator]; entries that overflow
// int64 are written as decimal strings.
nlohmann::json rational_to_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

std::string to_string(const Rational& q);

/// Floor of a rational as a (possibly large) integer.
mpz_class floor_of(const Rational& q);

/// Common-denominator integer view of a set of rationals, available when
/// every scaled value fits comfortably in 62 bits. Used by hot oracle loops.
struct ScaledIntegers {
  std::vector<std::int64_t> values;
  mpz_class denominator;
};

std::optional<ScaledIntegers> scale_to_integers(std::span<const Rational> values,
                                                int max_bits = 40);

}  // namespace geolabel
