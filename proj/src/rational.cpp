#include "geolabel/rational.hpp"

#include <stdexcept>

namespace geolabel {

namespace {

nlohmann::json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

mpz_class integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class{static_cast<long>(j.get<std::int64_t>())};
  if (j.is_string()) return mpz_class{j.get<std::string>()};
  throw std::invalid_argument("rational component must be an integer or decimal string");
}

}  // namespace

nlohmann::json rational_to_json(const Rational& q) {
  return nlohmann::json::array({integer_to_json(q.get_num()), integer_to_json(q.get_den())});
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational{integer_from_json(j)};
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("rational must be a [numerator, denominator] pair");
  mpz_class num = integer_from_json(j[0]);
  mpz_class den = integer_from_json(j[1]);
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q{num, den};
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

mpz_class floor_of(const Rational& q) {
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

std::optional<ScaledIntegers> scale_to_integers(std::span<const Rational> values, int max_bits) {
  mpz_class den = 1;
  for (const auto& v : values) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    if (mpz_sizeinbase(den.get_mpz_t(), 2) > static_cast<std::size_t>(max_bits)) return std::nullopt;
  }
  ScaledIntegers out;
  out.denominator = den;
  out.values.reserve(values.size());
  for (const auto& v : values) {
    mpz_class scaled = v.get_num() * (den / v.get_den());
    if (mpz_sizeinbase(scaled.get_mpz_t(), 2) > static_cast<std::size_t>(max_bits)) return std::nullopt;
    out.values.push_back(scaled.get_si());
  }
  return out;
}

}  // namespace geolabel
