#pragma once

#include <cstdint>
#include <stdexcept>

namespace geolabel {

class ArithmeticOverflow : public std::overflow_error {
 public:
  ArithmeticOverflow() : std::overflow_error("128-bit integer overflow") {}
};

/// 128-bit integer that throws instead of wrapping. Geometry templates run on
/// it when coordinates scale to small integers; callers catch
/// ArithmeticOverflow and rerun on Rational.
class Checked {
 public:
  constexpr Checked() = default;
  constexpr Checked(std::int64_t v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  static constexpr Checked from_raw(__int128 v) {
    Checked c;
    c.v_ = v;
    return c;
  }

  constexpr __int128 raw() const { return v_; }

  friend Checked operator+(Checked a, Checked b) {
    __int128 r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow();
    return from_raw(r);
  }
  friend Checked operator-(Checked a, Checked b) {
    __int128 r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow();
    return from_raw(r);
  }
  friend Checked operator*(Checked a, Checked b) {
    __int128 r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow();
    return from_raw(r);
  }
  Checked operator-() const { return Checked{} - *this; }
  Checked& operator+=(Checked b) { return *this = *this + b; }
  Checked& operator-=(Checked b) { return *this = *this - b; }
  Checked& operator*=(Checked b) { return *this = *this * b; }

  friend constexpr auto operator<=>(Checked a, Checked b) = default;
  friend constexpr bool operator==(Checked a, Checked b) = default;

 private:
  __int128 v_ = 0;
};

/// Split point of [lo, hi]: exact for rationals, floor for integers.
inline Checked midpoint(Checked lo, Checked hi) {
  __int128 s = lo.raw() + hi.raw();
  __int128 q = s / 2;
  if (s < 0 && q * 2 != s) --q;
  return Checked::from_raw(q);
}

}  // namespace geolabel
