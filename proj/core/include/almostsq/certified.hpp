#pragma once

// Rational enclosures of irrational quantities such as sqrt(x) and x^theta.
//
// An Enclosure [lo, hi] always contains the true value. Enclosures are built
// from exact integer roots, so they are certified rather than estimated; a
// decision that cannot be made at one precision is retried at a higher one.

#include <functional>

#include "almostsq/numbers.hpp"

namespace almostsq {

struct Enclosure {
  Rational lo;
  Rational hi;

  [[nodiscard]] bool exact() const { return lo == hi; }
  [[nodiscard]] Rational width() const { return hi - lo; }

  static Enclosure point(const Rational& v) { return {v, v}; }
};

Enclosure operator+(const Enclosure& l, const Enclosure& r);
Enclosure operator-(const Enclosure& l, const Enclosure& r);
/// Product with a rational scalar of either sign.
Enclosure operator*(const Enclosure& e, const Rational& s);
/// Product of two enclosures of nonnegative values.
Enclosure mul_nonneg(const Enclosure& l, const Enclosure& r);

/// Encloses x^exponent for x >= 1 (x >= 0 when exponent >= 0), width <= 10^-digits
/// times a factor that is at most 1 for exponent >= 0. Exact whenever x is a
/// perfect power matching the exponent's denominator.
Enclosure power_enclosure(const BigNat& x, const Rational& exponent, unsigned digits);

/// Encloses sqrt(x).
Enclosure sqrt_enclosure(const BigNat& x, unsigned digits);

/// Precision schedule used by the certified decisions below.
inline constexpr unsigned kFirstDigits = 24;
inline constexpr unsigned kMaxDigits = 384;

/// What to return when the value stays on an integer boundary at maximum precision.
enum class Fallback { kLower, kUpper };

/// floor(value) where `make(digits)` encloses value.
mpz_class certified_floor(const std::function<Enclosure(unsigned)>& make, Fallback fallback);
/// ceil(value) where `make(digits)` encloses value.
mpz_class certified_ceil(const std::function<Enclosure(unsigned)>& make, Fallback fallback);

/// Sign of (value - threshold): -1, 0 or +1. Returns 0 only when equality is
/// proven (both sides exact) or undecidable at maximum precision.
int certified_compare(const std::function<Enclosure(unsigned)>& make, const Rational& threshold);

}  // namespace almostsq
