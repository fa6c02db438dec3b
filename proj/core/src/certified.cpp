#include "almostsq/certified.hpp"

#include <stdexcept>

#include "almostsq/exact_arith.hpp"

namespace almostsq {

namespace {

// Exponent denominators above this make the scaled radicand impractically large.
constexpr unsigned long kMaxExponentDenominator = 1000;

Rational ratio(const mpz_class& num, const mpz_class& den) { return Rational(mpq_class(num, den)); }

}  // namespace

Enclosure operator+(const Enclosure& l, const Enclosure& r) { return {l.lo + r.lo, l.hi + r.hi}; }

Enclosure operator-(const Enclosure& l, const Enclosure& r) { return {l.lo - r.hi, l.hi - r.lo}; }

Enclosure operator*(const Enclosure& e, const Rational& s) {
  if (s.sign() >= 0) return {e.lo * s, e.hi * s};
  return {e.hi * s, e.lo * s};
}

Enclosure mul_nonneg(const Enclosure& l, const Enclosure& r) {
  if (l.lo.sign() < 0 || r.lo.sign() < 0) throw std::domain_error("mul_nonneg: negative operand");
  return {l.lo * r.lo, l.hi * r.hi};
}

Enclosure power_enclosure(const BigNat& x, const Rational& exponent, unsigned digits) {
  const mpz_class p = exponent.num();
  const mpz_class r = exponent.den();
  if (sgn(p) == 0) return Enclosure::point(Rational(1));
  if (cmp(r, kMaxExponentDenominator) > 0) {
    throw std::invalid_argument("exponent denominator too large: " + exponent.to_string());
  }
  if (sgn(p) < 0) {
    if (x.is_zero()) throw std::domain_error("power_enclosure: zero to a negative power");
    const Enclosure pos = power_enclosure(x, -exponent, digits);
    return {Rational(1) / pos.hi, Rational(1) / pos.lo};
  }
  if (!p.fits_ulong_p()) throw std::invalid_argument("exponent numerator too large");
  const unsigned long root = r.get_ui();

  mpz_class radicand;
  mpz_pow_ui(radicand.get_mpz_t(), x.mpz().get_mpz_t(), p.get_ui());
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class scale_r;
  mpz_pow_ui(scale_r.get_mpz_t(), scale.get_mpz_t(), root);
  radicand *= scale_r;

  mpz_class floor_root;
  const bool exact = mpz_root(floor_root.get_mpz_t(), radicand.get_mpz_t(), root) != 0;
  Rational lo = ratio(floor_root, scale);
  if (exact) return {lo, lo};
  return {lo, ratio(floor_root + 1, scale)};
}

Enclosure sqrt_enclosure(const BigNat& x, unsigned digits) { return power_enclosure(x, Rational(1, 2), digits); }

mpz_class certified_floor(const std::function<Enclosure(unsigned)>& make, Fallback fallback) {
  mpz_class lo_floor, hi_floor;
  for (unsigned digits = kFirstDigits; digits <= kMaxDigits; digits *= 2) {
    const Enclosure e = make(digits);
    lo_floor = floor(e.lo);
    hi_floor = floor(e.hi);
    if (lo_floor == hi_floor) return lo_floor;
  }
  return fallback == Fallback::kLower ? lo_floor : hi_floor;
}

mpz_class certified_ceil(const std::function<Enclosure(unsigned)>& make, Fallback fallback) {
  mpz_class lo_ceil, hi_ceil;
  for (unsigned digits = kFirstDigits; digits <= kMaxDigits; digits *= 2) {
    const Enclosure e = make(digits);
    lo_ceil = ceil(e.lo);
    hi_ceil = ceil(e.hi);
    if (lo_ceil == hi_ceil) return lo_ceil;
  }
  return fallback == Fallback::kLower ? lo_ceil : hi_ceil;
}

int certified_compare(const std::function<Enclosure(unsigned)>& make, const Rational& threshold) {
  for (unsigned digits = kFirstDigits; digits <= kMaxDigits; digits *= 2) {
    const Enclosure e = make(digits);
    if (e.lo > threshold) return 1;
    if (e.hi < threshold) return -1;
    if (e.exact()) return 0;
  }
  return 0;
}

}  // namespace almostsq
