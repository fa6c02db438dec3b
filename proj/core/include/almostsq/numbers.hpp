#pragma once

// Exact number types shared by every module: nonnegative big integers,
// rationals for user-supplied parameters, and decimal fixed-point values
// for reporting.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace almostsq {

/// Nonnegative arbitrary-precision integer.
class BigNat {
 public:
  BigNat() = default;

  template <std::integral T>
  BigNat(T v) : value_(mpz_from(v)) {}  // NOLINT(google-explicit-constructor)

  /// Throws std::domain_error if v < 0.
  explicit BigNat(mpz_class v);

  /// Parses a decimal string; throws std::invalid_argument on bad input.
  static BigNat parse(std::string_view text);

  [[nodiscard]] const mpz_class& mpz() const noexcept { return value_; }
  [[nodiscard]] std::string to_string() const { return value_.get_str(); }

  [[nodiscard]] bool fits_u64() const noexcept;
  /// Throws std::overflow_error when the value does not fit.
  [[nodiscard]] std::uint64_t to_u64() const;
  [[nodiscard]] double to_double() const { return value_.get_d(); }
  /// Natural logarithm; valid for values >= 1 of any size.
  [[nodiscard]] double log() const;

  [[nodiscard]] bool is_zero() const noexcept { return sgn(value_) == 0; }
  [[nodiscard]] bool is_odd() const noexcept { return mpz_odd_p(value_.get_mpz_t()) != 0; }

  BigNat& operator+=(const BigNat& o) { value_ += o.value_; return *this; }
  BigNat& operator*=(const BigNat& o) { value_ *= o.value_; return *this; }
  /// Throws std::domain_error if the result would be negative.
  BigNat& operator-=(const BigNat& o);

  friend BigNat operator+(BigNat l, const BigNat& r) { return l += r; }
  friend BigNat operator*(BigNat l, const BigNat& r) { return l *= r; }
  friend BigNat operator-(BigNat l, const BigNat& r) { return l -= r; }
  friend BigNat operator/(const BigNat& l, const BigNat& r);
  friend BigNat operator%(const BigNat& l, const BigNat& r);

  friend bool operator==(const BigNat& l, const BigNat& r) noexcept { return cmp(l.value_, r.value_) == 0; }
  friend std::strong_ordering operator<=>(const BigNat& l, const BigNat& r) noexcept {
    return cmp(l.value_, r.value_) <=> 0;
  }

  friend std::ostream& operator<<(std::ostream& os, const BigNat& v) { return os << v.value_.get_str(); }

 private:
  template <std::integral T>
  static mpz_class mpz_from(T v);

  mpz_class value_;
};

template <std::integral T>
mpz_class BigNat::mpz_from(T v) {
  if constexpr (std::is_signed_v<T>) {
    if (v < 0) throw std::domain_error("BigNat: negative value");
  }
  mpz_class out;
  if constexpr (sizeof(T) <= sizeof(unsigned long)) {
    out = static_cast<unsigned long>(v);
  } else {
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(T), 0, 0, &v);
  }
  return out;
}

/// |a - b|.
BigNat absdiff(const BigNat& a, const BigNat& b);

/// 10^k.
BigNat pow10(unsigned k);

/// Exact rational, used for parameters such as theta, c2, eps, lambda, delta.
class Rational {
 public:
  Rational() = default;
  Rational(long num, long den = 1);  // NOLINT(google-explicit-constructor)
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Accepts "3", "-2", "1/4", "0.28", "1e-3", "2.5e2".
  static Rational parse(std::string_view text);
  /// Exact value of a finite double (every double is a dyadic rational).
  static Rational from_double(double v);

  [[nodiscard]] const mpq_class& mpq() const noexcept { return value_; }
  [[nodiscard]] mpz_class num() const { return value_.get_num(); }
  [[nodiscard]] mpz_class den() const { return value_.get_den(); }
  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] std::string to_string() const { return value_.get_str(); }

  friend Rational operator+(const Rational& l, const Rational& r) { return Rational(mpq_class(l.value_ + r.value_)); }
  friend Rational operator-(const Rational& l, const Rational& r) { return Rational(mpq_class(l.value_ - r.value_)); }
  friend Rational operator*(const Rational& l, const Rational& r) { return Rational(mpq_class(l.value_ * r.value_)); }
  friend Rational operator/(const Rational& l, const Rational& r);
  Rational operator-() const { return Rational(mpq_class(-value_)); }

  friend bool operator==(const Rational& l, const Rational& r) noexcept { return cmp(l.value_, r.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& l, const Rational& r) noexcept {
    return cmp(l.value_, r.value_) <=> 0;
  }

 private:
  mpq_class value_;
};

/// floor and ceil of a rational as signed big integers.
mpz_class floor(const Rational& r);
mpz_class ceil(const Rational& r);

/// Decimal fixed-point value mantissa * 10^-scale.
///
/// Values produced by this library carry an absolute error below one unit in
/// the last place, so printing exactly `scale` digits never overstates the
/// precision.
class FixedPoint {
 public:
  FixedPoint() = default;
  FixedPoint(mpz_class mantissa, unsigned scale) : mantissa_(std::move(mantissa)), scale_(scale) {}

  /// Nearest fixed-point value to r at the given scale (ties away from zero).
  static FixedPoint round(const Rational& r, unsigned scale);

  [[nodiscard]] const mpz_class& mantissa() const noexcept { return mantissa_; }
  [[nodiscard]] unsigned scale() const noexcept { return scale_; }
  [[nodiscard]] Rational exact() const;
  [[nodiscard]] double to_double() const;
  /// Exactly `scale` digits after the point; no exponent notation.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const FixedPoint&, const FixedPoint&) = default;
  friend std::ostream& operator<<(std::ostream& os, const FixedPoint& v) { return os << v.to_string(); }

 private:
  mpz_class mantissa_;
  unsigned scale_ = 0;
};

}  // namespace almostsq
