#pragma once

// Almost squares: integers n = a*b with a <= b both close to sqrt(x).
//
// Writing ab = ((a+b)/2)^2 - ((b-a)/2)^2 turns the factor search into a search
// for d such that sqrt(x + d^2) is close to an integer D; then a = D - d and
// b = D + d. The exhaustive window scan is kept alongside as an oracle.

#include <optional>

#include "almostsq/numbers.hpp"

namespace almostsq {

struct AlmostSquare {
  BigNat x;
  BigNat a;
  BigNat b;
  BigNat n;
  BigNat offset;
  /// Set only when a and b have the same parity.
  std::optional<BigNat> D;
  std::optional<BigNat> d;

  /// Builds the record for factors a <= b, filling n, offset and (D, d).
  static AlmostSquare from_factors(const BigNat& x, const BigNat& a, const BigNat& b);

  friend bool operator==(const AlmostSquare&, const AlmostSquare&) = default;
};

/// Integer factor bounds [lo, hi] around sqrt(x) with half-width c2 * x^theta.
struct SearchWindow {
  BigNat x;
  Rational theta;
  Rational c2;
  BigNat lo;
  BigNat hi;
};

/// lo = ceil(sqrt(x) - c2 x^theta), hi = floor(sqrt(x) + c2 x^theta), decided
/// with certified enclosures. Undecidable boundaries shrink the window. lo is
/// clamped to 1. Throws std::invalid_argument for theta outside [0, 1/2),
/// c2 <= 0, or an empty window.
SearchWindow search_window(const BigNat& x, const Rational& theta, const Rational& c2);

/// Exhaustive minimum of |x - ab| over lo <= a <= b <= hi. Ties go to the
/// smaller n, then the smaller a.
AlmostSquare brute_force_nearest(const BigNat& x, const SearchWindow& w, unsigned workers = 1);

/// For d in [d_lo, d_hi] takes D = nearest_sqrt_int(x + d^2) and n = D^2 - d^2,
/// returning the candidate with the smallest |x - n| (ties to the smaller d).
/// Values of d with D <= d are skipped. Throws NoCandidate if every d is skipped.
AlmostSquare d_search(const BigNat& x, const BigNat& d_lo, const BigNat& d_hi, unsigned workers = 1);

/// d_search restricted to candidates whose factors lie inside w, with d
/// ranging over [0, (w.hi - w.lo) / 2]. Every candidate is also a brute-force
/// candidate, so its offset can never beat brute_force_nearest(x, w).
AlmostSquare d_search_in_window(const BigNat& x, const SearchWindow& w, unsigned workers = 1);

struct ConditionalFind {
  AlmostSquare result;
  BigNat N;
  /// Window centre (1 - {sqrt x}) mod 1 and half-width x^-(theta - 2 eps).
  FixedPoint lambda;
  FixedPoint delta;
};

/// Scans d = 0..floor(x^theta) for the first d with {d^2 / (2 sqrt x)} within
/// delta of lambda (mod 1) and returns the almost square built from it.
/// Membership is decided at 30 digits; points within 10^-25 of a window edge
/// count as outside. Requires 1/4 < theta < 1/3, eps > 0 and
/// x^-(1-2 theta) <= delta / 2. Throws NoCandidate when no d qualifies.
ConditionalFind conditional_find(const BigNat& x, const Rational& theta, const Rational& eps);

/// |sqrt(x + d^2) - sqrt(x) - d^2 / (2 sqrt x)| to `digits` places. Requires d^2 < x.
FixedPoint taylor_error(const BigNat& x, const BigNat& d, unsigned digits);

struct DiffOfSquares {
  BigNat s;  // a + b
  BigNat t;  // b - a
};

/// Returns (a + b, b - a) after checking 4ab = s^2 - t^2 exactly.
/// Throws std::invalid_argument if a > b, std::logic_error if the identity fails.
DiffOfSquares diff_of_squares_check(const BigNat& a, const BigNat& b);

}  // namespace almostsq
