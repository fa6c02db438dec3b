#pragma once

// Exact integer kernels. Every accept/reject decision about the distance from
// a square root to the nearest integer goes through these functions; the
// FixedPoint values are for display only.

#include <cstdint>

#include "almostsq/numbers.hpp"

namespace almostsq {

/// floor(sqrt(m)).
BigNat isqrt(const BigNat& m);

/// True iff m is a perfect square.
bool is_square(const BigNat& m);

/// The integer D nearest to sqrt(m). Ties cannot occur: 4m is even while
/// (2s+1)^2 is odd.
BigNat nearest_sqrt_int(const BigNat& m);

/// Decides ||sqrt(m)|| < num/den exactly. Requires den > 0 and num/den < 1/2.
bool sqrt_dist_lt(const BigNat& m, const BigNat& num, const BigNat& den);

/// sqrt(m) rounded to `digits` decimal places; absolute error <= 10^-digits / 2.
FixedPoint sqrt_fixed(const BigNat& m, unsigned digits);

/// Jacobi symbol (h/q) for odd q >= 1. Throws std::invalid_argument on even q.
int jacobi(std::int64_t h, std::int64_t q);

/// h^-1 mod q in [1, q). Throws std::invalid_argument if gcd(h, q) != 1 or q < 2.
std::int64_t mod_inverse(std::int64_t h, std::int64_t q);

/// (a * b) mod m for 0 <= a, b < m.
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

}  // namespace almostsq
