#include "almostsq/exact_arith.hpp"

#include <cassert>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace almostsq {

BigNat isqrt(const BigNat& m) {
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), m.mpz().get_mpz_t());
  return BigNat(std::move(s));
}

bool is_square(const BigNat& m) { return mpz_perfect_square_p(m.mpz().get_mpz_t()) != 0; }

BigNat nearest_sqrt_int(const BigNat& m) {
  BigNat s = isqrt(m);
  // Compare 4m with (2s+1)^2, the square of the midpoint s + 1/2.
  const mpz_class four_m = m.mpz() * 4;
  const mpz_class mid = 2 * s.mpz() + 1;
  const mpz_class mid_sq = mid * mid;
  assert(cmp(four_m, mid_sq) != 0);
  if (cmp(four_m, mid_sq) < 0) return s;
  return s + BigNat(1);
}

bool sqrt_dist_lt(const BigNat& m, const BigNat& num, const BigNat& den) {
  if (den.is_zero()) throw std::invalid_argument("sqrt_dist_lt: zero denominator");
  if (cmp(2 * num.mpz(), den.mpz()) >= 0) {
    throw std::invalid_argument("sqrt_dist_lt: threshold must be below 1/2");
  }
  const BigNat nearest = nearest_sqrt_int(m);
  const mpz_class lhs = m.mpz() * den.mpz() * den.mpz();
  const mpz_class scaled = nearest.mpz() * den.mpz();
  const mpz_class d_sq = nearest.mpz() * nearest.mpz();
  if (cmp(m.mpz(), d_sq) >= 0) {
    // sqrt(m) >= D: need sqrt(m) < D + num/den.
    const mpz_class upper = scaled + num.mpz();
    return cmp(lhs, upper * upper) < 0;
  }
  // sqrt(m) < D: need sqrt(m) > D - num/den, where D - num/den > 0 since D >= 1.
  const mpz_class lower = scaled - num.mpz();
  return cmp(lhs, lower * lower) > 0;
}

FixedPoint sqrt_fixed(const BigNat& m, unsigned digits) {
  if (digits == 0) throw std::invalid_argument("sqrt_fixed: digits must be >= 1");
  const BigNat scaled = m * pow10(2 * digits);
  return {nearest_sqrt_int(scaled).mpz(), digits};
}

int jacobi(std::int64_t h, std::int64_t q) {
  if (q <= 0 || q % 2 == 0) throw std::invalid_argument("jacobi: modulus must be odd and positive");
  std::int64_t a = h % q;
  if (a < 0) a += q;
  std::int64_t n = q;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::int64_t mod_inverse(std::int64_t h, std::int64_t q) {
  if (q < 2) throw std::invalid_argument("mod_inverse: modulus must be >= 2");
  std::int64_t a = h % q;
  if (a < 0) a += q;
  // Extended Euclid on (a, q).
  std::int64_t old_r = a, r = q;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    old_r = std::exchange(r, old_r - quot * r);
    old_s = std::exchange(s, old_s - quot * s);
  }
  if (old_r != 1) throw std::invalid_argument("mod_inverse: arguments are not coprime");
  std::int64_t inv = old_s % q;
  if (inv < 0) inv += q;
  return inv;
}

}  // namespace almostsq
