#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "almostsq/almost_square.hpp"
#include "almostsq/certified.hpp"
#include "almostsq/errors.hpp"
#include "oracles.hpp"

using namespace almostsq;

namespace {

SearchWindow window(std::uint64_t x, Rational theta = Rational(1, 4), Rational c2 = Rational(2)) {
  return search_window(BigNat(x), theta, c2);
}

}  // namespace

TEST(SearchWindow, Examples) {
  auto w = window(1'000'000);
  EXPECT_EQ(w.lo, BigNat(937));
  EXPECT_EQ(w.hi, BigNat(1063));
  w = window(1'000'000, Rational(0), Rational(1));
  EXPECT_EQ(w.lo, BigNat(999));
  EXPECT_EQ(w.hi, BigNat(1001));
  w = window(1000);
  EXPECT_EQ(w.lo, BigNat(21));
  EXPECT_EQ(w.hi, BigNat(42));
}

TEST(SearchWindow, Preconditions) {
  EXPECT_THROW(window(1000, Rational(1, 2)), std::invalid_argument);
  EXPECT_THROW(window(1000, Rational(-1, 4)), std::invalid_argument);
  EXPECT_THROW(window(1000, Rational(1, 4), Rational(0)), std::invalid_argument);
  // sqrt(2) +- 0.1 holds no integer.
  EXPECT_THROW(window(2, Rational(0), Rational(1, 10)), std::invalid_argument);
}

TEST(SearchWindow, MatchesDecimalBounds) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t x = 100 + rng() % 100'000'000;
    const auto w = window(x, Rational(1, 4), Rational(2));
    const oracle::Dec r = sqrt(oracle::Dec(x));
    const oracle::Dec half = 2 * pow(oracle::Dec(x), oracle::Dec(0.25));
    EXPECT_EQ(w.lo.to_string(), oracle::BigInt(ceil(r - half)).str()) << x;
    EXPECT_EQ(w.hi.to_string(), oracle::BigInt(floor(r + half)).str()) << x;
  }
}

TEST(BruteForceNearest, Examples) {
  auto r = brute_force_nearest(BigNat(1000), window(1000));
  EXPECT_EQ(r.a, BigNat(25));
  EXPECT_EQ(r.b, BigNat(40));
  EXPECT_EQ(r.n, BigNat(1000));
  EXPECT_EQ(r.offset, BigNat(0));

  r = brute_force_nearest(BigNat(997), window(997));
  EXPECT_EQ(r.a, BigNat(27));
  EXPECT_EQ(r.b, BigNat(37));
  EXPECT_EQ(r.n, BigNat(999));
  EXPECT_EQ(r.offset, BigNat(2));
  ASSERT_TRUE(r.D && r.d);
  EXPECT_EQ(*r.D, BigNat(32));
  EXPECT_EQ(*r.d, BigNat(5));

  for (std::uint64_t k : {5ULL, 123ULL, 99991ULL}) {
    SearchWindow w{BigNat(k * k), Rational(0), Rational(1), BigNat(k - 1), BigNat(k + 1)};
    r = brute_force_nearest(BigNat(k * k), w);
    EXPECT_EQ(r.a, BigNat(k));
    EXPECT_EQ(r.b, BigNat(k));
    EXPECT_EQ(r.offset, BigNat(0));
  }
}

TEST(BruteForceNearest, MatchesExhaustiveScan) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t x = 1000 + rng() % 2'000'000;
    const auto w = window(x);
    const auto r = brute_force_nearest(BigNat(x), w);
    const auto o = oracle::exhaustive_scan(x, w.lo.to_u64(), w.hi.to_u64());
    EXPECT_EQ(r.offset.to_u64(), o.offset) << x;
    EXPECT_EQ(r.a.to_u64(), o.a) << x;
    EXPECT_EQ(r.b.to_u64(), o.b) << x;
  }
}

TEST(BruteForceNearest, BigIntegerPathAgreesWithSmallOne) {
  // Beyond 64 bits: x = 10^40 + 12345, factors near 10^20.
  const BigNat x = BigNat::parse("10000000000000000000000000000000000012345");
  const auto w = search_window(x, Rational(0), Rational(3));
  const auto r = brute_force_nearest(x, w);
  EXPECT_LE(w.lo, r.a);
  EXPECT_LE(r.b, w.hi);
  EXPECT_EQ(r.n, r.a * r.b);
  EXPECT_EQ(r.offset, absdiff(x, r.n));
  EXPECT_EQ(r.offset, BigNat(12345));  // 10^20 * 10^20
}

TEST(DSearch, Examples) {
  auto r = d_search(BigNat(1'000'000), BigNat(0), BigNat(63));
  EXPECT_EQ(*r.d, BigNat(0));
  EXPECT_EQ(*r.D, BigNat(1000));
  EXPECT_EQ(r.offset, BigNat(0));

  r = d_search(BigNat(997), BigNat(0), BigNat(5));
  EXPECT_EQ(*r.d, BigNat(5));
  EXPECT_EQ(*r.D, BigNat(32));
  EXPECT_EQ(r.n, BigNat(999));
  EXPECT_EQ(r.offset, BigNat(2));

  r = d_search(BigNat(26), BigNat(0), BigNat(0));
  EXPECT_EQ(*r.d, BigNat(0));
  EXPECT_EQ(*r.D, BigNat(5));
  EXPECT_EQ(r.n, BigNat(25));
  EXPECT_EQ(r.offset, BigNat(1));
}

TEST(DSearch, OffsetsPerD) {
  // Offsets for d = 0..5 at x = 997 are 27, 26, 23, 18, 11, 2.
  const std::uint64_t expected[] = {27, 26, 23, 18, 11, 2};
  for (std::uint64_t d = 0; d <= 5; ++d) {
    EXPECT_EQ(d_search(BigNat(997), BigNat(d), BigNat(d)).offset, BigNat(expected[d])) << d;
  }
}

TEST(DSearch, RejectsEmptyRange) { EXPECT_THROW(d_search(BigNat(997), BigNat(5), BigNat(4)), std::invalid_argument); }

TEST(DSearch, OracleDominance) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t x = 10'000 + rng() % 990'000;
    const auto w = window(x);
    const auto brute = brute_force_nearest(BigNat(x), w);
    const auto ds = d_search_in_window(BigNat(x), w);
    EXPECT_LE(brute.offset, ds.offset) << x;
    EXPECT_LE(w.lo, ds.a);
    EXPECT_LE(ds.b, w.hi);
    // Same-parity pairs only.
    EXPECT_EQ((ds.b - ds.a).is_odd(), false);
  }
}

TEST(DSearch, QuarterExponentBound) {
  // offset <= 10 x^(1/4) with d <= 2 x^(1/4).
  for (const auto& x : std::vector<std::uint64_t>{10'000, 12'345, 99'999, 1'000'003, 31'415'926, 99'999'989}) {
    const BigNat bx(x);
    const mpz_class dmax = certified_floor(
        [&](unsigned digits) { return power_enclosure(bx, Rational(1, 4), digits) * Rational(2); }, Fallback::kLower);
    const auto r = d_search(bx, BigNat(0), BigNat(dmax));
    EXPECT_LE(static_cast<double>(r.offset.to_u64()), 10 * std::pow(static_cast<double>(x), 0.25)) << x;
  }
}

TEST(ConditionalFind, Example997) {
  const auto c = conditional_find(BigNat(997), Rational(3, 10), Rational(1, 100));
  EXPECT_EQ(c.N, BigNat(7));
  EXPECT_NEAR(c.lambda.to_double(), 0.4247, 1e-4);
  EXPECT_NEAR(c.delta.to_double(), 0.1447, 1e-4);
  EXPECT_EQ(*c.result.d, BigNat(5));
  EXPECT_EQ(*c.result.D, BigNat(32));
  EXPECT_EQ(c.result.n, BigNat(999));
  EXPECT_EQ(c.result.offset, BigNat(2));
}

TEST(ConditionalFind, PerfectSquares) {
  auto c = conditional_find(BigNat(1'000'000), Rational(7, 25), Rational(1, 100));
  EXPECT_EQ(*c.result.d, BigNat(0));
  EXPECT_EQ(c.result.offset, BigNat(0));
  for (std::uint64_t k : {50ULL, 317ULL, 4001ULL}) {
    c = conditional_find(BigNat(k * k), Rational(29, 100), Rational(1, 100));
    EXPECT_EQ(c.result.offset, BigNat(0)) << k;
  }
}

TEST(ConditionalFind, Preconditions) {
  EXPECT_THROW(conditional_find(BigNat(997), Rational(1, 4), Rational(1, 100)), std::invalid_argument);
  EXPECT_THROW(conditional_find(BigNat(997), Rational(1, 3), Rational(1, 100)), std::invalid_argument);
  EXPECT_THROW(conditional_find(BigNat(997), Rational(3, 10), Rational(0)), std::invalid_argument);
  EXPECT_THROW(conditional_find(BigNat(997), Rational(3, 10), Rational(3, 20)), std::invalid_argument);
}

TEST(ConditionalFind, OffsetWithinPredictedScale) {
  std::mt19937_64 rng(24);
  int found = 0;
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t x = 1000 + rng() % 10'000'000;
    try {
      const auto c = conditional_find(BigNat(x), Rational(3, 10), Rational(1, 100));
      ++found;
      const double bound = 10 * std::pow(static_cast<double>(x), 0.5 - 0.3 + 0.01);
      EXPECT_LE(static_cast<double>(c.result.offset.to_u64()), bound) << x;
      EXPECT_EQ(c.result.n, *c.result.D * *c.result.D - *c.result.d * *c.result.d);
    } catch (const NoCandidate&) {
    }
  }
  EXPECT_GT(found, 150);
}

TEST(TaylorError, Examples) {
  EXPECT_NEAR(taylor_error(BigNat(100'000'000), BigNat(100), 8).to_double(), 1.25e-5, 1e-7);
  EXPECT_NEAR(taylor_error(BigNat(1'000'000), BigNat(10), 8).to_double(), 1.25e-6, 1e-8);
  EXPECT_EQ(taylor_error(BigNat(12345), BigNat(0), 8).to_string(), "0.00000000");
}

TEST(TaylorError, BoundedByQuarticTerm) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t x = 100 + rng() % 1'000'000'000;
    const auto dmax = static_cast<std::uint64_t>(std::pow(static_cast<double>(x), 0.3));
    const std::uint64_t d = rng() % (dmax + 1);
    const FixedPoint err = taylor_error(BigNat(x), BigNat(d), 20);
    // err <= d^4 / x^(3/2)  <=>  err^2 x^3 <= d^8, exactly.
    const mpq_class e = err.exact().mpq();
    const mpz_class xz(std::to_string(x));
    const mpz_class dz(std::to_string(d));
    mpz_class d8, x3;
    mpz_pow_ui(d8.get_mpz_t(), dz.get_mpz_t(), 8);
    mpz_pow_ui(x3.get_mpz_t(), xz.get_mpz_t(), 3);
    EXPECT_LE(e * e * x3, mpq_class(d8)) << x << " " << d;
  }
}

TEST(DiffOfSquares, Examples) {
  auto r = diff_of_squares_check(BigNat(25), BigNat(40));
  EXPECT_EQ(r.s, BigNat(65));
  EXPECT_EQ(r.t, BigNat(15));
  r = diff_of_squares_check(BigNat(27), BigNat(37));
  EXPECT_EQ(r.s, BigNat(64));
  EXPECT_EQ(r.t, BigNat(10));
  r = diff_of_squares_check(BigNat(3), BigNat(3));
  EXPECT_EQ(r.s * r.s - r.t * r.t, BigNat(36));
}

TEST(DiffOfSquares, IdentityOnRandomPairs) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 10000; ++i) {
    BigNat a(mpz_class(std::to_string(rng())) * mpz_class(std::to_string(rng() % 1000 + 1)));
    BigNat b(mpz_class(std::to_string(rng())));
    if (b < a) std::swap(a, b);
    const auto r = diff_of_squares_check(a, b);
    EXPECT_EQ(BigNat(4) * a * b, r.s * r.s - r.t * r.t);
  }
}

TEST(AlmostSquare, WorkerCountDoesNotChangeResults) {
  std::mt19937_64 rng(27);
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t x = 10'000 + rng() % 100'000'000;
    const auto w = window(x);
    const auto one = brute_force_nearest(BigNat(x), w, 1);
    const auto ds_one = d_search_in_window(BigNat(x), w, 1);
    for (unsigned workers : {2U, 4U, 8U}) {
      EXPECT_EQ(brute_force_nearest(BigNat(x), w, workers), one);
      EXPECT_EQ(d_search_in_window(BigNat(x), w, workers), ds_one);
    }
  }
}
