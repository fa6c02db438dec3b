#include <gtest/gtest.h>

#include <random>

#include "almostsq/certified.hpp"
#include "almostsq/exact_arith.hpp"
#include "almostsq/numbers.hpp"
#include "oracles.hpp"

using namespace almostsq;

namespace {

BigNat big(const char* s) { return BigNat::parse(s); }

}  // namespace

// ----------------------------------------------------------------- numbers

TEST(BigNat, ParseAndPrint) {
  EXPECT_EQ(big("0").to_string(), "0");
  EXPECT_EQ(big("000123").to_string(), "123");
  EXPECT_EQ(big("123456789012345678901234567890").to_string(), "123456789012345678901234567890");
  EXPECT_THROW(BigNat::parse("-5"), std::invalid_argument);
  EXPECT_THROW(BigNat::parse("12a"), std::invalid_argument);
  EXPECT_THROW(BigNat::parse(""), std::invalid_argument);
  EXPECT_THROW(BigNat(-1), std::domain_error);
}

TEST(BigNat, CheckedSubtraction) {
  EXPECT_EQ(BigNat(10) - BigNat(3), BigNat(7));
  EXPECT_THROW(BigNat(3) - BigNat(10), std::domain_error);
  EXPECT_EQ(absdiff(BigNat(3), BigNat(10)), BigNat(7));
}

TEST(BigNat, U64Boundary) {
  const BigNat max(UINT64_MAX);
  EXPECT_TRUE(max.fits_u64());
  EXPECT_FALSE((max + BigNat(1)).fits_u64());
  EXPECT_EQ(max.to_u64(), UINT64_MAX);
}

TEST(Rational, Parse) {
  EXPECT_EQ(Rational::parse("1/4"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("0.28"), Rational(7, 25));
  EXPECT_EQ(Rational::parse("-2"), Rational(-2));
  EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
  EXPECT_EQ(Rational::parse("2.5E2"), Rational(250));
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(Rational::from_double(0.5), Rational(1, 2));
  const Rational tenth = Rational::from_double(0.1);
  EXPECT_NE(tenth, Rational(1, 10));
  EXPECT_EQ(tenth.to_double(), 0.1);
  EXPECT_THROW(Rational::from_double(std::nan("")), std::domain_error);
}

TEST(Rational, FloorCeil) {
  EXPECT_EQ(floor(Rational(-7, 2)), -4);
  EXPECT_EQ(ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(floor(Rational(6, 3)), 2);
  EXPECT_EQ(ceil(Rational(6, 3)), 2);
}

TEST(FixedPoint, RoundingAndPrinting) {
  EXPECT_EQ(FixedPoint::round(Rational(1, 3), 4).to_string(), "0.3333");
  EXPECT_EQ(FixedPoint::round(Rational(2, 3), 4).to_string(), "0.6667");
  EXPECT_EQ(FixedPoint::round(Rational(1, 8), 2).to_string(), "0.13");
  EXPECT_EQ(FixedPoint::round(Rational(-1, 8), 2).to_string(), "-0.13");
  EXPECT_EQ(FixedPoint::round(Rational(5), 0).to_string(), "5");
  EXPECT_EQ(FixedPoint::round(Rational(-1, 1000), 2).to_string(), "0.00");
  EXPECT_EQ(FixedPoint(mpz_class(-5), 3).to_string(), "-0.005");
}

// ------------------------------------------------------------------- isqrt

TEST(Isqrt, Examples) {
  EXPECT_EQ(isqrt(BigNat(0)), BigNat(0));
  EXPECT_EQ(isqrt(BigNat(26)), BigNat(5));
  EXPECT_EQ(isqrt(big("1000000000000000000")), big("1000000000"));
  const BigNat s = big("1000000007");
  EXPECT_EQ(isqrt(s * s - BigNat(1)), big("1000000006"));
}

TEST(Isqrt, BracketsOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    mpz_class m;
    mpz_class w(static_cast<unsigned long>(rng()));
    m = w * w * w + static_cast<unsigned long>(rng() % 1000);
    const BigNat x(m);
    const BigNat s = isqrt(x);
    EXPECT_LE(s * s, x);
    EXPECT_LT(x, (s + BigNat(1)) * (s + BigNat(1)));
    EXPECT_EQ(s.to_string(), oracle::newton_isqrt(oracle::BigInt(x.to_string())).str());
  }
}

TEST(IsSquare, Basic) {
  EXPECT_TRUE(is_square(BigNat(0)));
  EXPECT_TRUE(is_square(BigNat(1)));
  EXPECT_TRUE(is_square(big("1000000000000000000")));
  EXPECT_FALSE(is_square(BigNat(2)));
  EXPECT_FALSE(is_square(BigNat(24)));
}

// -------------------------------------------------------- nearest_sqrt_int

TEST(NearestSqrtInt, Examples) {
  EXPECT_EQ(nearest_sqrt_int(BigNat(24)), BigNat(5));
  EXPECT_EQ(nearest_sqrt_int(BigNat(26)), BigNat(5));
  EXPECT_EQ(nearest_sqrt_int(BigNat(31)), BigNat(6));
  EXPECT_EQ(nearest_sqrt_int(BigNat(30)), BigNat(5));
  EXPECT_EQ(nearest_sqrt_int(BigNat(0)), BigNat(0));
}

TEST(NearestSqrtInt, NoNeighbourIsCloser) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 5000; ++i) {
    const BigNat m(rng() >> (rng() % 60));
    const BigNat D = nearest_sqrt_int(m);
    // |sqrt m - D| < |sqrt m - k| for k = D +- 1, i.e. 4m vs (2D +- 1)^2.
    const BigNat four_m = BigNat(4) * m;
    const BigNat up = BigNat(2) * D + BigNat(1);
    EXPECT_LT(four_m, up * up);
    if (!D.is_zero()) {
      const BigNat down = BigNat(2) * D - BigNat(1);
      EXPECT_GT(four_m, down * down);
    }
  }
}

// ------------------------------------------------------------ sqrt_dist_lt

TEST(SqrtDistLt, Examples) {
  EXPECT_TRUE(sqrt_dist_lt(BigNat(26), BigNat(1), BigNat(10)));
  EXPECT_TRUE(sqrt_dist_lt(BigNat(25), BigNat(1), big("1000000")));
  EXPECT_FALSE(sqrt_dist_lt(BigNat(2), BigNat(1), BigNat(3)));
}

TEST(SqrtDistLt, Preconditions) {
  EXPECT_THROW(sqrt_dist_lt(BigNat(26), BigNat(1), BigNat(0)), std::invalid_argument);
  EXPECT_THROW(sqrt_dist_lt(BigNat(26), BigNat(1), BigNat(2)), std::invalid_argument);
  EXPECT_THROW(sqrt_dist_lt(BigNat(26), BigNat(3), BigNat(4)), std::invalid_argument);
  EXPECT_FALSE(sqrt_dist_lt(BigNat(25), BigNat(0), BigNat(1)));
}

TEST(SqrtDistLt, AgreesWithDecimalOracle) {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 10000) {
    const std::uint64_t m = rng() >> (rng() % 50);
    const std::uint64_t den = 1 + rng() % 1'000'000'000;
    const std::uint64_t num = rng() % ((den + 1) / 2);
    if (2 * num >= den) continue;
    const oracle::Dec dist = oracle::sqrt_distance(oracle::Dec(m));
    const oracle::Dec thr = oracle::Dec(num) / oracle::Dec(den);
    if (abs(dist - thr) <= oracle::Dec("1e-40")) continue;
    EXPECT_EQ(sqrt_dist_lt(BigNat(m), BigNat(num), BigNat(den)), dist < thr) << m << " " << num << "/" << den;
    ++checked;
  }
}

TEST(SqrtDistLt, NearThresholdCases) {
  // ||sqrt(k^2 + 1)|| is just below 1/(2k); thresholds straddle it.
  for (std::uint64_t k = 2; k < 2000; k += 37) {
    const BigNat m(k * k + 1);
    EXPECT_TRUE(sqrt_dist_lt(m, BigNat(1), BigNat(2 * k)));
    EXPECT_FALSE(sqrt_dist_lt(m, BigNat(1), BigNat(2 * k + 1)));
  }
}

// --------------------------------------------------------------- sqrt_fixed

TEST(SqrtFixed, Examples) {
  EXPECT_EQ(sqrt_fixed(BigNat(2), 5).to_string(), "1.41421");
  EXPECT_EQ(sqrt_fixed(BigNat(4), 5).to_string(), "2.00000");
  EXPECT_EQ(sqrt_fixed(big("100010000"), 6).to_string(), "10000.499988");
}

TEST(SqrtFixed, MatchesNewtonOracle) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t m = rng() >> (rng() % 40 + 4);
    const unsigned digits = static_cast<unsigned>(1 + rng() % 30);
    EXPECT_EQ(sqrt_fixed(BigNat(m), digits).to_string(), oracle::newton_sqrt_fixed(m, digits));
  }
}

// -------------------------------------------------------------------- jacobi

TEST(Jacobi, Examples) {
  EXPECT_EQ(jacobi(1, 15), 1);
  EXPECT_EQ(jacobi(2, 15), 1);
  EXPECT_EQ(jacobi(6, 15), 0);
  EXPECT_EQ(jacobi(-1, 7), -1);
  EXPECT_EQ(jacobi(5, 1), 1);
}

TEST(Jacobi, Preconditions) {
  EXPECT_THROW(jacobi(3, 8), std::invalid_argument);
  EXPECT_THROW(jacobi(3, -7), std::invalid_argument);
  EXPECT_THROW(jacobi(3, 0), std::invalid_argument);
}

TEST(Jacobi, MatchesEulerCriterion) {
  for (std::int64_t q = 1; q < 400; q += 2) {
    for (std::int64_t h = -30; h < q + 30; ++h) ASSERT_EQ(jacobi(h, q), oracle::jacobi_euler(h, q)) << h << " " << q;
  }
}

TEST(Jacobi, CompletelyMultiplicative) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t q = 2 * static_cast<std::int64_t>(rng() % 500'000) + 1;
    const auto h1 = static_cast<std::int64_t>(rng() % 2'000'000) - 1'000'000;
    const auto h2 = static_cast<std::int64_t>(rng() % 2'000'000) - 1'000'000;
    EXPECT_EQ(jacobi(h1 * h2, q), jacobi(h1, q) * jacobi(h2, q));
  }
}

// --------------------------------------------------------------- mod_inverse

TEST(ModInverse, Examples) {
  EXPECT_EQ(mod_inverse(3, 7), 5);
  EXPECT_EQ(mod_inverse(1, 97), 1);
  EXPECT_EQ(mod_inverse(10, 17), 12);
  EXPECT_EQ(mod_inverse(-3, 7), 2);
  EXPECT_THROW(mod_inverse(6, 15), std::invalid_argument);
  EXPECT_THROW(mod_inverse(1, 1), std::invalid_argument);
}

TEST(ModInverse, InvertsWheneverCoprime) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 10000; ++i) {
    const auto q = static_cast<std::int64_t>(2 + rng() % 1'000'000'000);
    const auto h = static_cast<std::int64_t>(rng() % 4'000'000'000ULL) - 2'000'000'000;
    if (std::gcd(h, q) != 1) {
      EXPECT_THROW(mod_inverse(h, q), std::invalid_argument);
      continue;
    }
    const std::int64_t inv = mod_inverse(h, q);
    EXPECT_GE(inv, 0);
    EXPECT_LT(inv, q);
    const std::int64_t hr = ((h % q) + q) % q;
    EXPECT_EQ(mul_mod(static_cast<std::uint64_t>(hr), static_cast<std::uint64_t>(inv), static_cast<std::uint64_t>(q)), 1U);
  }
}

// ------------------------------------------------------- certified enclosures

TEST(Certified, PowerEnclosureContainsValue) {
  for (std::uint64_t x : {2ULL, 10ULL, 997ULL, 1000000ULL, 123456789ULL}) {
    for (auto e : {Rational(1, 2), Rational(1, 4), Rational(3, 10), Rational(-7, 25), Rational(0)}) {
      const Enclosure enc = power_enclosure(BigNat(x), e, 30);
      const oracle::Dec expo = oracle::Dec(e.num().get_str()) / oracle::Dec(e.den().get_str());
      const oracle::Dec v = pow(oracle::Dec(x), expo);
      const oracle::Dec lo = oracle::Dec(enc.lo.num().get_str()) / oracle::Dec(enc.lo.den().get_str());
      const oracle::Dec hi = oracle::Dec(enc.hi.num().get_str()) / oracle::Dec(enc.hi.den().get_str());
      // The decimal oracle itself carries ~1e-95 relative error.
      const oracle::Dec slack = v * oracle::Dec("1e-80");
      EXPECT_LE(lo, v + slack);
      EXPECT_GE(hi, v - slack);
      EXPECT_LT(hi - lo, oracle::Dec("1e-20") * (v + 1));
    }
  }
}

TEST(Certified, ExactPowersAreExact) {
  const Enclosure e = power_enclosure(BigNat(1'000'000), Rational(1, 2), 24);
  EXPECT_TRUE(e.exact());
  EXPECT_EQ(e.lo, Rational(1000));
  EXPECT_EQ(certified_floor([](unsigned d) { return sqrt_enclosure(BigNat(1'000'000), d); }, Fallback::kLower), 1000);
}

TEST(Certified, CompareAndFloor) {
  auto root2 = [](unsigned d) { return sqrt_enclosure(BigNat(2), d); };
  EXPECT_EQ(certified_compare(root2, Rational(141421356, 100000000)), 1);
  EXPECT_EQ(certified_compare(root2, Rational(141421357, 100000000)), -1);
  EXPECT_EQ(certified_floor(root2, Fallback::kLower), 1);
  EXPECT_EQ(certified_ceil(root2, Fallback::kUpper), 2);
  auto three = [](unsigned) { return Enclosure::point(Rational(3)); };
  EXPECT_EQ(certified_compare(three, Rational(3)), 0);
}

TEST(Certified, RejectsHugeDenominators) {
  EXPECT_THROW(power_enclosure(BigNat(10), Rational(1, 1001), 24), std::invalid_argument);
}
