#pragma once

// Desk-scale experiments on gaps: worst-case offsets and exponent fits, the
// quarter-point lower bound, the product-gap floor, multiplication-table
// density and sums of two squares.

#include <cstdint>
#include <string>
#include <vector>

#include "almostsq/almost_square.hpp"
#include "almostsq/numbers.hpp"

namespace almostsq {

struct GapRecord {
  BigNat x;
  BigNat offset;
  std::string meta;
};

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  std::size_t count = 0;
};

/// 1 - log(e log 2) / log 2 = 0.0860713...
double erdos_alpha();

enum class SearchMethod { kBrute, kDSearch };

/// Per x, the smallest offset reachable inside search_window(x, theta, c2).
/// kDSearch uses d_search_in_window. Records come back in input order.
std::vector<GapRecord> scan_worst_offset(const std::vector<BigNat>& xs, const Rational& theta, const Rational& c2,
                                         SearchMethod method, unsigned workers = 1);

/// Least-squares slope of ln(offset) against ln(x), ignoring offset-0 records.
/// Throws InsufficientData without two usable records at distinct x.
ExponentFit fit_exponent(const std::vector<GapRecord>& records);

/// `count` integers spaced logarithmically over [lo, hi], endpoints included.
std::vector<BigNat> log_spaced(const BigNat& lo, const BigNat& hi, std::size_t count);

struct QuarterPointCheck {
  BigNat x;
  BigNat min_offset;
  /// (1/4) sqrt(x) - c2^2 x^{2 theta} - 1 at 6 decimals.
  FixedPoint bound;
  bool pass = false;
};

/// x = nearest integer to (k + 1/4)^2; passes when the brute-force offset is at
/// least the bound. The comparison is exact. Requires theta < 1/4.
QuarterPointCheck quarter_point_check(const BigNat& k, const Rational& theta, const Rational& c2);

struct ProductGap {
  BigNat max_gap;
  /// Left end of the widest gap.
  BigNat at;
  /// x^{1/2 - theta} / (4c) at 6 decimals.
  FixedPoint floor;
  bool pass = false;
  /// No product fell inside the interval; max_gap is the whole interval.
  bool empty_product_set = false;
  std::size_t products = 0;
};

/// Distinct products ab with a, b in search_window(x, theta, c) inside
/// [ceil(x - c x^{1/2 + theta}), x], including the interval ends as
/// sentinels; passes when the widest gap is at least x^{1/2 - theta} / (4c).
ProductGap product_gap(const BigNat& x, const Rational& theta, const Rational& c, unsigned workers = 1);

/// Default ceiling on n for mult_table_count (an n^2-bit table).
inline constexpr std::uint64_t kMultTableLimit = 10'000;

/// Number of distinct products a*b with 1 <= a, b <= n.
std::uint64_t mult_table_count(std::uint64_t n, std::uint64_t limit = kMultTableLimit);

/// Fixed-size bitmap backed by 64-bit words.
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(std::uint64_t size) : size_(size), words_((size + 63) / 64, 0) {}

  [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
  [[nodiscard]] bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  [[nodiscard]] std::uint64_t count() const;

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Default ceiling on the sum-of-two-squares sieve.
inline constexpr std::uint64_t kTwoSquaresLimit = 200'000'000;

/// Bit m set iff m = u^2 + v^2 with u, v >= 0, for 0 <= m <= limit. With
/// workers > 1 the range is split into 64-aligned segments; the bitmap is
/// identical either way.
Bitmap two_squares_sieve(std::uint64_t limit, unsigned workers = 1, std::uint64_t max_limit = kTwoSquaresLimit);

struct TwoSquaresNear {
  BigNat D;
  BigNat d;
  BigNat n;
  BigNat offset;
};

/// Over d <= d_max, D = nearest_sqrt_int(x - d^2) and n = D^2 + d^2; the
/// smallest |x - n|, ties to the smaller d. Requires d_max^2 < x.
TwoSquaresNear two_squares_near(const BigNat& x, const BigNat& d_max);

struct TwoSquaresGap {
  std::uint64_t gap = 0;
  std::uint64_t at = 0;
};

/// Largest difference between consecutive sums of two squares inside
/// [lo, hi] and the left end of the first such gap. Values outside [lo, hi]
/// are ignored; fewer than two values in range gives gap 0.
TwoSquaresGap max_gap_two_squares(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_limit = kTwoSquaresLimit);

}  // namespace almostsq
