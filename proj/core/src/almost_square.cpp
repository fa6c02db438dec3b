#include "almostsq/almost_square.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "almostsq/certified.hpp"
#include "almostsq/errors.hpp"
#include "almostsq/exact_arith.hpp"
#include "almostsq/parallel.hpp"

namespace almostsq {

namespace {

std::uint64_t isqrt_u64(std::uint64_t m) {
  auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(m)));
  while (s > 0 && s * s > m) --s;
  while ((s + 1) * (s + 1) <= m) ++s;
  return s;
}

// Valid for m < 2^62 so that 4m and (2s+1)^2 fit in 64 bits.
std::uint64_t nearest_sqrt_u64(std::uint64_t m) {
  const std::uint64_t s = isqrt_u64(m);
  return 4 * m < (2 * s + 1) * (2 * s + 1) ? s : s + 1;
}

constexpr std::uint64_t kSmall = std::uint64_t{1} << 62;

std::size_t span_size(const BigNat& lo, const BigNat& hi) {
  const BigNat len = hi - lo + BigNat(1);
  if (!len.fits_u64() || len.to_u64() > (std::uint64_t{1} << 40)) {
    throw std::invalid_argument("range too large for an exhaustive scan: " + len.to_string());
  }
  return static_cast<std::size_t>(len.to_u64());
}

// Brute-force candidate ordered by (offset, n, a).
struct PairKey {
  BigNat offset, n, a, b;
  friend bool operator<(const PairKey& l, const PairKey& r) {
    return std::tie(l.offset, l.n, l.a) < std::tie(r.offset, r.n, r.a);
  }
};

struct PairKey64 {
  std::uint64_t offset, n, a, b;
  friend bool operator<(const PairKey64& l, const PairKey64& r) {
    return std::tie(l.offset, l.n, l.a) < std::tie(r.offset, r.n, r.a);
  }
};

// d-search candidate ordered by (offset, d).
struct DKey {
  BigNat offset, d, D;
  friend bool operator<(const DKey& l, const DKey& r) { return std::tie(l.offset, l.d) < std::tie(r.offset, r.d); }
};

template <class K>
K min_key(K l, K r) {
  return r < l ? std::move(r) : std::move(l);
}

PairKey64 best_pair_u64(std::uint64_t x, std::uint64_t a_begin, std::uint64_t a_end, std::uint64_t hi,
                        std::optional<PairKey64> best) {
  for (std::uint64_t a = a_begin; a < a_end; ++a) {
    const std::uint64_t q = x / a;
    for (std::uint64_t cand : {q, q + 1}) {
      const std::uint64_t b = std::clamp(cand, a, hi);
      const std::uint64_t n = a * b;
      const PairKey64 k{n > x ? n - x : x - n, n, a, b};
      if (!best || k < *best) best = k;
    }
  }
  return *best;
}

std::optional<PairKey> best_pair(const BigNat& x, const BigNat& a_begin, std::size_t count, const BigNat& hi) {
  std::optional<PairKey> best;
  BigNat a = a_begin;
  for (std::size_t i = 0; i < count; ++i, a += BigNat(1)) {
    const BigNat q = x / a;
    for (const BigNat& cand : {q, q + BigNat(1)}) {
      const BigNat& b = cand < a ? a : (cand > hi ? hi : cand);
      BigNat n = a * b;
      PairKey k{absdiff(x, n), n, a, b};
      if (!best || k < *best) best = std::move(k);
    }
  }
  return best;
}

std::optional<DKey> best_d(const BigNat& x, const BigNat& d_begin, std::size_t count, const SearchWindow* w) {
  std::optional<DKey> best;
  const bool small = x + (d_begin + BigNat(count)) * (d_begin + BigNat(count)) < BigNat(kSmall);
  if (small) {
    const std::uint64_t xs = x.to_u64();
    const std::uint64_t d0 = d_begin.to_u64();
    const std::uint64_t lo = w ? w->lo.to_u64() : 0;
    const std::uint64_t hi = w ? w->hi.to_u64() : std::numeric_limits<std::uint64_t>::max();
    std::optional<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> b64;  // offset, d, D
    for (std::uint64_t d = d0; d < d0 + count; ++d) {
      const std::uint64_t D = nearest_sqrt_u64(xs + d * d);
      if (D <= d) continue;
      if (D - d < lo || D + d > hi) continue;
      const std::uint64_t n = D * D - d * d;
      const std::tuple<std::uint64_t, std::uint64_t, std::uint64_t> k{n > xs ? n - xs : xs - n, d, D};
      if (!b64 || std::tie(std::get<0>(k), std::get<1>(k)) < std::tie(std::get<0>(*b64), std::get<1>(*b64))) b64 = k;
    }
    if (b64) best = DKey{std::get<0>(*b64), std::get<1>(*b64), std::get<2>(*b64)};
    return best;
  }
  BigNat d = d_begin;
  for (std::size_t i = 0; i < count; ++i, d += BigNat(1)) {
    BigNat D = nearest_sqrt_int(x + d * d);
    if (D <= d) continue;
    if (w && (D - d < w->lo || D + d > w->hi)) continue;
    const BigNat n = D * D - d * d;
    DKey k{absdiff(x, n), d, std::move(D)};
    if (!best || k < *best) best = std::move(k);
  }
  return best;
}

AlmostSquare d_search_impl(const BigNat& x, const BigNat& d_lo, const BigNat& d_hi, const SearchWindow* w,
                           unsigned workers) {
  if (d_hi < d_lo) throw std::invalid_argument("d_search: d_lo > d_hi");
  const std::size_t count = span_size(d_lo, d_hi);
  auto best = parallel_reduce<DKey>(
      count, workers,
      [&](std::size_t begin, std::size_t end) { return best_d(x, d_lo + BigNat(begin), end - begin, w); },
      min_key<DKey>);
  if (!best) throw NoCandidate("d_search: no admissible d in [" + d_lo.to_string() + ", " + d_hi.to_string() + "]");
  return AlmostSquare::from_factors(x, best->D - best->d, best->D + best->d);
}

}  // namespace

AlmostSquare AlmostSquare::from_factors(const BigNat& x, const BigNat& a, const BigNat& b) {
  if (b < a) throw std::invalid_argument("AlmostSquare: factors must satisfy a <= b");
  AlmostSquare r{x, a, b, a * b, {}, std::nullopt, std::nullopt};
  r.offset = absdiff(x, r.n);
  if (a.is_odd() == b.is_odd()) {
    r.D = (a + b) / BigNat(2);
    r.d = (b - a) / BigNat(2);
  }
  return r;
}

SearchWindow search_window(const BigNat& x, const Rational& theta, const Rational& c2) {
  if (theta.sign() < 0 || theta >= Rational(1, 2)) {
    throw std::invalid_argument("search_window: theta must lie in [0, 1/2), got " + theta.to_string());
  }
  if (c2.sign() <= 0) throw std::invalid_argument("search_window: c2 must be positive");

  auto half_width = [&](unsigned digits) { return power_enclosure(x, theta, digits) * c2; };
  const mpz_class lo = certified_ceil(
      [&](unsigned digits) { return sqrt_enclosure(x, digits) - half_width(digits); }, Fallback::kUpper);
  const mpz_class hi = certified_floor(
      [&](unsigned digits) { return sqrt_enclosure(x, digits) + half_width(digits); }, Fallback::kLower);

  SearchWindow w{x, theta, c2, BigNat(1), BigNat(0)};
  if (cmp(lo, 1) > 0) w.lo = BigNat(lo);
  if (sgn(hi) > 0) w.hi = BigNat(hi);
  if (w.hi < w.lo) {
    throw std::invalid_argument("search_window: empty window for x=" + x.to_string() + ", theta=" +
                                theta.to_string() + ", c2=" + c2.to_string());
  }
  return w;
}

AlmostSquare brute_force_nearest(const BigNat& x, const SearchWindow& w, unsigned workers) {
  if (w.lo.is_zero()) throw std::invalid_argument("brute_force_nearest: window must start at 1 or above");
  const std::size_t count = span_size(w.lo, w.hi);

  if (x < BigNat(kSmall) && w.hi < BigNat(std::uint64_t{1} << 31)) {
    const std::uint64_t xs = x.to_u64();
    const std::uint64_t lo = w.lo.to_u64();
    const std::uint64_t hi = w.hi.to_u64();
    auto best = parallel_reduce<PairKey64>(
        count, workers,
        [&](std::size_t begin, std::size_t end) {
          return std::optional<PairKey64>(best_pair_u64(xs, lo + begin, lo + end, hi, std::nullopt));
        },
        min_key<PairKey64>);
    return AlmostSquare::from_factors(x, best->a, best->b);
  }

  auto best = parallel_reduce<PairKey>(
      count, workers,
      [&](std::size_t begin, std::size_t end) { return best_pair(x, w.lo + BigNat(begin), end - begin, w.hi); },
      min_key<PairKey>);
  return AlmostSquare::from_factors(x, best->a, best->b);
}

AlmostSquare d_search(const BigNat& x, const BigNat& d_lo, const BigNat& d_hi, unsigned workers) {
  return d_search_impl(x, d_lo, d_hi, nullptr, workers);
}

AlmostSquare d_search_in_window(const BigNat& x, const SearchWindow& w, unsigned workers) {
  return d_search_impl(x, BigNat(0), (w.hi - w.lo) / BigNat(2), &w, workers);
}

ConditionalFind conditional_find(const BigNat& x, const Rational& theta, const Rational& eps) {
  if (theta <= Rational(1, 4) || theta >= Rational(1, 3)) {
    throw std::invalid_argument("conditional_find: theta must lie in (1/4, 1/3), got " + theta.to_string());
  }
  if (eps.sign() <= 0) throw std::invalid_argument("conditional_find: eps must be positive");
  const Rational delta_exp = theta - eps * Rational(2);
  if (delta_exp.sign() <= 0) throw std::invalid_argument("conditional_find: eps too large (theta - 2 eps <= 0)");
  if (x < BigNat(2)) throw std::invalid_argument("conditional_find: x must be at least 2");

  // 1/x^(1-2 theta) <= delta/2  <=>  x^(1 - 3 theta + 2 eps) >= 2  <=>  x^p >= 2^r.
  const Rational slack = Rational(1) - theta * Rational(3) + eps * Rational(2);
  {
    const mpz_class p = slack.num();
    const mpz_class r = slack.den();
    if (!p.fits_ulong_p() || !r.fits_ulong_p()) throw std::invalid_argument("conditional_find: exponent too fine");
    mpz_class lhs, rhs;
    mpz_pow_ui(lhs.get_mpz_t(), x.mpz().get_mpz_t(), p.get_ui());
    mpz_ui_pow_ui(rhs.get_mpz_t(), 2, r.get_ui());
    if (cmp(lhs, rhs) < 0) {
      throw std::invalid_argument("conditional_find: x too small for the rational approximation step "
                                  "(need x^(1-3 theta+2 eps) >= 2)");
    }
  }

  constexpr unsigned kScale = 30;
  const mpz_class one = pow10(kScale).mpz();
  const mpz_class margin = pow10(kScale - 25).mpz();

  const BigNat N(certified_floor([&](unsigned digits) { return power_enclosure(x, theta, digits); },
                                 Fallback::kLower));
  const mpz_class sqrt_scaled = nearest_sqrt_int(x * pow10(2 * kScale)).mpz();
  mpz_class lambda = sqrt_scaled % one;
  lambda = (one - lambda) % one;

  const Enclosure delta_enc = power_enclosure(x, -delta_exp, kScale + 10);
  const mpz_class delta_floor = floor(delta_enc.lo * Rational(mpq_class(one)));
  const mpz_class threshold = delta_floor - margin;

  const mpz_class scale_sq = one * one;
  const mpz_class denom = 4 * sqrt_scaled;
  for (BigNat d(0); d <= N; d += BigNat(1)) {
    const mpz_class d_sq = d.mpz() * d.mpz();
    // round(d^2 * 10^60 / (2 sqrt_scaled)) = floor((2 d^2 10^60 + 2 sqrt_scaled) / (4 sqrt_scaled)).
    mpz_class y = (2 * d_sq * scale_sq + 2 * sqrt_scaled) / denom;
    y %= one;
    mpz_class t = y - lambda;
    if (sgn(t) < 0) t += one;
    const mpz_class other = one - t;
    const mpz_class& circ = cmp(t, other) <= 0 ? t : other;
    if (cmp(circ, threshold) >= 0) continue;

    const BigNat D = nearest_sqrt_int(x + d * d);
    if (D <= d) continue;
    ConditionalFind out{AlmostSquare::from_factors(x, D - d, D + d), N, FixedPoint(lambda, kScale),
                        FixedPoint::round(Rational(mpq_class((delta_enc.lo.mpq() + delta_enc.hi.mpq()) / 2)), kScale)};
    return out;
  }
  throw NoCandidate("conditional_find: no d <= " + N.to_string() + " lands in the window for x=" + x.to_string());
}

FixedPoint taylor_error(const BigNat& x, const BigNat& d, unsigned digits) {
  const BigNat d_sq = d * d;
  if (!(d_sq < x)) throw std::invalid_argument("taylor_error: requires d^2 < x");
  const unsigned work = digits + 3;
  const BigNat scale_sq = pow10(2 * work);
  const mpz_class full = nearest_sqrt_int((x + d_sq) * scale_sq).mpz();
  const mpz_class base = nearest_sqrt_int(x * scale_sq).mpz();
  // d^2 / (2 sqrt x) scaled by 10^work, via d^2 * base / (2x), rounded.
  const mpz_class lin = (2 * d_sq.mpz() * base + 2 * x.mpz()) / (4 * x.mpz());
  const mpz_class err = abs(full - base - lin);
  return FixedPoint::round(Rational(mpq_class(err, pow10(work).mpz())), digits);
}

DiffOfSquares diff_of_squares_check(const BigNat& a, const BigNat& b) {
  if (b < a) throw std::invalid_argument("diff_of_squares_check: requires a <= b");
  DiffOfSquares out{a + b, b - a};
  if (BigNat(4) * a * b + out.t * out.t != out.s * out.s) {
    throw std::logic_error("diff_of_squares_check: identity 4ab = s^2 - t^2 failed");
  }
  return out;
}

}  // namespace almostsq
