#include "almostsq/gap_experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "almostsq/certified.hpp"
#include "almostsq/errors.hpp"
#include "almostsq/exact_arith.hpp"
#include "almostsq/parallel.hpp"

namespace almostsq {

namespace {

constexpr std::uint64_t kMaxProductPairs = 100'000'000;

FixedPoint display(const std::function<Enclosure(unsigned)>& make) {
  const Enclosure e = make(12);
  return FixedPoint::round(Rational(mpq_class((e.lo.mpq() + e.hi.mpq()) / 2)), 6);
}

std::uint64_t isqrt_u64(std::uint64_t m) { return isqrt(BigNat(m)).to_u64(); }

}  // namespace

double erdos_alpha() {
  const double ln2 = std::log(2.0);
  return 1 - (1 + std::log(ln2)) / ln2;
}

std::vector<GapRecord> scan_worst_offset(const std::vector<BigNat>& xs, const Rational& theta, const Rational& c2,
                                         SearchMethod method, unsigned workers) {
  if (xs.empty()) throw std::invalid_argument("scan_worst_offset: empty x list");
  const std::string tag = method == SearchMethod::kBrute ? "brute" : "dsearch";
  return parallel_map(xs.size(), workers, [&](std::size_t i) {
    const SearchWindow w = search_window(xs[i], theta, c2);
    const AlmostSquare best =
        method == SearchMethod::kBrute ? brute_force_nearest(xs[i], w) : d_search_in_window(xs[i], w);
    return GapRecord{xs[i], best.offset, tag};
  });
}

ExponentFit fit_exponent(const std::vector<GapRecord>& records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) {
    if (r.offset.is_zero() || r.x.is_zero()) continue;
    pts.emplace_back(r.x.log(), r.offset.log());
  }
  if (pts.size() < 2) throw InsufficientData("fit_exponent: need at least two records with offset >= 1");
  const auto n = static_cast<double>(pts.size());
  double mx = 0, my = 0;
  for (auto [u, v] : pts) {
    mx += u;
    my += v;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (auto [u, v] : pts) {
    sxx += (u - mx) * (u - mx);
    sxy += (u - mx) * (v - my);
  }
  if (sxx == 0) throw InsufficientData("fit_exponent: all usable records share the same x");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx, pts.size()};
}

std::vector<BigNat> log_spaced(const BigNat& lo, const BigNat& hi, std::size_t count) {
  if (lo.is_zero() || hi < lo) throw std::invalid_argument("log_spaced: need 1 <= lo <= hi");
  if (count == 0) throw std::invalid_argument("log_spaced: count must be positive");
  std::vector<BigNat> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  const long double a = lo.log();
  const long double b = hi.log();
  for (std::size_t i = 0; i < count; ++i) {
    if (i == 0) {
      out.push_back(lo);
    } else if (i + 1 == count) {
      out.push_back(hi);
    } else {
      const long double t = a + (b - a) * static_cast<long double>(i) / static_cast<long double>(count - 1);
      const long double v = std::round(std::exp(t));
      mpz_class z;
      mpz_set_d(z.get_mpz_t(), static_cast<double>(v));
      out.emplace_back(z);
    }
  }
  return out;
}

QuarterPointCheck quarter_point_check(const BigNat& k, const Rational& theta, const Rational& c2) {
  if (theta.sign() < 0 || theta >= Rational(1, 4)) {
    throw std::invalid_argument("quarter_point_check: theta must lie in [0, 1/4)");
  }
  // Nearest integer to (k + 1/4)^2 = k^2 + k/2 + 1/16.
  const BigNat x = (BigNat(16) * k * k + BigNat(8) * k + BigNat(9)) / BigNat(16);
  const SearchWindow w = search_window(x, theta, c2);
  const AlmostSquare best = brute_force_nearest(x, w);

  const Rational c2_sq = c2 * c2;
  auto bound = [&](unsigned digits) {
    return sqrt_enclosure(x, digits) * Rational(1, 4) - power_enclosure(x, theta * Rational(2), digits) * c2_sq -
           Enclosure::point(Rational(1));
  };
  QuarterPointCheck out{x, best.offset, display(bound), false};
  out.pass = certified_compare(bound, Rational(mpq_class(best.offset.mpz()))) <= 0;
  return out;
}

ProductGap product_gap(const BigNat& x, const Rational& theta, const Rational& c, unsigned workers) {
  const SearchWindow w = search_window(x, theta, c);
  if (!(x < BigNat(std::uint64_t{1} << 62))) throw std::invalid_argument("product_gap: x too large");
  const std::uint64_t lo = w.lo.to_u64();
  const std::uint64_t hi = w.hi.to_u64();
  const std::uint64_t width = hi - lo + 1;
  if (width > 2 * kMaxProductPairs / width) throw std::invalid_argument("product_gap: window too wide");

  const mpz_class left_mpz = certified_ceil(
      [&](unsigned digits) {
        return Enclosure::point(Rational(mpq_class(x.mpz()))) -
               power_enclosure(x, Rational(1, 2) + theta, digits) * c;
      },
      Fallback::kUpper);
  const std::uint64_t xs = x.to_u64();
  const std::uint64_t left = sgn(left_mpz) > 0 ? BigNat(left_mpz).to_u64() : 0;

  auto chunks = parallel_map(std::min<std::uint64_t>(width, 64), workers, [&](std::size_t t) {
    const std::size_t parts = std::min<std::uint64_t>(width, 64);
    std::vector<std::uint64_t> found;
    for (std::uint64_t a = lo + width * t / parts; a < lo + width * (t + 1) / parts; ++a) {
      for (std::uint64_t b = a; b <= hi; ++b) {
        const std::uint64_t n = a * b;
        if (n > xs) break;
        if (n >= left) found.push_back(n);
      }
    }
    return found;
  });
  std::vector<std::uint64_t> products;
  for (auto& ch : chunks) products.insert(products.end(), ch.begin(), ch.end());
  std::sort(products.begin(), products.end());
  products.erase(std::unique(products.begin(), products.end()), products.end());

  auto floor_value = [&](unsigned digits) {
    return power_enclosure(x, Rational(1, 2) - theta, digits) * (Rational(1) / (c * Rational(4)));
  };
  ProductGap out;
  out.floor = display(floor_value);
  out.products = products.size();
  if (products.empty()) {
    out.empty_product_set = true;
    out.max_gap = BigNat(xs - left);
    out.at = BigNat(left);
    out.pass = true;
    return out;
  }
  std::uint64_t prev = left;
  std::uint64_t best_gap = 0, best_at = left;
  auto visit = [&](std::uint64_t v) {
    if (v - prev > best_gap) {
      best_gap = v - prev;
      best_at = prev;
    }
    prev = v;
  };
  for (std::uint64_t v : products) visit(v);
  visit(xs);
  out.max_gap = BigNat(best_gap);
  out.at = BigNat(best_at);
  out.pass = certified_compare(floor_value, Rational(mpq_class(out.max_gap.mpz()))) <= 0;
  return out;
}

std::uint64_t mult_table_count(std::uint64_t n, std::uint64_t limit) {
  if (n == 0) throw std::invalid_argument("mult_table_count: n must be positive");
  if (n > limit) throw std::invalid_argument("mult_table_count: n exceeds the configured limit " + std::to_string(limit));
  Bitmap seen(n * n + 1);
  for (std::uint64_t a = 1; a <= n; ++a) {
    for (std::uint64_t b = a; b <= n; ++b) seen.set(a * b);
  }
  return seen.count();
}

std::uint64_t Bitmap::count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

Bitmap two_squares_sieve(std::uint64_t limit, unsigned workers, std::uint64_t max_limit) {
  if (limit > max_limit) {
    throw std::invalid_argument("two_squares_sieve: limit exceeds the configured maximum " + std::to_string(max_limit));
  }
  Bitmap marks(limit + 1);
  const std::uint64_t words = (limit + 64) / 64;
  const std::size_t parts = std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, words));
  // Each part owns whole 64-bit words, so concurrent writers never share one.
  parallel_map(parts, workers, [&](std::size_t t) {
    const std::uint64_t begin = words * t / parts * 64;
    const std::uint64_t end = std::min<std::uint64_t>(words * (t + 1) / parts * 64, limit + 1);
    for (std::uint64_t u = 0; u * u < end; ++u) {
      const std::uint64_t u_sq = u * u;
      std::uint64_t v = u;
      if (begin > u_sq) {
        const std::uint64_t need = begin - u_sq;
        std::uint64_t r = isqrt_u64(need);
        if (r * r < need) ++r;
        v = std::max(v, r);
      }
      for (; u_sq + v * v < end; ++v) marks.set(u_sq + v * v);
    }
    return 0;
  });
  return marks;
}

TwoSquaresNear two_squares_near(const BigNat& x, const BigNat& d_max) {
  if (!(d_max * d_max < x)) throw std::invalid_argument("two_squares_near: requires d_max^2 < x");
  std::optional<TwoSquaresNear> best;
  for (BigNat d(0); d <= d_max; d += BigNat(1)) {
    const BigNat d_sq = d * d;
    BigNat D = nearest_sqrt_int(x - d_sq);
    BigNat n = D * D + d_sq;
    BigNat offset = absdiff(x, n);
    if (!best || offset < best->offset) best = TwoSquaresNear{std::move(D), d, std::move(n), std::move(offset)};
  }
  return *best;
}

TwoSquaresGap max_gap_two_squares(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_limit) {
  if (hi < lo) throw std::invalid_argument("max_gap_two_squares: lo > hi");
  const Bitmap marks = two_squares_sieve(hi, 1, max_limit);
  TwoSquaresGap out;
  bool have_prev = false;
  std::uint64_t prev = 0;
  for (std::uint64_t m = lo; m <= hi; ++m) {
    if (!marks.test(m)) continue;
    if (have_prev && m - prev > out.gap) {
      out.gap = m - prev;
      out.at = prev;
    }
    prev = m;
    have_prev = true;
  }
  return out;
}

}  // namespace almostsq
