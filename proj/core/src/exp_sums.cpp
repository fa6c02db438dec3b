#include "almostsq/exp_sums.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <variant>

#include "almostsq/certified.hpp"
#include "almostsq/exact_arith.hpp"
#include "almostsq/parallel.hpp"

namespace almostsq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxTerms = 1'000'000'000;
constexpr std::int64_t kMaxModulus = std::int64_t{1} << 31;

// Table of e(j/q) for j in [0, q).
std::vector<Complex> roots_of_unity(std::int64_t q) {
  std::vector<Complex> roots(static_cast<std::size_t>(q));
  for (std::int64_t j = 0; j < q; ++j) {
    const std::int64_t centred = 2 * j <= q ? j : j - q;
    const double angle = 2 * kPi * static_cast<double>(centred) / static_cast<double>(q);
    roots[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
  }
  return roots;
}

std::int64_t mod_positive(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

void check_roundoff(std::size_t terms, double phase_magnitude) {
  if (terms > kMaxTerms) throw std::invalid_argument("sum has too many terms: " + std::to_string(terms));
  const double per_term = predicted_roundoff(1) + 2 * kPi * phase_magnitude * DBL_EPSILON;
  if (per_term > kRoundoffPerTerm) {
    throw std::invalid_argument("predicted roundoff per term exceeds budget; reduce lambda*H or mu*K");
  }
}

int bits(const mpz_class& v) { return static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

// The open arc ||r/q - lambda|| < delta on the circle, decided exactly.
// With M = q * den(lambda): T = (r den(lambda) - num(lambda) q) mod M, and the
// distance is min(T, M - T) / M.
class CircleWindow {
 public:
  CircleWindow(std::int64_t q, const Rational& lambda, const Rational& delta)
      : lambda_den_(lambda.den()), delta_num_(delta.num()), delta_den_(delta.den()) {
    modulus_ = lambda_den_ * q;
    mpz_class shift = lambda.num() * q;
    mpz_fdiv_r(shift.get_mpz_t(), shift.get_mpz_t(), modulus_.get_mpz_t());
    shift_ = shift;
    bound_ = delta_num_ * modulus_;
    wide_ = bits(modulus_) + bits(lambda_den_) <= 120 && bits(modulus_) + bits(delta_den_) <= 120 &&
            bits(bound_) <= 120;
    if (wide_) {
      m128_ = to_i128(modulus_);
      ld128_ = to_i128(lambda_den_);
      dd128_ = to_i128(delta_den_);
      shift128_ = to_i128(shift_);
      bound128_ = to_i128(bound_);
    }
    modulus_d_ = modulus_.get_d();
  }

  bool inside(std::int64_t r) const {
    if (wide_) {
      const __int128 t = arc128(r);
      return t * dd128_ < bound128_;
    }
    return cmp(arc(r) * delta_den_, bound_) < 0;
  }

  double distance(std::int64_t r) const {
    if (wide_) return static_cast<double>(arc128(r)) / modulus_d_;
    return arc(r).get_d() / modulus_d_;
  }

 private:
  static __int128 to_i128(const mpz_class& v) {
    unsigned __int128 out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return static_cast<__int128>(out);
  }

  __int128 arc128(std::int64_t r) const {
    __int128 t = static_cast<__int128>(r) * ld128_ - shift128_;
    t %= m128_;
    if (t < 0) t += m128_;
    const __int128 other = m128_ - t;
    return t < other ? t : other;
  }

  mpz_class arc(std::int64_t r) const {
    mpz_class t = lambda_den_ * static_cast<long>(r) - shift_;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), modulus_.get_mpz_t());
    mpz_class other = modulus_ - t;
    return cmp(t, other) < 0 ? t : other;
  }

  mpz_class lambda_den_, delta_num_, delta_den_, modulus_, shift_, bound_;
  bool wide_ = false;
  __int128 m128_ = 0, ld128_ = 0, dd128_ = 0, shift128_ = 0, bound128_ = 0;
  double modulus_d_ = 1;
};

void check_count_args(std::int64_t p, std::int64_t q, const Rational& delta) {
  if (q < 1 || q >= kMaxModulus) throw std::invalid_argument("fractional_count: q must lie in [1, 2^31)");
  if (std::gcd(mod_positive(p, q), q) != 1) throw std::invalid_argument("fractional_count: gcd(p, q) must be 1");
  if (delta.sign() <= 0 || delta > Rational(1, 2)) {
    throw std::invalid_argument("fractional_count: delta must lie in (0, 1/2]");
  }
}

// Calls visit(n, p n^2 mod q) for n = 1..N.
template <class Visit>
void for_each_residue(std::int64_t p, std::int64_t q, std::uint64_t N, Visit visit) {
  const auto qu = static_cast<std::uint64_t>(q);
  const auto pm = static_cast<std::uint64_t>(mod_positive(p, q));
  std::uint64_t sq = 0;  // n^2 mod q
  for (std::uint64_t n = 1; n <= N; ++n) {
    sq = (sq + 2 * ((n - 1) % qu) + 1) % qu;
    visit(n, static_cast<std::int64_t>(mul_mod(pm, sq, qu)));
  }
}

}  // namespace

void CompensatedSum::add(Complex v) {
  auto step = [](double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  };
  step(re_, re_c_, v.real());
  step(im_, im_c_, v.imag());
  ++terms_;
}

double predicted_roundoff(std::size_t terms) {
  // Phase table entries and the twist product each carry a few ulps; the
  // compensated sum itself adds O(eps) overall.
  return static_cast<double>(terms) * 8 * DBL_EPSILON;
}

Complex unit_phase(double u) {
  const double r = u - std::nearbyint(u);
  const double angle = 2 * kPi * r;
  return {std::cos(angle), std::sin(angle)};
}

Complex gauss_sum(std::int64_t a, std::int64_t b, std::int64_t q) {
  if (q < 1 || q >= kMaxModulus) throw std::invalid_argument("gauss_sum: q must lie in [1, 2^31)");
  check_roundoff(static_cast<std::size_t>(q), 1);
  const auto qu = static_cast<std::uint64_t>(q);
  const auto au = static_cast<std::uint64_t>(mod_positive(a, q));
  const auto bu = static_cast<std::uint64_t>(mod_positive(b, q));
  const auto roots = roots_of_unity(q);
  CompensatedSum sum;
  for (std::uint64_t d = 0; d < qu; ++d) {
    const std::uint64_t phase = (au * (d * d % qu) % qu + bu * d % qu) % qu;
    sum.add(roots[phase]);
  }
  return sum.value();
}

Complex salie_sum(const ExpSumQuery& query) {
  const std::int64_t q = query.q;
  if (q < 3 || q % 2 == 0 || q >= kMaxModulus) {
    throw std::invalid_argument("salie_sum: q must be odd, at least 3 and below 2^31");
  }
  if (std::gcd(mod_positive(query.a, q), q) != 1) throw std::invalid_argument("salie_sum: gcd(a, q) must be 1");
  if (!std::isfinite(query.H) || !std::isfinite(query.K)) throw std::invalid_argument("salie_sum: H, K must be finite");
  if (query.H < 1 || query.K <= 0) return {0, 0};

  const auto h_max = static_cast<std::int64_t>(std::floor(query.H));
  const auto k_count = static_cast<std::int64_t>(std::ceil(query.K));  // k in [0, ceil(K) - 1]
  check_roundoff(static_cast<std::size_t>(h_max) * static_cast<std::size_t>(k_count),
                 std::abs(query.lambda) * static_cast<double>(h_max) +
                     std::abs(query.mu) * static_cast<double>(k_count));

  const auto qu = static_cast<std::uint64_t>(q);
  const auto roots = roots_of_unity(q);
  std::vector<std::uint64_t> k_sq(static_cast<std::size_t>(k_count));
  std::vector<Complex> k_twist(static_cast<std::size_t>(k_count));
  for (std::int64_t k = 0; k < k_count; ++k) {
    const auto ku = static_cast<std::uint64_t>(k) % qu;
    k_sq[static_cast<std::size_t>(k)] = ku * ku % qu;
    k_twist[static_cast<std::size_t>(k)] = unit_phase(query.mu * static_cast<double>(k));
  }
  const auto a_mod = static_cast<std::uint64_t>(mod_positive(query.a, q));

  CompensatedSum outer;
  for (std::int64_t h = 1; h <= h_max; ++h) {
    if (std::gcd(h, q) != 1) continue;
    const int chi = jacobi(h, q);
    const auto coeff = a_mod * static_cast<std::uint64_t>(mod_inverse(h, q)) % qu;
    CompensatedSum inner;
    for (std::size_t k = 0; k < k_sq.size(); ++k) {
      inner.add(k_twist[k] * roots[coeff * k_sq[k] % qu]);
    }
    outer.add(unit_phase(query.lambda * static_cast<double>(h)) * static_cast<double>(chi) * inner.value());
  }
  return outer.value();
}

double conjectured_bound(double H, double K, std::int64_t q, double eps) {
  const double root_q = std::sqrt(static_cast<double>(q));
  const double terms = std::sqrt(H * K) + std::pow(H, 0.75) + K + H * K / root_q + K * K / root_q;
  return terms * std::pow(static_cast<double>(q), eps);
}

ProbeReport probe_conjecture(const std::vector<ExpSumQuery>& grid, double eps, unsigned workers) {
  using Outcome = std::variant<ProbeRow, ProbeSkip>;
  auto outcomes = parallel_map(grid.size(), workers, [&](std::size_t i) -> Outcome {
    const ExpSumQuery& query = grid[i];
    if (query.q < 3 || query.q % 2 == 0) return ProbeSkip{query, "q must be odd and at least 3"};
    if (is_square(BigNat(query.q))) return ProbeSkip{query, "q is a perfect square"};
    if (std::gcd(mod_positive(query.a, query.q), query.q) != 1) return ProbeSkip{query, "gcd(a, q) != 1"};
    if (query.H < 1 || query.K < 1) return ProbeSkip{query, "H and K must be at least 1"};
    try {
      const double abs_sum = std::abs(salie_sum(query));
      const double bound = conjectured_bound(query.H, query.K, query.q, eps);
      return ProbeRow{query, abs_sum, bound, abs_sum / bound};
    } catch (const std::invalid_argument& e) {
      return ProbeSkip{query, e.what()};
    }
  });

  ProbeReport report;
  for (auto& outcome : outcomes) {
    if (auto* row = std::get_if<ProbeRow>(&outcome)) {
      if (report.rows.empty() || row->ratio > report.max_ratio) {
        report.max_ratio = row->ratio;
        report.argmax = report.rows.size();
      }
      report.rows.push_back(*row);
    } else {
      report.skipped.push_back(std::get<ProbeSkip>(outcome));
    }
  }
  return report;
}

std::vector<ExpSumQuery> default_probe_grid(std::int64_t q_max) {
  std::vector<ExpSumQuery> grid;
  for (std::int64_t q = 3; q <= q_max; q += 2) {
    if (is_square(BigNat(q))) continue;
    const auto root = static_cast<double>(isqrt(BigNat(q)).to_u64() + 1);  // ceil(sqrt q), q not a square
    const double sizes[] = {root, static_cast<double>(q), static_cast<double>(2 * q)};
    for (std::int64_t a = 1; a <= 5; ++a) {
      if (std::gcd(a, q) != 1) continue;
      for (double H : sizes) {
        for (double K : sizes) {
          for (double lambda : {0.0, 0.3}) {
            for (double mu : {0.0, 0.3}) grid.push_back({a, q, H, K, lambda, mu});
          }
        }
      }
    }
  }
  return grid;
}

double fejer_coeff(double delta, std::int64_t h) {
  if (!(delta > 0 && delta < 0.5)) throw std::invalid_argument("fejer_coeff: delta must lie in (0, 1/2)");
  if (h == 0) return delta;
  const double s = delta * static_cast<double>(h);
  const double r = s - std::nearbyint(s);
  if (r == 0) return 0;
  const double ratio = std::sin(kPi * r) / (kPi * s);
  return delta * ratio * ratio;
}

double window_eval(WindowKind kind, const FejerWindow& window, double x) {
  auto triangle = [&](double u) {
    const double v = std::abs(u);
    return v <= window.delta ? 1 - v / window.delta : 0.0;
  };
  switch (kind) {
    case WindowKind::kF: {
      const double v = std::abs(x);
      return v <= 1 ? 1 - v : 0.0;
    }
    case WindowKind::kFHat: {
      if (x == 0) return 1;
      const double r = x - std::nearbyint(x);
      if (r == 0) return 0;
      const double ratio = std::sin(kPi * r) / (kPi * x);
      return ratio * ratio;
    }
    case WindowKind::kT:
    case WindowKind::kGLambda:
      break;
  }
  if (!(window.delta > 0 && window.delta < 0.5)) {
    throw std::invalid_argument("window_eval: delta must lie in (0, 1/2)");
  }
  if (kind == WindowKind::kT) return triangle(x);
  const double shifted = x - window.lambda;
  return triangle(shifted - std::nearbyint(shifted));
}

CountResult fractional_count(std::int64_t p, std::int64_t q, const Rational& lambda, const Rational& delta,
                             std::uint64_t N) {
  check_count_args(p, q, delta);
  const CircleWindow window(q, lambda, delta);
  CountResult out{0, delta.to_double() * static_cast<double>(N), N, p, q};
  for_each_residue(p, q, N, [&](std::uint64_t, std::int64_t r) {
    if (window.inside(r)) ++out.count;
  });
  return out;
}

InequalityCheck counting_inequality_check(std::int64_t p, std::int64_t q, const Rational& lambda,
                                          const Rational& delta, std::uint64_t N) {
  if (delta >= Rational(1, 2)) throw std::invalid_argument("counting_inequality_check: delta must be below 1/2");
  const CountResult count = fractional_count(p, q, lambda, delta, N);
  const CircleWindow window(q, lambda, delta);
  const double delta_d = delta.to_double();
  auto g = [&](std::int64_t r) { return std::max(0.0, 1 - window.distance(r) / delta_d); };

  InequalityCheck out;
  out.lhs = 1 + 2 * static_cast<double>(count.count);
  CompensatedSum rhs;
  rhs.add(g(0));  // n = 0, f(0) = 1
  if (N > 0) {
    const auto Nd = static_cast<double>(N);
    for_each_residue(p, q, N, [&](std::uint64_t n, std::int64_t r) {
      rhs.add(2 * (1 - static_cast<double>(n) / Nd) * g(r));
    });
  }
  out.rhs = rhs.value().real();
  out.pass = out.lhs >= out.rhs - 1e-9;
  return out;
}

std::uint64_t choose_modulus(const BigNat& x) {
  if (x.is_zero()) throw std::invalid_argument("choose_modulus: x must be at least 1");
  BigNat q = BigNat(2) * isqrt(x) + BigNat(1);
  if (is_square(q)) q += BigNat(2);
  return q.to_u64();
}

MainTermReport main_term_compare(const BigNat& x, const Rational& theta, const Rational& eps,
                                 const std::vector<Rational>& lambdas) {
  if (theta <= Rational(1, 4) || theta >= Rational(1, 3)) {
    throw std::invalid_argument("main_term_compare: theta must lie in (1/4, 1/3)");
  }
  if (eps.sign() <= 0) throw std::invalid_argument("main_term_compare: eps must be positive");
  const Rational delta_exp = theta - eps * Rational(2);
  if (delta_exp.sign() <= 0) throw std::invalid_argument("main_term_compare: theta - 2 eps must be positive");
  if (x < BigNat(2)) throw std::invalid_argument("main_term_compare: x must be at least 2");

  MainTermReport report;
  report.q = choose_modulus(x);
  report.N = BigNat(certified_floor([&](unsigned digits) { return power_enclosure(x, theta, digits); },
                                    Fallback::kLower))
                 .to_u64();
  if (report.q <= 2 * report.N) {
    throw std::invalid_argument("main_term_compare: q = " + std::to_string(report.q) + " must exceed 2N = " +
                                std::to_string(2 * report.N));
  }
  if (report.q >= static_cast<std::uint64_t>(kMaxModulus)) throw std::invalid_argument("main_term_compare: x too large");

  constexpr unsigned kDigits = 40;
  const Enclosure delta = power_enclosure(x, -delta_exp, kDigits + 2);
  const mpz_class scale = pow10(kDigits).mpz();
  report.delta_lower = Rational(mpq_class(floor(delta.lo * Rational(mpq_class(scale))), scale));
  report.delta = FixedPoint::round(Rational(mpq_class((delta.lo.mpq() + delta.hi.mpq()) / 2)), 30);
  report.main_term = FixedPoint::round(report.delta_lower * Rational(static_cast<long>(report.N), 4), 12);

  const Rational half = report.delta_lower * Rational(1, 2);
  for (const Rational& lambda : lambdas) {
    const auto count = fractional_count(1, static_cast<std::int64_t>(report.q), lambda, half, report.N).count;
    report.rows.push_back({lambda, count, count == 0});
  }
  return report;
}

}  // namespace almostsq
