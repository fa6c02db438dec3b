#pragma once

// Exponential sums and window machinery behind the fractional-part counting
// argument: quadratic Gauss sums, twisted incomplete Salie sums, Fejer
// coefficients, the triangular windows and the counter S_{p/q}^lambda.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "almostsq/numbers.hpp"

namespace almostsq {

using Complex = std::complex<double>;

/// Neumaier-compensated accumulator for complex sums.
class CompensatedSum {
 public:
  void add(Complex v);
  [[nodiscard]] Complex value() const { return {re_ + re_c_, im_ + im_c_}; }
  [[nodiscard]] std::size_t terms() const { return terms_; }

 private:
  double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
  std::size_t terms_ = 0;
};

/// Largest roundoff the probe accepts, per summed term.
inline constexpr double kRoundoffPerTerm = 1e-9;

/// A-priori roundoff estimate for a compensated sum of unit-modulus terms.
double predicted_roundoff(std::size_t terms);

/// e(u) = exp(2 pi i u).
Complex unit_phase(double u);

/// G(a, b; q) = sum_{d mod q} e((a d^2 + b d) / q), q >= 1.
Complex gauss_sum(std::int64_t a, std::int64_t b, std::int64_t q);

struct ExpSumQuery {
  std::int64_t a = 1;
  std::int64_t q = 3;
  double H = 1;
  double K = 1;
  double lambda = 0;
  double mu = 0;
};

/// sum_{1<=h<=H, (h,q)=1} e(lambda h) sum_{0<=k<K} e(mu k) (h/q) e(a hbar k^2 / q).
/// Throws std::invalid_argument for even q, q < 3, gcd(a, q) != 1, or a sum
/// whose predicted roundoff exceeds the per-term budget.
Complex salie_sum(const ExpSumQuery& query);

/// (sqrt(HK) + H^{3/4} + K + HK/sqrt(q) + K^2/sqrt(q)) * q^eps.
double conjectured_bound(double H, double K, std::int64_t q, double eps);

struct ProbeRow {
  ExpSumQuery query;
  double abs_sum = 0;
  double bound = 0;
  double ratio = 0;
};

struct ProbeSkip {
  ExpSumQuery query;
  std::string reason;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  std::vector<ProbeSkip> skipped;
  double max_ratio = 0;
  /// Index into rows; meaningful only when rows is nonempty.
  std::size_t argmax = 0;
};

/// Evaluates |salie_sum| / conjectured_bound for every admissible query, in
/// grid order. Queries with even or square q, gcd(a, q) > 1, H < 1 or K < 1
/// are skipped and listed.
ProbeReport probe_conjecture(const std::vector<ExpSumQuery>& grid, double eps, unsigned workers = 1);

/// Odd non-square q in [3, q_max], a in 1..5 coprime to q, H, K in
/// {ceil(sqrt q), q, 2q}, lambda, mu in {0, 0.3}.
std::vector<ExpSumQuery> default_probe_grid(std::int64_t q_max = 200);

/// Triangular window of half-width delta centred at lambda (mod 1).
struct FejerWindow {
  double delta;
  double lambda;
};

/// c(h) = delta (sin(pi delta h) / (pi delta h))^2, with c(0) = delta.
/// Exactly zero when delta*h is a nonzero integer. Requires 0 < delta < 1/2.
double fejer_coeff(double delta, std::int64_t h);

enum class WindowKind { kF, kT, kGLambda, kFHat };

/// f: unit triangle on [-1, 1]; t: triangle of half-width delta; g: t
/// periodised with period 1; g_lambda(x) = g(x - lambda); f_hat(y) = (sin pi y / pi y)^2.
double window_eval(WindowKind kind, const FejerWindow& window, double x);

struct CountResult {
  std::uint64_t count = 0;
  /// delta * N.
  double main_term = 0;
  std::uint64_t N = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
};

/// Exact count of 1 <= n <= N with {p n^2 / q} in the open window
/// (lambda - delta, lambda + delta) mod 1. Requires gcd(p, q) = 1, q >= 1 and
/// 0 < delta <= 1/2.
CountResult fractional_count(std::int64_t p, std::int64_t q, const Rational& lambda, const Rational& delta,
                             std::uint64_t N);

struct InequalityCheck {
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

/// lhs = 1 + 2 S, rhs = sum_{|n| <= N} f(n/N) g_lambda(p n^2 / q); passes when
/// lhs >= rhs - 1e-9. For N = 0 the right side is g_lambda(0).
InequalityCheck counting_inequality_check(std::int64_t p, std::int64_t q, const Rational& lambda,
                                          const Rational& delta, std::uint64_t N);

/// q = 2 floor(sqrt x) + 1, or + 3 when that is a perfect square.
std::uint64_t choose_modulus(const BigNat& x);

struct MainTermRow {
  Rational lambda;
  std::uint64_t count = 0;
  bool zero = false;
};

struct MainTermReport {
  std::uint64_t q = 0;
  std::uint64_t N = 0;
  /// x^-(theta - 2 eps); `delta_lower` is the rational actually used for counting.
  FixedPoint delta;
  Rational delta_lower;
  /// delta * N / 4.
  FixedPoint main_term;
  std::vector<MainTermRow> rows;
};

/// For each lambda counts S_{1/q}^lambda(delta/2, N) with N = floor(x^theta)
/// and delta = x^-(theta - 2 eps). Requires 1/4 < theta < 1/3 and q > 2N.
MainTermReport main_term_compare(const BigNat& x, const Rational& theta, const Rational& eps,
                                 const std::vector<Rational>& lambdas);

}  // namespace almostsq
