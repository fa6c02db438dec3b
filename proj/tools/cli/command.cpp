#include "cli/command.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "almostsq/almost_square.hpp"
#include "almostsq/certified.hpp"
#include "almostsq/errors.hpp"
#include "almostsq/parallel.hpp"
#include "cli/output.hpp"

namespace almostsq::cli {

namespace {

// ------------------------------------------------------------ value parsing

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

BigNat parse_nat(const std::string& text, const std::string& flag) {
  try {
    return BigNat::parse(text);
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected a nonnegative integer, got '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& flag) {
  const BigNat v = parse_nat(text, flag);
  if (!v.fits_u64()) throw UsageError(flag + ": value too large");
  return v.to_u64();
}

std::int64_t parse_i64(const std::string& text, const std::string& flag) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected an integer, got '" + text + "'");
  }
}

Rational parse_rational(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected a number such as 0.25 or 1/4, got '" + text + "'");
  }
}

double parse_real(const std::string& text, const std::string& flag) { return parse_rational(text, flag).to_double(); }

std::vector<BigNat> parse_nat_list(const std::string& text, const std::string& flag) {
  std::vector<BigNat> out;
  for (const auto& item : split_list(text)) out.push_back(parse_nat(item, flag));
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void check_theta_half(const Rational& theta) {
  require(theta.sign() >= 0 && theta < Rational(1, 2), "--theta must lie in [0, 1/2)");
}

// Options shared by every subcommand.
struct CommonFlags {
  std::string format = "csv";
  std::string output;
  unsigned workers = 1;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output", flags.output, "Write rows to this file instead of standard output");
  sub->add_option("--workers", flags.workers, "Worker threads; output does not depend on it")
      ->check(CLI::Range(1U, 256U));
}

// x values from either an explicit list or a logarithmic grid.
struct GridFlags {
  std::string list;
  std::string lo;
  std::string hi;
  std::size_t points = 20;
};

void add_grid(CLI::App* sub, GridFlags& g, const std::string& name) {
  sub->add_option("--" + name, g.list, "Comma-separated values");
  sub->add_option("--" + name + "-lo", g.lo, "Lower end of a logarithmic grid");
  sub->add_option("--" + name + "-hi", g.hi, "Upper end of a logarithmic grid");
  sub->add_option("--points", g.points, "Grid size")->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000}));
}

std::vector<BigNat> resolve_grid(const GridFlags& g, const std::string& name) {
  if (!g.list.empty()) {
    require(g.lo.empty() && g.hi.empty(), "--" + name + " cannot be combined with --" + name + "-lo/--" + name + "-hi");
    return parse_nat_list(g.list, "--" + name);
  }
  require(!g.lo.empty() && !g.hi.empty(), "give --" + name + " or both --" + name + "-lo and --" + name + "-hi");
  const BigNat lo = parse_nat(g.lo, "--" + name + "-lo");
  const BigNat hi = parse_nat(g.hi, "--" + name + "-hi");
  require(!lo.is_zero() && lo <= hi, "grid needs 1 <= lo <= hi");
  return log_spaced(lo, hi, g.points);
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s = "almostsq";
  for (const auto& a : args) s += " " + a;
  return s;
}

}  // namespace

// ------------------------------------------------------------------ parsing

Command parse_command(const std::vector<std::string>& args) {
  CLI::App app{"Almost squares n = ab with a, b near sqrt(x): searches, gap experiments and exponential sums.",
               "almostsq"};
  app.require_subcommand(1, 1);
  CommonFlags common;

  // find
  auto* find = app.add_subcommand(
      "find",
      "Find the almost square n = ab nearest x with a, b within c2 x^theta of sqrt(x). Methods: 'brute' "
      "(exhaustive factor window), 'dsearch' (difference of squares ab = D^2 - d^2 with sqrt(x + d^2) near D), "
      "'conditional' (fractional-part window {d^2 / 2 sqrt x} near 1 - {sqrt x}, N = [x^theta]).");
  std::string f_x, f_theta, f_c2 = "2", f_eps = "0.01", f_method = "brute";
  find->add_option("--x", f_x, "Target x")->required();
  find->add_option("--theta", f_theta, "Window exponent theta")->required();
  find->add_option("--c2", f_c2, "Window constant c2")->capture_default_str();
  find->add_option("--eps", f_eps, "epsilon for the conditional method")->capture_default_str();
  find->add_option("--method", f_method, "brute | dsearch | conditional")->capture_default_str()
      ->check(CLI::IsMember({"brute", "dsearch", "conditional"}));
  add_common(find, common);

  // scan
  auto* scan = app.add_subcommand(
      "scan",
      "Smallest offset |x - ab| in the theta-window for each x of a grid: the empirical f(theta) exponent. "
      "A row passes when offset <= coeff * x^exp (default exp = 1/2 - theta, the conjectured optimum).");
  GridFlags s_grid;
  std::string s_theta, s_c2 = "2", s_method = "brute", s_coeff = "10", s_exp;
  add_grid(scan, s_grid, "x");
  scan->add_option("--theta", s_theta, "Window exponent theta")->required();
  scan->add_option("--c2", s_c2, "Window constant c2")->capture_default_str();
  scan->add_option("--method", s_method, "brute | dsearch")->capture_default_str()->check(CLI::IsMember({"brute", "dsearch"}));
  scan->add_option("--bound-coeff", s_coeff, "Bound coefficient")->capture_default_str();
  scan->add_option("--bound-exp", s_exp, "Bound exponent (default 1/2 - theta)");
  add_common(scan, common);

  // quarter
  auto* quarter = app.add_subcommand(
      "quarter",
      "Quarter-point lower bound for theta < 1/4: at x nearest (k + 1/4)^2, where {sqrt x} = 1/4, every "
      "window product satisfies |x - ab| >= sqrt(x)/4 - c2^2 x^(2 theta) - 1.");
  std::string q_k, q_klo, q_khi, q_theta, q_c2 = "1";
  std::size_t q_count = 50;
  quarter->add_option("--k", q_k, "Comma-separated k values");
  quarter->add_option("--k-lo", q_klo, "First k of an evenly spaced range");
  quarter->add_option("--k-hi", q_khi, "Last k of an evenly spaced range");
  quarter->add_option("--count", q_count, "Number of k values in the range")->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{1'000'000}));
  quarter->add_option("--theta", q_theta, "Window exponent theta < 1/4")->required();
  quarter->add_option("--c2", q_c2, "Window constant c2")->capture_default_str();
  add_common(quarter, common);

  // product-gap
  auto* pgap = app.add_subcommand(
      "product-gap",
      "Counting lower bound on f(theta): at most 4c^2 x^(2 theta) distinct products ab lie in "
      "[x - c x^(1/2 + theta), x], so some gap is at least x^(1/2 - theta) / (4c).");
  std::string p_x, p_theta, p_c = "1";
  pgap->add_option("--x", p_x, "Comma-separated x values")->required();
  pgap->add_option("--theta", p_theta, "Window exponent theta")->required();
  pgap->add_option("--c", p_c, "Window constant c")->capture_default_str();
  add_common(pgap, common);

  // multtable
  auto* mult = app.add_subcommand(
      "multtable",
      "Distinct entries of the n x n multiplication table; the density decays like (log n)^-alpha with "
      "alpha = 1 - log(e log 2)/log 2 = 0.086.");
  std::string m_n;
  std::uint64_t m_limit = kMultTableLimit;
  mult->add_option("--n", m_n, "Comma-separated table sizes")->required();
  mult->add_option("--limit", m_limit, "Largest n accepted")->capture_default_str();
  add_common(mult, common);

  // two-squares
  auto* two = app.add_subcommand(
      "two-squares",
      "Sums of two squares. 'near': over d <= d_max take D nearest sqrt(x - d^2) so that D^2 + d^2 is close "
      "to x; passes when the offset is <= coeff * x^(1/4). 'gap': largest gap between consecutive sums of "
      "two squares in [lo, hi].");
  std::string t_mode = "near", t_dmax, t_coeff = "4";
  GridFlags t_grid;
  std::uint64_t t_lo = 1, t_hi = 0, t_limit = kTwoSquaresLimit;
  two->add_option("--mode", t_mode, "near | gap")->capture_default_str()->check(CLI::IsMember({"near", "gap"}));
  add_grid(two, t_grid, "x");
  two->add_option("--d-max", t_dmax, "Largest d (default floor(2 x^(1/4)))");
  two->add_option("--bound-coeff", t_coeff, "Bound coefficient for near mode")->capture_default_str();
  two->add_option("--lo", t_lo, "Gap mode: lower end")->capture_default_str();
  two->add_option("--hi", t_hi, "Gap mode: upper end");
  two->add_option("--limit", t_limit, "Gap mode: largest sieve size accepted")->capture_default_str();
  add_common(two, common);

  // salie-probe
  auto* salie = app.add_subcommand(
      "salie-probe",
      "Twisted incomplete Salie sums sum_h e(lambda h) sum_k e(mu k) (h/q) e(a hbar k^2 / q) against the "
      "conjectured bound (sqrt(HK) + H^(3/4) + K + HK/sqrt(q) + K^2/sqrt(q)) q^eps. Without --q the default "
      "grid (odd non-square q <= q-max) is probed.");
  std::int64_t s_qmax = 200;
  std::string sp_eps = "0.1", sp_alert = "100", sp_a = "1", sp_q, sp_H, sp_K, sp_lambda = "0", sp_mu = "0";
  bool sp_fail = false;
  salie->add_option("--q-max", s_qmax, "Largest q in the default grid")->capture_default_str()->check(CLI::Range(3, 100000));
  salie->add_option("--eps", sp_eps, "Exponent eps in q^eps")->capture_default_str();
  salie->add_option("--alert", sp_alert, "Warn when a ratio exceeds this")->capture_default_str();
  salie->add_flag("--fail-on-alert", sp_fail, "Exit with status 3 when the alert fires");
  salie->add_option("--a", sp_a, "Single query: a")->capture_default_str();
  salie->add_option("--q", sp_q, "Single query: odd modulus q");
  salie->add_option("--H", sp_H, "Single query: H");
  salie->add_option("--K", sp_K, "Single query: K");
  salie->add_option("--lambda", sp_lambda, "Single query: lambda")->capture_default_str();
  salie->add_option("--mu", sp_mu, "Single query: mu")->capture_default_str();
  add_common(salie, common);

  // fractional-count
  auto* frac = app.add_subcommand(
      "fractional-count",
      "Fractional-part counting S = #{n <= N : {p n^2 / q} in (lambda - delta, lambda + delta) mod 1} with the "
      "Fejer-window inequality 1 + 2S >= sum_n f(n/N) g_lambda(p n^2 / q). With --x: the main-term comparison "
      "q = 2[sqrt x] + 1 (or + 3), N = [x^theta], delta = x^-(theta - 2 eps), counting S(delta/2, N).");
  std::string fc_p = "1", fc_q, fc_lambda = "0", fc_delta, fc_N, fc_x, fc_theta, fc_eps = "0.01",
              fc_lambdas = "0,0.25,0.5,0.75";
  frac->add_option("--p", fc_p, "Numerator p")->capture_default_str();
  frac->add_option("--q", fc_q, "Modulus q");
  frac->add_option("--lambda", fc_lambda, "Window centre")->capture_default_str();
  frac->add_option("--delta", fc_delta, "Window half-width");
  frac->add_option("--N", fc_N, "Range 1..N");
  frac->add_option("--x", fc_x, "Main-term mode: x");
  frac->add_option("--theta", fc_theta, "Main-term mode: theta in (1/4, 1/3)");
  frac->add_option("--eps", fc_eps, "Main-term mode: eps")->capture_default_str();
  frac->add_option("--lambdas", fc_lambdas, "Main-term mode: comma-separated window centres")->capture_default_str();
  add_common(frac, common);

  // fit
  auto* fit = app.add_subcommand(
      "fit", "Least-squares slope of ln(offset) against ln(x) over a CSV with x and offset columns (scan output); "
             "offset-0 rows are ignored. The slope estimates f(theta).");
  std::string fit_input;
  fit->add_option("--input", fit_input, "CSV file with header")->required();
  add_common(fit, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    throw HelpRequested(target->help());
  } catch (const CLI::ParseError& e) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    throw UsageError(std::string(e.what()) + "\n" + target->help());
  }

  Command cmd;
  cmd.invocation = join_args(args);
  cmd.output.format = common.format == "json" ? Format::kJson : Format::kCsv;
  if (!common.output.empty()) cmd.output.path = common.output;
  cmd.output.workers = common.workers;

  const CLI::App* chosen = app.get_subcommands().front();
  cmd.subcommand = chosen->get_name();
  try {
    if (chosen == find) {
      FindArgs a;
      a.x = parse_nat(f_x, "--x");
      require(!a.x.is_zero(), "--x must be at least 1");
      a.theta = parse_rational(f_theta, "--theta");
      a.c2 = parse_rational(f_c2, "--c2");
      a.eps = parse_rational(f_eps, "--eps");
      require(a.c2.sign() > 0, "--c2 must be positive");
      if (f_method == "conditional") {
        a.method = FindArgs::Method::kConditional;
        require(a.theta > Rational(1, 4) && a.theta < Rational(1, 3), "--theta must lie in (1/4, 1/3) for conditional");
        require(a.eps.sign() > 0, "--eps must be positive");
      } else {
        a.method = f_method == "brute" ? FindArgs::Method::kBrute : FindArgs::Method::kDSearch;
        check_theta_half(a.theta);
      }
      cmd.args = a;
    } else if (chosen == scan) {
      ScanArgs a;
      a.xs = resolve_grid(s_grid, "x");
      a.theta = parse_rational(s_theta, "--theta");
      check_theta_half(a.theta);
      a.c2 = parse_rational(s_c2, "--c2");
      require(a.c2.sign() > 0, "--c2 must be positive");
      a.method = s_method == "brute" ? SearchMethod::kBrute : SearchMethod::kDSearch;
      a.bound_coeff = parse_rational(s_coeff, "--bound-coeff");
      a.bound_exp = s_exp.empty() ? Rational(1, 2) - a.theta : parse_rational(s_exp, "--bound-exp");
      require(a.bound_coeff.sign() > 0, "--bound-coeff must be positive");
      cmd.args = a;
    } else if (chosen == quarter) {
      QuarterArgs a;
      if (!q_k.empty()) {
        require(q_klo.empty() && q_khi.empty(), "--k cannot be combined with --k-lo/--k-hi");
        a.ks = parse_nat_list(q_k, "--k");
      } else {
        require(!q_klo.empty() && !q_khi.empty(), "give --k or both --k-lo and --k-hi");
        const BigNat lo = parse_nat(q_klo, "--k-lo");
        const BigNat hi = parse_nat(q_khi, "--k-hi");
        require(lo <= hi, "--k-lo must not exceed --k-hi");
        const BigNat span = hi - lo;
        for (std::size_t i = 0; i < q_count; ++i) {
          a.ks.push_back(q_count == 1 ? lo : lo + span * BigNat(i) / BigNat(q_count - 1));
        }
      }
      a.theta = parse_rational(q_theta, "--theta");
      require(a.theta.sign() >= 0 && a.theta < Rational(1, 4), "--theta must lie in [0, 1/4)");
      a.c2 = parse_rational(q_c2, "--c2");
      require(a.c2.sign() > 0, "--c2 must be positive");
      cmd.args = a;
    } else if (chosen == pgap) {
      ProductGapArgs a;
      a.xs = parse_nat_list(p_x, "--x");
      a.theta = parse_rational(p_theta, "--theta");
      check_theta_half(a.theta);
      a.c = parse_rational(p_c, "--c");
      require(a.c.sign() > 0, "--c must be positive");
      cmd.args = a;
    } else if (chosen == mult) {
      MultTableArgs a;
      for (const auto& item : split_list(m_n)) a.ns.push_back(parse_u64(item, "--n"));
      require(!a.ns.empty(), "--n: empty list");
      a.limit = m_limit;
      for (auto n : a.ns) {
        require(n >= 1, "--n values must be at least 1");
        require(n <= a.limit, "--n " + std::to_string(n) + " exceeds --limit " + std::to_string(a.limit));
      }
      cmd.args = a;
    } else if (chosen == two) {
      if (t_mode == "gap") {
        require(t_hi >= t_lo, "--hi must be given and at least --lo");
        require(t_hi <= t_limit, "--hi exceeds --limit");
        cmd.args = TwoSquaresGapArgs{t_lo, t_hi, t_limit};
      } else {
        TwoSquaresNearArgs a;
        a.xs = resolve_grid(t_grid, "x");
        if (!t_dmax.empty()) a.d_max = parse_nat(t_dmax, "--d-max");
        a.bound_coeff = parse_rational(t_coeff, "--bound-coeff");
        for (const auto& x : a.xs) {
          require(x >= BigNat(2), "--x values must be at least 2");
          if (a.d_max) require(*a.d_max * *a.d_max < x, "--d-max squared must be below every x");
        }
        cmd.args = a;
      }
    } else if (chosen == salie) {
      SalieProbeArgs a;
      a.eps = parse_real(sp_eps, "--eps");
      a.alert = parse_real(sp_alert, "--alert");
      a.fail_on_alert = sp_fail;
      require(a.eps >= 0, "--eps must be nonnegative");
      if (!sp_q.empty()) {
        require(!sp_H.empty() && !sp_K.empty(), "a single query needs --q, --H and --K");
        ExpSumQuery query{parse_i64(sp_a, "--a"), parse_i64(sp_q, "--q"), parse_real(sp_H, "--H"),
                          parse_real(sp_K, "--K"), parse_real(sp_lambda, "--lambda"), parse_real(sp_mu, "--mu")};
        require(query.q >= 3 && query.q % 2 == 1, "--q must be odd and at least 3");
        a.grid.push_back(query);
      } else {
        a.grid = default_probe_grid(s_qmax);
      }
      cmd.args = a;
    } else if (chosen == frac) {
      if (!fc_x.empty()) {
        MainTermArgs a;
        a.x = parse_nat(fc_x, "--x");
        require(a.x >= BigNat(2), "--x must be at least 2");
        require(!fc_theta.empty(), "main-term mode needs --theta");
        a.theta = parse_rational(fc_theta, "--theta");
        require(a.theta > Rational(1, 4) && a.theta < Rational(1, 3), "--theta must lie in (1/4, 1/3)");
        a.eps = parse_rational(fc_eps, "--eps");
        require(a.eps.sign() > 0, "--eps must be positive");
        for (const auto& item : split_list(fc_lambdas)) a.lambdas.push_back(parse_rational(item, "--lambdas"));
        cmd.args = a;
      } else {
        require(!fc_q.empty() && !fc_delta.empty() && !fc_N.empty(), "give --q, --delta and --N (or --x)");
        FractionalCountArgs a;
        a.p = parse_i64(fc_p, "--p");
        a.q = parse_i64(fc_q, "--q");
        a.lambda = parse_rational(fc_lambda, "--lambda");
        a.delta = parse_rational(fc_delta, "--delta");
        a.N = parse_u64(fc_N, "--N");
        require(a.q >= 1, "--q must be positive");
        require(a.delta.sign() > 0 && a.delta < Rational(1, 2), "--delta must lie in (0, 1/2)");
        cmd.args = a;
      }
    } else {
      cmd.args = FitArgs{fit_input};
    }
  } catch (const UsageError& e) {
    throw UsageError(std::string(e.what()) + "\n" + chosen->help());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(e.what()) + "\n" + chosen->help());
  }
  return cmd;
}

// ---------------------------------------------------------------- execution

namespace {

Cell opt_cell(const std::optional<BigNat>& v) { return v ? Cell::number(*v) : Cell::null(); }

// Executors return true when every pass/fail property held.
class Executor {
 public:
  Executor(const Command& cmd, std::ostream& out, std::ostream& err)
      : json_(cmd.output.format == Format::kJson), workers_(cmd.output.workers), out_(out), err_(err) {}

  bool operator()(const FindArgs& a) {
    RowWriter w(out_, json_, {"experiment", "x", "a", "b", "n", "offset", "D", "d"});
    AlmostSquare r;
    std::string tag;
    switch (a.method) {
      case FindArgs::Method::kBrute:
        r = brute_force_nearest(a.x, search_window(a.x, a.theta, a.c2), workers_);
        tag = "brute";
        break;
      case FindArgs::Method::kDSearch:
        r = d_search_in_window(a.x, search_window(a.x, a.theta, a.c2), workers_);
        tag = "dsearch";
        break;
      case FindArgs::Method::kConditional:
        r = conditional_find(a.x, a.theta, a.eps).result;
        tag = "conditional";
        break;
    }
    w.write({Cell::string(tag), Cell::number(r.x), Cell::number(r.a), Cell::number(r.b), Cell::number(r.n),
             Cell::number(r.offset), opt_cell(r.D), opt_cell(r.d)});
    return true;
  }

  bool operator()(const ScanArgs& a) {
    RowWriter w(out_, json_, {"experiment", "x", "offset", "bound", "pass"});
    const auto records = scan_worst_offset(a.xs, a.theta, a.c2, a.method, workers_);
    bool all = true;
    for (const auto& r : records) {
      auto bound = [&](unsigned digits) { return power_enclosure(r.x, a.bound_exp, digits) * a.bound_coeff; };
      const bool pass = certified_compare(bound, Rational(mpq_class(r.offset.mpz()))) >= 0;
      all = all && pass;
      w.write({Cell::string("scan-" + r.meta), Cell::number(r.x), Cell::number(r.offset), Cell::number(display(bound)),
               Cell::boolean(pass)});
    }
    return all;
  }

  bool operator()(const QuarterArgs& a) {
    RowWriter w(out_, json_, {"experiment", "x", "offset", "bound", "pass", "k"});
    const auto checks =
        parallel_map(a.ks.size(), workers_, [&](std::size_t i) { return quarter_point_check(a.ks[i], a.theta, a.c2); });
    bool all = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const auto& c = checks[i];
      all = all && c.pass;
      w.write({Cell::string("quarter"), Cell::number(c.x), Cell::number(c.min_offset), Cell::number(c.bound),
               Cell::boolean(c.pass), Cell::number(a.ks[i])});
    }
    return all;
  }

  bool operator()(const ProductGapArgs& a) {
    RowWriter w(out_, json_, {"experiment", "x", "offset", "bound", "pass", "at", "products"});
    bool all = true;
    for (const auto& x : a.xs) {
      const ProductGap g = product_gap(x, a.theta, a.c, workers_);
      all = all && g.pass;
      w.write({Cell::string(g.empty_product_set ? "product-gap-empty" : "product-gap"), Cell::number(x),
               Cell::number(g.max_gap), Cell::number(g.floor), Cell::boolean(g.pass), Cell::number(g.at),
               Cell::number(static_cast<std::uint64_t>(g.products))});
    }
    return all;
  }

  bool operator()(const MultTableArgs& a) {
    RowWriter w(out_, json_, {"experiment", "n", "count", "density"});
    const auto counts =
        parallel_map(a.ns.size(), workers_, [&](std::size_t i) { return mult_table_count(a.ns[i], a.limit); });
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const Rational density(mpq_class(mpz_class(std::to_string(counts[i])),
                                       mpz_class(std::to_string(a.ns[i])) * mpz_class(std::to_string(a.ns[i]))));
      w.write({Cell::string("multtable"), Cell::number(a.ns[i]), Cell::number(counts[i]),
               Cell::number(FixedPoint::round(density, 9))});
    }
    return true;
  }

  bool operator()(const TwoSquaresNearArgs& a) {
    RowWriter w(out_, json_, {"experiment", "x", "offset", "bound", "pass", "D", "d"});
    const auto results = parallel_map(a.xs.size(), workers_, [&](std::size_t i) {
      const BigNat& x = a.xs[i];
      BigNat d_max = a.d_max ? *a.d_max
                             : BigNat(certified_floor(
                                   [&](unsigned digits) { return power_enclosure(x, Rational(1, 4), digits) * Rational(2); },
                                   Fallback::kLower));
      while (!(d_max * d_max < x)) d_max -= BigNat(1);
      return two_squares_near(x, d_max);
    });
    bool all = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const BigNat& x = a.xs[i];
      const auto& r = results[i];
      auto bound = [&](unsigned digits) { return power_enclosure(x, Rational(1, 4), digits) * a.bound_coeff; };
      const bool pass = certified_compare(bound, Rational(mpq_class(r.offset.mpz()))) >= 0;
      all = all && pass;
      w.write({Cell::string("two-squares-near"), Cell::number(x), Cell::number(r.offset), Cell::number(display(bound)),
               Cell::boolean(pass), Cell::number(r.D), Cell::number(r.d)});
    }
    return all;
  }

  bool operator()(const TwoSquaresGapArgs& a) {
    RowWriter w(out_, json_, {"experiment", "lo", "hi", "gap", "at"});
    const TwoSquaresGap g = max_gap_two_squares(a.lo, a.hi, a.limit);
    w.write({Cell::string("two-squares-gap"), Cell::number(a.lo), Cell::number(a.hi), Cell::number(g.gap),
             Cell::number(g.at)});
    return true;
  }

  bool operator()(const SalieProbeArgs& a) {
    RowWriter w(out_, json_, {"a", "q", "H", "K", "lambda", "mu", "abs_sum", "bound", "ratio"});
    const ProbeReport report = probe_conjecture(a.grid, a.eps, workers_);
    for (const auto& s : report.skipped) {
      err_ << "almostsq: skipped query a=" << s.query.a << " q=" << s.query.q << " H=" << format_double(s.query.H)
           << " K=" << format_double(s.query.K) << ": " << s.reason << '\n';
    }
    bool alert = false;
    for (const auto& r : report.rows) {
      const auto& q = r.query;
      w.write({Cell::number(q.a), Cell::number(q.q), Cell::number(format_double(q.H)), Cell::number(format_double(q.K)),
               Cell::number(format_double(q.lambda)), Cell::number(format_double(q.mu)),
               Cell::number(format_double(r.abs_sum)), Cell::number(format_double(r.bound)),
               Cell::number(format_double(r.ratio))});
      alert = alert || r.ratio > a.alert;
    }
    if (!report.rows.empty()) {
      const auto& best = report.rows[report.argmax].query;
      err_ << "almostsq: salie-probe " << report.rows.size() << " rows, " << report.skipped.size()
           << " skipped, max ratio " << format_double(report.max_ratio) << " at a=" << best.a << " q=" << best.q
           << " H=" << format_double(best.H) << " K=" << format_double(best.K) << " lambda=" << format_double(best.lambda)
           << " mu=" << format_double(best.mu) << '\n';
    }
    if (alert) err_ << "almostsq: warning: ratio above alert threshold " << format_double(a.alert) << '\n';
    return !(alert && a.fail_on_alert);
  }

  bool operator()(const FractionalCountArgs& a) {
    RowWriter w(out_, json_,
                {"experiment", "p", "q", "lambda", "delta", "N", "count", "main_term", "lhs", "rhs", "pass"});
    const CountResult c = fractional_count(a.p, a.q, a.lambda, a.delta, a.N);
    const InequalityCheck ineq = counting_inequality_check(a.p, a.q, a.lambda, a.delta, a.N);
    w.write({Cell::string("fractional-count"), Cell::number(a.p), Cell::number(a.q),
             Cell::number(format_rational(a.lambda)), Cell::number(format_rational(a.delta)), Cell::number(a.N),
             Cell::number(c.count), Cell::number(format_double(c.main_term)), Cell::number(format_double(ineq.lhs)),
             Cell::number(format_double(ineq.rhs)), Cell::boolean(ineq.pass)});
    return ineq.pass;
  }

  bool operator()(const MainTermArgs& a) {
    RowWriter w(out_, json_, {"experiment", "x", "q", "N", "delta", "lambda", "count", "main_term", "zero"});
    const MainTermReport r = main_term_compare(a.x, a.theta, a.eps, a.lambdas);
    const FixedPoint delta = FixedPoint::round(r.delta.exact(), 12);
    bool none_zero = true;
    for (const auto& row : r.rows) {
      none_zero = none_zero && !row.zero;
      w.write({Cell::string("main-term"), Cell::number(a.x), Cell::number(r.q), Cell::number(r.N), Cell::number(delta),
               Cell::number(format_rational(row.lambda)), Cell::number(row.count), Cell::number(r.main_term),
               Cell::boolean(row.zero)});
    }
    return none_zero;
  }

  bool operator()(const FitArgs& a) {
    std::ifstream in(a.input);
    if (!in) throw std::runtime_error("cannot open " + a.input);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(a.input + ": empty file");
    const auto header = split_list(line);
    auto column = [&](const std::string& name) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
      }
      throw std::runtime_error(a.input + ": missing column '" + name + "'");
    };
    const std::size_t xi = column("x");
    const std::size_t oi = column("offset");
    std::vector<GapRecord> records;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string f;
      while (std::getline(ss, f, ',')) fields.push_back(f);
      if (fields.size() != header.size()) throw std::runtime_error(a.input + ": ragged row '" + line + "'");
      records.push_back({BigNat::parse(fields[xi]), BigNat::parse(fields[oi]), "fit"});
    }
    const ExponentFit fit = fit_exponent(records);
    RowWriter w(out_, json_, {"experiment", "slope", "intercept", "count"});
    w.write({Cell::string("fit"), Cell::number(format_double(fit.slope)), Cell::number(format_double(fit.intercept)),
             Cell::number(static_cast<std::uint64_t>(fit.count))});
    return true;
  }

 private:
  static FixedPoint display(const std::function<Enclosure(unsigned)>& make) {
    const Enclosure e = make(12);
    return FixedPoint::round(Rational(mpq_class((e.lo.mpq() + e.hi.mpq()) / 2)), 6);
  }

  bool json_;
  unsigned workers_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* dest = &out;
  if (cmd.output.path) {
    file.open(*cmd.output.path);
    if (!file) {
      err << "almostsq: error: cannot open output file " << *cmd.output.path << '\n';
      return static_cast<int>(ExitCode::kRuntimeError);
    }
    dest = &file;
  }
  try {
    const bool ok = std::visit(Executor(cmd, *dest, err), cmd.args);
    dest->flush();
    if (!ok) {
      err << "almostsq: property failed: " << cmd.invocation << '\n';
      return static_cast<int>(ExitCode::kPropertyFailed);
    }
    return static_cast<int>(ExitCode::kOk);
  } catch (const std::exception& e) {
    err << "almostsq: error: " << e.what() << " [" << cmd.invocation << "]\n";
    return static_cast<int>(ExitCode::kRuntimeError);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_command(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return static_cast<int>(ExitCode::kOk);
  } catch (const UsageError& e) {
    err << "almostsq: " << e.what();
    return static_cast<int>(ExitCode::kUsage);
  }
  return execute(cmd, out, err);
}

}  // namespace almostsq::cli
