#pragma once

// Command-line front end: argument parsing into validated commands and their
// execution into CSV or JSON-lines output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "almostsq/exp_sums.hpp"
#include "almostsq/gap_experiments.hpp"
#include "almostsq/numbers.hpp"

namespace almostsq::cli {

enum class ExitCode : int { kOk = 0, kRuntimeError = 1, kUsage = 2, kPropertyFailed = 3 };

enum class Format { kCsv, kJson };

struct OutputOptions {
  Format format = Format::kCsv;
  std::optional<std::string> path;
  unsigned workers = 1;
};

struct FindArgs {
  enum class Method { kBrute, kDSearch, kConditional };
  BigNat x;
  Rational theta;
  Rational c2{2};
  Rational eps{1, 100};
  Method method = Method::kBrute;
};

struct ScanArgs {
  std::vector<BigNat> xs;
  Rational theta;
  Rational c2{2};
  SearchMethod method = SearchMethod::kBrute;
  Rational bound_coeff{10};
  Rational bound_exp;
};

struct QuarterArgs {
  std::vector<BigNat> ks;
  Rational theta;
  Rational c2{1};
};

struct ProductGapArgs {
  std::vector<BigNat> xs;
  Rational theta;
  Rational c{1};
};

struct MultTableArgs {
  std::vector<std::uint64_t> ns;
  std::uint64_t limit = kMultTableLimit;
};

struct TwoSquaresNearArgs {
  std::vector<BigNat> xs;
  std::optional<BigNat> d_max;
  Rational bound_coeff{4};
};

struct TwoSquaresGapArgs {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  std::uint64_t limit = kTwoSquaresLimit;
};

struct SalieProbeArgs {
  std::vector<ExpSumQuery> grid;
  double eps = 0.1;
  double alert = 100;
  bool fail_on_alert = false;
};

struct FractionalCountArgs {
  std::int64_t p = 1;
  std::int64_t q = 1;
  Rational lambda;
  Rational delta;
  std::uint64_t N = 0;
};

struct MainTermArgs {
  BigNat x;
  Rational theta;
  Rational eps{1, 100};
  std::vector<Rational> lambdas;
};

struct FitArgs {
  std::string input;
};

using CommandArgs = std::variant<FindArgs, ScanArgs, QuarterArgs, ProductGapArgs, MultTableArgs, TwoSquaresNearArgs,
                                 TwoSquaresGapArgs, SalieProbeArgs, FractionalCountArgs, MainTermArgs, FitArgs>;

struct Command {
  std::string subcommand;
  CommandArgs args;
  OutputOptions output;
  /// The command line, echoed in error logs.
  std::string invocation;
};

/// Invalid command line; the message includes usage text.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv (without the program name). Throws UsageError or HelpRequested.
Command parse_command(const std::vector<std::string>& args);

/// Runs a parsed command, writing rows to `out` (or the --output file) and
/// diagnostics to `err`. Returns the process exit code.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse_command + execute with exit-code mapping: 0 ok, 1 runtime error,
/// 2 usage error, 3 a pass/fail experiment failed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace almostsq::cli
