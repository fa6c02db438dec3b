#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/command.hpp"
#include "golden_cases.hpp"

using namespace almostsq::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ParseCommand, FindExample) {
  const Command c = parse_command({"find", "--x", "997", "--theta", "0.25", "--c2", "2", "--method", "brute"});
  EXPECT_EQ(c.subcommand, "find");
  const auto& a = std::get<FindArgs>(c.args);
  EXPECT_EQ(a.x, almostsq::BigNat(997));
  EXPECT_EQ(a.theta, almostsq::Rational(1, 4));
  EXPECT_EQ(a.method, FindArgs::Method::kBrute);
  EXPECT_EQ(c.output.format, Format::kCsv);
  EXPECT_EQ(c.output.workers, 1U);
}

TEST(ParseCommand, MultTableExample) {
  const Command c = parse_command({"multtable", "--n", "10"});
  const auto& a = std::get<MultTableArgs>(c.args);
  ASSERT_EQ(a.ns.size(), 1U);
  EXPECT_EQ(a.ns[0], 10U);
}

TEST(ParseCommand, UsageErrors) {
  EXPECT_THROW(parse_command({"find", "--theta", "0.7"}), UsageError);
  EXPECT_THROW(parse_command({"find", "--x", "997", "--theta", "0.7"}), UsageError);
  EXPECT_THROW(parse_command({"find", "--x", "997", "--theta", "0.25", "--bogus"}), UsageError);
  EXPECT_THROW(parse_command({"find", "--x", "-3", "--theta", "0.25"}), UsageError);
  EXPECT_THROW(parse_command({"find", "--x", "997", "--theta", "0.25", "--method", "conditional"}), UsageError);
  EXPECT_THROW(parse_command({"scan", "--theta", "0.25"}), UsageError);
  EXPECT_THROW(parse_command({"quarter", "--k", "100", "--theta", "0.3"}), UsageError);
  EXPECT_THROW(parse_command({"multtable", "--n", "20", "--limit", "10"}), UsageError);
  EXPECT_THROW(parse_command({"fractional-count", "--q", "5", "--delta", "0.7", "--N", "4"}), UsageError);
  EXPECT_THROW(parse_command({"multtable", "--n", "10", "--format", "xml"}), UsageError);
  EXPECT_THROW(parse_command({"multtable", "--n", "10", "--workers", "0"}), UsageError);
  EXPECT_THROW(parse_command({}), UsageError);
  EXPECT_THROW(parse_command({"nonsense"}), UsageError);
}

TEST(ParseCommand, HelpForEverySubcommand) {
  for (const char* sub : {"find", "scan", "quarter", "product-gap", "multtable", "two-squares", "salie-probe",
                          "fractional-count", "fit"}) {
    const Result r = invoke({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("Usage"), std::string::npos) << sub;
    EXPECT_NE(r.out.find("--workers"), std::string::npos) << sub;
  }
}

TEST(Execute, ExamplesFromTheSpecifiedBehaviour) {
  Result r = invoke({"find", "--x", "997", "--theta", "0.25", "--c2", "2", "--method", "brute"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "experiment,x,a,b,n,offset,D,d\nbrute,997,27,37,999,2,32,5\n");

  r = invoke({"multtable", "--n", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "experiment,n,count,density\nmulttable,10,42,0.420000000\n");

  r = invoke({"quarter", "--k", "100", "--theta", "0.1", "--c2", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(",true,100\n"), std::string::npos);
}

TEST(Execute, ExitCodes) {
  EXPECT_EQ(invoke({"find", "--theta", "0.7"}).code, 2);
  const Result usage = invoke({"find", "--x", "10", "--theta", "0.7"});
  EXPECT_EQ(usage.code, 2);
  EXPECT_NE(usage.err.find("Usage"), std::string::npos);

  const Result runtime = invoke({"fit", "--input", "/nonexistent/scan.csv"});
  EXPECT_EQ(runtime.code, 1);
  EXPECT_NE(runtime.err.find("fit --input /nonexistent/scan.csv"), std::string::npos);

  const Result failed = invoke({"scan", "--x", "997,1003", "--theta", "0.25", "--bound-coeff", "0.01"});
  EXPECT_EQ(failed.code, 3);
  EXPECT_NE(failed.out.find("false"), std::string::npos);
  EXPECT_NE(failed.err.find("--bound-coeff 0.01"), std::string::npos);
}

TEST(Execute, SalieAlertOnlyFailsWhenAsked) {
  const std::vector<std::string> base{"salie-probe", "--q", "3", "--H", "2", "--K", "2", "--alert", "0.01"};
  EXPECT_EQ(invoke(base).code, 0);
  auto strict = base;
  strict.push_back("--fail-on-alert");
  const Result r = invoke(strict);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("alert"), std::string::npos);
}

TEST(Execute, OutputFileMatchesStdout) {
  const auto path = std::filesystem::temp_directory_path() / "almostsq_cli_output_test.csv";
  const Result to_stdout = invoke({"multtable", "--n", "10,20,30"});
  const Result to_file = invoke({"multtable", "--n", "10,20,30", "--output", path.string()});
  EXPECT_EQ(to_file.code, 0);
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(slurp(path), to_stdout.out);
  std::filesystem::remove(path);
}

TEST(Execute, JsonLinesAreValidObjects) {
  const Result r = invoke({"find", "--x", "1000", "--theta", "1/4", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "{\"experiment\":\"brute\",\"x\":1000,\"a\":25,\"b\":40,\"n\":1000,\"offset\":0,\"D\":null,\"d\":null}\n");
}

TEST(Execute, FitReadsScanOutput) {
  const auto path = std::filesystem::temp_directory_path() / "almostsq_cli_fit_test.csv";
  {
    std::ofstream f(path);
    f << "experiment,x,offset,bound,pass\nscan-brute,100,10,1,true\nscan-brute,10000,100,1,true\n";
  }
  const Result r = invoke({"fit", "--input", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "experiment,slope,intercept,count\nfit,0.5,0,2\n");
  std::filesystem::remove(path);
}

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, ByteIdenticalAcrossWorkerCounts) {
  const GoldenCase& gc = GetParam();
  const std::string expected = slurp(std::filesystem::path(ALMOSTSQ_GOLDEN_DIR) / gc.file);
  ASSERT_FALSE(expected.empty()) << gc.file;
  for (const char* workers : {"1", "4", "8"}) {
    auto args = golden_args(gc);
    args.push_back("--workers");
    args.push_back(workers);
    const Result r = invoke(args);
    EXPECT_EQ(r.code, gc.exit_code) << gc.file << " workers=" << workers << "\n" << r.err;
    EXPECT_EQ(r.out, expected) << gc.file << " workers=" << workers;
  }
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(golden_cases()),
                         [](const ::testing::TestParamInfo<GoldenCase>& info) {
                           std::string name = info.param.file;
                           for (char& ch : name) {
                             if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
                           }
                           return name;
                         });
