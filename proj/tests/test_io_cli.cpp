#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stochmatch/cli.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/io.hpp"

namespace stochmatch {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "stochmatch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stochmatch_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Io, RoundTripAllKinds) {
  RandomFamily f;
  f.n = 3;
  f.m = 4;
  f.density = 0.8;
  const std::vector<AnyInstance> cases = {
      gen_random(f, 3),
      gen_random_correlated(f, 2, 3),
      make_bmatching({1.0, 2.0}, {2.0, 1.0}, 2, {{0, 0}, {1, 1}}),
      gen_hard_adwords(3),
  };
  for (const auto& inst : cases) {
    const std::string text = dump_instance(inst);
    const AnyInstance back = parse_instance(text);
    EXPECT_EQ(back, inst) << kind_name(inst);
    EXPECT_EQ(dump_instance(back), text);
    EXPECT_EQ(text.back(), '\n');
  }
}

TEST(Io, IdsAndDefaults) {
  const auto inst = parse_instance(R"({
    "format_version": 1, "kind": "stochastic",
    "resources": [{"id": "a", "weight": 2}, {"id": 7, "weight": 1}],
    "arrivals": ["x", "y"],
    "edges": [{"resource": 7, "arrival": "y"}, {"resource": "a", "arrival": "x", "p": 0.25}]
  })");
  const auto& s = std::get<StochasticInstance>(inst);
  EXPECT_EQ(*s.prob(1, 1), 1.0);
  EXPECT_EQ(*s.prob(0, 0), 0.25);
  EXPECT_EQ(s.weights[0], 2.0);
}

TEST(Io, Rejections) {
  const auto bad = [](const std::string& text, const std::string& needle) {
    try {
      parse_instance(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  const std::string head = R"("format_version": 1, "resources": [{"id": "r0", "weight": 1}], "arrivals": ["t0"], )";
  bad("{" + head + R"("kind": "stochastic", "edges": [], "extra": 1})", "unknown field 'extra'");
  bad("{" + head + R"("kind": "stochastic", "edges": [{"resource": "r0", "arrival": "t0", "p": 1.5}]})",
      "probability out of range");
  bad("{" + head + R"("kind": "stochastic", "edges": [{"resource": "r9", "arrival": "t0"}]})", "r9");
  bad(R"({"format_version": 1, "kind": "adwords", "resources": [{"id": "r0", "weight": 1, "budget": 1}],
         "arrivals": ["t0"], "edges": [{"resource": "r0", "arrival": "t0", "bid": 1, "p": 0.5}]})",
      "'p'");
  bad(R"({"format_version": 2, "kind": "stochastic", "resources": [], "arrivals": [], "edges": []})",
      "format_version");
  bad("not json", "");
}

TEST(Io, NumbersAndCsv) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0 / 3.0), "0.666666666667");
  ResultRow row;
  row.experiment = "e";
  row.instance_id = "i";
  row.algorithm = "pg";
  row.n = 2;
  row.m = 3;
  row.replications = 10;
  row.seed = 5;
  row.mode = "realized";
  row.mean = 1.5;
  EXPECT_EQ(csv_header(),
            "experiment,instance_id,algorithm,n,m,R,seed,mode,mean,stderr,ci_lo,ci_hi,opt,"
            "ratio,ratio_conservative");
  EXPECT_EQ(csv_line(row), "e,i,pg,2,3,10,5,realized,1.5,0,0,0,,,");
  row.opt = 2.0;
  row.ratio = 0.75;
  row.ratio_conservative = 0.5;
  EXPECT_EQ(csv_line(row), "e,i,pg,2,3,10,5,realized,1.5,0,0,0,2,0.75,0.5");
  EXPECT_EQ(csv_table({row, row}), csv_header() + "\n" + csv_line(row) + "\n" + csv_line(row) + "\n");
}

using Cli = TempDir;

TEST_F(Cli, GenAndOpt) {
  const auto g = cli({"gen", "--family", "kvv", "--n", "8", "--out", path("k.json")});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  EXPECT_NE(g.out.find("edges=36"), std::string::npos);
  const auto o = cli({"opt", "--instance", path("k.json"), "--oracle", "matching"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out, "8\n");
  const auto dp = cli({"opt", "--instance", path("k.json"), "--oracle", "dp"});
  EXPECT_EQ(dp.out, "8\n");
}

TEST_F(Cli, SimulateIsReproducible) {
  ASSERT_EQ(cli({"gen", "--family", "random", "--n", "3", "--m", "5", "--class", "decomposable",
                 "--seed", "4", "--out", path("r.json")})
                .code,
            kExitOk);
  const std::vector<std::string> args = {"simulate", "--instance", path("r.json"), "--reps",
                                         "2000", "--seed", "9"};
  const auto a = cli(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  auto with_workers = args;
  with_workers.insert(with_workers.end(), {"--workers", "4"});
  EXPECT_EQ(cli(with_workers).out, a.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), csv_header());

  auto appended = args;
  appended.insert(appended.end(), {"--out", path("rows.csv")});
  cli(appended);
  cli(appended);
  const std::string csv = slurp(path("rows.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST_F(Cli, MissingSeedIsUsageError) {
  cli({"gen", "--family", "kvv", "--n", "3", "--out", path("k.json")});
  const auto r = cli({"simulate", "--instance", path("k.json"), "--reps", "10"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"simulate", "--instance", path("missing.json"), "--reps", "1", "--seed", "1"}).code,
            kExitUsage);
}

TEST_F(Cli, GuardExitCode) {
  cli({"gen", "--family", "kvv", "--n", "25", "--out", path("big.json")});
  const auto r = cli({"opt", "--instance", path("big.json"), "--oracle", "dp"});
  EXPECT_EQ(r.code, kExitGuard);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, RatioOnSeparator) {
  cli({"gen", "--family", "separator", "--n", "10", "--out", path("s.json")});
  const auto r = cli({"ratio", "--instance", path("s.json"), "--algorithm", "greedy",
                      "--oracle", "dp", "--reps", "1000", "--seed", "1", "--mode", "expected"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find(",0.1,1,1\n"), std::string::npos) << r.out;
}

TEST_F(Cli, ReduceCheckAndSample) {
  ASSERT_EQ(cli({"gen", "--family", "random", "--n", "2", "--m", "3", "--class", "identical",
                 "--seed", "2", "--out", path("i.json")})
                .code,
            kExitOk);
  const auto c = cli({"reduce", "--lemma", "identical", "--mode", "check", "--instance",
                      path("i.json"), "--policy", "pg", "--seed", "3"});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_NE(c.out.find("samples=8"), std::string::npos) << c.out;
  const auto s = cli({"reduce", "--lemma", "identical", "--mode", "sample", "--instance",
                      path("i.json"), "--seed", "3", "--out", path("red.json")});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  const auto red = load_instance(path("red.json"));
  EXPECT_EQ(classify(std::get<StochasticInstance>(red)).cls, ProbClass::kDeterministic);
  // Budgets need resource-uniform probabilities.
  EXPECT_EQ(cli({"reduce", "--lemma", "budgets", "--instance", path("i.json"), "--seed", "1"}).code,
            kExitOk);
  cli({"gen", "--family", "random", "--n", "2", "--m", "2", "--seed", "2", "--out",
       path("g.json")});
  EXPECT_EQ(cli({"reduce", "--lemma", "identical", "--instance", path("g.json"), "--seed", "1"}).code,
            kExitUsage);
}

TEST_F(Cli, HardnessCsv) {
  const auto r = cli({"hardness", "--n", "4,6", "--reps", "200", "--seed", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_EQ(r.out.rfind("n,p,R,seed,", 0), 0u);
}

}  // namespace
}  // namespace stochmatch
