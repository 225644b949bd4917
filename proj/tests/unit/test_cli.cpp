#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flawsim/cli/dispatch.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = flawsim::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("flawsim_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    star9_ = (dir_ / "star9.json").string();
    star9n_ = (dir_ / "star9n.json").string();
    star2_ = (dir_ / "star2.json").string();
    ASSERT_EQ(call({"gen", "star", "--k", "8", "--out", star9_}).code, 0);
    ASSERT_EQ(call({"gen", "star", "--k", "8", "--noise", "point", "--noise-target", "0", "--p", "0.2", "--out", star9n_}).code,
              0);
    ASSERT_EQ(call({"gen", "star", "--k", "2", "--out", star2_}).code, 0);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  std::string star9_, star9n_, star2_;
};

}  // namespace

TEST_F(Cli, CertifyExitCodes) {
  const Result ok = call({"certify", star9_});
  EXPECT_EQ(ok.code, flawsim::cli::kExitOk);
  const json doc = json::parse(ok.out);
  EXPECT_TRUE(doc.at("certified").get<bool>());
  EXPECT_TRUE(doc.contains("manifest"));
  EXPECT_EQ(doc["manifest"]["command"], "certify");

  EXPECT_EQ(call({"certify", star2_}).code, flawsim::cli::kExitNegative);
  EXPECT_EQ(call({"certify", star9n_, "--format", "text"}).code, flawsim::cli::kExitOk);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call({"certify", star9_, "--no-such-flag"}).code, flawsim::cli::kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, flawsim::cli::kExitUsage);
  EXPECT_EQ(call({"certify", (dir_ / "missing.json").string()}).code, flawsim::cli::kExitUsage);
  std::ofstream(dir_ / "bad.json") << "{\"states\": 2, \"p\": 3}";
  EXPECT_EQ(call({"analyze", (dir_ / "bad.json").string()}).code, flawsim::cli::kExitUsage);
  EXPECT_EQ(call({"--help"}).code, flawsim::cli::kExitOk);
  const Result v = call({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(flawsim::cli::version()), std::string::npos);
}

TEST_F(Cli, SimulateIsByteDeterministic) {
  const auto a = (dir_ / "a.csv").string();
  const auto b = (dir_ / "b.csv").string();
  ASSERT_EQ(call({"simulate", star9n_, "--trials", "500", "--seed", "11", "--threads", "1", "--out", a}).code, 0);
  ASSERT_EQ(call({"simulate", star9n_, "--trials", "500", "--seed", "11", "--threads", "3", "--out", b}).code, 0);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text.rfind("# manifest ", 0), 0u);
  EXPECT_NE(text.find("trial,hit_step,censored"), std::string::npos);
  const auto c = (dir_ / "c.csv").string();
  ASSERT_EQ(call({"simulate", star9n_, "--trials", "500", "--seed", "12", "--out", c}).code, 0);
  EXPECT_NE(text, slurp(c));
}

TEST_F(Cli, SimulateSummary) {
  const Result r = call({"simulate", star9n_, "--trials", "2000", "--seed", "3", "--budget", "25000", "--s", "1,2,3"});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["trials"], 2000);
  EXPECT_EQ(doc["censored"], 0);
  EXPECT_TRUE(doc["certified"].get<bool>());
  EXPECT_TRUE(doc["tail_check"]["pass"].get<bool>());
}

TEST_F(Cli, ForensicsVerifies) {
  const Result r = call({"forensics", star9n_, "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_TRUE(doc["verified"].get<bool>());
  EXPECT_TRUE(doc["encoding"]["round_trip"].get<bool>());
  EXPECT_EQ(doc["encoding"]["bits"], doc["encoding"]["expected_bits"]);
}

TEST_F(Cli, TreeAndAudit) {
  const Result t = call({"tree", star9n_, "--x", "6"});
  ASSERT_EQ(t.code, 0) << t.err;
  const json doc = json::parse(t.out);
  EXPECT_TRUE(doc["ok"].get<bool>());
  EXPECT_NEAR(doc["bad_mass"].get<double>(), 0.008, 1e-12);  // three hub steps of log2(5) bits

  const Result a = call({"audit", star9n_, star9_, "--delta-max", "3", "--b-max", "1"});
  EXPECT_EQ(a.code, 0) << a.out << a.err;
}

TEST_F(Cli, GenAnalyzeRoundTrip) {
  const auto tri = (dir_ / "tri.json").string();
  ASSERT_EQ(call({"gen", "coloring", "--vertices", "3", "--edges", "0-1,1-2,2-0", "--q", "3", "--out", tri}).code, 0);
  const Result r = call({"analyze", tri});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["states"], 27);
  EXPECT_EQ(doc["flaws"], 3);
  const Result dot = call({"analyze", tri, "--dot", "pr"});
  ASSERT_EQ(dot.code, 0);
  EXPECT_EQ(dot.out.rfind("// manifest", 0), 0u);
  EXPECT_NE(dot.out.find("digraph"), std::string::npos);

  const Result again = call({"analyze", tri});
  EXPECT_EQ(again.out, r.out);
}
