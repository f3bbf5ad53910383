// Copyright 2026 The Endograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace endograph::cli {
namespace {

const std::string kFixtures = ENDOGRAPH_FIXTURE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "endograph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return kFixtures + "/" + name; }

TEST(Cli, EstimateSmallGraph) {
  const auto r = run({"estimate", "--graph", fx("small_graph.json"), "--outcomes",
                      fx("small_outcomes.json"), "--config",
                      fx("small_config.json"), "--no-timing"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"]["name"], "estimate");
  EXPECT_TRUE(j["inputs"].contains("graph"));
  EXPECT_FALSE(j.contains("timing"));
  EXPECT_NEAR(j["results"]["mu_hat"].get<double>(), 49.0 / 6.0, 1e-12);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args = {
      "simulate", "--scenario", fx("scenario_enumerate.json"), "--reps", "50",
      "--seed", "9", "--no-timing"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CsvFormat) {
  const auto r = run({"estimate", "--graph", fx("small_graph.json"), "--outcomes",
                      fx("small_outcomes.json"), "--config",
                      fx("small_config.json"), "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("unit,beta_hat,w_hat,gamma_hat,instrument_cov\n", 0), 0u)
      << r.out;
}

TEST(Cli, AssumptionViolationExitsOne) {
  const auto r = run({"estimate", "--graph", fx("set_driven_graph.json"),
                      "--outcomes", fx("set_driven_outcomes.json"), "--config",
                      fx("small_config.json")});
  EXPECT_EQ(r.code, kValidationFailure);
  EXPECT_NE(r.err.find("(a)"), std::string::npos) << r.err;
}

TEST(Cli, InputProblemsExitTwo) {
  EXPECT_EQ(run({"bogus"}).code, kInputFailure);
  EXPECT_EQ(run({"estimate", "--graph", "/nonexistent.json", "--outcomes",
                 fx("small_outcomes.json"), "--config", fx("small_config.json")})
                .code,
            kInputFailure);
  EXPECT_EQ(run({"estimate", "--graph", fx("small_graph.json"), "--outcomes",
                 fx("small_outcomes.json"), "--config", fx("small_config.json"),
                 "--format", "xml"})
                .code,
            kInputFailure);
  EXPECT_EQ(run({"simulate", "--scenario", fx("scenario_enumerate.json"),
                 "--seed", "abc"})
                .code,
            kInputFailure);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, kOk); }

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> base = {
      "simulate", "--scenario", fx("scenario_enumerate.json"), "--reps", "30",
      "--no-timing"};
  auto explicit_args = base;
  explicit_args.insert(explicit_args.end(), {"--seed", "123"});
  ::setenv(kSeedEnv, "123", 1);
  const auto from_env = run(base);
  ::setenv(kSeedEnv, "", 1);
  const auto from_flag = run(explicit_args);
  ASSERT_EQ(from_env.code, kOk) << from_env.err;
  EXPECT_EQ(from_env.out.substr(from_env.out.find("\"results\"")),
            from_flag.out.substr(from_flag.out.find("\"results\"")));
  ::setenv(kSeedEnv, "not-a-seed", 1);
  EXPECT_EQ(run(base).code, kInputFailure);
  ::unsetenv(kSeedEnv);
}

TEST(Cli, OutFlagWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "endograph_cli_out.json";
  const auto r = run({"bias-table", "--example", "1", "--out", path.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["command"]["name"], "bias-table");
  std::filesystem::remove(path);
}

TEST(Cli, VerifyAnchorPassAndFail) {
  const auto ok = run({"verify-anchor", "--graph", fx("small_graph.json")});
  EXPECT_EQ(ok.code, kOk) << ok.err;
  EXPECT_NE(ok.err.find("PASS"), std::string::npos);
  // (1,0) exists only when unit 0 is treated, so it cannot anchor.
  const auto tmp = std::filesystem::temp_directory_path() / "endograph_anchor.json";
  {
    std::ofstream f(tmp);
    f << R"({"p":0.5,"weights":{"kind":"uniform"},"anchor":[[1,0]]})";
  }
  const auto bad = run({"verify-anchor", "--graph", fx("example3_graph.json"),
                        "--config", tmp.string()});
  EXPECT_EQ(bad.code, kValidationFailure) << bad.err;
  EXPECT_NE(bad.err.find("FAIL"), std::string::npos);
  std::filesystem::remove(tmp);
}

TEST(Cli, EnumerateCheckPasses) {
  const auto r = run({"enumerate-check", "--scenario", fx("scenario_enumerate.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["results"]["pass"].get<bool>());
  EXPECT_LE(j["results"]["abs_error"].get<double>(), 1e-10);
}

TEST(Cli, TestSubcommandKinds) {
  const auto t = run({"test", "--kind", "ttest", "--graph", fx("zero_net_graph.json"),
                      "--outcomes", fx("zero_net_outcomes.json")});
  ASSERT_EQ(t.code, kOk) << t.err;
  EXPECT_EQ(nlohmann::json::parse(t.out)["results"]["statistic"].get<double>(), 0.0);
  const auto s = run({"test", "--kind", "sharp-null", "--graph",
                      fx("small_graph.json"), "--outcomes",
                      fx("small_outcomes.json"), "--config",
                      fx("small_config.json"), "--resamples", "99", "--seed", "1"});
  ASSERT_EQ(s.code, kOk) << s.err;
  const double p = nlohmann::json::parse(s.out)["results"]["p_value"].get<double>();
  EXPECT_GT(p, 0.0);
  EXPECT_LE(p, 1.0);
}

}  // namespace
}  // namespace endograph::cli
