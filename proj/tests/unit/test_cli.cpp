#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using momentkit::cli::run;

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

std::string fixture(const std::string& name) { return std::string(MOMENTKIT_FIXTURE_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("momentkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, MomentsOfIndicator) {
  const auto r = invoke({"moments", "--density", "indicator:0,1", "--max-degree", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["dimension"], 1);
  EXPECT_EQ(j["max_degree"], 10);
  EXPECT_TRUE(j["exact"].get<bool>());
  ASSERT_EQ(j["rationals"].size(), 11u);
  for (const auto& e : j["rationals"]) {
    EXPECT_EQ(e["num"], 1);
    EXPECT_EQ(e["den"].get<int>(), e["alpha"][0].get<int>() + 1);
  }
}

TEST_F(CliTest, HausdorffAtDegreeZeroIsAbsoluteFirstMoment) {
  const auto seq = write("ind.json", invoke({"moments", "--density", "indicator:0,1", "--max-degree", "4"}).out);
  const auto r = invoke({"hausdorff", "-i", seq, "--d-max", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["sums"].size(), 1u);
  EXPECT_DOUBLE_EQ(j["sums"][0].get<double>(), 1.0);
  EXPECT_EQ(j["parameters"]["d_max"], 0);
}

TEST_F(CliTest, SmoothOnCounterexampleExitsNumericalFailure) {
  const auto r = invoke({"smooth", "--functional", fixture("discontinuous_functional.json")});
  EXPECT_EQ(r.code, momentkit::cli::kNumericalFailure);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["error"], "SmoothingFailed");
  EXPECT_EQ(j["diagnostics"]["sweep"].size(), 7u);
}

TEST_F(CliTest, SmoothOnLebesgueFunctionalSucceeds) {
  const auto r = invoke({"smooth", "--functional", fixture("lebesgue_functional.json"), "--sigma-grid", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_LE(j["residual"].get<double>(), 1e-8);
  for (double w : j["weights"].get<std::vector<double>>()) EXPECT_GT(w, 0.0);
}

TEST_F(CliTest, RichterOnCounterexample) {
  const auto r = invoke({"richter", "--functional", fixture("discontinuous_functional.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_LE(j["residual"].get<double>(), 1e-10);
  double total = 0.0;
  for (double w : j["weights"].get<std::vector<double>>()) total += w;
  EXPECT_NEAR(total, 14.0 / 3.0, 1e-9);
}

TEST_F(CliTest, OutputIsDeterministic) {
  const auto seq = write("cf.json", invoke({"moments", "--named", "gaussian-cf", "--max-degree", "60"}).out);
  const std::vector<std::string> args{"charfn", "-i", seq, "--z-grid", "-2:2:0.25", "--threads", "1"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto c = invoke({"charfn", "-i", seq, "--z-grid", "-2:2:0.25", "--threads", "3"});
  EXPECT_EQ(a.out, c.out);
}

TEST_F(CliTest, RoundTripMomentsThroughReconstruction) {
  const auto seq = write("g.json", invoke({"moments", "--density", "gaussian:0,2,40", "--max-degree", "120"}).out);
  const auto r = invoke({"reconstruct", "-i", seq, "--R", "3", "--grid", "-12:12:0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x,g,imag_residue");
  double mass = 0.0;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    mass += std::stod(line.substr(c1 + 1, c2 - c1 - 1)) * 0.05;
  }
  EXPECT_NEAR(mass, 1.0, 0.02);
}

TEST_F(CliTest, OutputFileIsWritten) {
  const auto target = path("out.json");
  const auto r = invoke({"--output", target, "moments", "--density", "bump", "--max-degree", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(target);
  const auto j = json::parse(in);
  EXPECT_EQ(j["max_degree"], 4);
  for (const auto& e : fs::directory_iterator(dir_)) {
    EXPECT_EQ(e.path().filename().string().find(".tmp-"), std::string::npos);
  }
}

TEST_F(CliTest, BochnerEchoesSeedAndRejectsQuartic) {
  const auto cf = write("cf.json", invoke({"moments", "--named", "gaussian-cf", "--max-degree", "160"}).out);
  const auto ok = invoke({"bochner", "-i", cf, "--random", "6", "--seed", "11"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(json::parse(ok.out)["parameters"]["seed"], 11);

  const auto q = write("q.json", invoke({"moments", "--named", "quartic-cf", "--max-degree", "200"}).out);
  const auto bad = invoke({"bochner", "-i", q, "--points-file", fixture("quartic_witness_points.json")});
  EXPECT_EQ(bad.code, momentkit::cli::kNegative) << bad.err;
  EXPECT_LE(json::parse(bad.out)["min_eigenvalue_full"].get<double>(), -1e-6);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"hausdorff", "--d-max", "3"}).code, 2);
  EXPECT_EQ(invoke({"hausdorff", "-i", path("missing.json"), "--d-max", "3"}).code, 2);
  EXPECT_EQ(invoke({"moments", "--density", "indicator:1", "--max-degree", "3"}).code, 2);

  const auto bad = write("bad.json", R"({"dimension":1,"max_degree":1,"exact":true,)"
                                     R"("rationals":[{"alpha":[0],"num":1,"den":1},{"alpha":[1],"num":1,"den":0}]})");
  const auto r = invoke({"hausdorff", "-i", bad, "--d-max", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("$.rationals[1].den"), std::string::npos) << r.err;
}

TEST_F(CliTest, NegativeVerdictsExitOne) {
  const auto seq = write("cos.json", invoke({"moments", "--named", "cosine", "--max-degree", "30"}).out);
  const auto r = invoke({"abscont", "-i", seq, "--d-max", "20"});
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "negative");

  const auto ind = write("ind.json", invoke({"moments", "--density", "indicator:0,1", "--max-degree", "30"}).out);
  const auto ok = invoke({"abscont", "-i", ind, "--d-max", "20"});
  EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("reconstruct"), std::string::npos);
}

}  // namespace
