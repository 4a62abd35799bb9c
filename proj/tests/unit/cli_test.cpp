#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tdm/cli.hpp"

namespace fs = std::filesystem;

namespace tdm {
namespace {

const std::string kFixtures = TDM_FIXTURE_DIR;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tdm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, GraphValidFile) {
  const auto r = invoke({"graph", kFixtures + "/three_segments.json", "--out", path("g.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("g.json")));
  EXPECT_EQ(j.at("vertices").size(), 4u);
  EXPECT_EQ(j.at("arcs").size(), 5u);
  EXPECT_TRUE(j.at("validation").at("ok").get<bool>());
}

TEST_F(CliTest, GraphDegreeViolationNamesVertex) {
  const auto r = invoke({"graph", kFixtures + "/dead_entry.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("E_VALIDATION", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("B"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliTest, MissingFile) {
  const auto r = invoke({"graph", path("nope.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("E_IO", 0), 0u);
}

TEST_F(CliTest, EmbedClassicalOnMatrix) {
  const auto r = invoke({"embed", kFixtures + "/p3.csv", "--optimizer", "classical", "--dims", "2", "--out",
                         path("l.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("l.json")));
  const auto& c = j.at("coords");
  auto dist = [&](const char* a, const char* b) {
    const double dx = c.at(a)[0].get<double>() - c.at(b)[0].get<double>();
    const double dy = c.at(a)[1].get<double>() - c.at(b)[1].get<double>();
    return std::hypot(dx, dy);
  };
  EXPECT_NEAR(dist("v0", "v1"), 1.0, 1e-6);
  EXPECT_NEAR(dist("v1", "v2"), 1.0, 1e-6);
  EXPECT_NEAR(dist("v0", "v2"), 2.0, 1e-6);
  EXPECT_TRUE(fs::exists(path("l.trajectory.jsonl")));
}

TEST_F(CliTest, EmbedSgdIsByteDeterministic) {
  const std::string net = kFixtures + "/three_segments.json";
  for (const char* name : {"a", "b"}) {
    const auto r = invoke({"embed", net, "--optimizer", "sgd", "--seed", "7", "--out", path(std::string(name) + ".json"),
                           "--svg", path(std::string(name) + ".svg")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.trajectory.jsonl")), slurp(path("b.trajectory.jsonl")));
  EXPECT_EQ(slurp(path("a.svg")), slurp(path("b.svg")));
}

TEST_F(CliTest, EmbedDisconnected) {
  const auto r = invoke({"embed", kFixtures + "/disconnected.json"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("E_DISCONNECTED", 0), 0u);
}

TEST_F(CliTest, EmbedBadFlags) {
  const std::string net = kFixtures + "/three_segments.json";
  EXPECT_EQ(invoke({"embed", net, "--alpha", "3"}).code, 5);
  EXPECT_EQ(invoke({"embed", net, "--optimizer", "nope"}).code, 5);
  EXPECT_EQ(invoke({"embed", net, "--sym", "median"}).code, 5);
  EXPECT_EQ(invoke({"frobnicate"}).code, 5);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  {
    std::ofstream cfg(path("cfg.json"));
    cfg << R"({"optimizer": "classical", "dims": 1})";
  }
  const auto r = invoke({"embed", kFixtures + "/p3.csv", "--config", path("cfg.json"), "--dims", "2", "--out",
                         path("l.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(slurp(path("l.json"))).at("dims"), 2);
  {
    std::ofstream cfg(path("bad.json"));
    cfg << R"({"colour": "blue"})";
  }
  EXPECT_EQ(invoke({"embed", kFixtures + "/p3.csv", "--config", path("bad.json")}).code, 5);
}

TEST_F(CliTest, BenchReportShape) {
  const auto r = invoke({"bench", "cycle:5", "--optimizer", "sgd,kappa-joint", "--seeds", "3", "--iters", "40",
                         "--out", path("b.json"), "--svg", path("b.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(path("b.json")));
  const auto& kj = j.at("optimizers").at("kappa-joint");
  ASSERT_EQ(kj.at("runs").size(), 3u);
  for (const auto& run : kj.at("runs")) EXPECT_TRUE(run.contains("kappa_final"));
  EXPECT_TRUE(j.at("optimizers").at("sgd").at("final_norm").contains("cv"));
  EXPECT_TRUE(fs::exists(path("b.svg")));
}

TEST_F(CliTest, BenchTooFewSeeds) {
  EXPECT_EQ(invoke({"bench", "grid:3", "--seeds", "1"}).code, 5);
}

TEST_F(CliTest, BenchJobsDoNotChangeOutput) {
  ASSERT_EQ(invoke({"bench", "grid:3", "--seeds", "4", "--jobs", "1", "--out", path("one.json")}).code, 0);
  ASSERT_EQ(invoke({"bench", "grid:3", "--seeds", "4", "--jobs", "3", "--out", path("three.json")}).code, 0);
  EXPECT_EQ(slurp(path("one.json")), slurp(path("three.json")));
}

TEST_F(CliTest, RenderWithGraph) {
  const std::string net = kFixtures + "/three_segments.json";
  ASSERT_EQ(invoke({"embed", net, "--optimizer", "classical", "--out", path("l.json")}).code, 0);
  const auto r = invoke({"render", path("l.json"), "--graph", net, "--out", path("l.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto svg = slurp(path("l.svg"));
  std::size_t lines = 0;
  for (auto pos = svg.find("<line"); pos != std::string::npos; pos = svg.find("<line", pos + 1)) ++lines;
  EXPECT_EQ(lines, 3u);
}

TEST_F(CliTest, RenderIdMismatch) {
  {
    std::ofstream l(path("l.json"));
    l << R"({"dims": 2, "coords": {"X": [0, 0]}})";
  }
  EXPECT_EQ(invoke({"render", path("l.json"), "--graph", kFixtures + "/three_segments.json"}).code, 2);
}

} // namespace
} // namespace tdm
