#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isocone/cli.hpp"

using namespace isocone;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;

  json parsed() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "isocone");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::filesystem::path dir;

  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("isocone_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir);
  }
  void TearDown() override { std::filesystem::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir / name;
    std::ofstream(path) << text;
    return path.string();
  }
};

const char* kK1 = R"({"dim": 3, "normals": [[-2, 1, 0], [1, -2, 0], [0, 0, -1]]})";
const char* kK2 = R"({"dim": 3, "normals": [[-2, 1, 0], [1, -2, 0], [0, 1, -1]]})";

}  // namespace

TEST_F(CliTest, AnalyzeK1AndK2) {
  auto r1 = run({"analyze", write("k1.json", kK1)});
  ASSERT_EQ(r1.code, cli::kOk) << r1.err;
  auto j1 = r1.parsed();
  EXPECT_TRUE(j1["isotonic_projection_cone"]["verdict"].get<bool>());
  EXPECT_TRUE(j1["orthant_isotonic_form"]["verdict"].get<bool>());
  EXPECT_TRUE(j1["generating"]["verdict"].get<bool>());
  EXPECT_FALSE(j1.contains("graph_check"));

  auto r2 = run({"analyze", write("k2.json", kK2)});
  ASSERT_EQ(r2.code, cli::kOk);
  auto ev = r2.parsed()["isotonic_projection_cone"]["evidence"];
  EXPECT_EQ(ev["type"], "acute_pair");
  EXPECT_EQ(ev["normals"], json({1, 3}));
  EXPECT_DOUBLE_EQ(ev["inner_product"].get<double>(), 1.0);
}

TEST_F(CliTest, AnalyzeGraphReportsComponents) {
  auto r = run({"analyze", write("g.json", R"({"dim": 4, "graph": {"vertices": 4, "edges": [[1, 2], [1, 3]]}})")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto j = r.parsed();
  EXPECT_FALSE(j["graph_check"]["verdict"].get<bool>());
  EXPECT_EQ(j["graph_check"]["evidence"]["type"], "shared_tail");
  ASSERT_EQ(j["components"].size(), 2u);
  EXPECT_EQ(j["components"][0]["kind"], "non-chain");
  EXPECT_EQ(j["components"][1]["kind"], "isolated");
  EXPECT_EQ(j["components"][1]["vertices"], json({4}));

  auto cyc = run({"analyze", write("c.json", R"({"dim": 2, "graph": {"vertices": 2, "edges": [[1, 2], [2, 1]]}})")});
  ASSERT_EQ(cyc.code, cli::kOk);
  EXPECT_EQ(cyc.parsed()["graph_check"]["evidence"]["type"], "directed_cycle");
  EXPECT_EQ(cyc.parsed()["components"][0]["kind"], "cycle");
}

TEST_F(CliTest, ProjectGivenPoint) {
  auto r = run({"project", write("k1.json", kK1), "--point", "3,0,-1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto j = r.parsed();
  EXPECT_EQ(j["method"], "exact");
  EXPECT_NEAR(j["point"][0].get<double>(), 2.4, 1e-12);
  EXPECT_NEAR(j["point"][1].get<double>(), 1.2, 1e-12);
  EXPECT_NEAR(j["point"][2].get<double>(), 0.0, 1e-12);
  EXPECT_LE(j["kkt_gap"].get<double>(), 1e-12);
  EXPECT_EQ(j["seed"], 0);
}

TEST_F(CliTest, ProjectDocumentPointsAndMethods) {
  auto path = write("chain.json", R"({"dim": 3, "graph": {"vertices": 3, "edges": [[1, 2], [2, 3]]},
                                      "points": [[3, 1, 2], [1, 2, 3]]})");
  auto r = run({"project", path});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto results = r.parsed()["results"];
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0]["method"], "pava");
  EXPECT_EQ(results[1]["point"], json({1.0, 2.0, 3.0}));

  auto d = run({"project", path, "--point", "3,1,2", "--method", "dykstra", "--tol", "1e-12"});
  ASSERT_EQ(d.code, cli::kOk) << d.err;
  EXPECT_EQ(d.parsed()["method"], "dykstra");
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(d.parsed()["point"][i].get<double>(), 2.0, 1e-9);
}

TEST_F(CliTest, ProjectWithoutPointsIsUsageError) {
  EXPECT_EQ(run({"project", write("k1.json", kK1)}).code, cli::kUsage);
}

TEST_F(CliTest, IsoregFixtures) {
  auto r = run({"isoreg", write("e.json", R"({"dim": 2, "graph": {"vertices": 2, "edges": [[1, 2]]}})"), "--y", "2,1",
                "--weights", "9,1"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto iso = r.parsed()["iso"];
  EXPECT_NEAR(iso[0].get<double>(), 1.9, 1e-12);
  EXPECT_NEAR(iso[1].get<double>(), 1.9, 1e-12);

  auto c = run({"isoreg", write("c.json", R"({"dim": 3, "graph": {"vertices": 3, "edges": [[1, 2], [2, 3]]}})"), "--y",
                "3,1,2"});
  ASSERT_EQ(c.code, cli::kOk);
  EXPECT_EQ(c.parsed()["iso"], json({2.0, 2.0, 2.0}));
}

TEST_F(CliTest, IsoregNeedsGraph) {
  EXPECT_EQ(run({"isoreg", write("k1.json", kK1), "--y", "1,2,3"}).code, cli::kInput);
}

TEST_F(CliTest, ConstructFamiliesRoundTrip) {
  auto r = run({"construct", "extremal", "--dim", "3"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  auto doc = r.parsed();
  EXPECT_EQ(doc["normals"].size(), 6u);
  // The emitted document is accepted as input.
  auto a = run({"analyze", write("ext.json", r.out)});
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_TRUE(a.parsed()["orthant_isotonic_form"]["verdict"].get<bool>());
  EXPECT_EQ(a.parsed()["irredundant"].size(), 6u);

  auto mono = run({"construct", "monotone", "--weights", "1,4"});
  ASSERT_EQ(mono.code, cli::kOk);
  EXPECT_EQ(mono.parsed()["normals"], json({{1.0, -0.5}}));

  auto graph = write("g.json", R"({"dim": 2, "graph": {"vertices": 2, "edges": [[1, 2]]}})");
  auto iso = run({"construct", "isotonic", "--graph", graph, "--weights", "4,1"});
  ASSERT_EQ(iso.code, cli::kOk) << iso.err;
  EXPECT_EQ(iso.parsed()["normals"], json({{0.5, -1.0}}));
}

TEST_F(CliTest, ConstructRejectsBadParameters) {
  EXPECT_NE(run({"construct", "extremal", "--dim", "1"}).code, cli::kOk);
  EXPECT_NE(run({"construct", "monotone", "--weights", "1,-1"}).code, cli::kOk);
  EXPECT_NE(run({"construct", "pyramid", "--dim", "3"}).code, cli::kOk);
}

TEST_F(CliTest, FalsifyK2IsDeterministic) {
  auto path = write("k2.json", kK2);
  auto a = run({"falsify", path, "--order", "cone", "--seed", "42", "--trials", "10000"});
  auto b = run({"falsify", path, "--order", "cone", "--seed", "42", "--trials", "10000"});
  ASSERT_EQ(a.code, cli::kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto j = a.parsed();
  ASSERT_FALSE(j["witness"].is_null());
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["order"], "cone");
  EXPECT_GT(j["witness"]["violation"].get<double>(), 1e-7);
}

TEST_F(CliTest, FalsifyFindsNothingForK1) {
  auto r = run({"falsify", write("k1.json", kK1), "--order", "cone", "--trials", "2000"});
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_TRUE(r.parsed()["witness"].is_null());
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
  EXPECT_EQ(run({"analyze", (dir / "missing.json").string()}).code, cli::kInput);
  EXPECT_EQ(run({"analyze", write("bad.json", "{\"dim\": 2, \"normals\": [[1, 0]")}).code, cli::kInput);
  EXPECT_EQ(run({"analyze", write("both.json", R"({"dim": 2})")}).code, cli::kInput);
  EXPECT_EQ(run({"analyze", write("nan.json", R"({"dim": 2, "normals": [[0, 0]]})")}).code, cli::kInput);
  EXPECT_EQ(run({"analyze", write("edge.json", R"({"dim": 2, "graph": {"vertices": 2, "edges": [[0, 1]]}})")}).code,
            cli::kInput);
  auto k1 = write("k1.json", kK1);
  EXPECT_EQ(run({"project", k1, "--point", "1,2"}).code, cli::kUsage);
  EXPECT_EQ(run({"project", k1, "--point", "1,x,2"}).code, cli::kUsage);
  EXPECT_EQ(run({"project", k1, "--point", "1,2,3", "--method", "magic"}).code, cli::kUsage);
  EXPECT_EQ(run({"falsify", k1, "--order", "lexicographic"}).code, cli::kUsage);
}

TEST_F(CliTest, DykstraNonConvergenceReportsDiagnostics) {
  auto r = run({"project", write("k2.json", kK2), "--point", "3,-1,2", "--method", "dykstra", "--max-iter", "1",
                "--tol", "1e-14"});
  ASSERT_EQ(r.code, cli::kNumerical);
  auto diag = json::parse(r.err);
  EXPECT_EQ(diag["best_iterate"].size(), 3u);
  EXPECT_EQ(diag["iterations"], 1);
}

TEST_F(CliTest, DimensionCapFromEnvironment) {
  auto k1 = write("k1.json", kK1);
  ::setenv("ISOCONE_DMAX", "2", 1);
  auto capped = run({"project", k1, "--point", "1,2,3", "--method", "exact"});
  ::unsetenv("ISOCONE_DMAX");
  EXPECT_EQ(capped.code, cli::kNumerical);
  EXPECT_EQ(run({"project", k1, "--point", "1,2,3", "--method", "exact"}).code, cli::kOk);
}
