#include <gtest/gtest.h>

#include <json.hpp>

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

#include "commands.hpp"
#include "hawc/diagnostics.hpp"
#include "hawc/point_io.hpp"
#include "ledger.hpp"

namespace hawc::cli {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  fs::path dir_;

  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hawc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::ostringstream out_, err_;
};

const std::string kGrid = "grid:rows=4,cols=4,spacing=1,sigma=0.2";

TEST_F(Cli, CompressGridK48) {
  ASSERT_EQ(run({"compress", "--target", kGrid, "--k", "48", "--seed", "7", "--out", path("pts.csv")}), 0)
      << err_.str();
  const auto pts = read_points_file(path("pts.csv"));
  ASSERT_EQ(pts.size(), 48u);
  const auto counts = allocation_counts(pts, grid_centers({4, 4, 1.0, 0.2}));
  EXPECT_EQ(counts, std::vector<std::size_t>(16, 3));
  EXPECT_TRUE(fs::exists(path("pts.csv.manifest.json")));
  const auto trace = slurp(path("pts.csv.loss.csv"));
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 1001);
}

TEST_F(Cli, CompressGaussianSinglePoint) {
  ASSERT_EQ(run({"compress", "--target", "gaussian:dim=1", "--k", "1", "--seed", "1", "--out", path("p.csv")}), 0);
  const auto pts = read_points_file(path("p.csv"));
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_LE(std::abs(pts[0][0]), 0.05);
}

TEST_F(Cli, CompressMissingCsvTarget) {
  EXPECT_EQ(run({"compress", "--target", "csv:" + path("missing.csv"), "--k", "1", "--out", path("x.csv")}), kExitIo);
  EXPECT_NE(err_.str().find("missing.csv"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"compress", "--target", "nope:dim=1", "--out", path("x.csv")}), kExitUsage);
  EXPECT_EQ(run({"compress", "--target", "gaussian:dim=1"}), kExitUsage);
  EXPECT_EQ(run({"compress", "--target", "gaussian:dim=1", "--k", "0", "--out", path("x.csv")}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"compress", "--target", "gaussian:dim=1", "--history", path("none.csv"), "--out", path("x.csv")}),
            kExitIo);
  EXPECT_EQ(run({"compress", "--target", "gaussian:dim=1", "--out", (dir_ / "no_dir" / "x.csv").string()}), kExitIo);
  // A huge step blows the free point to infinity.
  EXPECT_EQ(run({"compress", "--target", "gaussian:dim=1", "--optimizer", "sgd", "--schedule", "constant", "--step",
                 "1e308", "--iters", "5", "--out", path("x.csv")}),
            kExitNumeric);
}

TEST_F(Cli, CompressWithHistoryUsesLedger) {
  ASSERT_EQ(run({"sample-next", "--target", "gaussian:dim=2", "--history", path("h.csv"), "--count", "1",
                 "--iters", "200"}),
            0);
  ASSERT_EQ(run({"compress", "--target", "gaussian:dim=2", "--k", "1", "--history", path("h.csv"), "--iters", "300",
                 "--out", path("x.csv")}),
            0);
  const auto first = read_ledger(path("h.csv")).points();
  const auto next = read_points_file(path("x.csv"));
  EXPECT_GT(distance(first[0], next[0]), 0.3);
}

TEST_F(Cli, ManifestReplayIsByteIdentical) {
  ASSERT_EQ(run({"compress", "--target", kGrid, "--k", "12", "--seed", "5", "--iters", "300", "--out", path("a.csv")}), 0);
  ASSERT_EQ(run({"compress", "--manifest", path("a.csv.manifest.json"), "--out", path("b.csv")}), 0) << err_.str();
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.csv.loss.csv")), slurp(path("b.csv.loss.csv")));
  const auto m = manifest_from_json(slurp(path("b.csv.manifest.json")), "b");
  EXPECT_EQ(m.config.k, 12u);
  EXPECT_EQ(m.config.iterations, 300u);
  EXPECT_EQ(m.target, kGrid);
}

TEST_F(Cli, ManifestRoundTrip) {
  RunManifest m;
  m.command = "sample-next";
  m.target = "gaussian:dim=3";
  m.config.k = 1;
  m.config.seed = 18446744073709551615ULL;
  m.config.step_size = 0.1 + 0.2;
  m.config.kernel_a = 0.0;
  m.config.optimizer = PlainSgd{};
  m.config.schedule = StepSchedule::Constant;
  m.history = "h.csv";
  m.out = "h.csv";
  m.count = 4;
  const auto back = manifest_from_json(manifest_to_json(m), "mem");
  EXPECT_EQ(manifest_to_json(back), manifest_to_json(m));
  EXPECT_EQ(back.config.seed, m.config.seed);
  EXPECT_EQ(back.config.step_size, m.config.step_size);
  EXPECT_THROW(manifest_from_json("{", "bad"), IoError);
  EXPECT_THROW(manifest_from_json("{\"command\":\"compress\"}", "bad"), IoError);
}

TEST_F(Cli, SampleNextBuildsLedgerIncrementally) {
  const auto h = path("ledger.csv");
  ASSERT_EQ(run({"sample-next", "--target", "gaussian:dim=2", "--history", h, "--count", "5", "--seed", "3",
                 "--iters", "300"}),
            0)
      << err_.str();
  const auto first = read_ledger(h);
  ASSERT_EQ(first.size(), 5u);
  ASSERT_EQ(run({"sample-next", "--target", "gaussian:dim=2", "--history", h, "--count", "5", "--seed", "4",
                 "--iters", "300"}),
            0);
  const auto both = read_ledger(h);
  ASSERT_EQ(both.size(), 10u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(both.points().row(i), first.points().row(i));

  // Rows 6-10 are reproduced by solving against rows 1-5 as history.
  HistoryLedger replay = first;
  HawcConfig c;
  c.iterations = 300;
  for (std::size_t i = 5; i < 10; ++i) {
    c.seed = SeededRng::derive_seed(4, HistoryLedger::emission_index(replay.size()));
    replay.append(sample_next(TargetDistribution::gaussian(2), replay, c));
  }
  EXPECT_EQ(replay.points(), both.points());

  const auto text = slurp(h);
  EXPECT_EQ(text.substr(0, text.find('\n')), "index,dim0,dim1");
  EXPECT_FALSE(fs::exists(h + ".tmp"));
  EXPECT_TRUE(fs::exists(h + ".manifest.json"));
}

TEST_F(Cli, SampleNextTenPointsSpreadOut) {
  const auto h = path("fig2.csv");
  ASSERT_EQ(run({"sample-next", "--count", "10", "--target", "gaussian:dim=2", "--seed", "3", "--history", h}), 0);
  const auto pts = read_ledger(h).points();
  ASSERT_EQ(pts.size(), 10u);
  EXPECT_LE(norm(pts[0]), 0.1);
  EXPECT_GT(min_pairwise_distance(pts), 0.2);
}

TEST_F(Cli, CorruptLedgerIsLeftUntouched) {
  const std::vector<std::string> corrupt = {
      "idx,dim0,dim1\n1,0,0\n",            // bad header
      "index,dim0,dim1\n1,0,0\n2,1\n",     // ragged row
      "index,dim0,dim1\n1,0,0\n3,1,1\n",   // gap in indices
      "index,dim0,dim1\n1,0,0\n1,1,1\n",   // duplicate index
      "",                                  // empty file
  };
  for (const auto& text : corrupt) {
    const auto h = path("bad.csv");
    std::ofstream(h) << text;
    EXPECT_EQ(run({"sample-next", "--target", "gaussian:dim=2", "--history", h, "--iters", "10"}), kExitIo)
        << text;
    EXPECT_EQ(slurp(h), text);
  }
  const auto h = path("dim.csv");
  std::ofstream(h) << "index,dim0\n1,0.5\n";
  EXPECT_EQ(run({"sample-next", "--target", "gaussian:dim=2", "--history", h, "--iters", "10"}), kExitUsage);
  EXPECT_EQ(slurp(h), "index,dim0\n1,0.5\n");
}

TEST_F(Cli, SampleNextRequiresHistory) {
  EXPECT_EQ(run({"sample-next", "--target", "gaussian:dim=2"}), kExitUsage);
}

// Killing the process at an arbitrary moment leaves a ledger that parses and
// has consecutive indices: rows only appear via rename of a complete file.
TEST_F(Cli, InterruptedRunNeverLeavesPartialRow) {
  const auto h = path("kill.csv");
  int observed = 0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const pid_t pid = fork();
    ASSERT_GE(pid, 0);
    if (pid == 0) {
      if (std::freopen("/dev/null", "w", stdout) == nullptr) _exit(126);
      execl(HAWC_TOOL_PATH, "hawc", "sample-next", "--target", "gaussian:dim=2", "--history", h.c_str(), "--count",
            "1000", "--iters", "20", "--batch", "64", static_cast<char*>(nullptr));
      _exit(127);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(150 + 70 * attempt));
    kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    if (!fs::exists(h)) continue;
    const auto ledger = read_ledger(h);  // throws on a partial or corrupt file
    EXPECT_EQ(ledger.points().dim(), 2u);
    ++observed;
  }
  EXPECT_GT(observed, 0);
}

TEST_F(Cli, EvaluateGridOutput) {
  ASSERT_EQ(run({"compress", "--target", kGrid, "--k", "48", "--seed", "7", "--out", path("pts.csv")}), 0);
  ASSERT_EQ(run({"evaluate", "--points", path("pts.csv"), "--target", kGrid, "--samples", "20000"}), 0);
  const std::string line = out_.str();
  EXPECT_EQ(std::count(line.begin(), line.end(), '\n'), 1);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j.at("allocation_counts").get<std::vector<int>>(), std::vector<int>(16, 3));
  EXPECT_GE(j.at("energy_distance_sq").get<double>(), 0.0);
  EXPECT_LT(j.at("energy_distance_sq").get<double>(), 0.02);
  EXPECT_GT(j.at("min_pairwise_distance").get<double>(), 0.0);
}

TEST_F(Cli, EvaluateSampleAgainstItself) {
  SeededRng rng(1);
  const auto s = TargetDistribution::gaussian(2).sample(400, rng);
  {
    std::ofstream f(path("s.csv"));
    write_points_csv(f, s);
  }
  ASSERT_EQ(run({"evaluate", "--points", path("s.csv"), "--target", "csv:" + path("s.csv"), "--samples", "100000"}), 0);
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_LT(j.at("energy_distance_sq").get<double>(), 2e-3);
  EXPECT_TRUE(j.at("allocation_counts").is_null());
}

TEST_F(Cli, EvaluateSinglePointHasNullMinDistance) {
  std::ofstream(path("one.csv")) << "dim0,dim1\n0,0\n";
  ASSERT_EQ(run({"evaluate", "--points", path("one.csv"), "--target", "gaussian:dim=2", "--samples", "1000"}), 0);
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_TRUE(j.at("min_pairwise_distance").is_null());
  EXPECT_EQ(run({"evaluate", "--points", path("absent.csv"), "--target", "gaussian:dim=2"}), kExitIo);
  EXPECT_EQ(run({"evaluate", "--points", path("one.csv"), "--target", "gaussian:dim=3"}), kExitUsage);
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST_F(Cli, PlotGridReproduction) {
  ASSERT_EQ(run({"compress", "--target", kGrid, "--k", "48", "--seed", "7", "--iters", "100", "--out", path("pts.csv")}), 0);
  ASSERT_EQ(run({"plot", "--points", path("pts.csv"), "--centers-target", kGrid, "--out", path("f1.svg")}), 0);
  const auto svg = slurp(path("f1.svg"));
  EXPECT_EQ(count_of(svg, "<circle class=\"center\""), 16u);
  EXPECT_EQ(count_of(svg, "<circle class=\"point\""), 48u);
  EXPECT_EQ(count_of(svg, "<text"), 0u);
  EXPECT_NE(svg.find("width=\"800\" height=\"800\""), std::string::npos);

  std::ofstream c(path("centers.csv"));
  write_points_csv(c, grid_centers({4, 4, 1.0, 0.2}));
  c.close();
  ASSERT_EQ(run({"plot", "--points", path("pts.csv"), "--centers", path("centers.csv"), "--out", path("g.svg")}), 0);
  EXPECT_EQ(slurp(path("g.svg")), svg);
}

TEST_F(Cli, PlotLabelledLedger) {
  const auto h = path("ledger.csv");
  ASSERT_EQ(run({"sample-next", "--target", "gaussian:dim=2", "--history", h, "--count", "10", "--iters", "50"}), 0);
  ASSERT_EQ(run({"plot", "--points", h, "--labels", "--out", path("f2.svg")}), 0);
  const auto svg = slurp(path("f2.svg"));
  EXPECT_EQ(count_of(svg, "<circle class=\"point\""), 10u);
  for (int i = 1; i <= 10; ++i) EXPECT_EQ(count_of(svg, ">" + std::to_string(i) + "</text>"), 1u);
}

TEST_F(Cli, PlotRejectsEmptyPoints) {
  std::ofstream(path("empty.csv")) << "dim0,dim1\n";
  EXPECT_NE(run({"plot", "--points", path("empty.csv"), "--out", path("e.svg")}), 0);
  EXPECT_NE(run({"plot", "--points", path("absent.csv"), "--out", path("e.svg")}), 0);
}

}  // namespace
}  // namespace hawc::cli
