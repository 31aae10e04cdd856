#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "topoinfer/errors.hpp"
#include "topoinfer/experiments.hpp"

namespace topoinfer {
namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test");
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

TEST(Config, ParsesAllKeys) {
  const auto c = parse(
      "# comment\n"
      "model = smallcircle-s2:rho=0.15\n"
      "regime = noisy   # trailing comment\n"
      "tube_r = 0.075\n"
      "eps = 0.07\n"
      "p = 0.9\n"
      "l_override = 500\n"
      "trials = 12\n"
      "seed = 18446744073709551615\n"
      "max_dim = 1\n"
      "metric = ambient\n"
      "output = /tmp/x\n"
      "scale = 0.05\n"
      "workers = 2\n"
      "budget = 1000\n");
  EXPECT_EQ(c.model, ManifoldModel::small_circle_s2(0.15));
  EXPECT_TRUE(c.regime.is_noisy());
  EXPECT_DOUBLE_EQ(c.regime.tube_r, 0.075);
  EXPECT_DOUBLE_EQ(c.eps, 0.07);
  EXPECT_EQ(*c.l_override, 500u);
  EXPECT_EQ(c.trials, 12u);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.homology_dim(), 1);
  EXPECT_EQ(c.output, "/tmp/x");
  EXPECT_DOUBLE_EQ(c.complex_scale(), 0.05);
  EXPECT_EQ(c.workers, 2u);
  EXPECT_EQ(c.budget, 1000u);
}

TEST(Config, Defaults) {
  const auto c = parse("model = torus-r4\neps = 0.5\np = 0.9\n");
  EXPECT_FALSE(c.regime.is_noisy());
  EXPECT_EQ(c.trials, 100u);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.homology_dim(), 2);
  EXPECT_EQ(c.metric, RipsMetric::Ambient);
  EXPECT_EQ(c.complex, ComplexKind::Rips);
  EXPECT_DOUBLE_EQ(c.complex_scale(), 0.5);
  EXPECT_FALSE(c.l_override);
}

TEST(Config, ErrorsPointAtTheLine) {
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\np = 0.95\ncolour = red\n"), 4);
  EXPECT_EQ(error_line("model = circle-r2\neps = abc\np = 0.95\n"), 2);
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\np = 1.5\n"), 3);
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\neps = 0.2\np = 0.9\n"), 3);
  EXPECT_EQ(error_line("model = klein\neps = 0.3\np = 0.9\n"), 1);
  EXPECT_EQ(error_line("model = circle-r2\njust text\n"), 2);
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\np = 0.9\ntrials = -4\n"), 4);
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\np = 0.9\ntube_r = 0.2\n"), 4);
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\np = 0.9\nmax_dim = 4\n"), 4);
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\n"), 0);
  EXPECT_EQ(error_line("model = circle-r2\neps = 0.3\np = 0.9\nregime = noisy\n"), 0);
  EXPECT_EQ(error_line("model = sphere2-r3\neps = 0.3\np = 0.9\nregime = noisy\ntube_r = 0.2\n"
                       "metric = intrinsic\n"),
            6);
  EXPECT_EQ(error_line("model = smallcircle-s2:rho=0.15\neps = 0.1\np = 0.9\ncomplex = cech\n"),
            4);
}

TEST(Config, MissingFile) {
  try {
    load_config("/nonexistent/topoinfer.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 0);
  }
}

TEST(Experiment, InadmissibleConfigIsRejected) {
  auto c = parse("model = circle-r2\neps = 1.2\np = 0.9\ntrials = 2\n");
  try {
    run_experiment(c);
    FAIL() << "expected InadmissibleConfig";
  } catch (const InadmissibleConfig& e) {
    EXPECT_FALSE(e.report().ok());
  }
  c = parse("model = circle-r2\neps = 0.6\np = 0.9\nregime = noisy\ntube_r = 0.5\ntrials = 2\n");
  EXPECT_THROW(run_experiment(c), InadmissibleConfig);
}

TEST(Experiment, TinySampleFails) {
  auto c = parse("model = circle-r2\neps = 0.3\np = 0.95\ntrials = 20\nl_override = 2\n");
  const ExperimentReport r = run_experiment(c);
  EXPECT_EQ(r.l, 2u);
  EXPECT_EQ(r.phi, 221u);
  EXPECT_EQ(r.empirical_density_rate, 0.0);
  EXPECT_EQ(r.empirical_homology_rate, 0.0);
  EXPECT_FALSE(r.pass);
}

TEST(Experiment, CircleRunPasses) {
  auto c = parse("model = circle-r2\neps = 0.3\np = 0.95\ntrials = 30\nseed = 3\n");
  const ExperimentReport r = run_experiment(c);
  EXPECT_EQ(r.l, 221u);
  EXPECT_EQ(r.reference, (BettiVector{1, 1}));
  ASSERT_EQ(r.trials.size(), 30u);
  for (const TrialRecord& t : r.trials) {
    EXPECT_TRUE(t.error.empty());
    EXPECT_EQ(t.seed, trial_seed(3, t.trial));
    EXPECT_EQ(t.match, t.betti == r.reference);
  }
  EXPECT_TRUE(r.pass);
}

TEST(Experiment, ReportIsDeterministicAcrossWorkers) {
  auto c = parse("model = sphere2-r3\neps = 0.6\np = 0.9\ntrials = 6\nseed = 11\n");
  c.workers = 1;
  const std::string one = report_json(run_experiment(c), false);
  c.workers = 3;
  const std::string three = report_json(run_experiment(c), false);
  EXPECT_EQ(one, three);
  const auto j = nlohmann::json::parse(one);
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_EQ(j["config"]["model"], "sphere2-r3");
  EXPECT_EQ(j["trials"].size(), 6u);
}

TEST(Experiment, WritesReportFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "topoinfer_experiment_test";
  std::filesystem::create_directories(dir);
  auto c = parse("model = circle-r2\neps = 0.3\np = 0.95\ntrials = 3\n");
  c.output = (dir / "run").string();
  const ExperimentReport r = run_experiment(c);
  std::ifstream json_in(dir / "run.report.json");
  ASSERT_TRUE(json_in);
  const auto j = nlohmann::json::parse(json_in);
  EXPECT_EQ(j["phi"], 221);
  EXPECT_TRUE(j.contains("timestamp"));
  std::ifstream csv(dir / "run.trials.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("trial,seed,dense", 0), 0u);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) rows += !line.empty();
  EXPECT_EQ(rows, 3);
  std::filesystem::remove_all(dir);
}

TEST(Format, Betti) {
  EXPECT_EQ(format_betti({1, 1}), "1,1");
  EXPECT_EQ(format_betti({1, 2, 1}), "1,2,1");
}

}  // namespace
}  // namespace topoinfer
