#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "dioph/harness/runs.hpp"

using namespace dioph;
using namespace dioph::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dioph_harness_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesFileSyntax) {
  ExperimentConfig cfg;
  std::istringstream in(
      "# scenario\n"
      "d = 4\n"
      "kind = rational   # negative control\n"
      "t_max=500\n"
      "parallelism = auto\n"
      "lemma_t = 10, 20\n"
      "\n"
      "convention = strict\n");
  load_config_text(cfg, in, "inline");
  EXPECT_EQ(cfg.kind, SubjectKind::kRational);
  EXPECT_EQ(cfg.t_max, 500);
  EXPECT_EQ(cfg.parallelism, 0);
  EXPECT_EQ(cfg.lemma_t, (std::vector<double>{10, 20}));
  EXPECT_EQ(cfg.convention, NormConvention::kStrictUpper);
}

TEST(Config, RejectsBadInput) {
  ExperimentConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "red"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "t_max", "12x"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "convention", "loose"), ConfigError);
  std::istringstream in("t_max 100\n");
  EXPECT_THROW(load_config_text(cfg, in, "inline"), ConfigError);
  cfg.samples = 0;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(Subject, ParsesEveryKind) {
  ExperimentConfig cfg;
  EXPECT_TRUE(parse_subject("golden", cfg).is_subspace());
  EXPECT_EQ(std::get<Subspace>(parse_subject("algebraic:4", cfg).value).ambient_dim(), 4);
  EXPECT_EQ(std::get<Subspace>(parse_subject("rational:1,0,0;0,1,0", cfg).value).dim(), 2);
  EXPECT_EQ(std::get<Subspace>(parse_subject("span:1,0.5,0.25", cfg).value).dim(), 1);
  const auto theta = std::get<ThetaMatrix>(parse_subject("theta:1x2:0.5,0.25", cfg).value);
  EXPECT_EQ(theta(0, 1), 0.25);
  EXPECT_EQ(std::get<ThetaMatrix>(parse_subject("random-theta:2x1", cfg).value).rows(), 2);
  EXPECT_THROW(parse_subject("theta:1x2:0.5", cfg), ConfigError);
  EXPECT_THROW(parse_subject("rational:1.5,2", cfg), ConfigError);
  EXPECT_THROW(parse_subject("circle", cfg), ConfigError);
}

TEST(Io, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(std::stod(format_number(0.6180339887498949)), 0.6180339887498949);
}

TEST(Runs, RecordsGoldenAndRational) {
  ExperimentConfig cfg;
  cfg.out_dir = scratch("records").string();
  cfg.t_max = 10000;
  std::ostringstream log;
  auto out = run_records(cfg, log);
  EXPECT_EQ(out.exit_code, kExitOk);
  const std::string payload = csv_payload(std::filesystem::path(cfg.out_dir) / "records.csv");
  EXPECT_EQ(payload.substr(0, payload.find('\n')), "t,value,witness,log10_t,log10_value");
  EXPECT_NE(payload.find("\n6765,"), std::string::npos);
  auto again = run_records(cfg, log);
  EXPECT_EQ(csv_payload(std::filesystem::path(cfg.out_dir) / "records.csv"), payload);

  cfg.subject = "rational:1,2";
  out = run_records(cfg, log);
  EXPECT_TRUE(out.summary["table"]["contains_integer_points"].get<bool>());
}

TEST(Runs, BudgetExceededGivesExitThree) {
  ExperimentConfig cfg;
  cfg.out_dir = scratch("budget").string();
  cfg.subject = "random-theta:2x2";
  cfg.t_max = 100000;
  cfg.node_budget = 10000;
  std::ostringstream log;
  auto out = run_records(cfg, log);
  EXPECT_EQ(out.exit_code, kExitBudgetExceeded);
  EXPECT_TRUE(out.summary["table"]["budget_exceeded"].get<bool>());
  EXPECT_LT(out.summary["table"]["t_max_scanned"].get<std::int64_t>(), 100000);
}

TEST(Runs, VerifyTheoremSingleSampleIsReproducible) {
  ExperimentConfig cfg;
  cfg.samples = 1;
  cfg.t_max = 1000;
  cfg.subject_t_max = 100000;
  cfg.out_dir = scratch("verify1").string();
  std::ostringstream log;
  run_verify_theorem(cfg, log);
  const auto first = csv_payload(std::filesystem::path(cfg.out_dir) / "samples.csv");
  run_verify_theorem(cfg, log);
  EXPECT_EQ(csv_payload(std::filesystem::path(cfg.out_dir) / "samples.csv"), first);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 2);
}

TEST(Runs, SeriesClassifiesAndWritesProfile) {
  ExperimentConfig cfg;
  cfg.out_dir = scratch("series").string();
  cfg.series_t_max = 100000;
  std::ostringstream log;
  auto out = run_series(cfg, log);
  EXPECT_EQ(out.summary["classification"], "CONVERGES");
  EXPECT_EQ(out.summary["diagnosis"], "decade increments shrinking");

  cfg.a = 3;
  cfg.b = 2;
  cfg.c = 1;
  cfg.psi = DecayFunction::power(1.0);
  cfg.phi = DecayFunction::power(1.0 / 3.0);
  out = run_series(cfg, log);
  EXPECT_EQ(out.summary["classification"], "BOUNDARY_DIVERGES");
  EXPECT_EQ(out.summary["diagnosis"], "numerically undecidable");
}

TEST(Runs, ProfileRowsAreLogSampled) {
  auto rows = profile_rows(1000000, false);
  EXPECT_EQ(rows.front(), 1);
  EXPECT_EQ(rows.back(), 1000000);
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
  EXPECT_LT(rows.size(), 2000u);
  EXPECT_EQ(profile_rows(50, false).size(), 50u);
}

TEST(Runs, Lemma2RejectsRationalLine) {
  ExperimentConfig cfg;
  cfg.out_dir = scratch("lemma2").string();
  cfg.subject = "rational:1,2";
  std::ostringstream log;
  EXPECT_THROW(run_lemma2(cfg, log), PsiNotValid);
}
