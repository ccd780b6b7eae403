#include "hsv/accumulator_io.hpp"
#include "hsv/error.hpp"
#include "hsv/runner.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

namespace hsv {
namespace {

RunConfig small_config() {
  auto cfg = RunConfig::defaults();
  cfg.sim.n_paths = 400;
  cfg.sim.n_steps = 20;
  cfg.sweep = {100, 200, 400};
  cfg.timing = false;
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

TEST(Runner, GreeksRowsMatchLibraryCalls) {
  const auto cfg = small_config();
  const auto rows = run(cfg, RunMode::Greeks);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].estimator, "malliavin");
  EXPECT_EQ(rows[0].greek, "delta");
  EXPECT_EQ(rows[3].estimator, "fd_central_crn");

  const auto set = simulate_paths(cfg.build_model(), cfg.init, cfg.sim);
  EXPECT_EQ(rows[0].value, delta(set, cfg.payoff).value);
  EXPECT_EQ(rows[1].value, rho(set, cfg.payoff).value);
  EXPECT_EQ(rows[2].value, vega(set, cfg.payoff).value);
  EXPECT_EQ(rows[2].std_error, vega(set, cfg.payoff).std_error);
  const auto fd = fd_greek(cfg.build_model(), cfg.init, cfg.sim, cfg.payoff,
                           {BumpTarget::S0, FdScheme::Central, 1.0, true});
  EXPECT_EQ(rows[3].value, fd.value);
  for (const auto& r : rows) EXPECT_EQ(r.wall_time_ms, 0.0);
}

TEST(Runner, ConvergeEmitsEverySize) {
  auto cfg = small_config();
  cfg.estimators = {EstimatorRequest::parse("malliavin")};
  const auto rows = run(cfg, RunMode::Converge);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0].n_paths, 100u);
  EXPECT_EQ(rows[3].n_paths, 200u);
  EXPECT_EQ(rows[8].n_paths, 400u);
  // Sizes share the leading paths, so the last size equals a plain run.
  const auto full = run(cfg, RunMode::Greeks);
  EXPECT_EQ(rows[8].value, full[2].value);
}

TEST(Runner, PriceMode) {
  const auto rows = run(small_config(), RunMode::Price);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].greek, "price");
  EXPECT_GT(rows[0].value, 0.0);
}

TEST(Runner, AnalyticRowsForBlackScholes) {
  auto cfg = RunConfig::parse(
      "model.name=black_scholes\nmodel.sigma=0.2\nmodel.rate=0.05\ninit.s0=100\n"
      "payoff.kind=digital_call\npayoff.strike=100\nrun.estimators=analytic\nrun.greeks=delta,vega\n");
  const auto rows = run(cfg, RunMode::Greeks);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].value, 0.0187620173458468939, 1e-15);
}

TEST(Runner, CsvFormat) {
  const auto rows = run(small_config(), RunMode::Greeks);
  std::ostringstream os;
  write_rows(os, rows, OutputFormat::Csv);
  const auto out = lines(os.str());
  ASSERT_EQ(out.size(), 7u);
  EXPECT_EQ(out[0], "estimator,greek,n_paths,n_steps,seed,value,std_error,clamp_count,wall_time_ms");
  EXPECT_EQ(out[1].rfind("malliavin,delta,400,20,42,", 0), 0u) << out[1];
  // Values print in shortest round-trip form.
  const auto value_text = out[1].substr(26, out[1].find(',', 26) - 26);
  EXPECT_EQ(std::stod(value_text), rows[0].value);
}

TEST(Runner, JsonLinesFormat) {
  const auto rows = run(small_config(), RunMode::Price);
  std::ostringstream os;
  write_rows(os, rows, OutputFormat::JsonLines);
  const auto out = lines(os.str());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].rfind("{\"estimator\":\"malliavin\",\"greek\":\"price\"", 0), 0u) << out[0];
}

TEST(Runner, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Runner, AccumulatorDumpReplays) {
  const auto path = std::filesystem::temp_directory_path() / "hsv_runner_test.acc";
  auto cfg = small_config();
  cfg.estimators = {EstimatorRequest::parse("malliavin")};
  cfg.greeks = {Greek::Delta, Greek::VegaV0, Greek::RhoR0, Greek::Kappa, Greek::Reversion};
  cfg.accumulators_out = path.string();
  const auto first = run(cfg, RunMode::Greeks);
  EXPECT_EQ(read_accumulators(path).size(), 400u);

  auto replay = cfg;
  replay.accumulators_out.clear();
  replay.accumulators_in = path.string();
  replay.sim.seed = 999;  // ignored: the paths come from the file
  const auto second = run(replay, RunMode::Greeks);
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].value, second[i].value) << first[i].greek;
    EXPECT_EQ(first[i].std_error, second[i].std_error);
  }

  replay.sim.n_paths = 401;
  EXPECT_THROW(run(replay, RunMode::Greeks), Error);
  std::filesystem::remove(path);
}

TEST(Runner, CompareRows) {
  auto cfg = small_config();
  cfg.sweep = {400};
  cfg.estimators = {EstimatorRequest::parse("malliavin"), EstimatorRequest::parse("fd_central_crn"),
                    EstimatorRequest::parse("fd_forward")};
  const auto rows = compare(cfg);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0].estimator, "malliavin");
  EXPECT_EQ(rows[0].n_simulations, 1);
  EXPECT_EQ(rows[1].estimator, "fd_central_crn");
  EXPECT_EQ(rows[1].n_simulations, 2);
  EXPECT_EQ(rows[1].diff, rows[1].value - rows[0].value);
  std::ostringstream os;
  write_comparison(os, rows, OutputFormat::Csv);
  EXPECT_EQ(lines(os.str())[0], kComparisonHeader);

  cfg.estimators = {EstimatorRequest::parse("malliavin")};
  EXPECT_THROW(compare(cfg), Error);
}

}  // namespace
}  // namespace hsv
