#pragma once

#include "hsv/config.hpp"
#include "hsv/greeks.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hsv {

inline constexpr const char* kCsvHeader =
    "estimator,greek,n_paths,n_steps,seed,value,std_error,clamp_count,wall_time_ms";

struct ResultRow {
  std::string estimator;
  std::string greek;
  std::size_t n_paths = 0;
  std::size_t n_steps = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double std_error = 0.0;
  double clamp_count = 0.0;
  double wall_time_ms = 0.0;
};

enum class RunMode {
  Price,     ///< the price only, at sim.paths
  Greeks,    ///< every requested greek at sim.paths
  Converge,  ///< every requested greek at each run.sweep size
};

/// Executes the requested estimators. Rows are ordered by sample size, then
/// estimator, then greek, following the configuration's list order.
std::vector<ResultRow> run(const RunConfig& config, RunMode mode);

/// Malliavin estimate of one greek on simulated paths.
GreekEstimate malliavin_estimate(const PathSet& paths, std::span<const double> payoff_values,
                                 Greek greek);

/// Closed-form value for the Black-Scholes model, when one exists for the
/// greek and payoff.
std::optional<double> analytic_value(const RunConfig& config, Greek greek);

struct ComparisonRow {
  std::string greek;
  std::size_t n_paths = 0;
  std::string estimator;
  double value = 0.0;
  double std_error = 0.0;
  double diff = 0.0;         ///< value minus the Malliavin value
  double combined_se = 0.0;  ///< sqrt(se^2 + se_malliavin^2)
  bool agree = true;         ///< |diff| <= 3 combined_se
  int n_simulations = 0;     ///< path simulations the estimator needed
  double wall_time_ms = 0.0;
};

inline constexpr const char* kComparisonHeader =
    "greek,n_paths,estimator,value,std_error,diff,combined_se,agree,n_simulations,wall_time_ms";

/// Malliavin against every configured finite-difference variation at each
/// sweep size.
std::vector<ComparisonRow> compare(const RunConfig& config);

void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, OutputFormat format);
void write_comparison(std::ostream& os, const std::vector<ComparisonRow>& rows, OutputFormat format);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

/// Applies HSV_GREEKS_WORKERS, if set, to sim.worker_hint.
void apply_environment(RunConfig& config);

}  // namespace hsv
