#pragma once

#include "hsv/baselines.hpp"
#include "hsv/model.hpp"
#include "hsv/path_engine.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hsv {

enum class Greek { Price, Delta, Rho, Vega, VegaV0, RhoR0, Kappa, Reversion };

std::string to_string(Greek greek);
Greek parse_greek(const std::string& name);

/// Finite-difference bump target that matches a Malliavin Greek.
std::optional<BumpTarget> fd_target(Greek greek);

/// One requested estimator: the Malliavin weight, a finite-difference
/// variation, or the closed form (Black-Scholes only).
struct EstimatorRequest {
  EstimatorKind kind = EstimatorKind::Malliavin;
  bool crn = false;

  std::string label() const;
  static EstimatorRequest parse(const std::string& label);
  bool operator==(const EstimatorRequest&) const = default;
};

enum class OutputFormat { Csv, JsonLines };

/// Everything a CLI run needs. Keys of the text form are dotted, e.g.
/// model.kappa=2; see RunConfig::keys() for the full list.
struct RunConfig {
  std::string model_name = "heston_vasicek";
  HestonVasicekParams heston_vasicek;
  PositivityPolicy positivity;
  double bs_sigma = 0.2;
  double bs_rate = 0.05;
  CorrelationTriple correlations{-0.8, 0.5, 0.02};

  InitialState init;
  Payoff payoff = Payoff::call(100.0);
  SimConfig sim;

  std::vector<Greek> greeks{Greek::Delta, Greek::Rho, Greek::Vega};
  std::vector<EstimatorRequest> estimators{{EstimatorKind::Malliavin, false},
                                           {EstimatorKind::FdCentral, true}};
  std::map<BumpTarget, double> bumps;  ///< overrides of default_bump
  std::vector<std::size_t> sweep{250, 500, 1000, 2000, 5000, 10000};

  std::string output_path;  ///< empty writes to standard output
  OutputFormat format = OutputFormat::Csv;
  bool timing = true;       ///< false writes 0 in wall_time_ms
  std::string accumulators_out;
  std::string accumulators_in;

  /// Defaults: Heston-Vasicek, ATM call, T = 1,
  /// 10000 paths, 252 steps.
  static RunConfig defaults();

  /// Parses key=value text on top of the defaults. Every key the text sets
  /// must be known; the keys in required_keys() must be present.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  /// Applies a single key=value assignment.
  void set(const std::string& key, const std::string& value);

  /// Canonical text form; parse(dump()) reproduces this configuration.
  std::string dump() const;

  ModelSpec build_model() const;
  /// Initial state with r0 pinned to model.rate for the Black-Scholes model.
  InitialState effective_init() const;
  double bump_size(BumpTarget target) const;

  /// Throws InvalidConfig naming the offending key.
  void validate() const;

  static std::vector<std::string> required_keys(const std::string& model_name,
                                                PayoffKind payoff_kind);
};

}  // namespace hsv
