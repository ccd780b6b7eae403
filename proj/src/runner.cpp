#include "hsv/runner.hpp"

#include "hsv/accumulator_io.hpp"
#include "hsv/baselines.hpp"
#include "hsv/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <ostream>

namespace hsv {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool is_fd(EstimatorKind kind) {
  return kind == EstimatorKind::FdForward || kind == EstimatorKind::FdBackward ||
         kind == EstimatorKind::FdCentral;
}

FdScheme scheme_of(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::FdForward: return FdScheme::Forward;
    case EstimatorKind::FdBackward: return FdScheme::Backward;
    default: return FdScheme::Central;
  }
}

// Paths for one sample size: simulated, or the leading records of a replay file.
PathSet obtain_paths(const RunConfig& config, const ModelSpec& model, const SimConfig& sim,
                     const std::vector<PathAccumulators>* replay) {
  if (replay == nullptr) return simulate_paths(model, config.effective_init(), sim);
  if (replay->size() < sim.n_paths) {
    throw Error(ErrorCode::InvalidConfig,
                "key 'input.accumulators': file holds " + std::to_string(replay->size()) +
                    " records, " + std::to_string(sim.n_paths) + " requested");
  }
  PathSet set;
  set.paths.assign(replay->begin(), replay->begin() + static_cast<std::ptrdiff_t>(sim.n_paths));
  set.correlations = model.correlations;
  set.mixing = model.mixing;
  set.s0 = config.effective_init().s0;
  set.maturity = sim.maturity;
  set.n_steps = sim.n_steps;
  set.seed = sim.seed;
  set.variance_weights_valid = !model.variance_degenerate;
  set.rate_weights_valid = !model.rate_degenerate;
  set.heston_vasicek = model.heston_vasicek;
  return set;
}

ResultRow make_row(const std::string& estimator, Greek greek, const SimConfig& sim,
                   const GreekEstimate& est, double ms, bool timing) {
  ResultRow row;
  row.estimator = estimator;
  row.greek = to_string(greek);
  row.n_paths = sim.n_paths;
  row.n_steps = sim.n_steps;
  row.seed = sim.seed;
  row.value = est.value;
  row.std_error = est.std_error;
  row.clamp_count = est.clamp_count;
  row.wall_time_ms = timing ? ms : 0.0;
  return row;
}

std::vector<std::size_t> sizes_for(const RunConfig& config, RunMode mode) {
  if (mode == RunMode::Converge) return config.sweep;
  return {config.sim.n_paths};
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

GreekEstimate malliavin_estimate(const PathSet& paths, std::span<const double> values, Greek greek) {
  switch (greek) {
    case Greek::Price: return price(paths, values);
    case Greek::Delta: return delta(paths, values);
    case Greek::Rho: return rho(paths, values);
    case Greek::Vega: return vega(paths, values);
    case Greek::VegaV0: return bismut_vector(paths, values).vega_v0;
    case Greek::RhoR0: return bismut_vector(paths, values).rho_r0;
    case Greek::Kappa: return drift_sensitivity(paths, values, DriftKind::Kappa);
    case Greek::Reversion: return drift_sensitivity(paths, values, DriftKind::ReversionSpeed);
  }
  throw Error(ErrorCode::InvalidParams, "unknown greek");
}

std::optional<double> analytic_value(const RunConfig& config, Greek greek) {
  if (config.model_name != "black_scholes") return std::nullopt;
  const auto bs = bs_closed_form(config.init.s0, config.payoff.strike, config.bs_rate,
                                 config.bs_sigma, config.sim.maturity);
  if (config.payoff.kind == PayoffKind::Call) {
    switch (greek) {
      case Greek::Price: return bs.price;
      case Greek::Delta: return bs.delta;
      case Greek::Rho: return bs.rho;
      case Greek::Vega: return bs.vega;
      default: return std::nullopt;
    }
  }
  if (config.payoff.kind == PayoffKind::DigitalCall && greek == Greek::Delta) return bs.digital_delta;
  return std::nullopt;
}

std::vector<ResultRow> run(const RunConfig& config, RunMode mode) {
  config.validate();
  const ModelSpec model = config.build_model();
  const InitialState init = config.effective_init();
  const std::vector<Greek> greeks =
      mode == RunMode::Price ? std::vector<Greek>{Greek::Price} : config.greeks;

  std::vector<PathAccumulators> replay;
  if (!config.accumulators_in.empty()) {
    replay = read_accumulators(config.accumulators_in);
    for (const auto& e : config.estimators) {
      if (e.kind != EstimatorKind::Malliavin) {
        throw Error(ErrorCode::InvalidConfig,
                    "key 'input.accumulators': replay supports only the malliavin estimator");
      }
    }
  }

  std::vector<ResultRow> rows;
  const auto sizes = sizes_for(config, mode);
  for (std::size_t size_index = 0; size_index < sizes.size(); ++size_index) {
    SimConfig sim = config.sim;
    sim.n_paths = sizes[size_index];
    for (const auto& request : config.estimators) {
      const std::string label = request.label();
      if (request.kind == EstimatorKind::Malliavin) {
        const auto start = Clock::now();
        const PathSet set = obtain_paths(config, model, sim, replay.empty() ? nullptr : &replay);
        const auto values = payoff_values(set, config.payoff);
        const double sim_ms = elapsed_ms(start);
        if (!config.accumulators_out.empty() && size_index + 1 == sizes.size()) {
          write_accumulators(config.accumulators_out, set.paths);
        }
        for (Greek g : greeks) {
          const auto t = Clock::now();
          const auto est = malliavin_estimate(set, values, g);
          rows.push_back(make_row(label, g, sim, est, sim_ms + elapsed_ms(t), config.timing));
        }
      } else if (is_fd(request.kind)) {
        for (Greek g : greeks) {
          const auto target = fd_target(g);
          if (!target) continue;
          const BumpSpec bump{*target, scheme_of(request.kind), config.bump_size(*target), request.crn};
          const auto t = Clock::now();
          const auto est = fd_greek(model, init, sim, config.payoff, bump);
          rows.push_back(make_row(label, g, sim, est, elapsed_ms(t), config.timing));
        }
      } else {
        for (Greek g : greeks) {
          const auto t = Clock::now();
          const auto value = analytic_value(config, g);
          if (!value) continue;
          GreekEstimate est;
          est.value = *value;
          est.estimator = EstimatorKind::Analytic;
          rows.push_back(make_row(label, g, sim, est, elapsed_ms(t), config.timing));
        }
      }
    }
  }
  return rows;
}

std::vector<ComparisonRow> compare(const RunConfig& config) {
  config.validate();
  const bool has_malliavin = std::any_of(config.estimators.begin(), config.estimators.end(),
                                         [](const auto& e) { return e.kind == EstimatorKind::Malliavin; });
  const bool has_fd = std::any_of(config.estimators.begin(), config.estimators.end(),
                                  [](const auto& e) { return is_fd(e.kind); });
  if (!has_malliavin || !has_fd) {
    throw Error(ErrorCode::InvalidConfig,
                "key 'run.estimators': compare needs malliavin and at least one finite-difference variation");
  }
  const ModelSpec model = config.build_model();
  const InitialState init = config.effective_init();

  std::vector<ComparisonRow> rows;
  for (std::size_t size : config.sweep) {
    SimConfig sim = config.sim;
    sim.n_paths = size;
    const auto start = Clock::now();
    const PathSet set = simulate_paths(model, init, sim);
    const auto values = payoff_values(set, config.payoff);
    const double sim_ms = elapsed_ms(start);
    for (Greek g : config.greeks) {
      const auto target = fd_target(g);
      if (!target) continue;
      const auto t = Clock::now();
      const auto reference = malliavin_estimate(set, values, g);
      ComparisonRow base;
      base.greek = to_string(g);
      base.n_paths = size;
      base.estimator = reference.label();
      base.value = reference.value;
      base.std_error = reference.std_error;
      base.combined_se = reference.std_error * std::sqrt(2.0);
      base.n_simulations = 1;
      base.wall_time_ms = config.timing ? sim_ms + elapsed_ms(t) : 0.0;
      rows.push_back(base);
      for (const auto& request : config.estimators) {
        if (!is_fd(request.kind)) continue;
        const BumpSpec bump{*target, scheme_of(request.kind), config.bump_size(*target), request.crn};
        const auto tf = Clock::now();
        const auto est = fd_greek(model, init, sim, config.payoff, bump);
        ComparisonRow row;
        row.greek = base.greek;
        row.n_paths = size;
        row.estimator = est.label();
        row.value = est.value;
        row.std_error = est.std_error;
        row.diff = est.value - reference.value;
        row.combined_se = combined_se(est, reference);
        row.agree = agree_within(est, reference, 3.0);
        row.n_simulations = fd_simulation_count(bump.scheme);
        row.wall_time_ms = config.timing ? elapsed_ms(tf) : 0.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    os << kCsvHeader << "\n";
    for (const auto& r : rows) {
      os << r.estimator << "," << r.greek << "," << r.n_paths << "," << r.n_steps << "," << r.seed
         << "," << format_number(r.value) << "," << format_number(r.std_error) << ","
         << format_number(r.clamp_count) << "," << format_number(r.wall_time_ms) << "\n";
    }
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["estimator"] = r.estimator;
    j["greek"] = r.greek;
    j["n_paths"] = r.n_paths;
    j["n_steps"] = r.n_steps;
    j["seed"] = r.seed;
    j["value"] = r.value;
    j["std_error"] = r.std_error;
    j["clamp_count"] = r.clamp_count;
    j["wall_time_ms"] = r.wall_time_ms;
    os << j.dump() << "\n";
  }
}

void write_comparison(std::ostream& os, const std::vector<ComparisonRow>& rows, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    os << kComparisonHeader << "\n";
    for (const auto& r : rows) {
      os << r.greek << "," << r.n_paths << "," << r.estimator << "," << format_number(r.value) << ","
         << format_number(r.std_error) << "," << format_number(r.diff) << ","
         << format_number(r.combined_se) << "," << (r.agree ? "true" : "false") << ","
         << r.n_simulations << "," << format_number(r.wall_time_ms) << "\n";
    }
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["greek"] = r.greek;
    j["n_paths"] = r.n_paths;
    j["estimator"] = r.estimator;
    j["value"] = r.value;
    j["std_error"] = r.std_error;
    j["diff"] = r.diff;
    j["combined_se"] = r.combined_se;
    j["agree"] = r.agree;
    j["n_simulations"] = r.n_simulations;
    j["wall_time_ms"] = r.wall_time_ms;
    os << j.dump() << "\n";
  }
}

void apply_environment(RunConfig& config) {
  const char* env = std::getenv("HSV_GREEKS_WORKERS");
  if (env == nullptr || *env == '\0') return;
  RunConfig probe = config;
  probe.set("sim.workers", env);
  config.sim.worker_hint = probe.sim.worker_hint;
}

}  // namespace hsv
