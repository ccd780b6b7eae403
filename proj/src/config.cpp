#include "hsv/config.hpp"

#include "hsv/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace hsv {

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "': " + what);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) config_error(key, "expected a number, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    config_error(key, "expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  config_error(key, "expected true or false, got '" + value + "'");
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += fmt(items[i]);
  }
  return out;
}

constexpr BumpTarget kAllTargets[] = {
    BumpTarget::S0,           BumpTarget::V0,           BumpTarget::R0,
    BumpTarget::RhoShiftEpsilon, BumpTarget::VegaShiftEpsilon, BumpTarget::KappaEpsilon,
    BumpTarget::ReversionEpsilon,
};

}  // namespace

std::string to_string(Greek greek) {
  switch (greek) {
    case Greek::Price: return "price";
    case Greek::Delta: return "delta";
    case Greek::Rho: return "rho";
    case Greek::Vega: return "vega";
    case Greek::VegaV0: return "vega_v0";
    case Greek::RhoR0: return "rho_r0";
    case Greek::Kappa: return "kappa";
    case Greek::Reversion: return "reversion";
  }
  return "unknown";
}

Greek parse_greek(const std::string& name) {
  for (auto g : {Greek::Price, Greek::Delta, Greek::Rho, Greek::Vega, Greek::VegaV0, Greek::RhoR0,
                 Greek::Kappa, Greek::Reversion}) {
    if (to_string(g) == name) return g;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown greek '" + name + "'");
}

std::optional<BumpTarget> fd_target(Greek greek) {
  switch (greek) {
    case Greek::Price: return std::nullopt;
    case Greek::Delta: return BumpTarget::S0;
    case Greek::Rho: return BumpTarget::RhoShiftEpsilon;
    case Greek::Vega: return BumpTarget::VegaShiftEpsilon;
    case Greek::VegaV0: return BumpTarget::V0;
    case Greek::RhoR0: return BumpTarget::R0;
    case Greek::Kappa: return BumpTarget::KappaEpsilon;
    case Greek::Reversion: return BumpTarget::ReversionEpsilon;
  }
  return std::nullopt;
}

std::string EstimatorRequest::label() const {
  GreekEstimate probe;
  probe.estimator = kind;
  probe.crn = crn;
  return probe.label();
}

EstimatorRequest EstimatorRequest::parse(const std::string& label) {
  for (auto kind : {EstimatorKind::Malliavin, EstimatorKind::FdForward, EstimatorKind::FdBackward,
                    EstimatorKind::FdCentral, EstimatorKind::Analytic}) {
    for (bool crn : {false, true}) {
      const bool fd = kind == EstimatorKind::FdForward || kind == EstimatorKind::FdBackward ||
                      kind == EstimatorKind::FdCentral;
      if (crn && !fd) continue;
      EstimatorRequest req{kind, crn};
      if (req.label() == label) return req;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown estimator '" + label + "'");
}

RunConfig RunConfig::defaults() { return RunConfig{}; }

void RunConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "model.name") {
      if (value != "heston_vasicek" && value != "black_scholes") {
        config_error(key, "expected heston_vasicek or black_scholes");
      }
      model_name = value;
    } else if (key == "model.kappa") heston_vasicek.kappa = parse_double(key, value);
    else if (key == "model.theta") heston_vasicek.theta = parse_double(key, value);
    else if (key == "model.sigma_vol") heston_vasicek.sigma_vol = parse_double(key, value);
    else if (key == "model.a") heston_vasicek.a = parse_double(key, value);
    else if (key == "model.b") heston_vasicek.b = parse_double(key, value);
    else if (key == "model.k") heston_vasicek.k = parse_double(key, value);
    else if (key == "model.positivity") {
      if (value == "novikov") positivity.rule = PositivityRule::Novikov;
      else if (value == "feller") positivity.rule = PositivityRule::Feller;
      else config_error(key, "expected novikov or feller");
    } else if (key == "model.positivity_enforce") positivity.enforce = parse_bool(key, value);
    else if (key == "model.sigma") bs_sigma = parse_double(key, value);
    else if (key == "model.rate") bs_rate = parse_double(key, value);
    else if (key == "model.rho12") correlations.rho12 = parse_double(key, value);
    else if (key == "model.rho13") correlations.rho13 = parse_double(key, value);
    else if (key == "model.rho23") correlations.rho23 = parse_double(key, value);
    else if (key == "init.s0") init.s0 = parse_double(key, value);
    else if (key == "init.v0") init.v0 = parse_double(key, value);
    else if (key == "init.r0") init.r0 = parse_double(key, value);
    else if (key == "payoff.kind") payoff.kind = parse_payoff_kind(value);
    else if (key == "payoff.strike") payoff.strike = parse_double(key, value);
    else if (key == "payoff.level") payoff.level = parse_double(key, value);
    else if (key == "sim.paths") sim.n_paths = parse_u64(key, value);
    else if (key == "sim.steps") sim.n_steps = parse_u64(key, value);
    else if (key == "sim.maturity") sim.maturity = parse_double(key, value);
    else if (key == "sim.seed") sim.seed = parse_u64(key, value);
    else if (key == "sim.variance_floor") sim.variance_floor = parse_double(key, value);
    else if (key == "sim.sigma_floor") sim.sigma_floor = parse_double(key, value);
    else if (key == "sim.workers") sim.worker_hint = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "run.greeks") {
      greeks.clear();
      for (const auto& g : split_list(value)) greeks.push_back(parse_greek(g));
    } else if (key == "run.estimators") {
      estimators.clear();
      for (const auto& e : split_list(value)) estimators.push_back(EstimatorRequest::parse(e));
    } else if (key == "run.sweep") {
      sweep.clear();
      for (const auto& n : split_list(value)) sweep.push_back(parse_u64(key, n));
    } else if (key.rfind("bump.", 0) == 0) {
      bumps[parse_bump_target(key.substr(5))] = parse_double(key, value);
    } else if (key == "output.path") output_path = value;
    else if (key == "output.format") {
      if (value == "csv") format = OutputFormat::Csv;
      else if (value == "json-lines") format = OutputFormat::JsonLines;
      else config_error(key, "expected csv or json-lines");
    } else if (key == "output.timing") timing = parse_bool(key, value);
    else if (key == "output.accumulators") accumulators_out = value;
    else if (key == "input.accumulators") accumulators_in = value;
    else config_error(key, "unknown key");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig &&
        std::string(e.what()).find("key '") != std::string::npos) {
      throw;
    }
    config_error(key, e.what());
  }
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg = defaults();
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig,
                  "line " + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    cfg.set(key, trim(line.substr(eq + 1)));
    seen.insert(key);
  }
  for (const auto& key : required_keys(cfg.model_name, cfg.payoff.kind)) {
    if (!seen.count(key)) config_error(key, "required key missing");
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<std::string> RunConfig::required_keys(const std::string& model_name,
                                                  PayoffKind payoff_kind) {
  std::vector<std::string> keys{"model.name"};
  if (model_name == "black_scholes") {
    keys.insert(keys.end(), {"model.sigma", "model.rate", "init.s0"});
  } else {
    keys.insert(keys.end(), {"model.kappa", "model.theta", "model.sigma_vol", "model.a", "model.b",
                             "model.k", "model.rho12", "model.rho13", "model.rho23", "init.s0",
                             "init.v0", "init.r0"});
  }
  keys.push_back("payoff.kind");
  if (payoff_kind == PayoffKind::Call || payoff_kind == PayoffKind::Put ||
      payoff_kind == PayoffKind::DigitalCall) {
    keys.push_back("payoff.strike");
  } else if (payoff_kind == PayoffKind::Constant) {
    keys.push_back("payoff.level");
  }
  return keys;
}

std::string RunConfig::dump() const {
  std::ostringstream os;
  const auto kv = [&os](const std::string& k, const std::string& v) { os << k << "=" << v << "\n"; };
  kv("model.name", model_name);
  kv("model.kappa", format_double(heston_vasicek.kappa));
  kv("model.theta", format_double(heston_vasicek.theta));
  kv("model.sigma_vol", format_double(heston_vasicek.sigma_vol));
  kv("model.a", format_double(heston_vasicek.a));
  kv("model.b", format_double(heston_vasicek.b));
  kv("model.k", format_double(heston_vasicek.k));
  kv("model.positivity", positivity.rule == PositivityRule::Feller ? "feller" : "novikov");
  kv("model.positivity_enforce", positivity.enforce ? "true" : "false");
  kv("model.sigma", format_double(bs_sigma));
  kv("model.rate", format_double(bs_rate));
  kv("model.rho12", format_double(correlations.rho12));
  kv("model.rho13", format_double(correlations.rho13));
  kv("model.rho23", format_double(correlations.rho23));
  kv("init.s0", format_double(init.s0));
  kv("init.v0", format_double(init.v0));
  kv("init.r0", format_double(init.r0));
  kv("payoff.kind", to_string(payoff.kind));
  kv("payoff.strike", format_double(payoff.strike));
  kv("payoff.level", format_double(payoff.level));
  kv("sim.paths", std::to_string(sim.n_paths));
  kv("sim.steps", std::to_string(sim.n_steps));
  kv("sim.maturity", format_double(sim.maturity));
  kv("sim.seed", std::to_string(sim.seed));
  kv("sim.variance_floor", format_double(sim.variance_floor));
  kv("sim.sigma_floor", format_double(sim.sigma_floor));
  kv("sim.workers", std::to_string(sim.worker_hint));
  kv("run.greeks", join(greeks, [](Greek g) { return to_string(g); }));
  kv("run.estimators", join(estimators, [](const EstimatorRequest& e) { return e.label(); }));
  kv("run.sweep", join(sweep, [](std::size_t n) { return std::to_string(n); }));
  for (auto target : kAllTargets) {
    kv("bump." + to_string(target), format_double(bump_size(target)));
  }
  kv("output.path", output_path);
  kv("output.format", format == OutputFormat::Csv ? "csv" : "json-lines");
  kv("output.timing", timing ? "true" : "false");
  kv("output.accumulators", accumulators_out);
  kv("input.accumulators", accumulators_in);
  return os.str();
}

ModelSpec RunConfig::build_model() const {
  if (model_name == "black_scholes") return black_scholes_degenerate(bs_sigma, bs_rate);
  return heston_vasicek_model(heston_vasicek, correlations, positivity);
}

InitialState RunConfig::effective_init() const {
  InitialState out = init;
  if (model_name == "black_scholes") out.r0 = bs_rate;
  return out;
}

double RunConfig::bump_size(BumpTarget target) const {
  const auto it = bumps.find(target);
  return it != bumps.end() ? it->second : default_bump(target, effective_init());
}

void RunConfig::validate() const {
  ModelSpec model;
  try {
    model = build_model();
  } catch (const Error& e) {
    config_error("model", e.what());
  }
  const InitialState eff = effective_init();
  if (!(eff.s0 > 0.0)) config_error("init.s0", "must be > 0");
  if (!(eff.v0 > 0.0)) config_error("init.v0", "must be > 0");
  try {
    payoff.validate();
  } catch (const Error& e) {
    config_error("payoff.strike", e.what());
  }

  if (sim.n_paths < 1) config_error("sim.paths", "must be >= 1");
  if (sim.n_steps < 1) config_error("sim.steps", "must be >= 1");
  if (!(sim.maturity > 0.0)) config_error("sim.maturity", "must be > 0");
  if (!(sim.variance_floor >= 0.0)) config_error("sim.variance_floor", "must be >= 0");
  if (!(sim.sigma_floor > 0.0)) config_error("sim.sigma_floor", "must be > 0");

  if (greeks.empty()) config_error("run.greeks", "at least one greek required");
  if (estimators.empty()) config_error("run.estimators", "at least one estimator required");
  for (Greek g : greeks) {
    const bool needs_v = g == Greek::VegaV0 || g == Greek::Kappa;
    const bool needs_g = g == Greek::RhoR0 || g == Greek::Reversion;
    if ((needs_v && model.variance_degenerate) || (needs_g && model.rate_degenerate)) {
      config_error("run.greeks", to_string(g) + " is undefined for the degenerate model " + model_name);
    }
  }
  for (const auto& e : estimators) {
    if (e.kind == EstimatorKind::Analytic && model_name != "black_scholes") {
      config_error("run.estimators", "analytic values exist only for black_scholes");
    }
  }
  if (sweep.empty()) config_error("run.sweep", "at least one size required");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i] < 1) config_error("run.sweep", "sizes must be >= 1");
    if (i > 0 && sweep[i] <= sweep[i - 1]) config_error("run.sweep", "sizes must be strictly increasing");
  }
  for (auto target : kAllTargets) {
    const double h = bump_size(target);
    if (!(h > 0.0)) config_error("bump." + to_string(target), "must be > 0");
  }
}

}  // namespace hsv
