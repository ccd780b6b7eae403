#include "hsv/path_engine.hpp"

#include "hsv/error.hpp"
#include "hsv/philox.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace hsv {

namespace {

constexpr double kBlowupThreshold = 1e12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_finite_state(double s, double v, double r, std::uint64_t path, std::size_t step) {
  const bool ok = std::abs(s) <= kBlowupThreshold && std::abs(v) <= kBlowupThreshold &&
                  std::abs(r) <= kBlowupThreshold;
  if (!ok) {
    std::ostringstream os;
    os << "state exceeded " << kBlowupThreshold << " on path " << path << " at step " << step
       << " (S=" << s << ", V=" << v << ", r=" << r << ")";
    throw Error(ErrorCode::NumericalBlowup, os.str());
  }
}

unsigned resolve_workers(unsigned hint, std::size_t n_paths) {
  unsigned workers = hint != 0 ? hint : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n_paths)));
}

}  // namespace

void SimConfig::validate() const {
  if (n_paths < 1) throw Error(ErrorCode::InvalidConfig, "n_paths must be >= 1");
  if (n_steps < 1) throw Error(ErrorCode::InvalidConfig, "n_steps must be >= 1");
  if (n_steps > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidConfig, "n_steps exceeds the 32-bit step key");
  }
  if (!(maturity > 0.0) || !std::isfinite(maturity)) {
    throw Error(ErrorCode::InvalidConfig, "maturity must be > 0");
  }
  if (!(variance_floor >= 0.0)) throw Error(ErrorCode::InvalidConfig, "variance_floor must be >= 0");
  if (!(sigma_floor > 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma_floor must be > 0");
}

std::array<double, PathAccumulators::kFieldCount> PathAccumulators::to_array() const {
  return {s_T, v_T, r_T, D,  I1,    I2,    I3,    A,     Q,     w1_T,
          P2,  P3,  y12_T, y13_T, y22_T, y33_T, R, Jv, Jg, clamp_count};
}

PathAccumulators PathAccumulators::from_array(const std::array<double, kFieldCount>& a) {
  PathAccumulators p;
  p.s_T = a[0];
  p.v_T = a[1];
  p.r_T = a[2];
  p.D = a[3];
  p.I1 = a[4];
  p.I2 = a[5];
  p.I3 = a[6];
  p.A = a[7];
  p.Q = a[8];
  p.w1_T = a[9];
  p.P2 = a[10];
  p.P3 = a[11];
  p.y12_T = a[12];
  p.y13_T = a[13];
  p.y22_T = a[14];
  p.y33_T = a[15];
  p.R = a[16];
  p.Jv = a[17];
  p.Jg = a[18];
  p.clamp_count = a[19];
  return p;
}

double PathSet::total_clamps() const {
  double total = 0.0;
  for (const auto& p : paths) total += p.clamp_count;
  return total;
}

PathSet PathSet::prefix(std::size_t n) const {
  PathSet out = *this;
  out.paths.resize(std::min(n, paths.size()));
  return out;
}

std::vector<StepNormals> draw_normals(std::uint64_t seed, std::uint64_t path, std::size_t n_steps) {
  const NormalStream stream(seed);
  std::vector<StepNormals> out(n_steps);
  for (std::size_t i = 0; i < n_steps; ++i) out[i] = stream.step(path, static_cast<std::uint32_t>(i));
  return out;
}

PathAccumulators simulate_path(const ModelSpec& model, const InitialState& init,
                               const SimConfig& cfg, const Perturbation& pert,
                               std::span<const StepNormals> normals, PathTrace* trace,
                               std::uint64_t path_index) {
  if (normals.size() != cfg.n_steps) {
    throw Error(ErrorCode::InvalidConfig, "normals do not match n_steps");
  }
  const double dt = cfg.dt();
  const double sqrt_dt = std::sqrt(dt);
  const double T = cfg.maturity;
  const double rho12 = model.correlations.rho12;
  const double rho13 = model.correlations.rho13;
  const double mu1 = model.mixing.mu1, mu2 = model.mixing.mu2, mu3 = model.mixing.mu3;
  // Coefficients of row 1 of a^{-1} scaled by S sigma: (1, -rho12/mu1, c3).
  const double c2 = -rho12 / mu1;
  const double c3 = (rho12 * mu2 - rho13 * mu1) / (mu1 * mu3);
  const bool variance_ok = !model.variance_degenerate;
  const bool rate_ok = !model.rate_degenerate;

  const double log_s0 = std::log(init.s0);
  double log_s = log_s0;
  double s = init.s0;
  double var = init.v0;
  double rate = init.r0;
  double y12 = 0.0, y13 = 0.0;
  double log_y22 = 0.0, log_y33 = 0.0;
  double y22 = 1.0, y33 = 1.0;

  PathAccumulators acc;
  double clamps = 0.0;

  if (trace != nullptr) {
    trace->maturity = T;
    trace->variance_floor = cfg.variance_floor;
    for (auto* series : {&trace->t, &trace->s, &trace->v, &trace->r, &trace->y12, &trace->y13,
                         &trace->y22, &trace->y33}) {
      series->clear();
      series->reserve(cfg.n_steps + 1);
    }
    trace->dW.assign(cfg.n_steps, {});
  }
  const auto record = [&](double t) {
    trace->t.push_back(t);
    trace->s.push_back(s);
    trace->v.push_back(var);
    trace->r.push_back(rate);
    trace->y12.push_back(y12);
    trace->y13.push_back(y13);
    trace->y22.push_back(y22);
    trace->y33.push_back(y33);
  };

  for (std::size_t n = 0; n < cfg.n_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    if (trace != nullptr) record(t);

    const double vp = std::max(var, cfg.variance_floor);
    const double sig = model.sigma(vp) + pert.stock_vol;
    double sig_c = sig;
    if (!(sig >= cfg.sigma_floor)) {
      sig_c = cfg.sigma_floor;
      clamps += 1.0;
    }
    const double inv_sig = 1.0 / sig_c;
    const double vv = model.v(vp);
    const double gg = model.g(rate);
    const double sig_p = model.sigma_prime(vp);
    const double vv_p = model.v_prime(vp);
    const double gg_p = model.g_prime(rate);

    const double dw1 = sqrt_dt * normals[n][0];
    const double dw2 = sqrt_dt * normals[n][1];
    const double dw3 = sqrt_dt * normals[n][2];
    const double dz2 = rho12 * dw1 + mu1 * dw2;
    const double dz3 = rho13 * dw1 + mu2 * dw2 + mu3 * dw3;
    if (trace != nullptr) trace->dW[n] = {dw1, dw2, dw3};

    // Integrals with left-point integrands.
    acc.D += (rate + pert.discount_shift) * dt;
    acc.A += sig * dt;
    acc.Q += inv_sig * dt;
    acc.I1 += inv_sig * dw1;
    acc.I2 += inv_sig * dw2;
    acc.I3 += inv_sig * dw3;
    acc.w1_T += dw1;

    const double row1_dw = dw1 + c2 * dw2 + c3 * dw3;
    const double inv_s_sig = inv_sig / s;
    if (variance_ok) {
      double vv_c = vv;
      if (!(std::abs(vv) >= cfg.sigma_floor)) {
        vv_c = cfg.sigma_floor;
        clamps += 1.0;
      }
      const double var_dw = (dw2 - (mu2 / mu3) * dw3) / (mu1 * vv_c);
      acc.P2 += y12 * inv_s_sig * row1_dw + y22 * var_dw;
      acc.Jv += var_dw;
    }
    if (rate_ok) {
      const double rate_dw = dw3 / (mu3 * gg);
      acc.P3 += y13 * inv_s_sig * row1_dw + y33 * rate_dw;
      acc.Jg += rate_dw;
    }
    acc.R += (1.0 - t / T) * y33 * dt;

    // First variation: Euler for the off-diagonal entries, exponentials for
    // the diagonal ones.
    const double y12_next = y12 + rate * y12 * dt + (sig * y12 + s * sig_p * y22) * dw1;
    const double y13_next = y13 + (rate * y13 + s * y33) * dt + sig * y13 * dw1;
    log_y22 += (model.u_prime(vp) - 0.5 * vv_p * vv_p) * dt + vv_p * dz2;
    log_y33 += (model.f_prime(rate) - 0.5 * gg_p * gg_p) * dt + gg_p * dz3;

    // State: log-Euler for S, full-truncation Euler for V, Euler for r.
    log_s += (rate + pert.stock_drift - 0.5 * sig * sig) * dt + sig * dw1;
    const double var_next = var + (model.u(vp) + pert.variance_drift) * dt + vv * dz2;
    const double rate_next = rate + (model.f(rate) + pert.rate_drift) * dt + gg * dz3;

    y12 = y12_next;
    y13 = y13_next;
    y22 = std::exp(log_y22);
    y33 = std::exp(log_y33);
    s = std::exp(log_s);
    var = var_next;
    rate = rate_next;
    check_finite_state(s, var, rate, path_index, n + 1);
    if (!std::isfinite(y12) || !std::isfinite(y13) || !std::isfinite(y22) || !std::isfinite(y33)) {
      std::ostringstream os;
      os << "first variation overflow on path " << path_index << " at step " << n + 1;
      throw Error(ErrorCode::NumericalBlowup, os.str());
    }
  }
  if (trace != nullptr) record(T);

  acc.s_T = s;
  acc.v_T = var;
  acc.r_T = rate;
  acc.y12_T = y12;
  acc.y13_T = y13;
  acc.y22_T = y22;
  acc.y33_T = y33;
  if (!variance_ok) {
    acc.P2 = kNaN;
    acc.Jv = kNaN;
  }
  if (!rate_ok) {
    acc.P3 = kNaN;
    acc.Jg = kNaN;
  }
  acc.clamp_count = clamps;
  return acc;
}

PathSet simulate_paths(const ModelSpec& model, const InitialState& init, const SimConfig& cfg,
                       const Perturbation& perturbation) {
  cfg.validate();
  init.validate();
  if (model.pinned_rate && init.r0 != *model.pinned_rate) {
    std::ostringstream os;
    os << "r0 = " << init.r0 << " differs from the model's constant rate " << *model.pinned_rate;
    throw Error(ErrorCode::InvalidConfig, os.str());
  }

  PathSet out;
  out.correlations = model.correlations;
  out.mixing = model.mixing;
  out.s0 = init.s0;
  out.maturity = cfg.maturity;
  out.n_steps = cfg.n_steps;
  out.seed = cfg.seed;
  out.variance_weights_valid = !model.variance_degenerate;
  out.rate_weights_valid = !model.rate_degenerate;
  out.heston_vasicek = model.heston_vasicek;
  out.paths.resize(cfg.n_paths);

  const unsigned workers = resolve_workers(cfg.worker_hint, cfg.n_paths);
  std::vector<std::exception_ptr> failures(workers);
  // Static contiguous blocks; each path depends only on its own index.
  const auto work = [&](unsigned w) {
    const std::size_t begin = cfg.n_paths * w / workers;
    const std::size_t end = cfg.n_paths * (w + 1) / workers;
    const NormalStream stream(cfg.seed);
    std::vector<StepNormals> normals(cfg.n_steps);
    try {
      for (std::size_t p = begin; p < end; ++p) {
        for (std::size_t i = 0; i < cfg.n_steps; ++i) {
          normals[i] = stream.step(p, static_cast<std::uint32_t>(i));
        }
        out.paths[p] = simulate_path(model, init, cfg, perturbation, normals, nullptr, p);
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  // Lowest block first, so the reported failure does not depend on timing.
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

FirstVariationSeries first_variation_closed_forms(const PathTrace& trace, const ModelSpec& model,
                                                  const InitialState& init) {
  (void)init;
  const std::size_t n_steps = trace.dW.size();
  const double dt = trace.maturity / static_cast<double>(n_steps);
  const double rho12 = model.correlations.rho12, rho13 = model.correlations.rho13;
  const double mu1 = model.mixing.mu1, mu2 = model.mixing.mu2, mu3 = model.mixing.mu3;

  FirstVariationSeries out;
  out.variance_degenerate = model.variance_degenerate;
  out.rate_degenerate = model.rate_degenerate;
  out.y11.reserve(n_steps + 1);
  out.y22.reserve(n_steps + 1);
  out.y33.reserve(n_steps + 1);

  double e11 = 0.0, e22 = 0.0, e33 = 0.0;
  out.y11.push_back(1.0);
  out.y22.push_back(1.0);
  out.y33.push_back(1.0);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double vp = std::max(trace.v[n], trace.variance_floor);
    const double r = trace.r[n];
    const auto& dw = trace.dW[n];
    const double dz1 = dw[0];
    const double dz2 = rho12 * dw[0] + mu1 * dw[1];
    const double dz3 = rho13 * dw[0] + mu2 * dw[1] + mu3 * dw[2];
    const double sig = model.sigma(vp);
    const double vp_ = model.v_prime(vp);
    const double gp_ = model.g_prime(r);
    e11 += (r - 0.5 * sig * sig) * dt + sig * dz1;
    e22 += (model.u_prime(vp) - 0.5 * vp_ * vp_) * dt + vp_ * dz2;
    e33 += (model.f_prime(r) - 0.5 * gp_ * gp_) * dt + gp_ * dz3;
    out.y11.push_back(std::exp(e11));
    out.y22.push_back(std::exp(e22));
    out.y33.push_back(std::exp(e33));
  }
  return out;
}

OffDiagonalTerminal simulate_y12_y13(const PathTrace& trace, const ModelSpec& model,
                                     std::span<const double> y22, std::span<const double> y33) {
  const std::size_t n_steps = trace.dW.size();
  const double dt = trace.maturity / static_cast<double>(n_steps);
  double y12 = 0.0, y13 = 0.0;
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double vp = std::max(trace.v[n], trace.variance_floor);
    const double s = trace.s[n];
    const double r = trace.r[n];
    const double sig = model.sigma(vp);
    const double dw1 = trace.dW[n][0];
    const double next12 = y12 + r * y12 * dt + (sig * y12 + s * model.sigma_prime(vp) * y22[n]) * dw1;
    const double next13 = y13 + (r * y13 + s * y33[n]) * dt + sig * y13 * dw1;
    y12 = next12;
    y13 = next13;
  }
  return {y12, y13};
}

}  // namespace hsv
