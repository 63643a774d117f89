/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlslab {

double mass(const ModeVector& state) {
  state.require_valid();
  double m = 0.0;
  for (const cplx& c : state.coeffs) m += std::norm(c);
  return m;
}

double weighted_norm(const ModeVector& state, double s) {
  state.require_valid();
  if (s < 0.0) throw std::invalid_argument("weighted_norm: negative exponent");
  double sum = 0.0;
  for (int k = -state.K; k <= state.K; ++k)
    sum += std::pow(bracket(static_cast<double>(k)), 2.0 * s) * std::norm(state.at(k));
  return std::sqrt(sum);
}

namespace {

// ||v||_{L4}^4 under (1/2pi) dx; |v|^4 has bandwidth 4K, so pad past it.
double l4_norm4(const ModeVector& state) {
  const std::size_t n = next_pow2(static_cast<std::size_t>(4 * state.K + 2));
  const GridFunction g = to_grid(state, std::max<std::size_t>(n, 8));
  double sum = 0.0;
  for (const cplx& v : g.samples) {
    const double a = std::norm(v);
    sum += a * a;
  }
  return sum / static_cast<double>(g.samples.size());
}

}  // namespace

double energy(const ModeVector& state) {
  state.require_valid();
  double grad = 0.0;
  for (int k = -state.K; k <= state.K; ++k)
    grad += static_cast<double>(k) * k * std::norm(state.at(k));
  return 0.5 * grad - l4_norm4(state) / (4.0 * state.tau);
}

double energy_law_residual(const Trajectory& traj) {
  if (traj.size() < 3) throw std::invalid_argument("energy_law_residual: need >= 3 snapshots");
  std::vector<double> e(traj.size()), l4(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ModeVector s = traj.state(i);
    e[i] = energy(s);
    l4[i] = l4_norm4(s);
  }
  const double scale = std::abs(e.front()) + 1.0;
  double residual = 0.0;
  double integral = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double t0 = traj.times[i - 1], t1 = traj.times[i];
    integral += 0.5 * (t1 - t0) * (l4[i - 1] / (4.0 * t0 * t0) + l4[i] / (4.0 * t1 * t1));
    residual = std::max(residual, std::abs(e[i] - e.front() - integral));
  }
  return residual / scale;
}

std::vector<cplx> modified_profile(const Trajectory& traj, int k) {
  if (k < -traj.K || k > traj.K)
    throw std::invalid_argument("modified_profile: mode outside radius");
  if (traj.size() == 0) throw std::invalid_argument("modified_profile: empty trajectory");
  const double m0 = mass(traj.state(0));
  const std::size_t idx = static_cast<std::size_t>(k + traj.K);
  std::vector<cplx> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double phase = 2.0 * m0 * std::log(traj.times[i]) - traj.quadrature[i][idx];
    out[i] = std::polar(1.0, phase) * traj.states[i][idx];
  }
  return out;
}

std::vector<std::size_t> last_decade_indices(const Trajectory& traj, std::size_t min_points) {
  if (traj.size() == 0) throw std::invalid_argument("last_decade_indices: empty trajectory");
  const double tau_end = traj.times.back();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (traj.times[i] >= tau_end / 10.0 * (1.0 - 1e-12)) idx.push_back(i);
  if (idx.size() < min_points)
    throw std::invalid_argument("last_decade_indices: too few snapshots in the last decade");
  return idx;
}

namespace {

// Modes carrying meaningful amplitude; rate fits ignore the noise floor.
std::vector<std::size_t> significant_modes(const std::vector<cplx>& ref) {
  double peak = 0.0;
  for (const cplx& c : ref) peak = std::max(peak, std::abs(c));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (std::abs(ref[i]) > 1e-8 * peak) out.push_back(i);
  return out;
}

}  // namespace

ScatteringSummary extract_asymptotics(const Trajectory& traj) {
  if (traj.size() == 0) throw std::invalid_argument("extract_asymptotics: empty trajectory");
  const double tau_end = traj.times.back();
  if (tau_end < 100.0)
    throw std::invalid_argument("extract_asymptotics: horizon below tau = 100");
  const auto i_end = traj.size() - 1;
  const auto i_half = traj.index_of_time(tau_end / 2.0);
  if (!i_half)
    throw std::invalid_argument("extract_asymptotics: no snapshot at tau_end / 2");

  ScatteringSummary sum;
  sum.M = mass(traj.state(0));
  const std::size_t width = traj.states.front().size();
  sum.beta.resize(width);
  sum.alpha.resize(width);

  // Corrected profiles at the horizon and half horizon.
  std::vector<cplx> tilde_end(width), tilde_half(width);
  for (int k = -traj.K; k <= traj.K; ++k) {
    const std::size_t idx = static_cast<std::size_t>(k + traj.K);
    const double phase_end =
        2.0 * sum.M * std::log(tau_end) - traj.quadrature[i_end][idx];
    const double phase_half =
        2.0 * sum.M * std::log(tau_end / 2.0) - traj.quadrature[*i_half][idx];
    tilde_end[idx] = std::polar(1.0, phase_end) * traj.states[i_end][idx];
    tilde_half[idx] = std::polar(1.0, phase_half) * traj.states[*i_half][idx];
    // Richardson step under the c/tau error model.
    sum.beta[idx] = 2.0 * tilde_end[idx] - tilde_half[idx];
    const cplx raw = std::polar(1.0, (2.0 * sum.M - std::norm(sum.beta[idx])) *
                                         std::log(tau_end)) *
                     traj.states[i_end][idx];
    const double mod = std::abs(raw);
    sum.alpha[idx] = mod > 0.0 ? raw * (std::abs(sum.beta[idx]) / mod) : cplx(0.0, 0.0);
  }

  // Rate of convergence of the corrected profiles over the last decade.
  const auto decade = last_decade_indices(traj);
  const auto active = significant_modes(sum.beta);
  std::vector<double> lx, ly;
  double worst = 0.0;
  for (std::size_t i : decade) {
    double dev = 0.0;
    for (std::size_t idx : active) {
      const int k = static_cast<int>(idx) - traj.K;
      const double phase =
          2.0 * sum.M * std::log(traj.times[i]) - traj.quadrature[i][idx];
      const cplx tilde = std::polar(1.0, phase) * traj.states[i][idx];
      dev = std::max(dev, std::abs(tilde - sum.beta[idx]));
      (void)k;
    }
    worst = std::max(worst, dev);
    if (dev > 0.0) {
      lx.push_back(std::log(traj.times[i]));
      ly.push_back(std::log(dev));
    }
  }
  const double floor = 1e-13 * std::sqrt(std::max(sum.M, 1e-300));
  if (active.empty() || worst <= floor) {
    sum.exact = true;
    sum.rate_slope = 0.0;
    sum.rate_constant = 0.0;
    return sum;
  }
  const LineFit fit = fit_line(lx, ly);
  sum.rate_slope = fit.slope;
  // Constant of the pure C/tau model: geometric mean of dev * tau.
  double acc = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) acc += ly[i] + lx[i];
  sum.rate_constant = std::exp(acc / static_cast<double>(lx.size()));
  return sum;
}

NormReport norm_monitor(const Trajectory& traj, double s) {
  if (traj.size() == 0) throw std::invalid_argument("norm_monitor: empty trajectory");
  NormReport rep;
  rep.s = s;
  rep.values.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    rep.values[i] = weighted_norm(traj.state(i), s);
  const double base = rep.values.front();
  if (base == 0.0) {
    rep.sup_ratio = 0.0;
    rep.trend_slope = 0.0;
    return rep;
  }
  rep.sup_ratio = *std::max_element(rep.values.begin(), rep.values.end()) / base;
  const auto decade = last_decade_indices(traj);
  std::vector<double> lx, ly;
  for (std::size_t i : decade) {
    lx.push_back(std::log(traj.times[i]));
    ly.push_back(std::log(rep.values[i]));
  }
  rep.trend_slope = fit_line(lx, ly).slope;
  return rep;
}

RateFit blowup_law_check(const Trajectory& traj, const ScatteringSummary& summary) {
  if (traj.size() == 0) throw std::invalid_argument("blowup_law_check: empty trajectory");
  RateFit fit;
  const auto active = significant_modes(summary.alpha);
  if (active.empty()) {
    fit.exact = true;
    return fit;
  }
  const auto decade = last_decade_indices(traj);
  std::vector<double> lx, ly;
  double worst = 0.0;
  for (std::size_t i : decade) {
    const double lt = std::log(traj.times[i]);
    double dev = 0.0;
    for (std::size_t idx : active) {
      const cplx model =
          summary.alpha[idx] *
          std::polar(1.0, -(2.0 * summary.M - std::norm(summary.alpha[idx])) * lt);
      dev = std::max(dev, std::abs(traj.states[i][idx] - model));
    }
    worst = std::max(worst, dev);
    if (dev > 0.0) {
      lx.push_back(lt);
      ly.push_back(std::log(dev));
    }
  }
  if (worst <= 1e-12 * std::sqrt(std::max(summary.M, 1e-300))) {
    fit.exact = true;
    return fit;
  }
  const LineFit lf = fit_line(lx, ly);
  fit.slope = lf.slope;
  double acc = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) acc += ly[i] + lx[i];
  fit.constant = std::exp(acc / static_cast<double>(lx.size()));
  return fit;
}

WindowedFourierTable windowed_time_fourier(const Trajectory& traj, int nu,
                                           const std::vector<double>& lambda_grid) {
  if (nu < 2) throw std::invalid_argument("windowed_time_fourier: nu must be >= 2");
  const double lo = static_cast<double>(nu) - 1.0;
  const double hi = static_cast<double>(nu) + 2.0;
  std::vector<std::size_t> win;
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (traj.times[i] >= lo - 1e-9 && traj.times[i] <= hi + 1e-9) win.push_back(i);
  if (win.size() < 16 || traj.times[win.front()] > lo + 0.05 ||
      traj.times[win.back()] < hi - 0.05)
    throw std::invalid_argument("windowed_time_fourier: window not densely covered");

  // dB/dt at the window samples.
  RhsWorkspace ws(traj.K);
  std::vector<std::vector<cplx>> deriv(win.size());
  for (std::size_t w = 0; w < win.size(); ++w) {
    const ModeVector s = traj.state(win[w]);
    ws.eval(s, deriv[w]);
  }

  WindowedFourierTable table;
  table.nu = nu;
  table.lambdas = lambda_grid;
  const std::size_t width = traj.states.front().size();
  table.magnitude.assign(width, std::vector<double>(lambda_grid.size(), 0.0));

  for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
    const double lambda = lambda_grid[li];
    for (std::size_t idx = 0; idx < width; ++idx) {
      cplx acc(0.0, 0.0);
      for (std::size_t w = 0; w + 1 < win.size(); ++w) {
        const double t0 = traj.times[win[w]], t1 = traj.times[win[w + 1]];
        const cplx f0 = std::polar(1.0, t0 * lambda) * bump_eta(t0 - nu) * deriv[w][idx];
        const cplx f1 = std::polar(1.0, t1 * lambda) * bump_eta(t1 - nu) * deriv[w + 1][idx];
        acc += 0.5 * (t1 - t0) * (f0 + f1);
      }
      const double mag = std::abs(acc);
      table.magnitude[idx][li] = mag;
      table.max_magnitude = std::max(table.max_magnitude, mag);
    }
  }
  return table;
}

}  // namespace nlslab
