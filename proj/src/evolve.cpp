/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace nlslab {

void SimConfig::validate() const {
  if (K < 0) throw std::invalid_argument("SimConfig: negative radius");
  if (!(tau_end > 1.0)) throw std::invalid_argument("SimConfig: tau_end must exceed 1");
  if (!(dt_initial > 0.0)) throw std::invalid_argument("SimConfig: dt_initial must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("SimConfig: tolerance must be positive");
  if (snapshots_per_decade < 1)
    throw std::invalid_argument("SimConfig: snapshots_per_decade must be >= 1");
  for (double t : extra_snapshot_times)
    if (!(t >= 1.0) || !(t <= tau_end))
      throw std::invalid_argument("SimConfig: extra snapshot time outside [1, tau_end]");
}

ModeVector Trajectory::state(std::size_t i) const {
  ModeVector s(K, times.at(i));
  s.coeffs = states.at(i);
  return s;
}

std::optional<std::size_t> Trajectory::index_of_time(double tau, double rtol) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - tau) <= rtol * std::max(1.0, std::abs(tau))) return i;
  return std::nullopt;
}

Trajectory Trajectory::thinned(std::size_t stride) const {
  if (stride == 0) throw std::invalid_argument("Trajectory::thinned: zero stride");
  Trajectory out;
  out.config = config;
  out.K = K;
  for (std::size_t i = 0; i < size(); i += stride) {
    out.times.push_back(times[i]);
    out.states.push_back(states[i]);
    out.quadrature.push_back(quadrature[i]);
  }
  if (!times.empty() && (size() - 1) % stride != 0) {
    out.times.push_back(times.back());
    out.states.push_back(states.back());
    out.quadrature.push_back(quadrature.back());
  }
  return out;
}

StrangIntegrator::StrangIntegrator(int radius)
    : radius_(radius),
      pad_(next_pow2(static_cast<std::size_t>(3 * (2 * radius + 1)))),
      modes_(static_cast<std::size_t>(2 * radius + 1)) {}

namespace {

inline std::size_t bin_of(int k, std::size_t n) {
  return static_cast<std::size_t>((k % static_cast<int>(n) + static_cast<int>(n)) %
                                  static_cast<int>(n));
}

}  // namespace

void StrangIntegrator::step(ModeVector& state, double tau_next,
                            std::optional<double> target_mass) {
  const double tau0 = state.tau;
  if (!(tau_next > 0.0)) throw std::invalid_argument("StrangIntegrator: nonpositive tau");
  const double theta = std::log(tau_next / tau0);
  const double tau_mid = 0.5 * (tau0 + tau_next);
  const int K = radius_;
  const double inv_pad = 1.0 / static_cast<double>(pad_);

  // Enter the interaction frame at the midpoint time and synthesize V.
  va_.assign(pad_, cplx(0.0, 0.0));
  for (int j = -K; j <= K; ++j)
    va_[bin_of(j, pad_)] =
        state.at(j) * std::polar(1.0, tau_mid * static_cast<double>(j) * j);
  ifft(va_);

  // Pointwise solution of i v_theta = |v|^2 v over the angle theta, plus the
  // cubic interaction field for the cross-band correction below.
  wa_.resize(pad_);
  qa_.resize(pad_);
  for (std::size_t i = 0; i < pad_; ++i) {
    const double a2 = std::norm(va_[i]);
    wa_[i] = va_[i] * std::polar(1.0, -theta * a2);
    qa_[i] = va_[i] * a2;
  }
  fft(wa_);
  fft(qa_);

  // q = part of |v|^2 v outside the band. The plain projected step misses the
  // feedback of q into the band at second order; restore it explicitly so the
  // scheme stays second-order consistent with the Galerkin-truncated flow:
  //   correction = (theta^2 / 2) (2 P(|v|^2 q) - P(v^2 conj(q))).
  double qmass = 0.0;
  for (int j = -K; j <= K; ++j) qa_[bin_of(j, pad_)] = cplx(0.0, 0.0);
  for (const cplx& c : qa_) qmass += std::norm(c);
  const bool correct = qmass > 0.0 && theta != 0.0;
  if (correct) {
    ifft(qa_);
    ua_.resize(pad_);
    for (std::size_t i = 0; i < pad_; ++i) {
      const cplx q = qa_[i] * inv_pad;
      const cplx v = va_[i];
      ua_[i] = 2.0 * std::norm(v) * q - v * v * std::conj(q);
    }
    fft(ua_);
  }

  const double half_theta2 = 0.5 * theta * theta;
  for (int j = -K; j <= K; ++j) {
    cplx m = wa_[bin_of(j, pad_)] * inv_pad;
    if (correct) m += half_theta2 * ua_[bin_of(j, pad_)] * inv_pad;
    state.at(j) = m * std::polar(1.0, -tau_mid * static_cast<double>(j) * j);
  }
  state.tau = tau_next;

  if (target_mass) {
    double m = 0.0;
    for (const cplx& c : state.coeffs) m += std::norm(c);
    if (m > 0.0 && *target_mass > 0.0) {
      const double scale = std::sqrt(*target_mass / m);
      for (cplx& c : state.coeffs) c *= scale;
    }
  }
}

namespace {

double mass_of(const std::vector<cplx>& coeffs) {
  double m = 0.0;
  for (const cplx& c : coeffs) m += std::norm(c);
  return m;
}

std::vector<double> snapshot_times(const SimConfig& config) {
  std::vector<double> ts;
  ts.push_back(1.0);
  const double decades = std::log10(config.tau_end);
  const int n = static_cast<int>(std::ceil(decades * config.snapshots_per_decade));
  for (int i = 1; i <= n; ++i) {
    double t = std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n));
    ts.push_back(std::min(t, config.tau_end));
  }
  ts.push_back(config.tau_end);
  // Half and quarter horizon anchor the asymptotic extrapolations.
  if (config.tau_end / 2.0 > 1.0) ts.push_back(config.tau_end / 2.0);
  if (config.tau_end / 4.0 > 1.0) ts.push_back(config.tau_end / 4.0);
  ts.insert(ts.end(), config.extra_snapshot_times.begin(), config.extra_snapshot_times.end());
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || t - out.back() > 1e-12 * std::max(1.0, t)) out.push_back(t);
  return out;
}

void check_finite(const ModeVector& state) {
  if (!state.finite())
    throw NumericalAbort("integration produced a non-finite coefficient", state.tau);
}

void accumulate_quadrature(std::vector<double>& quad, const std::vector<cplx>& pre,
                           const std::vector<cplx>& post, double theta) {
  // Trapezoid in log tau: int |B|^2 dsigma/sigma over one step.
  for (std::size_t i = 0; i < quad.size(); ++i)
    quad[i] += 0.5 * theta * (std::norm(pre[i]) + std::norm(post[i]));
}

void integrate_strang(const ModeVector& initial, const SimConfig& config, Trajectory& traj) {
  StrangIntegrator stepper(config.K);
  ModeVector state = initial;
  const double mass0 = mass_of(state.coeffs);
  std::vector<double> quad(state.size(), 0.0);
  std::vector<cplx> pre;

  const std::vector<double> stops = snapshot_times(config);
  traj.times.push_back(state.tau);
  traj.states.push_back(state.coeffs);
  traj.quadrature.push_back(quad);

  for (std::size_t s = 1; s < stops.size(); ++s) {
    const double a = stops[s - 1];
    const double b = stops[s];
    const double span = std::log(b / a);
    const int nsub = std::max(1, static_cast<int>(std::ceil(span / config.dt_initial)));
    for (int i = 1; i <= nsub; ++i) {
      const double target =
          (i == nsub) ? b : a * std::exp(span * static_cast<double>(i) / nsub);
      const double tau_pre = state.tau;
      pre = state.coeffs;
      stepper.step(state, target, mass0 > 0.0 ? std::optional<double>(mass0) : std::nullopt);
      check_finite(state);
      accumulate_quadrature(quad, pre, state.coeffs, std::log(target / tau_pre));
    }
    traj.times.push_back(state.tau);
    traj.states.push_back(state.coeffs);
    traj.quadrature.push_back(quad);
  }
}

// Dormand-Prince 5(4) with FSAL, standard coefficients.
struct Dp5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b(5th) - b(4th): weights of the embedded error estimate.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

void integrate_adaptive(const ModeVector& initial, const SimConfig& config, Trajectory& traj) {
  RhsWorkspace ws(config.K);
  const std::size_t n = initial.size();
  ModeVector state = initial;
  std::vector<double> quad(n, 0.0);

  auto rhs = [&](const std::vector<cplx>& y, double tau, std::vector<cplx>& dy) {
    ModeVector tmp(config.K, tau);
    tmp.coeffs = y;
    ws.eval(tmp, dy);
  };

  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  const double atol = 1e-14;
  const double rtol = config.tolerance;

  const std::vector<double> stops = snapshot_times(config);
  traj.times.push_back(state.tau);
  traj.states.push_back(state.coeffs);
  traj.quadrature.push_back(quad);

  double h = config.dt_initial;
  rhs(state.coeffs, state.tau, k1);
  for (std::size_t s = 1; s < stops.size(); ++s) {
    const double b = stops[s];
    while (state.tau < b * (1.0 - 1e-15)) {
      h = std::min(h, b - state.tau);
      if (h < 1e-9)
        throw NumericalAbort("adaptive step size underflow below 1e-9", state.tau);
      const double t = state.tau;
      const std::vector<cplx>& y = state.coeffs;

      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * Dp5::a21 * k1[i];
      rhs(ytmp, t + Dp5::c2 * h, k2);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (Dp5::a31 * k1[i] + Dp5::a32 * k2[i]);
      rhs(ytmp, t + Dp5::c3 * h, k3);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (Dp5::a41 * k1[i] + Dp5::a42 * k2[i] + Dp5::a43 * k3[i]);
      rhs(ytmp, t + Dp5::c4 * h, k4);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (Dp5::a51 * k1[i] + Dp5::a52 * k2[i] + Dp5::a53 * k3[i] +
                              Dp5::a54 * k4[i]);
      rhs(ytmp, t + Dp5::c5 * h, k5);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (Dp5::a61 * k1[i] + Dp5::a62 * k2[i] + Dp5::a63 * k3[i] +
                              Dp5::a64 * k4[i] + Dp5::a65 * k5[i]);
      rhs(ytmp, t + h, k6);
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (Dp5::b1 * k1[i] + Dp5::b3 * k3[i] + Dp5::b4 * k4[i] +
                              Dp5::b5 * k5[i] + Dp5::b6 * k6[i]);
      rhs(ynew, t + h, k7);

      double err2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx e = h * (Dp5::e1 * k1[i] + Dp5::e3 * k3[i] + Dp5::e4 * k4[i] +
                            Dp5::e5 * k5[i] + Dp5::e6 * k6[i] + Dp5::e7 * k7[i]);
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double q = std::abs(e) / sc;
        err2 += q * q;
      }
      const double err = std::sqrt(err2 / static_cast<double>(n));

      if (err <= 1.0) {
        accumulate_quadrature(quad, y, ynew, std::log((t + h) / t));
        state.coeffs = ynew;
        state.tau = t + h;
        check_finite(state);
        k1 = k7;  // FSAL
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
    }
    state.tau = b;
    traj.times.push_back(state.tau);
    traj.states.push_back(state.coeffs);
    traj.quadrature.push_back(quad);
    rhs(state.coeffs, state.tau, k1);
  }
}

}  // namespace

Trajectory integrate(const ModeVector& initial, const SimConfig& config) {
  config.validate();
  initial.require_valid();
  if (initial.K != config.K) throw std::invalid_argument("integrate: radius mismatch");
  if (std::abs(initial.tau - 1.0) > 1e-12)
    throw std::invalid_argument("integrate: initial state must be at tau = 1");

  Trajectory traj;
  traj.config = config;
  traj.K = config.K;
  if (config.method == Method::strang_splitting)
    integrate_strang(initial, config, traj);
  else
    integrate_adaptive(initial, config, traj);
  return traj;
}

double mass_drift(const Trajectory& traj) {
  if (traj.size() == 0) throw std::invalid_argument("mass_drift: empty trajectory");
  const double m0 = mass_of(traj.states.front());
  double drift = 0.0;
  for (const auto& coeffs : traj.states) drift = std::max(drift, std::abs(mass_of(coeffs) - m0));
  return drift;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& header_comment) {
  for (const std::string& line : header_comment) os << "# " << line << "\n";
  os << "tau,k,re_B,im_B,quadrature_k\n";
  os.precision(17);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (int k = -traj.K; k <= traj.K; ++k) {
      const std::size_t idx = static_cast<std::size_t>(k + traj.K);
      os << traj.times[i] << ',' << k << ',' << traj.states[i][idx].real() << ','
         << traj.states[i][idx].imag() << ',' << traj.quadrature[i][idx] << "\n";
    }
  }
}

}  // namespace nlslab
