/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/pseudoconformal.hpp"

#include <cmath>
#include <stdexcept>

namespace nlslab {

BlowupFrame frame_from_trajectory(const Trajectory& traj, double t) {
  if (!(t > 0.0) || t > 1.0 + 1e-12)
    throw std::invalid_argument("frame_from_trajectory: t must lie in (0, 1]");
  const double tau = 1.0 / t;
  const auto idx = traj.index_of_time(tau);
  if (!idx)
    throw std::invalid_argument("frame_from_trajectory: no snapshot at tau = 1/t");
  BlowupFrame frame;
  frame.t = t;
  frame.source_tau = traj.times[*idx];
  frame.K = traj.K;
  frame.A.resize(traj.states[*idx].size());
  for (std::size_t i = 0; i < frame.A.size(); ++i)
    frame.A[i] = std::conj(traj.states[*idx][i]);
  return frame;
}

namespace {

UField evaluate_impl(const BlowupFrame& frame, std::span<const double> x, int j_window,
                     bool with_derivative) {
  if (!(frame.t > 0.0)) throw std::invalid_argument("evaluate_u: t = 0 is the focusing time");
  if (j_window < 0 || j_window > frame.K)
    throw std::invalid_argument("evaluate_u: window outside radius");
  UField out;
  out.values.assign(x.size(), cplx(0.0, 0.0));
  if (with_derivative) out.derivatives.assign(x.size(), cplx(0.0, 0.0));
  const double inv_sqrt_t = 1.0 / std::sqrt(frame.t);
  const double quarter_inv_t = 0.25 / frame.t;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cplx u(0.0, 0.0), ux(0.0, 0.0);
    for (int j = -j_window; j <= j_window; ++j) {
      const double d = x[i] - static_cast<double>(j);
      const cplx term = frame.at(j) * std::polar(inv_sqrt_t, quarter_inv_t * d * d);
      u += term;
      if (with_derivative) ux += term * cplx(0.0, d / (2.0 * frame.t));
    }
    out.values[i] = u;
    if (with_derivative) out.derivatives[i] = ux;
  }
  double tail = 0.0;
  for (int j = -frame.K; j <= frame.K; ++j)
    if (std::abs(j) > j_window) tail += std::norm(frame.at(j));
  out.tail_bound = std::sqrt(tail) * inv_sqrt_t;
  return out;
}

}  // namespace

UField evaluate_u(const BlowupFrame& frame, std::span<const double> x, int j_window) {
  return evaluate_impl(frame, x, j_window, false);
}

UField evaluate_u_dx(const BlowupFrame& frame, std::span<const double> x, int j_window) {
  return evaluate_impl(frame, x, j_window, true);
}

double pc_identity_check(const Trajectory& traj, double t, std::span<const double> y) {
  const BlowupFrame frame = frame_from_trajectory(traj, t);
  const double tau = 1.0 / t;
  const auto idx = traj.index_of_time(tau);
  const std::vector<cplx>& B = traj.states[*idx];

  // Transform side: map the ansatz evaluation through the change of variables.
  std::vector<double> xs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) xs[i] = y[i] / tau;
  const UField u = evaluate_u(frame, xs, frame.K);

  double peak = 0.0, worst = 0.0;
  const double inv_sqrt_tau = 1.0 / std::sqrt(tau);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const cplx lhs = std::polar(inv_sqrt_tau, y[i] * y[i] / (4.0 * tau)) *
                     std::conj(u.values[i]);
    // Half-frequency synthesis straight from the mode data.
    cplx rhs(0.0, 0.0);
    for (int j = -traj.K; j <= traj.K; ++j)
      rhs += B[static_cast<std::size_t>(j + traj.K)] *
             std::polar(1.0, -tau * static_cast<double>(j) * j / 4.0 +
                                 static_cast<double>(j) * y[i] / 2.0);
    peak = std::max(peak, std::abs(rhs));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return peak > 0.0 ? worst / peak : worst;
}

}  // namespace nlslab
