/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Quantitative diagnostics along trajectories: mass, weighted norms, the
 * energy law, log-phase-corrected profiles and their limits, decay-rate fits,
 * and the windowed time-Fourier audit of the mode derivatives.
 *
 *****************************************************************************/

#ifndef NLSLAB_SCATTERING_HPP
#define NLSLAB_SCATTERING_HPP

#include <vector>

#include "nlslab/evolve.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/util.hpp"

namespace nlslab {

/// sum_k |B_k|^2.
double mass(const ModeVector& state);

/// ( sum_k <k>^{2s} |B_k|^2 )^{1/2}.
double weighted_norm(const ModeVector& state, double s);

/// E(tau) = 1/2 ||dv/dx||^2 - 1/(4 tau) ||v||_{L4}^4 under the (1/2pi) dx
/// measure, the L4 term on a grid padded past the quartic bandwidth.
double energy(const ModeVector& state);

/// Max over snapshot pairs of |E(t2) - E(t1) - int (1/(4 s^2)) ||v||_{L4}^4 ds|
/// with trapezoidal quadrature on the snapshot grid, normalized by |E(1)| + 1.
double energy_law_residual(const Trajectory& traj);

/// Log-phase-corrected profile of mode k along the trajectory:
///   Btilde_k(tau) = e^{i (2 M log tau - q_k(tau))} B_k(tau),
/// with q_k the recorded quadrature; |Btilde_k| = |B_k| identically.
std::vector<cplx> modified_profile(const Trajectory& traj, int k);

struct ScatteringSummary {
  double M = 0.0;
  std::vector<cplx> beta;   // limits of the corrected profiles
  std::vector<cplx> alpha;  // limits with the full phase; |alpha_k| = |beta_k|
  double rate_constant = 0.0;
  double rate_slope = 0.0;
  /// True when the deviation is at roundoff (single-mode or zero data) and
  /// the rate fit is meaningless.
  bool exact = false;
};

/// Asymptotic state extraction. Requires tau_end >= 100 and snapshots at
/// tau_end and tau_end/2: beta_k by Richardson extrapolation under the c/tau
/// error model, alpha_k = e^{i(2M - |beta_k|^2) log tau_end} B_k(tau_end) with
/// the modulus snapped to |beta_k|. The rate fit runs over the last decade.
ScatteringSummary extract_asymptotics(const Trajectory& traj);

struct NormReport {
  double s = 0.0;
  std::vector<double> values;  // per snapshot
  double sup_ratio = 0.0;      // max_t ||B(t)|| / ||B(1)||
  double trend_slope = 0.0;    // log-log fit over the last decade
};

NormReport norm_monitor(const Trajectory& traj, double s);

struct RateFit {
  double slope = 0.0;
  double constant = 0.0;
  bool exact = false;  // deviation at roundoff; fit skipped
};

/// Fits sup_k |B_k(tau) - alpha_k e^{-i(2M - |alpha_k|^2) log tau}| ~ C/tau
/// over the last decade of the trajectory.
RateFit blowup_law_check(const Trajectory& traj, const ScatteringSummary& summary);

struct WindowedFourierTable {
  int nu = 0;
  std::vector<double> lambdas;
  std::vector<std::vector<double>> magnitude;  // [k + K][lambda index]
  double max_magnitude = 0.0;
};

/// | int e^{i t lambda} eta(t - nu) dB_k/dt dt | over the window (nu-1, nu+2),
/// from trajectory samples; requires dense snapshots across the window.
WindowedFourierTable windowed_time_fourier(const Trajectory& traj, int nu,
                                           const std::vector<double>& lambda_grid);

/// Indices of snapshots in the last decade [tau_end/10, tau_end]; at least
/// min_points are required.
std::vector<std::size_t> last_decade_indices(const Trajectory& traj,
                                             std::size_t min_points = 8);

}  // namespace nlslab

#endif
