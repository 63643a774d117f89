/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Time integration of the mode system on [1, tau_end] with dense snapshot
 * recording and the running per-mode quadratures int_1^tau |B_k|^2 dsigma/sigma.
 *
 *****************************************************************************/

#ifndef NLSLAB_EVOLVE_HPP
#define NLSLAB_EVOLVE_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/spectral.hpp"
#include "nlslab/util.hpp"

namespace nlslab {

enum class Method { strang_splitting, adaptive_rk };

struct SimConfig {
  int K = 8;
  double tau_end = 10.0;
  /// Strang: maximum step in log tau. Adaptive: initial step in tau.
  double dt_initial = 1e-3;
  /// Relative local error target for the adaptive integrator.
  double tolerance = 1e-10;
  Method method = Method::strang_splitting;
  /// Snapshots on a geometric grid (tau = 10^{n/ppd}) ...
  int snapshots_per_decade = 32;
  /// ... plus these explicit times, all deduplicated and sorted.
  std::vector<double> extra_snapshot_times;
  bool determinism = true;

  void validate() const;
};

/// Raised when the integration produces non-finite values or the step size
/// underflows; carries the time where it happened.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, double tau_at)
      : std::runtime_error(what), tau(tau_at) {}
  double tau;
};

struct Trajectory {
  SimConfig config;
  int K = 0;
  std::vector<double> times;                     // strictly increasing, starts at 1
  std::vector<std::vector<cplx>> states;         // coefficients per snapshot
  std::vector<std::vector<double>> quadrature;   // int_1^tau |B_k|^2 dsigma/sigma

  std::size_t size() const { return times.size(); }
  ModeVector state(std::size_t i) const;
  /// Index of the snapshot at tau within relative tolerance, if recorded.
  std::optional<std::size_t> index_of_time(double tau, double rtol = 1e-9) const;
  /// Sub-trajectory keeping every stride-th snapshot plus the last one.
  Trajectory thinned(std::size_t stride) const;
};

/// One Strang step of the mode system, exposed for step-level tests. The
/// linear phases are applied in the midpoint interaction frame and the
/// nonlinear factor carries the exact log(tau2/tau1) angle, so single-mode
/// data is propagated exactly. A second-order cross-band correction keeps the
/// step consistent with the Galerkin-truncated flow; see the implementation.
/// Stepping backward (tau_next < tau) is allowed.
class StrangIntegrator {
 public:
  explicit StrangIntegrator(int radius);

  /// Advances state to tau_next. When target_mass is set, rescales the result
  /// onto the mass shell (the exact flow conserves it; the Galerkin projection
  /// inside the step sheds O(dtheta^2) per step otherwise).
  void step(ModeVector& state, double tau_next,
            std::optional<double> target_mass = std::nullopt);

 private:
  int radius_;
  std::size_t pad_;
  std::vector<cplx> modes_;
  std::vector<cplx> va_, wa_, qa_, ua_;
};

/// Integrates from initial (tau must be 1) to config.tau_end, recording
/// snapshots and quadratures on the configured grid.
Trajectory integrate(const ModeVector& initial, const SimConfig& config);

/// Max over snapshots of |mass(tau) - mass(1)|.
double mass_drift(const Trajectory& traj);

/// CSV export, one row per (snapshot, mode): tau,k,re_B,im_B,quadrature_k.
/// header_comment lines are emitted first, prefixed with '#'.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& header_comment = {});

}  // namespace nlslab

#endif
