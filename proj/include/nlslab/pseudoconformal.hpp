/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Bridge between the large-time mode picture and the focusing-time picture:
 * coefficient frames A_j(t) = conj(B_j(1/t)), evaluation of the singular
 * ansatz u(t,x) = sum_j A_j(t) e^{i(x-j)^2/4t} / sqrt(t), and a numerical
 * verification of the pseudo-conformal correspondence.
 *
 *****************************************************************************/

#ifndef NLSLAB_PSEUDOCONFORMAL_HPP
#define NLSLAB_PSEUDOCONFORMAL_HPP

#include <span>
#include <vector>

#include "nlslab/evolve.hpp"
#include "nlslab/util.hpp"

namespace nlslab {

/// Coefficients of the focusing-time ansatz at t in (0, 1].
struct BlowupFrame {
  double t = 1.0;
  double source_tau = 1.0;  // t * source_tau = 1
  int K = 0;
  std::vector<cplx> A;  // A_j(t) = conj(B_j(1/t)), index j + K

  cplx at(int j) const { return A[static_cast<std::size_t>(j + K)]; }
};

/// Reads the snapshot at tau = 1/t (required to be recorded) into a frame.
BlowupFrame frame_from_trajectory(const Trajectory& traj, double t);

struct UField {
  std::vector<cplx> values;
  std::vector<cplx> derivatives;  // d/dx, filled by evaluate_u_dx only
  /// (sum_{|j| > window} |A_j|^2)^{1/2} / sqrt(t): truncation tail estimate.
  double tail_bound = 0.0;
};

/// Truncated ansatz sum over |j| <= j_window at the given x locations.
UField evaluate_u(const BlowupFrame& frame, std::span<const double> x, int j_window);

/// Same, also returning du/dx (each translate contributes i(x-j)/(2t) times itself).
UField evaluate_u_dx(const BlowupFrame& frame, std::span<const double> x, int j_window);

/// Verifies the pseudo-conformal correspondence at tau = 1/t on a y-grid:
/// the transform e^{i y^2 / 4 tau} / sqrt(tau) * conj(u)(1/tau, y/tau) of the
/// ansatz sum must coincide with the half-frequency mode synthesis
/// sum_j B_j(tau) e^{-i tau j^2 / 4} e^{i j y / 2}. Returns the max pointwise
/// deviation normalized by the max modulus of the synthesis side.
double pc_identity_check(const Trajectory& traj, double t, std::span<const double> y);

}  // namespace nlslab

#endif
