/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Filament bridge: curvature/torsion data -> mode profile, parallel-frame
 * curve reconstruction from u(t,.), anchor time-marching under the filament
 * velocity laws, corner-angle tracking, and the self-similar scaling check.
 *
 *****************************************************************************/

#ifndef NLSLAB_BINORMAL_HPP
#define NLSLAB_BINORMAL_HPP

#include <span>
#include <vector>

#include "nlslab/evolve.hpp"
#include "nlslab/pseudoconformal.hpp"
#include "nlslab/spectral.hpp"
#include "nlslab/util.hpp"

namespace nlslab {

/// Curve data on a uniform grid over [0, 4pi): curvature samples (>= 0) and
/// the periodic torsion perturbation p, torsion(x) = x/2 + p(x).
struct FilamentSpec {
  std::vector<double> kappa;
  std::vector<double> torsion_perturbation;
};

struct GeometryProfile {
  ProfileSpec profile;
  /// Mean of p removed before periodizing the phase (a Galilean shift).
  double galilean_shift = 0.0;
};

/// Fourier data of f(x) = kappa(x) e^{i int_0^x (p - mean p)} truncated to
/// |j| <= radius. With adjust_mean = false the raw p is used and a phase that
/// fails to periodize (int_0^{4pi} p not in 2 pi Z) is rejected.
GeometryProfile profile_from_geometry(const FilamentSpec& spec, int radius,
                                      bool adjust_mean = true);

/// Orthonormal anchor frame: tangent T and complex normal N = n_re + i n_im.
struct FrameAnchor {
  Vec3 chi{0.0, 0.0, 0.0};
  Vec3 T{1.0, 0.0, 0.0};
  Vec3 n_re{0.0, 1.0, 0.0};
  Vec3 n_im{0.0, 0.0, 1.0};
};

/// Sampled curve with tangents and the parallel normal frame.
struct Filament {
  double t = 1.0;
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<Vec3> chi, tangent, n_re, n_im;

  double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
  std::size_t size() const { return chi.size(); }
};

/// Integrates the frame system T' = Re(conj(u) N), N' = -u T, chi' = T in x
/// with classical RK4 on the half-sample grid (u given at x0 + i h_half,
/// i = 0..2m; curve nodes land on even i). Frames are re-orthonormalized by
/// projection each step; drift beyond 1e-6 per unit length aborts.
Filament reconstruct_filament(std::span<const cplx> u_half_grid, double x0, double h_half,
                              const FrameAnchor& anchor, double t);

struct AdvanceParams {
  double anchor_x = 0.0;
  double x_min = -3.0;
  double x_max = 3.0;
  std::size_t half_samples = 4096;  // count of half-grid intervals (even)
  int j_window = 0;                 // ansatz window; 0 means full radius
};

struct FilamentFlow {
  std::vector<Filament> filaments;  // at the requested times, decreasing
  double mixed_partials_residual = 0.0;
  bool flagged = false;  // residual above 1e-3
};

/// Marches the anchor frame down in t under chi_t = Im(conj(u) N),
/// T_t = Im(conj(u_x) N), N_t = i R N - i u_x T with gauge R = -|u|^2, then
/// reconstructs a filament at every requested time. Every 1/t of the fine
/// march grid must be a recorded snapshot; requested times must be among them.
FilamentFlow advance_filament(const Trajectory& traj, const std::vector<double>& times,
                              const FrameAnchor& anchor_at_1, const AdvanceParams& params);

/// Angle between the tangents at x = j - delta and x = j + delta per filament.
std::vector<double> corner_angles(const std::vector<Filament>& filaments, int j, double delta);

/// Max over (t, x) of |chi(t,x) - sqrt(t) chi(1, x/sqrt(t))| after removing
/// the rigid motion fixed by the anchor point, tangent, and curvature
/// direction at x = 0. The first filament must be at t = 1.
double self_similarity_check(const std::vector<Filament>& filaments);

}  // namespace nlslab

#endif
