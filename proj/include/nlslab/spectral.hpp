/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Simulation state and the nonlinear right-hand side of the mode system
 *
 *   i dB_k/dtau = (1/tau) sum_{k-j1+j2-j3=0} e^{-i tau omega} B_{j1} conj(B_{j2}) B_{j3},
 *   omega = k^2 - j1^2 + j2^2 - j3^2,
 *
 * Galerkin-truncated to |k| <= K, with both a reference triple-sum evaluation
 * and a dealiased FFT fast path, plus the resonant/nonresonant split.
 *
 *****************************************************************************/

#ifndef NLSLAB_SPECTRAL_HPP
#define NLSLAB_SPECTRAL_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nlslab/fft.hpp"
#include "nlslab/util.hpp"

namespace nlslab {

/// Truncated coefficient vector B_k, |k| <= K, at time tau >= 1.
struct ModeVector {
  int K = 0;
  double tau = 1.0;
  std::vector<cplx> coeffs;  // index k + K, k in [-K, K]

  ModeVector() = default;
  ModeVector(int radius, double time);

  cplx& at(int k) { return coeffs[static_cast<std::size_t>(k + K)]; }
  const cplx& at(int k) const { return coeffs[static_cast<std::size_t>(k + K)]; }
  std::size_t size() const { return coeffs.size(); }

  bool finite() const;
  void require_valid() const;  // throws on NaN/Inf or tau < 1
};

/// Equispaced samples of v(tau, x) = sum_j B_j e^{i tau j^2} e^{i j x} on [0, 2pi).
struct GridFunction {
  double tau = 1.0;
  std::vector<cplx> samples;
};

/// Fourier data of the 4pi-periodic profile f. fhat[j+K] is the coefficient
/// of e^{-i j x / 2} under the 1/(4pi) normalization, so that
/// f(x) = sum_j fhat(j) e^{-i j x / 2}.
struct ProfileSpec {
  std::vector<cplx> fhat;  // index j + K
  double sobolev_s = 0.0;

  int radius() const { return (static_cast<int>(fhat.size()) - 1) / 2; }
  cplx at(int j) const { return fhat[static_cast<std::size_t>(j + radius())]; }
};

/// Initial mode vector at tau = 1: B_j(1) = conj(fhat(j) e^{-i j^2 / 4}).
ModeVector modes_from_profile(const ProfileSpec& spec);

/// dB/dtau by the exact triple sum over the truncated constraint set. This is
/// the O(K^3) reference path.
std::vector<cplx> rhs_reference(const ModeVector& state);

/// dB/dtau via the dealiased interaction-picture FFT path; agrees with
/// rhs_reference to roundoff. O(K log K).
std::vector<cplx> rhs_fast(const ModeVector& state);

struct RhsSplit {
  std::vector<cplx> nonresonant;
  std::vector<cplx> resonant;
};

/// Splits dB/dtau into the oscillatory nonresonant sum and the exactly
/// resonant part -i (1/tau) (2M - |B_k|^2) B_k, M = sum |B_j|^2. The parts
/// recombine to rhs_reference.
RhsSplit resonant_split_rhs(const ModeVector& state);

/// Samples of v(tau, .) on n equispaced points; n must be a power of two with
/// n >= 2(2K+1). Satisfies the Parseval identity (1/n) sum |v|^2 = sum |B_k|^2.
GridFunction to_grid(const ModeVector& state, std::size_t n);

/// Reusable buffers for repeated fast RHS evaluations at fixed K.
class RhsWorkspace {
 public:
  explicit RhsWorkspace(int radius);

  /// Pointwise cubic interaction on the padded grid; out may alias nothing.
  void eval(const ModeVector& state, std::vector<cplx>& out);

  std::size_t padded_size() const { return grid_ops_.size(); }

 private:
  int radius_;
  SpectralGrid grid_ops_;
  std::vector<cplx> modes_;
  std::vector<cplx> grid_;
};

/// Binary snapshot format: magic "NLSB", u32 version (little endian), i64 K,
/// f64 tau, then 2K+1 coefficient (re, im) f64 pairs in ascending k.
void write_snapshot(std::ostream& os, const ModeVector& state);
ModeVector read_snapshot(std::istream& is);

}  // namespace nlslab

#endif
