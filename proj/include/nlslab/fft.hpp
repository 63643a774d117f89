/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Power-of-two complex FFT, kept in-tree so runs are bit-reproducible.
 *
 *****************************************************************************/

#ifndef NLSLAB_FFT_HPP
#define NLSLAB_FFT_HPP

#include <span>
#include <vector>

#include "nlslab/util.hpp"

namespace nlslab {

/// In-place forward transform, unnormalized: X_k = sum_n x_n e^{-2pi i k n / N}.
/// N must be a power of two.
void fft(std::span<cplx> data);

/// In-place inverse transform, unnormalized: x_n = sum_k X_k e^{+2pi i k n / N}.
/// Dividing by N after a round trip recovers the input.
void ifft(std::span<cplx> data);

/// Scratch buffers plus mode placement for band-limited grid work.
/// Modes k in [-K, K] live in FFT bin (k mod N).
class SpectralGrid {
 public:
  SpectralGrid(int radius, std::size_t n);

  int radius() const { return radius_; }
  std::size_t size() const { return n_; }

  /// Grid samples of sum_k coeff[k+K] e^{ikx} at x_n = 2 pi n / N.
  void synthesize(std::span<const cplx> coeffs, std::vector<cplx>& grid) const;

  /// Inverse of synthesize for band-limited data; extracts bins |k| <= K and
  /// divides by N (Galerkin projection of whatever lives on the grid).
  void analyze(const std::vector<cplx>& grid, std::span<cplx> coeffs) const;

 private:
  int radius_;
  std::size_t n_;
  mutable std::vector<cplx> work_;
};

}  // namespace nlslab

#endif
