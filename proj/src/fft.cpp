/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/fft.hpp"

#include <map>
#include <numbers>
#include <stdexcept>

namespace nlslab {

namespace {

// Twiddle tables per size, built once. Table for size N holds e^{-2pi i j/N}
// for j < N/2; the inverse pass conjugates on the fly.
const std::vector<cplx>& twiddles(std::size_t n) {
  static thread_local std::map<std::size_t, std::vector<cplx>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> tw(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    double phi = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    tw[j] = cplx(std::cos(phi), std::sin(phi));
  }
  return cache.emplace(n, std::move(tw)).first->second;
}

void transform(std::span<cplx> a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const auto& tw = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx w = tw[j * stride];
        if (inverse) w = std::conj(w);
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

void fft(std::span<cplx> data) { transform(data, false); }
void ifft(std::span<cplx> data) { transform(data, true); }

SpectralGrid::SpectralGrid(int radius, std::size_t n) : radius_(radius), n_(n) {
  if (radius < 0) throw std::invalid_argument("SpectralGrid: negative radius");
  if (!is_pow2(n) || n < static_cast<std::size_t>(2 * radius + 2))
    throw std::invalid_argument("SpectralGrid: size must be a power of two above 2K+1");
}

void SpectralGrid::synthesize(std::span<const cplx> coeffs, std::vector<cplx>& grid) const {
  if (coeffs.size() != static_cast<std::size_t>(2 * radius_ + 1))
    throw std::invalid_argument("SpectralGrid: coefficient count mismatch");
  grid.assign(n_, cplx(0.0, 0.0));
  for (int k = -radius_; k <= radius_; ++k) {
    std::size_t bin = static_cast<std::size_t>((k % static_cast<int>(n_) + static_cast<int>(n_)) %
                                               static_cast<int>(n_));
    grid[bin] = coeffs[static_cast<std::size_t>(k + radius_)];
  }
  ifft(grid);
}

void SpectralGrid::analyze(const std::vector<cplx>& grid, std::span<cplx> coeffs) const {
  if (grid.size() != n_) throw std::invalid_argument("SpectralGrid: grid size mismatch");
  if (coeffs.size() != static_cast<std::size_t>(2 * radius_ + 1))
    throw std::invalid_argument("SpectralGrid: coefficient count mismatch");
  work_ = grid;
  fft(work_);
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (int k = -radius_; k <= radius_; ++k) {
    std::size_t bin = static_cast<std::size_t>((k % static_cast<int>(n_) + static_cast<int>(n_)) %
                                               static_cast<int>(n_));
    coeffs[static_cast<std::size_t>(k + radius_)] = work_[bin] * inv_n;
  }
}

}  // namespace nlslab
