/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/spectral.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "nlslab/fft.hpp"

namespace nlslab {

ModeVector::ModeVector(int radius, double time)
    : K(radius), tau(time), coeffs(static_cast<std::size_t>(2 * radius + 1), cplx(0.0, 0.0)) {
  if (radius < 0) throw std::invalid_argument("ModeVector: negative radius");
}

bool ModeVector::finite() const {
  for (const cplx& c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

void ModeVector::require_valid() const {
  if (coeffs.size() != static_cast<std::size_t>(2 * K + 1))
    throw std::invalid_argument("ModeVector: coefficient count does not match radius");
  if (tau < 1.0) throw std::invalid_argument("ModeVector: tau below 1");
  if (!finite()) throw std::invalid_argument("ModeVector: non-finite coefficient");
}

ModeVector modes_from_profile(const ProfileSpec& spec) {
  const int K = spec.radius();
  if (spec.fhat.size() != static_cast<std::size_t>(2 * K + 1))
    throw std::invalid_argument("modes_from_profile: even-length coefficient array");
  ModeVector state(K, 1.0);
  for (int j = -K; j <= K; ++j) {
    const double phase = -0.25 * static_cast<double>(j) * static_cast<double>(j);
    state.at(j) = std::conj(spec.at(j) * std::polar(1.0, phase));
  }
  state.require_valid();
  return state;
}

std::vector<cplx> rhs_reference(const ModeVector& state) {
  state.require_valid();
  const int K = state.K;
  const double inv_tau = 1.0 / state.tau;
  std::vector<cplx> out(state.size(), cplx(0.0, 0.0));
  for (int k = -K; k <= K; ++k) {
    cplx acc(0.0, 0.0);
    for (int j1 = -K; j1 <= K; ++j1) {
      for (int j2 = -K; j2 <= K; ++j2) {
        const int j3 = k - j1 + j2;
        if (j3 < -K || j3 > K) continue;
        const double w = static_cast<double>(k) * k - static_cast<double>(j1) * j1 +
                         static_cast<double>(j2) * j2 - static_cast<double>(j3) * j3;
        acc += std::polar(1.0, -state.tau * w) * state.at(j1) * std::conj(state.at(j2)) *
               state.at(j3);
      }
    }
    out[static_cast<std::size_t>(k + K)] = cplx(0.0, -inv_tau) * acc;
  }
  return out;
}

RhsWorkspace::RhsWorkspace(int radius)
    : radius_(radius),
      grid_ops_(radius, next_pow2(static_cast<std::size_t>(3 * (2 * radius + 1)))),
      modes_(static_cast<std::size_t>(2 * radius + 1)) {}

void RhsWorkspace::eval(const ModeVector& state, std::vector<cplx>& out) {
  if (state.K != radius_) throw std::invalid_argument("RhsWorkspace: radius mismatch");
  const int K = radius_;
  const double tau = state.tau;
  // Interaction picture: c_j = B_j e^{i tau j^2}; the k-th coefficient of
  // |V|^2 V with V = sum c_j e^{ijx} is the inner sum times e^{i tau k^2}.
  for (int j = -K; j <= K; ++j)
    modes_[static_cast<std::size_t>(j + K)] =
        state.at(j) * std::polar(1.0, tau * static_cast<double>(j) * j);
  grid_ops_.synthesize(modes_, grid_);
  for (cplx& v : grid_) v *= std::norm(v);
  grid_ops_.analyze(grid_, modes_);
  out.resize(state.size());
  const double inv_tau = 1.0 / tau;
  for (int k = -K; k <= K; ++k)
    out[static_cast<std::size_t>(k + K)] =
        cplx(0.0, -inv_tau) * modes_[static_cast<std::size_t>(k + K)] *
        std::polar(1.0, -tau * static_cast<double>(k) * k);
}

std::vector<cplx> rhs_fast(const ModeVector& state) {
  state.require_valid();
  RhsWorkspace ws(state.K);
  std::vector<cplx> out;
  ws.eval(state, out);
  return out;
}

RhsSplit resonant_split_rhs(const ModeVector& state) {
  state.require_valid();
  RhsSplit split;
  split.nonresonant = rhs_reference(state);
  split.resonant.resize(state.size());
  double mass = 0.0;
  for (const cplx& c : state.coeffs) mass += std::norm(c);
  const double inv_tau = 1.0 / state.tau;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const cplx res = cplx(0.0, -inv_tau) * (2.0 * mass - std::norm(state.coeffs[i])) *
                     state.coeffs[i];
    split.resonant[i] = res;
    split.nonresonant[i] -= res;
  }
  return split;
}

GridFunction to_grid(const ModeVector& state, std::size_t n) {
  state.require_valid();
  if (!is_pow2(n) || n < static_cast<std::size_t>(2 * (2 * state.K + 1)))
    throw std::invalid_argument("to_grid: need a power of two with n >= 2(2K+1)");
  std::vector<cplx> modes(state.size());
  for (int j = -state.K; j <= state.K; ++j)
    modes[static_cast<std::size_t>(j + state.K)] =
        state.at(j) * std::polar(1.0, state.tau * static_cast<double>(j) * j);
  GridFunction g;
  g.tau = state.tau;
  SpectralGrid grid(state.K, n);
  grid.synthesize(modes, g.samples);
  return g;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xFF;
  os.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xFF;
  os.write(reinterpret_cast<const char*>(b.data()), 8);
}

void put_f64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(os, v);
}

std::uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  is.read(reinterpret_cast<char*>(b.data()), 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

double get_f64(std::istream& is) {
  std::uint64_t v = get_u64(is);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

void write_snapshot(std::ostream& os, const ModeVector& state) {
  state.require_valid();
  os.write("NLSB", 4);
  put_u32(os, 1u);
  put_u64(os, static_cast<std::uint64_t>(static_cast<std::int64_t>(state.K)));
  put_f64(os, state.tau);
  for (const cplx& c : state.coeffs) {
    put_f64(os, c.real());
    put_f64(os, c.imag());
  }
  if (!os) throw std::runtime_error("write_snapshot: stream failure");
}

ModeVector read_snapshot(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NLSB", 4) != 0)
    throw std::runtime_error("read_snapshot: bad magic");
  const std::uint32_t version = get_u32(is);
  if (version != 1u) throw std::runtime_error("read_snapshot: unsupported version");
  const auto K = static_cast<std::int64_t>(get_u64(is));
  if (K < 0 || K > (1 << 20)) throw std::runtime_error("read_snapshot: implausible radius");
  ModeVector state(static_cast<int>(K), 1.0);
  state.tau = get_f64(is);
  for (cplx& c : state.coeffs) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    c = cplx(re, im);
  }
  if (!is) throw std::runtime_error("read_snapshot: truncated stream");
  state.require_valid();
  return state;
}

}  // namespace nlslab
