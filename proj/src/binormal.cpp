/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/binormal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

constexpr double kFrameDriftLimit = 1e-6;  // per unit length, before projection

struct FrameState {
  Vec3 T, n_re, n_im, chi;
};

FrameState operator+(const FrameState& a, const FrameState& b) {
  return {a.T + b.T, a.n_re + b.n_re, a.n_im + b.n_im, a.chi + b.chi};
}
FrameState operator*(double s, const FrameState& a) {
  return {s * a.T, s * a.n_re, s * a.n_im, s * a.chi};
}

// x-derivative of the frame along the curve at filament function value u.
FrameState frame_x_derivative(const FrameState& y, cplx u) {
  const double a = u.real(), b = u.imag();
  FrameState d;
  d.T = a * y.n_re + b * y.n_im;  // Re(conj(u) N)
  d.n_re = -a * y.T;              // N' = -u T
  d.n_im = -b * y.T;
  d.chi = y.T;
  return d;
}

double orthonormality_defect(const FrameState& y) {
  double defect = 0.0;
  defect = std::max(defect, std::abs(dot(y.T, y.T) - 1.0));
  defect = std::max(defect, std::abs(dot(y.n_re, y.n_re) - 1.0));
  defect = std::max(defect, std::abs(dot(y.n_im, y.n_im) - 1.0));
  defect = std::max(defect, std::abs(dot(y.T, y.n_re)));
  defect = std::max(defect, std::abs(dot(y.T, y.n_im)));
  defect = std::max(defect, std::abs(dot(y.n_re, y.n_im)));
  return defect;
}

void orthonormalize(FrameState& y) {
  y.T = normalized(y.T);
  y.n_re = normalized(y.n_re - dot(y.n_re, y.T) * y.T);
  y.n_im = y.n_im - dot(y.n_im, y.T) * y.T - dot(y.n_im, y.n_re) * y.n_re;
  y.n_im = normalized(y.n_im);
}

}  // namespace

GeometryProfile profile_from_geometry(const FilamentSpec& spec, int radius, bool adjust_mean) {
  const std::size_t n = spec.kappa.size();
  if (n != spec.torsion_perturbation.size())
    throw std::invalid_argument("profile_from_geometry: sample count mismatch");
  if (!is_pow2(n) || n < static_cast<std::size_t>(4 * (2 * radius + 1)))
    throw std::invalid_argument(
        "profile_from_geometry: need a power-of-two grid with >= 4(2K+1) samples");
  for (double k : spec.kappa)
    if (k < 0.0) throw std::invalid_argument("profile_from_geometry: negative curvature");

  GeometryProfile out;
  double mean = 0.0;
  for (double p : spec.torsion_perturbation) mean += p;
  mean /= static_cast<double>(n);
  if (adjust_mean) {
    out.galilean_shift = mean;
  } else {
    // Raw phase must already close up over the period.
    const double total = mean * 4.0 * std::numbers::pi;
    const double wrapped = std::remainder(total, 2.0 * std::numbers::pi);
    if (std::abs(wrapped) > 1e-8)
      throw std::invalid_argument(
          "profile_from_geometry: torsion phase does not periodize; "
          "int_0^{4pi} p must lie in 2 pi Z");
    out.galilean_shift = 0.0;
  }

  // Spectral antiderivative of the mean-free perturbation. Bin m of the DFT
  // carries frequency m/2 on (0, 4pi), so dividing by i m / 2 integrates.
  std::vector<cplx> phat(n);
  for (std::size_t i = 0; i < n; ++i)
    phat[i] = cplx(spec.torsion_perturbation[i] - out.galilean_shift, 0.0);
  fft(phat);
  for (cplx& c : phat) c /= static_cast<double>(n);
  std::vector<cplx> integral(n, cplx(0.0, 0.0));
  const std::int64_t half = static_cast<std::int64_t>(n) / 2;
  for (std::size_t b = 1; b < n; ++b) {
    std::int64_t m = static_cast<std::int64_t>(b);
    if (m > half) m -= static_cast<std::int64_t>(n);
    if (m == half && n % 2 == 0) continue;  // unpaired Nyquist bin
    integral[b] = phat[b] / cplx(0.0, static_cast<double>(m) / 2.0);
  }
  ifft(integral);
  // Fix the additive constant so the phase integral starts at zero.
  const cplx p0 = integral[0];
  std::vector<cplx> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = (integral[i] - p0).real();
    f[i] = spec.kappa[i] * std::polar(1.0, phase);
  }

  // fhat(j) is the coefficient of e^{-i j x / 2}: fhat(j) = (1/n) sum f_i e^{i j x_i / 2}.
  ifft(f);
  out.profile.fhat.resize(static_cast<std::size_t>(2 * radius + 1));
  for (int j = -radius; j <= radius; ++j) {
    const std::size_t bin = static_cast<std::size_t>(
        (j % static_cast<int>(n) + static_cast<int>(n)) % static_cast<int>(n));
    out.profile.fhat[static_cast<std::size_t>(j + radius)] = f[bin] / static_cast<double>(n);
  }
  return out;
}

Filament reconstruct_filament(std::span<const cplx> u_half_grid, double x0, double h_half,
                              const FrameAnchor& anchor, double t) {
  if (u_half_grid.size() < 3 || u_half_grid.size() % 2 == 0)
    throw std::invalid_argument("reconstruct_filament: need an odd sample count >= 3");
  if (h_half == 0.0) throw std::invalid_argument("reconstruct_filament: zero spacing");

  FrameState y{anchor.T, anchor.n_re, anchor.n_im, anchor.chi};
  orthonormalize(y);

  const double h = 2.0 * h_half;
  const std::size_t nodes = (u_half_grid.size() - 1) / 2 + 1;
  Filament fil;
  fil.t = t;
  fil.x0 = x0;
  fil.dx = h;
  fil.chi.reserve(nodes);
  fil.tangent.reserve(nodes);
  fil.n_re.reserve(nodes);
  fil.n_im.reserve(nodes);

  auto record = [&](const FrameState& s) {
    fil.chi.push_back(s.chi);
    fil.tangent.push_back(s.T);
    fil.n_re.push_back(s.n_re);
    fil.n_im.push_back(s.n_im);
  };
  record(y);

  for (std::size_t i = 0; i + 2 < u_half_grid.size(); i += 2) {
    const cplx u0 = u_half_grid[i];
    const cplx um = u_half_grid[i + 1];
    const cplx u1 = u_half_grid[i + 2];
    const FrameState k1 = frame_x_derivative(y, u0);
    const FrameState k2 = frame_x_derivative(y + (0.5 * h) * k1, um);
    const FrameState k3 = frame_x_derivative(y + (0.5 * h) * k2, um);
    const FrameState k4 = frame_x_derivative(y + h * k3, u1);
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (orthonormality_defect(y) > kFrameDriftLimit * std::abs(h))
      throw std::runtime_error(
          "reconstruct_filament: frame drift beyond 1e-6 per unit length; "
          "halve the sample spacing");
    orthonormalize(y);
    record(y);
  }
  return fil;
}

namespace {

// Monotone cubic (Catmull-Rom) interpolation of a sampled signal; the
// abscissae may be non-uniform. Queries must stay inside the sampled range.
class CubicSignal {
 public:
  CubicSignal(std::vector<double> ts, std::vector<cplx> zs)
      : t_(std::move(ts)), z_(std::move(zs)) {
    if (t_.size() != z_.size() || t_.size() < 4)
      throw std::invalid_argument("CubicSignal: need >= 4 samples");
  }

  cplx operator()(double t) const {
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i1 = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin() - 1);
    i1 = std::clamp<std::size_t>(i1, 1, t_.size() - 3);
    const std::size_t i0 = i1 - 1, i2 = i1 + 1, i3 = i1 + 2;
    // Lagrange cubic through the four bracketing samples.
    const double t0 = t_[i0], t1 = t_[i1], t2 = t_[i2], t3 = t_[i3];
    const double l0 = ((t - t1) * (t - t2) * (t - t3)) / ((t0 - t1) * (t0 - t2) * (t0 - t3));
    const double l1 = ((t - t0) * (t - t2) * (t - t3)) / ((t1 - t0) * (t1 - t2) * (t1 - t3));
    const double l2 = ((t - t0) * (t - t1) * (t - t3)) / ((t2 - t0) * (t2 - t1) * (t2 - t3));
    const double l3 = ((t - t0) * (t - t1) * (t - t2)) / ((t3 - t0) * (t3 - t1) * (t3 - t2));
    return l0 * z_[i0] + l1 * z_[i1] + l2 * z_[i2] + l3 * z_[i3];
  }

 private:
  std::vector<double> t_;
  std::vector<cplx> z_;
};

// t-derivative of the anchor frame under the filament velocity laws with
// gauge R = -|u|^2 (exact for single-translate data).
FrameState frame_t_derivative(const FrameState& y, cplx u, cplx ux) {
  const double a = u.real(), b = u.imag();
  const double ax = ux.real(), bx = ux.imag();
  const double R = -(a * a + b * b);
  FrameState d;
  d.chi = a * y.n_im - b * y.n_re;   // Im(conj(u) N)
  d.T = ax * y.n_im - bx * y.n_re;   // Im(conj(u_x) N)
  d.n_re = -R * y.n_im + bx * y.T;   // i R N - i u_x T, real part
  d.n_im = R * y.n_re - ax * y.T;    // ... imaginary part
  return d;
}

}  // namespace

FilamentFlow advance_filament(const Trajectory& traj, const std::vector<double>& times,
                              const FrameAnchor& anchor_at_1, const AdvanceParams& params) {
  if (times.empty()) throw std::invalid_argument("advance_filament: empty time list");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || times[i] > 1.0 + 1e-12)
      throw std::invalid_argument("advance_filament: times must lie in (0, 1]");
    if (i > 0 && times[i] >= times[i - 1])
      throw std::invalid_argument("advance_filament: times must decrease");
  }
  if (std::abs(times.front() - 1.0) > 1e-12)
    throw std::invalid_argument("advance_filament: first time must be 1");
  if (params.half_samples < 8 || params.half_samples % 2 != 0)
    throw std::invalid_argument("advance_filament: half_samples must be even and >= 8");

  // Fine march grid: every recorded snapshot between 1 and 1/min(times).
  const double t_min = times.back();
  std::vector<double> fine;  // descending in t
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = 1.0 / traj.times[i];
    if (t <= 1.0 + 1e-12 && t >= t_min * (1.0 - 1e-12)) fine.push_back(t);
  }
  std::sort(fine.begin(), fine.end(), std::greater<double>());
  if (fine.size() < 4) throw std::invalid_argument("advance_filament: march grid too sparse");

  const int window = params.j_window > 0 ? params.j_window : traj.K;

  // Driver signals u, u_x at the anchor abscissa on the fine grid.
  std::vector<double> ts_asc;
  std::vector<cplx> z_asc, w_asc;
  const double xa[1] = {params.anchor_x};
  for (auto it = fine.rbegin(); it != fine.rend(); ++it) {
    const BlowupFrame frame = frame_from_trajectory(traj, *it);
    const UField u = evaluate_u_dx(frame, xa, window);
    ts_asc.push_back(*it);
    z_asc.push_back(u.values[0]);
    w_asc.push_back(u.derivatives[0]);
  }
  const CubicSignal z_of_t(ts_asc, z_asc);
  const CubicSignal w_of_t(ts_asc, w_asc);

  // Reconstruction grid split at the anchor; x nodes step 2 * h_half.
  const double h_half = (params.x_max - params.x_min) / static_cast<double>(params.half_samples);
  const std::size_t anchor_half_index = static_cast<std::size_t>(
      std::llround((params.anchor_x - params.x_min) / h_half));
  if (anchor_half_index % 2 != 0 || anchor_half_index > params.half_samples ||
      std::abs(params.x_min + static_cast<double>(anchor_half_index) * h_half -
               params.anchor_x) > 1e-9)
    throw std::invalid_argument("advance_filament: anchor must sit on the node grid");

  FilamentFlow flow;
  FrameState y{anchor_at_1.T, anchor_at_1.n_re, anchor_at_1.n_im, anchor_at_1.chi};
  orthonormalize(y);

  std::vector<Vec3> anchor_T_history(fine.size());
  std::vector<std::size_t> output_fine_index;

  auto build_filament = [&](double t, const FrameState& anchor_state) {
    const BlowupFrame frame = frame_from_trajectory(traj, t);
    std::vector<double> xs(params.half_samples + 1);
    for (std::size_t i = 0; i <= params.half_samples; ++i)
      xs[i] = params.x_min + static_cast<double>(i) * h_half;
    const UField u = evaluate_u(frame, xs, window);

    FrameAnchor a;
    a.chi = anchor_state.chi;
    a.T = anchor_state.T;
    a.n_re = anchor_state.n_re;
    a.n_im = anchor_state.n_im;

    // Rightward sweep from the anchor, then leftward with reversed samples.
    std::vector<cplx> right(u.values.begin() +
                                static_cast<std::ptrdiff_t>(anchor_half_index),
                            u.values.end());
    std::vector<cplx> left(u.values.rend() -
                               static_cast<std::ptrdiff_t>(anchor_half_index) - 1,
                           u.values.rend());
    const Filament fr = reconstruct_filament(right, params.anchor_x, h_half, a, t);
    const Filament fl = reconstruct_filament(left, params.anchor_x, -h_half, a, t);

    Filament fil;
    fil.t = t;
    fil.x0 = params.x_min;
    fil.dx = 2.0 * h_half;
    const std::size_t left_nodes = fl.size();
    for (std::size_t i = left_nodes; i-- > 1;) {
      fil.chi.push_back(fl.chi[i]);
      fil.tangent.push_back(fl.tangent[i]);
      fil.n_re.push_back(fl.n_re[i]);
      fil.n_im.push_back(fl.n_im[i]);
    }
    for (std::size_t i = 0; i < fr.size(); ++i) {
      fil.chi.push_back(fr.chi[i]);
      fil.tangent.push_back(fr.tangent[i]);
      fil.n_re.push_back(fr.n_re[i]);
      fil.n_im.push_back(fr.n_im[i]);
    }
    return fil;
  };

  std::size_t next_output = 0;
  for (std::size_t m = 0; m < fine.size(); ++m) {
    const double t = fine[m];
    anchor_T_history[m] = y.T;
    if (next_output < times.size() &&
        std::abs(t - times[next_output]) <= 1e-9 * std::max(1.0, t)) {
      flow.filaments.push_back(build_filament(t, y));
      output_fine_index.push_back(m);
      ++next_output;
    }
    if (m + 1 == fine.size()) break;
    // One RK4 step down to the next fine time.
    const double tb = fine[m + 1];
    const double h = tb - t;  // negative
    const double tm = t + 0.5 * h;
    const FrameState k1 = frame_t_derivative(y, z_of_t(t), w_of_t(t));
    const FrameState k2 = frame_t_derivative(y + (0.5 * h) * k1, z_of_t(tm), w_of_t(tm));
    const FrameState k3 = frame_t_derivative(y + (0.5 * h) * k2, z_of_t(tm), w_of_t(tm));
    const FrameState k4 = frame_t_derivative(y + h * k3, z_of_t(tb), w_of_t(tb));
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    orthonormalize(y);
  }
  if (next_output != times.size())
    throw std::invalid_argument("advance_filament: a requested time is not on the march grid");

  // Mixed partials: d/dt of the marched tangent against d/dx of the filament
  // velocity field, both at the anchor, by centered differences.
  double residual = 0.0;
  for (std::size_t oi = 0; oi < output_fine_index.size(); ++oi) {
    const std::size_t m = output_fine_index[oi];
    if (m == 0 || m + 1 >= fine.size()) continue;
    const Vec3 dTdt = (1.0 / (fine[m + 1] - fine[m - 1])) *
                      (anchor_T_history[m + 1] - anchor_T_history[m - 1]);
    const Filament& fil = flow.filaments[oi];
    const std::size_t node = anchor_half_index / 2;
    if (node == 0 || node + 1 >= fil.size()) continue;
    const BlowupFrame frame = frame_from_trajectory(traj, fil.t);
    const double xs[2] = {fil.x(node - 1), fil.x(node + 1)};
    const UField u = evaluate_u(frame, xs, window);
    auto velocity = [&](std::size_t nd, cplx uv) {
      return uv.real() * fil.n_im[nd] - uv.imag() * fil.n_re[nd];
    };
    const Vec3 dVdx = (1.0 / (2.0 * fil.dx)) *
                      (velocity(node + 1, u.values[1]) - velocity(node - 1, u.values[0]));
    residual = std::max(residual, norm(dTdt - dVdx));
  }
  flow.mixed_partials_residual = residual;
  flow.flagged = residual > 1e-3;
  return flow;
}

std::vector<double> corner_angles(const std::vector<Filament>& filaments, int j, double delta) {
  if (filaments.empty()) throw std::invalid_argument("corner_angles: no filaments");
  std::vector<double> out;
  out.reserve(filaments.size());
  for (const Filament& fil : filaments) {
    if (delta < 5.0 * fil.dx)
      throw std::invalid_argument("corner_angles: delta below 5 grid spacings");
    const double xl = static_cast<double>(j) - delta;
    const double xr = static_cast<double>(j) + delta;
    const auto node_of = [&](double x) {
      const double s = (x - fil.x0) / fil.dx;
      const auto n = static_cast<std::ptrdiff_t>(std::llround(s));
      if (n < 0 || n >= static_cast<std::ptrdiff_t>(fil.size()))
        throw std::invalid_argument("corner_angles: probe outside the filament");
      return static_cast<std::size_t>(n);
    };
    out.push_back(angle_between(fil.tangent[node_of(xl)], fil.tangent[node_of(xr)]));
  }
  return out;
}

namespace {

Vec3 cubic_point(const std::vector<Vec3>& p, double s) {
  // s in node units; clamped Lagrange cubic through the bracketing nodes.
  std::ptrdiff_t i1 = static_cast<std::ptrdiff_t>(std::floor(s));
  i1 = std::clamp<std::ptrdiff_t>(i1, 1, static_cast<std::ptrdiff_t>(p.size()) - 3);
  const double u = s - static_cast<double>(i1);
  const Vec3& p0 = p[static_cast<std::size_t>(i1 - 1)];
  const Vec3& p1 = p[static_cast<std::size_t>(i1)];
  const Vec3& p2 = p[static_cast<std::size_t>(i1 + 1)];
  const Vec3& p3 = p[static_cast<std::size_t>(i1 + 2)];
  const double l0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
  const double l1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
  const double l2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
  const double l3 = (u + 1.0) * u * (u - 1.0) / 6.0;
  return l0 * p0 + l1 * p1 + l2 * p2 + l3 * p3;
}

struct Basis {
  Vec3 e1, e2, e3;
};

Vec3 apply(const Basis& from, const Basis& to, const Vec3& v) {
  // Rotation taking the 'from' triad onto the 'to' triad.
  const double c1 = dot(from.e1, v), c2 = dot(from.e2, v), c3 = dot(from.e3, v);
  return c1 * to.e1 + c2 * to.e2 + c3 * to.e3;
}

Basis anchor_basis(const Filament& fil, std::size_t node) {
  Basis b;
  b.e1 = fil.tangent[node];
  Vec3 d = (node > 0 && node + 1 < fil.size())
               ? fil.tangent[node + 1] - fil.tangent[node - 1]
               : Vec3{0.0, 0.0, 0.0};
  d = d - dot(d, b.e1) * b.e1;
  if (norm(d) < 1e-12) d = fil.n_re[node];  // straight line: any normal works
  b.e2 = normalized(d - dot(d, b.e1) * b.e1);
  b.e3 = cross(b.e1, b.e2);
  return b;
}

}  // namespace

double self_similarity_check(const std::vector<Filament>& filaments) {
  if (filaments.empty()) throw std::invalid_argument("self_similarity_check: no filaments");
  const Filament& base = filaments.front();
  if (std::abs(base.t - 1.0) > 1e-9)
    throw std::invalid_argument("self_similarity_check: first filament must be at t = 1");

  const auto node_at_zero = [](const Filament& fil) {
    const double s = (0.0 - fil.x0) / fil.dx;
    const auto n = static_cast<std::ptrdiff_t>(std::llround(s));
    if (n < 0 || n >= static_cast<std::ptrdiff_t>(fil.size()) ||
        std::abs(fil.x(static_cast<std::size_t>(n))) > 1e-9)
      throw std::invalid_argument("self_similarity_check: x = 0 must be a node");
    return static_cast<std::size_t>(n);
  };

  const std::size_t b0 = node_at_zero(base);
  const Basis base_basis = anchor_basis(base, b0);

  double residual = 0.0;
  for (std::size_t fi = 1; fi < filaments.size(); ++fi) {
    const Filament& fil = filaments[fi];
    const double rt = std::sqrt(fil.t);
    const std::size_t a0 = node_at_zero(fil);
    const Basis fil_basis = anchor_basis(fil, a0);
    const Vec3 center = fil.chi[a0];
    const Vec3 target_center = rt * base.chi[b0];
    for (std::size_t i = 0; i < fil.size(); ++i) {
      const double x = fil.x(i);
      const double xi = x / rt;  // scaled abscissa on the base curve
      const double s = (xi - base.x0) / base.dx;
      if (s < 1.0 || s > static_cast<double>(base.size()) - 3.0) continue;
      const Vec3 aligned =
          target_center + apply(fil_basis, base_basis, fil.chi[i] - center);
      const Vec3 model = rt * cubic_point(base.chi, s);
      residual = std::max(residual, norm(aligned - model));
    }
  }
  return residual;
}

}  // namespace nlslab
