#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlslab/scattering.hpp"
#include "nlslab/scenario.hpp"

using namespace nlslab;

namespace {

Trajectory single_mode_run(cplx alpha, double tau_end, int K = 2,
                           std::vector<double> extras = {}) {
  SimConfig cfg;
  cfg.K = K;
  cfg.tau_end = tau_end;
  cfg.dt_initial = 2e-3;
  cfg.extra_snapshot_times = std::move(extras);
  ModeVector init(K, 1.0);
  init.at(0) = alpha;
  return integrate(init, cfg);
}

}  // namespace

TEST_CASE("mass") {
  ModeVector s(1, 1.0);
  s.at(-1) = cplx(1.0, 0.0);
  s.at(0) = cplx(0.0, 1.0);
  s.at(1) = cplx(-1.0, 0.0);
  CHECK(mass(s) == doctest::Approx(3.0));
  CHECK(mass(ModeVector(3, 1.0)) == 0.0);
  ModeVector single(2, 1.0);
  single.at(0) = cplx(0.3, -0.4);
  CHECK(mass(single) == doctest::Approx(0.25));
}

TEST_CASE("weighted norm") {
  ModeVector s(2, 1.0);
  s.at(0) = cplx(0.0, -0.8);
  CHECK(weighted_norm(s, 0.0) == doctest::Approx(0.8));
  CHECK(weighted_norm(s, 2.3) == doctest::Approx(0.8));  // <0> = 1

  ModeVector t(2, 1.0);
  t.at(1) = cplx(1.0, 0.0);
  CHECK(weighted_norm(t, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(weighted_norm(ModeVector(4, 1.0), 0.7) == 0.0);
  CHECK_THROWS(weighted_norm(t, -0.5));
}

TEST_CASE("energy") {
  SUBCASE("zero state") { CHECK(energy(ModeVector(3, 1.0)) == 0.0); }
  SUBCASE("constant mode: pure quartic term, E = -1/4 at tau = 1") {
    ModeVector s(2, 1.0);
    s.at(0) = cplx(1.0, 0.0);
    CHECK(energy(s) == doctest::Approx(-0.25).epsilon(1e-13));
  }
  SUBCASE("oscillating mode adds the gradient term: E = 1/2 - 1/4") {
    ModeVector s(2, 1.0);
    s.at(1) = cplx(1.0, 0.0);
    CHECK(energy(s) == doctest::Approx(0.25).epsilon(1e-13));
  }
  SUBCASE("spectral gradient matches grid finite differences") {
    ModeVector s(4, 1.3);
    s.at(1) = cplx(0.6, 0.1);
    s.at(-2) = cplx(0.0, 0.4);
    double grad = 0.0;
    for (int k = -4; k <= 4; ++k) grad += static_cast<double>(k) * k * std::norm(s.at(k));
    const std::size_t n = 4096;
    const GridFunction g = to_grid(s, n);
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
    double fd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx d = (g.samples[(i + 1) % n] - g.samples[(i + n - 1) % n]) / (2.0 * h);
      fd += std::norm(d);
    }
    fd /= static_cast<double>(n);
    CHECK(fd == doctest::Approx(grad).epsilon(1e-5));
  }
}

TEST_CASE("energy law residual") {
  SUBCASE("zero trajectory") {
    SimConfig cfg;
    cfg.K = 2;
    cfg.tau_end = 4.0;
    const Trajectory traj = integrate(ModeVector(2, 1.0), cfg);
    CHECK(energy_law_residual(traj) == 0.0);
  }
  SUBCASE("single mode: E(tau) = -|alpha|^4 / (4 tau), residual at quadrature level") {
    const Trajectory traj = single_mode_run(cplx(0.7, 0.0), 4.0);
    const double e1 = energy(traj.state(0));
    CHECK(e1 == doctest::Approx(-std::pow(0.7, 4) / 4.0).epsilon(1e-12));
    CHECK(energy_law_residual(traj) < 5e-4);
  }
  SUBCASE("needs at least three snapshots") {
    Trajectory traj;
    traj.K = 1;
    CHECK_THROWS(energy_law_residual(traj));
  }
}

TEST_CASE("modified profile") {
  SUBCASE("single mode collapses to the constant alpha") {
    const cplx alpha(0.4, -0.3);
    const Trajectory traj = single_mode_run(alpha, 50.0);
    for (const cplx& v : modified_profile(traj, 0))
      CHECK(std::abs(v - alpha) < 1e-10);
  }
  SUBCASE("zero mode gives the zero series") {
    const Trajectory traj = single_mode_run(cplx(0.4, 0.0), 10.0);
    for (const cplx& v : modified_profile(traj, 1)) CHECK(std::abs(v) == 0.0);
  }
  SUBCASE("|Btilde| = |B| snapshot-wise") {
    const ProfileSpec p = random_profile(3, 8, 0.6);
    SimConfig cfg;
    cfg.K = 8;
    cfg.tau_end = 20.0;
    cfg.dt_initial = 1e-3;
    const Trajectory traj = integrate(modes_from_profile(p), cfg);
    for (int k = -8; k <= 8; ++k) {
      const auto series = modified_profile(traj, k);
      for (std::size_t i = 0; i < series.size(); ++i)
        CHECK(std::abs(series[i]) ==
              doctest::Approx(std::abs(traj.states[i][static_cast<std::size_t>(k + 8)]))
                  .epsilon(1e-14));
    }
  }
  SUBCASE("mode outside the radius is rejected") {
    const Trajectory traj = single_mode_run(cplx(0.4, 0.0), 10.0);
    CHECK_THROWS(modified_profile(traj, 5));
  }
}

TEST_CASE("extract_asymptotics") {
  SUBCASE("single mode: beta = alpha = initial amplitude, exact flag set") {
    const cplx alpha(0.5, 0.2);
    const Trajectory traj = single_mode_run(alpha, 200.0);
    const ScatteringSummary sum = extract_asymptotics(traj);
    CHECK(sum.M == doctest::Approx(std::norm(alpha)));
    CHECK(std::abs(sum.beta[2] - alpha) < 1e-9);
    CHECK(std::abs(sum.alpha[2] - alpha) < 1e-9);
    CHECK(sum.exact);
  }
  SUBCASE("zero data: all-zero summary") {
    SimConfig cfg;
    cfg.K = 2;
    cfg.tau_end = 150.0;
    const Trajectory traj = integrate(ModeVector(2, 1.0), cfg);
    const ScatteringSummary sum = extract_asymptotics(traj);
    CHECK(sum.M == 0.0);
    for (const cplx& b : sum.beta) CHECK(std::abs(b) == 0.0);
    CHECK(sum.exact);
  }
  SUBCASE("short horizons are rejected") {
    const Trajectory traj = single_mode_run(cplx(0.5, 0.0), 50.0);
    CHECK_THROWS(extract_asymptotics(traj));
  }
  SUBCASE("|alpha_k| = |beta_k| on generic data") {
    const ProfileSpec p = random_profile(17, 8, 0.4);
    SimConfig cfg;
    cfg.K = 8;
    cfg.tau_end = 150.0;
    cfg.dt_initial = 1e-3;
    const Trajectory traj = integrate(modes_from_profile(p), cfg);
    const ScatteringSummary sum = extract_asymptotics(traj);
    for (std::size_t i = 0; i < sum.beta.size(); ++i)
      CHECK(std::abs(sum.alpha[i]) == doctest::Approx(std::abs(sum.beta[i])).epsilon(1e-12));
    CHECK_FALSE(sum.exact);
  }
}

TEST_CASE("Richardson baseline consistency") {
  // Halving the extrapolation baseline moves beta by O(1/tau_end).
  const ProfileSpec p = random_profile(23, 6, 0.5);
  SimConfig cfg;
  cfg.K = 6;
  cfg.tau_end = 400.0;
  cfg.dt_initial = 5e-4;
  cfg.snapshots_per_decade = 48;
  const Trajectory traj = integrate(modes_from_profile(p), cfg);
  const ScatteringSummary full = extract_asymptotics(traj);

  // Rebuild the trajectory truncated at tau_end / 2 and re-extract.
  Trajectory half;
  half.config = traj.config;
  half.K = traj.K;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times[i] > cfg.tau_end / 2.0 * (1.0 + 1e-12)) break;
    half.times.push_back(traj.times[i]);
    half.states.push_back(traj.states[i]);
    half.quadrature.push_back(traj.quadrature[i]);
  }
  const ScatteringSummary halved = extract_asymptotics(half);
  double shift = 0.0;
  for (std::size_t i = 0; i < full.beta.size(); ++i)
    shift = std::max(shift, std::abs(full.beta[i] - halved.beta[i]));
  CHECK(shift < 10.0 * full.rate_constant / cfg.tau_end +
                    10.0 * halved.rate_constant / (cfg.tau_end / 2.0));
}

TEST_CASE("norm monitor") {
  SUBCASE("single mode: flat norms") {
    const Trajectory traj = single_mode_run(cplx(0.5, 0.0), 150.0);
    const NormReport rep = norm_monitor(traj, 0.3);
    CHECK(rep.sup_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.trend_slope) < 1e-10);
  }
  SUBCASE("zero data") {
    SimConfig cfg;
    cfg.K = 2;
    cfg.tau_end = 150.0;
    const Trajectory traj = integrate(ModeVector(2, 1.0), cfg);
    const NormReport rep = norm_monitor(traj, 0.3);
    CHECK(rep.sup_ratio == 0.0);
    for (double v : rep.values) CHECK(v == 0.0);
  }
}

TEST_CASE("blowup law check: exact cases flagged") {
  const Trajectory traj = single_mode_run(cplx(0.5, 0.0), 150.0);
  const ScatteringSummary sum = extract_asymptotics(traj);
  const RateFit fit = blowup_law_check(traj, sum);
  CHECK(fit.exact);
}

TEST_CASE("windowed time Fourier") {
  std::vector<double> window_times;
  for (double t = 3.0; t <= 6.0 + 1e-9; t += 0.01) window_times.push_back(t);

  SUBCASE("zero data gives the zero table") {
    SimConfig cfg;
    cfg.K = 2;
    cfg.tau_end = 8.0;
    cfg.extra_snapshot_times = window_times;
    const Trajectory traj = integrate(ModeVector(2, 1.0), cfg);
    const WindowedFourierTable table = windowed_time_fourier(traj, 4, {0.0, 1.0, 2.0});
    CHECK(table.max_magnitude == 0.0);
  }

  SUBCASE("single mode matches the closed-form quadrature") {
    const cplx alpha(0.6, 0.0);
    const Trajectory traj = single_mode_run(alpha, 8.0, 2, window_times);
    const std::vector<double> lambdas{0.0, 0.8, 2.5};
    const WindowedFourierTable table = windowed_time_fourier(traj, 4, lambdas);

    // Independent fine Simpson quadrature of e^{i t lambda} eta(t-4) dB_0/dt
    // with dB_0/dt = -i |alpha|^2 B_0 / t, B_0(t) = alpha e^{-i|alpha|^2 log t}.
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const double lambda = lambdas[li];
      auto f = [&](double t) {
        const cplx b0 = alpha * std::polar(1.0, -std::norm(alpha) * std::log(t));
        const cplx db = cplx(0.0, -std::norm(alpha) / t) * b0;
        return std::polar(1.0, t * lambda) * bump_eta(t - 4.0) * db;
      };
      const int n = 6000;
      const double h = 3.0 / n;
      cplx acc = f(3.0) + f(6.0);
      for (int i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(3.0 + i * h);
      acc *= h / 3.0;
      CHECK(table.magnitude[2][li] == doctest::Approx(std::abs(acc)).epsilon(2e-4));
    }
  }

  SUBCASE("uncovered windows are rejected") {
    const Trajectory traj = single_mode_run(cplx(0.5, 0.0), 8.0);  // sparse snapshots
    CHECK_THROWS(windowed_time_fourier(traj, 4, {0.0}));
    const Trajectory dense = single_mode_run(cplx(0.5, 0.0), 8.0, 2, window_times);
    CHECK_THROWS(windowed_time_fourier(dense, 12, {0.0}));  // outside the span
  }
}
