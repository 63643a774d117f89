#include <doctest.h>

#include <cmath>

#include "nlslab/evolve.hpp"
#include "nlslab/scattering.hpp"
#include "nlslab/scenario.hpp"

using namespace nlslab;

namespace {

ModeVector single_mode(int K, cplx alpha) {
  ModeVector s(K, 1.0);
  s.at(0) = alpha;
  return s;
}

double max_state_dev(const Trajectory& a, const Trajectory& b, double tau) {
  const auto ia = a.index_of_time(tau);
  const auto ib = b.index_of_time(tau);
  REQUIRE(ia);
  REQUIRE(ib);
  double dev = 0.0;
  for (std::size_t i = 0; i < a.states[*ia].size(); ++i)
    dev = std::max(dev, std::abs(a.states[*ia][i] - b.states[*ib][i]));
  return dev;
}

}  // namespace

TEST_CASE("single mode follows the exact log-phase law") {
  const cplx alpha(0.5, 0.0);
  SimConfig cfg;
  cfg.K = 2;
  cfg.tau_end = 100.0;
  cfg.dt_initial = 5e-3;
  const Trajectory traj = integrate(single_mode(cfg.K, alpha), cfg);

  for (std::size_t i = 0; i < traj.size(); ++i) {
    const cplx expected = alpha * std::polar(1.0, -std::norm(alpha) * std::log(traj.times[i]));
    CHECK(std::abs(traj.states[i][2] - expected) < 1e-10 * std::abs(alpha));
  }
  CHECK(mass_drift(traj) < 1e-12 * std::norm(alpha));

  SUBCASE("quadrature equals |alpha|^2 log tau") {
    for (std::size_t i = 0; i < traj.size(); ++i)
      CHECK(traj.quadrature[i][2] ==
            doctest::Approx(std::norm(alpha) * std::log(traj.times[i])).epsilon(1e-12));
  }
}

TEST_CASE("zero data stays zero") {
  SimConfig cfg;
  cfg.K = 4;
  cfg.tau_end = 10.0;
  const Trajectory traj = integrate(ModeVector(4, 1.0), cfg);
  for (const auto& state : traj.states)
    for (const cplx& c : state) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("snapshot grid is strictly increasing from 1 with monotone quadratures") {
  SimConfig cfg;
  cfg.K = 2;
  cfg.tau_end = 50.0;
  cfg.extra_snapshot_times = {2.0, 2.0, 7.5};  // duplicate on purpose
  const Trajectory traj = integrate(single_mode(2, cplx(0.3, 0.2)), cfg);
  CHECK(traj.times.front() == 1.0);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    CHECK(traj.times[i] > traj.times[i - 1]);
    for (std::size_t k = 0; k < traj.quadrature[i].size(); ++k)
      CHECK(traj.quadrature[i][k] >= traj.quadrature[i - 1][k]);
  }
  CHECK(traj.index_of_time(2.0).has_value());
  CHECK(traj.index_of_time(7.5).has_value());
  CHECK(traj.index_of_time(cfg.tau_end / 2.0).has_value());
}

TEST_CASE("strang and adaptive RK agree on K = 8 data") {
  ProfileSpec profile = random_profile(2024, 8, 1.5);
  for (cplx& c : profile.fhat) c *= 0.45;
  const ModeVector initial = modes_from_profile(profile);

  SimConfig strang;
  strang.K = 8;
  strang.tau_end = 10.0;
  strang.dt_initial = 1e-4;
  strang.snapshots_per_decade = 8;
  strang.extra_snapshot_times = {2.0};

  SimConfig rk = strang;
  rk.method = Method::adaptive_rk;
  rk.dt_initial = 1e-3;
  rk.tolerance = 1e-10;

  const Trajectory a = integrate(initial, strang);
  const Trajectory b = integrate(initial, rk);
  for (double tau : {2.0, 5.0, 10.0}) CHECK(max_state_dev(a, b, tau) < 1e-8);
}

TEST_CASE("strang retraces its own steps (time reversibility)") {
  ProfileSpec profile = random_profile(7, 8, 1.5);
  for (cplx& c : profile.fhat) c *= 0.45;
  const ModeVector initial = modes_from_profile(profile);

  StrangIntegrator stepper(8);
  ModeVector state = initial;
  const double m0 = mass(state);
  const int steps = 1400;
  for (int i = 1; i <= steps; ++i)
    stepper.step(state, std::exp(std::log(4.0) * static_cast<double>(i) / steps), m0);
  for (int i = steps - 1; i >= 0; --i)
    stepper.step(state, std::exp(std::log(4.0) * static_cast<double>(i) / steps), m0);
  double dev = 0.0;
  for (int k = -8; k <= 8; ++k) dev = std::max(dev, std::abs(state.at(k) - initial.at(k)));
  CHECK(dev < 1e-8);
}

TEST_CASE("strang converges at second order against the RK reference") {
  // Spectrally smooth data keeps the splitting commutator the leading error.
  ProfileSpec profile = random_profile(11, 8, 1.0);
  for (int j = -8; j <= 8; ++j) {
    const double flat = std::pow(bracket(static_cast<double>(j)), 1.51);
    profile.fhat[static_cast<std::size_t>(j + 8)] *=
        flat * std::exp(-0.25 * static_cast<double>(j) * j);
  }
  const ModeVector initial = modes_from_profile(profile);

  SimConfig ref_cfg;
  ref_cfg.K = 8;
  ref_cfg.tau_end = 4.0;
  ref_cfg.method = Method::adaptive_rk;
  ref_cfg.dt_initial = 1e-3;
  ref_cfg.tolerance = 1e-12;
  ref_cfg.snapshots_per_decade = 4;
  const Trajectory ref = integrate(initial, ref_cfg);

  auto strang_error = [&](double dt_log) {
    SimConfig cfg = ref_cfg;
    cfg.method = Method::strang_splitting;
    cfg.dt_initial = dt_log;
    const Trajectory t = integrate(initial, cfg);
    return max_state_dev(t, ref, 4.0);
  };
  const double e1 = strang_error(8e-3);
  const double e2 = strang_error(4e-3);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("non-finite data aborts with the offending tau") {
  SimConfig cfg;
  cfg.K = 2;
  cfg.tau_end = 10.0;
  ModeVector initial(2, 1.0);
  initial.at(0) = cplx(1e200, 0.0);  // |v|^2 overflows inside the first step
  CHECK_THROWS_AS(integrate(initial, cfg), NumericalAbort);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.tau_end = 0.5;
  CHECK_THROWS(cfg.validate());
  cfg.tau_end = 10.0;
  cfg.tolerance = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg.tolerance = 1e-9;
  CHECK_NOTHROW(cfg.validate());

  SUBCASE("initial state off tau = 1 is rejected") {
    SimConfig ok;
    ok.K = 2;
    ModeVector late(2, 2.0);
    CHECK_THROWS(integrate(late, ok));
  }
}
