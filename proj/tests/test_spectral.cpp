#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nlslab/scattering.hpp"
#include "nlslab/spectral.hpp"

using namespace nlslab;

namespace {

ModeVector random_state(int K, double tau, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  ModeVector s(K, tau);
  for (cplx& c : s.coeffs) c = cplx(g(rng), g(rng)) * 0.3;
  return s;
}

// Brute-force oracle, written against the constraint set directly: loop over
// all (j1, j2, j3) and keep the triples with k - j1 + j2 - j3 = 0.
std::vector<cplx> rhs_oracle(const ModeVector& s) {
  const int K = s.K;
  std::vector<cplx> out(s.size(), cplx(0.0, 0.0));
  const cplx minus_i_over_tau = cplx(0.0, -1.0) / s.tau;
  for (int k = -K; k <= K; ++k) {
    cplx acc(0.0, 0.0);
    for (int j1 = -K; j1 <= K; ++j1)
      for (int j2 = -K; j2 <= K; ++j2)
        for (int j3 = -K; j3 <= K; ++j3) {
          if (k - j1 + j2 - j3 != 0) continue;
          const double w = static_cast<double>(k * k - j1 * j1 + j2 * j2 - j3 * j3);
          acc += std::exp(cplx(0.0, -s.tau * w)) * s.at(j1) * std::conj(s.at(j2)) * s.at(j3);
        }
    out[static_cast<std::size_t>(k + K)] = minus_i_over_tau * acc;
  }
  return out;
}

double max_rel_dev(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double scale = 0.0;
  for (const cplx& v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
  return dev / scale;
}

}  // namespace

TEST_CASE("modes_from_profile") {
  SUBCASE("constant profile keeps only the zero mode, conjugated") {
    ProfileSpec spec;
    spec.fhat = {cplx(0, 0), cplx(0.3, -0.4), cplx(0, 0)};
    const ModeVector s = modes_from_profile(spec);
    CHECK(s.tau == 1.0);
    CHECK(std::abs(s.at(0) - cplx(0.3, 0.4)) < 1e-15);
    CHECK(std::abs(s.at(1)) == 0.0);
    CHECK(std::abs(s.at(-1)) == 0.0);
  }
  SUBCASE("zero profile") {
    ProfileSpec spec;
    spec.fhat.assign(5, cplx(0.0, 0.0));
    const ModeVector s = modes_from_profile(spec);
    CHECK(mass(s) == 0.0);
  }
  SUBCASE("fhat_1 = i maps to -i e^{i/4}") {
    ProfileSpec spec;
    spec.fhat.assign(3, cplx(0.0, 0.0));
    spec.fhat[2] = cplx(0.0, 1.0);  // j = +1
    const ModeVector s = modes_from_profile(spec);
    const cplx expected = cplx(0.0, -1.0) * std::polar(1.0, 0.25);
    CHECK(std::abs(s.at(1) - expected) < 1e-15);
  }
  SUBCASE("moduli equal |fhat| (phase-only map)") {
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    ProfileSpec spec;
    spec.fhat.resize(17);
    for (cplx& c : spec.fhat) c = cplx(g(rng), g(rng));
    const ModeVector s = modes_from_profile(spec);
    for (int j = -8; j <= 8; ++j)
      CHECK(std::abs(s.at(j)) == doctest::Approx(std::abs(spec.at(j))).epsilon(1e-14));
  }
}

TEST_CASE("rhs_reference") {
  SUBCASE("single mode at tau = 1") {
    ModeVector s(3, 1.0);
    s.at(0) = cplx(0.4, 0.3);
    const auto rhs = rhs_reference(s);
    const cplx expected = cplx(0.0, -1.0) * std::norm(s.at(0)) * s.at(0);
    CHECK(std::abs(rhs[3] - expected) < 1e-15);
    for (int k : {-3, -2, -1, 1, 2, 3})
      CHECK(std::abs(rhs[static_cast<std::size_t>(k + 3)]) == 0.0);
  }
  SUBCASE("zero state") {
    ModeVector s(4, 2.0);
    for (const cplx& d : rhs_reference(s)) CHECK(std::abs(d) == 0.0);
  }
  SUBCASE("matches the brute-force oracle at K = 2") {
    const ModeVector s = random_state(2, 1.7, 21);
    CHECK(max_rel_dev(rhs_oracle(s), rhs_reference(s)) < 1e-13);
  }
}

TEST_CASE("rhs_fast equals rhs_reference") {
  SUBCASE("single mode") {
    ModeVector s(5, 3.0);
    s.at(0) = cplx(0.1, -0.7);
    CHECK(max_rel_dev(rhs_reference(s), rhs_fast(s)) < 1e-13);
  }
  SUBCASE("random states, K = 8") {
    for (unsigned seed = 0; seed < 10; ++seed) {
      const ModeVector s = random_state(8, 1.0 + 0.37 * seed, 100 + seed);
      CHECK(max_rel_dev(rhs_reference(s), rhs_fast(s)) < 1e-12);
    }
  }
  SUBCASE("random state, K = 128 (looser: the O(K^2) sum accumulates roundoff)") {
    const ModeVector s = random_state(128, 2.3, 9);
    CHECK(max_rel_dev(rhs_reference(s), rhs_fast(s)) < 1e-10);
  }
}

TEST_CASE("resonant split") {
  SUBCASE("single mode is purely resonant") {
    ModeVector s(2, 2.0);
    s.at(0) = cplx(0.6, 0.1);
    const RhsSplit split = resonant_split_rhs(s);
    const cplx expected = cplx(0.0, -1.0 / s.tau) * std::norm(s.at(0)) * s.at(0);
    CHECK(std::abs(split.resonant[2] - expected) < 1e-15);
    for (const cplx& c : split.nonresonant) CHECK(std::abs(c) < 1e-15);
  }
  SUBCASE("zero state") {
    ModeVector s(2, 1.0);
    const RhsSplit split = resonant_split_rhs(s);
    for (const cplx& c : split.nonresonant) CHECK(std::abs(c) == 0.0);
    for (const cplx& c : split.resonant) CHECK(std::abs(c) == 0.0);
  }
  SUBCASE("parts recombine to the reference rhs at K = 4") {
    const ModeVector s = random_state(4, 2.9, 77);
    const RhsSplit split = resonant_split_rhs(s);
    const auto ref = rhs_reference(s);
    std::vector<cplx> sum(ref.size());
    for (std::size_t i = 0; i < sum.size(); ++i)
      sum[i] = split.nonresonant[i] + split.resonant[i];
    CHECK(max_rel_dev(ref, sum) < 1e-12);
  }
}

TEST_CASE("to_grid") {
  SUBCASE("constant mode") {
    ModeVector s(1, 1.0);
    s.at(0) = cplx(1.0, 0.0);
    const GridFunction g = to_grid(s, 8);
    for (const cplx& v : g.samples) CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-14);
  }
  SUBCASE("single oscillating mode carries the e^{i tau} factor at x = 0") {
    ModeVector s(1, 2.5);
    s.at(1) = cplx(1.0, 0.0);
    const GridFunction g = to_grid(s, 8);
    CHECK(std::abs(g.samples[0] - std::polar(1.0, 2.5)) < 1e-14);
  }
  SUBCASE("Parseval") {
    const ModeVector s = random_state(8, 1.9, 3);
    const GridFunction g = to_grid(s, 64);
    double grid_mass = 0.0;
    for (const cplx& v : g.samples) grid_mass += std::norm(v);
    grid_mass /= static_cast<double>(g.samples.size());
    CHECK(grid_mass == doctest::Approx(mass(s)).epsilon(1e-12));
  }
  SUBCASE("undersized grids are rejected") {
    const ModeVector s = random_state(8, 1.0, 4);
    CHECK_THROWS(to_grid(s, 16));  // below 2(2K+1) = 34
    CHECK_THROWS(to_grid(s, 48));  // not a power of two
  }
}

TEST_CASE("truncated rhs conserves mass: Re<dB, B> = 0") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const ModeVector s = random_state(16, 1.0 + seed, 500 + seed);
    const auto rhs = rhs_fast(s);
    double re = 0.0, scale = 0.0;
    for (int k = -16; k <= 16; ++k) {
      re += (rhs[static_cast<std::size_t>(k + 16)] * std::conj(s.at(k))).real();
      scale += std::abs(rhs[static_cast<std::size_t>(k + 16)]) * std::abs(s.at(k));
    }
    CHECK(std::abs(re) < 1e-13 * std::max(scale, 1.0));
  }
}

TEST_CASE("snapshot round trip") {
  const ModeVector s = random_state(6, 4.2, 8);
  std::stringstream buf;
  write_snapshot(buf, s);
  const ModeVector r = read_snapshot(buf);
  CHECK(r.K == s.K);
  CHECK(r.tau == s.tau);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.coeffs[i] == r.coeffs[i]);

  SUBCASE("bad magic is rejected") {
    std::stringstream bad;
    bad << "XXXX";
    CHECK_THROWS(read_snapshot(bad));
  }
}

TEST_CASE("state validation") {
  ModeVector s(2, 1.0);
  s.at(1) = cplx(std::nan(""), 0.0);
  CHECK_FALSE(s.finite());
  CHECK_THROWS(s.require_valid());
  ModeVector early(2, 0.5);
  CHECK_THROWS(early.require_valid());
}
