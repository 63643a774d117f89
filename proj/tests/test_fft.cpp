#include <doctest.h>

#include <numbers>
#include <random>

#include "nlslab/fft.hpp"

using namespace nlslab;

namespace {

// Direct O(n^2) transform as the oracle.
std::vector<cplx> dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      out[k] += x[j] * std::polar(1.0, -2.0 * std::numbers::pi *
                                           static_cast<double>(k * j % n) /
                                           static_cast<double>(n));
  return out;
}

std::vector<cplx> random_signal(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> x(n);
  for (cplx& v : x) v = cplx(g(rng), g(rng));
  return x;
}

}  // namespace

TEST_CASE("fft matches the direct transform") {
  for (std::size_t n : {2u, 8u, 64u}) {
    std::vector<cplx> x = random_signal(n, 7u + static_cast<unsigned>(n));
    std::vector<cplx> ref = dft(x);
    fft(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref[i]) < 1e-10);
  }
}

TEST_CASE("fft round trip") {
  std::vector<cplx> x = random_signal(256, 11u);
  std::vector<cplx> orig = x;
  fft(x);
  ifft(x);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(x[i] / 256.0 - orig[i]) < 1e-12);
}

TEST_CASE("fft rejects non power-of-two sizes") {
  std::vector<cplx> x(12, cplx(1.0, 0.0));
  CHECK_THROWS(fft(x));
}

TEST_CASE("spectral grid: synthesize places modes at e^{ikx}") {
  const int K = 3;
  SpectralGrid grid(K, 32);
  std::vector<cplx> coeffs(2 * K + 1, cplx(0.0, 0.0));
  coeffs[static_cast<std::size_t>(K + 2)] = cplx(1.0, 0.0);  // k = +2
  std::vector<cplx> samples;
  grid.synthesize(coeffs, samples);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double x = 2.0 * std::numbers::pi * static_cast<double>(n) / 32.0;
    CHECK(std::abs(samples[n] - std::polar(1.0, 2.0 * x)) < 1e-12);
  }
  // analyze inverts synthesize.
  std::vector<cplx> rec(2 * K + 1);
  grid.analyze(samples, rec);
  for (int k = -K; k <= K; ++k)
    CHECK(std::abs(rec[static_cast<std::size_t>(k + K)] -
                   coeffs[static_cast<std::size_t>(k + K)]) < 1e-13);
}
