#include <doctest.h>

#include <cmath>

#include "nlslab/util.hpp"

using namespace nlslab;

TEST_CASE("fit_line recovers an exact line") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> y;
  for (double v : x) y.push_back(-2.5 * v + 0.75);
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("bump window: support, plateau, smooth seams") {
  CHECK(bump_eta(-1.0) == 0.0);
  CHECK(bump_eta(2.0) == 0.0);
  CHECK(bump_eta(-5.0) == 0.0);
  CHECK(bump_eta(0.0) == 1.0);
  CHECK(bump_eta(0.5) == 1.0);
  CHECK(bump_eta(1.0) == 1.0);
  CHECK(bump_eta(-0.5) > 0.0);
  CHECK(bump_eta(1.5) > 0.0);
  // C^1 at the seams: finite differences of eta stay small near -1 and 2.
  const double h = 1e-5;
  CHECK(std::abs(bump_eta(-1.0 + h) - bump_eta(-1.0)) < 1e-10);
  CHECK(std::abs(bump_eta(2.0 - h) - bump_eta(2.0)) < 1e-10);
}

TEST_CASE("vector helpers") {
  const Vec3 ex{1.0, 0.0, 0.0}, ey{0.0, 1.0, 0.0}, ez{0.0, 0.0, 1.0};
  const Vec3 c = cross(ex, ey);
  CHECK(norm(c - ez) == doctest::Approx(0.0));
  CHECK(angle_between(ex, ey) == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(angle_between(ex, ex) == doctest::Approx(0.0));
  CHECK(angle_between(ex, -1.0 * ex) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(to_hex(fnv1a64(std::string(""))) == "cbf29ce484222325");
  CHECK(fnv1a64(std::string("a")) != fnv1a64(std::string("b")));
}
