/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 *****************************************************************************/

#include "nlslab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlslab/util.hpp"

namespace nlslab {

Omega omega(std::int64_t k, std::int64_t j1, std::int64_t j2) {
  const std::int64_t j3 = k - j1 + j2;
  Omega w;
  w.prod = (k - j1) * (j1 - j2);
  w.full = k * k - j1 * j1 + j2 * j2 - j3 * j3;
  return w;
}

Quadruple make_quadruple(std::int64_t k, std::int64_t j1, std::int64_t j2) {
  Quadruple q;
  q.k = k;
  q.j1 = j1;
  q.j2 = j2;
  q.j3 = k - j1 + j2;
  const Omega w = omega(k, j1, j2);
  q.omega_prod = w.prod;
  q.omega_full = w.full;
  return q;
}

std::vector<Quadruple> enumerate_nonresonant(std::int64_t k, std::int64_t radius) {
  if (radius < 0) throw std::invalid_argument("enumerate_nonresonant: negative radius");
  std::vector<Quadruple> out;
  for (std::int64_t j1 = -radius; j1 <= radius; ++j1) {
    if (j1 == k) continue;  // (k - j1) = 0 is resonant for every j2
    for (std::int64_t j2 = -radius; j2 <= radius; ++j2) {
      if (j2 == j1) continue;
      const std::int64_t j3 = k - j1 + j2;
      if (j3 < -radius || j3 > radius) continue;
      out.push_back(make_quadruple(k, j1, j2));
    }
  }
  return out;
}

int divisor_count(std::int64_t m) {
  if (m == 0) throw std::invalid_argument("divisor_count: zero has no finite divisor set");
  std::int64_t n = std::llabs(m);
  int count = 0;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) count += (d * d == n) ? 1 : 2;
  }
  return count;
}

LevelSet level_set(std::int64_t k, std::int64_t m, std::optional<std::int64_t> radius) {
  if (m == 0) throw std::invalid_argument("level_set: resonant level set (m = 0) is infinite");
  LevelSet ls;
  ls.k = k;
  ls.m = m;
  const std::int64_t n = std::llabs(m);
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      divisors.push_back(d);
      if (d * d != n) divisors.push_back(n / d);
    }
  }
  std::sort(divisors.begin(), divisors.end());
  // Signed divisors of m: d = k - j1 ranges over +/- each positive divisor,
  // and j2 = j1 - m/d closes the product.
  for (std::int64_t d0 : divisors) {
    for (std::int64_t d : {d0, -d0}) {
      const std::int64_t j1 = k - d;
      const std::int64_t j2 = j1 - m / d;
      if (radius && (std::llabs(j1) > *radius || std::llabs(j2) > *radius)) continue;
      ls.pairs.emplace_back(j1, j2);
    }
  }
  std::sort(ls.pairs.begin(), ls.pairs.end());
  return ls;
}

double phi_multiplier(std::int64_t k, std::int64_t j1, std::int64_t j2, std::int64_t j3,
                      double r) {
  if (k - j1 + j2 - j3 != 0)
    throw std::invalid_argument("phi_multiplier: quadruple off the constraint plane");
  if (r < 0.0) throw std::invalid_argument("phi_multiplier: negative weight exponent");
  const Omega w = omega(k, j1, j2);
  if (w.full == 0)
    throw std::invalid_argument("phi_multiplier: resonant quadruple (zero denominator)");
  const double num = std::pow(bracket(static_cast<double>(k)), 2.0 * r) -
                     std::pow(bracket(static_cast<double>(j1)), 2.0 * r) +
                     std::pow(bracket(static_cast<double>(j2)), 2.0 * r) -
                     std::pow(bracket(static_cast<double>(j3)), 2.0 * r);
  return num / static_cast<double>(w.full);
}

PhiBoundAudit phi_bound_audit(double r, std::int64_t radius) {
  if (r < 0.0 || r >= 0.5) throw std::invalid_argument("phi_bound_audit: need 0 <= r < 1/2");
  if (radius < 1) throw std::invalid_argument("phi_bound_audit: radius must be >= 1");

  // <j>^{2r} and <j> tables over the box.
  const std::size_t width = static_cast<std::size_t>(2 * radius + 1);
  std::vector<double> wr(width), br(width);
  for (std::int64_t j = -radius; j <= radius; ++j) {
    const double b = bracket(static_cast<double>(j));
    br[static_cast<std::size_t>(j + radius)] = b;
    wr[static_cast<std::size_t>(j + radius)] = std::pow(b, 2.0 * r);
  }
  auto at = [radius](const std::vector<double>& t, std::int64_t j) {
    return t[static_cast<std::size_t>(j + radius)];
  };

  PhiBoundAudit audit;
  audit.r = r;
  audit.radius = radius;
  for (std::int64_t k = -radius; k <= radius; ++k) {
    for (std::int64_t j1 = -radius; j1 <= radius; ++j1) {
      if (j1 == k) continue;
      for (std::int64_t j2 = -radius; j2 <= radius; ++j2) {
        if (j2 == j1) continue;
        const std::int64_t j3 = k - j1 + j2;
        if (j3 < -radius || j3 > radius) continue;
        const std::int64_t full = 2 * (k - j1) * (j1 - j2);
        const double phi = (at(wr, k) - at(wr, j1) + at(wr, j2) - at(wr, j3)) /
                           static_cast<double>(full);
        const double weight =
            std::max(std::max(at(br, k), at(br, j1)), std::max(at(br, j2), at(br, j3)));
        const double value = std::abs(phi) * weight;
        if (value > audit.constant) {
          audit.constant = value;
          audit.argmax = make_quadruple(k, j1, j2);
        }
      }
    }
  }
  return audit;
}

}  // namespace nlslab
