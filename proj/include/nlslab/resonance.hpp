/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Integer combinatorics of the four-wave interaction: quadruple sets with
 * k - j1 + j2 - j3 = 0, the phase factorization, divisor level sets, and the
 * weighted phase-quotient multiplier with its exhaustive bound audit.
 *
 *****************************************************************************/

#ifndef NLSLAB_RESONANCE_HPP
#define NLSLAB_RESONANCE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace nlslab {

/// One interaction quadruple (k, j1, j2, j3) with k - j1 + j2 - j3 = 0.
///
/// Both forms of the phase are carried: omega_prod = (k-j1)(j1-j2) and
/// omega_full = k^2 - j1^2 + j2^2 - j3^2. Under the constraint the identity
/// omega_full = 2 * omega_prod holds identically; the time-evolution phases
/// e^{-i tau omega} always use omega_full.
struct Quadruple {
  std::int64_t k = 0, j1 = 0, j2 = 0, j3 = 0;
  std::int64_t omega_prod = 0;
  std::int64_t omega_full = 0;

  bool nonresonant() const { return omega_prod != 0; }
};

struct Omega {
  std::int64_t prod = 0;
  std::int64_t full = 0;
};

/// Phase of the (k, j1, j2, k-j1+j2) interaction in both factorized and
/// quadratic form. Total on integers.
Omega omega(std::int64_t k, std::int64_t j1, std::int64_t j2);

Quadruple make_quadruple(std::int64_t k, std::int64_t j1, std::int64_t j2);

/// All nonresonant quadruples with |j1|,|j2|,|j3| <= radius, in lexicographic
/// (j1, j2) order.
std::vector<Quadruple> enumerate_nonresonant(std::int64_t k, std::int64_t radius);

/// Level set of the factorized phase: pairs (j1, j2) with (k-j1)(j1-j2) = m.
/// Without a radius the pair count is exactly twice the number of positive
/// divisors of |m|; with a radius the pairs are filtered to the box.
struct LevelSet {
  std::int64_t k = 0;
  std::int64_t m = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
};

LevelSet level_set(std::int64_t k, std::int64_t m,
                   std::optional<std::int64_t> radius = std::nullopt);

/// Number of positive divisors of |m|, m != 0.
int divisor_count(std::int64_t m);

/// Weighted phase quotient
///   (<k>^2r - <j1>^2r + <j2>^2r - <j3>^2r) / (k^2 - j1^2 + j2^2 - j3^2)
/// for a nonresonant quadruple on the constraint plane. Throws on resonant
/// input or when k - j1 + j2 - j3 != 0.
double phi_multiplier(std::int64_t k, std::int64_t j1, std::int64_t j2, std::int64_t j3,
                      double r);

/// Result of the exhaustive search for sup |phi| * max{<k>,<j1>,<j2>,<j3>}
/// over nonresonant quadruples with all indices in [-radius, radius].
struct PhiBoundAudit {
  double r = 0.0;
  std::int64_t radius = 0;
  double constant = 0.0;
  Quadruple argmax;
};

/// Exhaustive audit of the multiplier bound; requires 0 <= r < 1/2.
PhiBoundAudit phi_bound_audit(double r, std::int64_t radius);

}  // namespace nlslab

#endif
