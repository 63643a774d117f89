/******************************************************************************
 *
 * nlslab -- spectral laboratory for the periodic NLS with 1/t coupling
 * Copyright 2026 the nlslab authors
 *
 * Distributed under the terms of the Apache License, Version 2.0
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Small shared helpers: brackets, fits, the window bump, hashing, 3-vectors.
 *
 *****************************************************************************/

#ifndef NLSLAB_UTIL_HPP
#define NLSLAB_UTIL_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

/// Japanese bracket <x> = sqrt(1 + x^2).
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i). Requires at least two points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Smooth window bump: 0 outside (-1,2), identically 1 on [0,1], glued with
/// the quartic smoothstep x^4(35 - 84x + 70x^2 - 20x^3) (C^3 at the seams).
double bump_eta(double t);

/// FNV-1a 64-bit hash of a byte string, for output manifests.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& s);
std::string to_hex(std::uint64_t v);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  return n > 0.0 ? v * (1.0 / n) : v;
}

/// Angle between two vectors in [0, pi], stable near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

}  // namespace nlslab

#endif
