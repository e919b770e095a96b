// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonex {

/// A point of R^n, coordinates in the ambient order.
using Point = std::vector<double>;

/// Finite-dimensional l_p space. p = infinity() selects the max norm.
struct NormedSpace {
  int dimension = 1;
  double p = 2.0;
};

inline constexpr double inf_exponent = std::numeric_limits<double>::infinity();

inline NormedSpace lp_space(int dimension, double p) {
  if (dimension < 1) throw std::invalid_argument("lp_space: dimension must be positive");
  if (!(p >= 1.0)) throw std::invalid_argument("lp_space: exponent must satisfy p >= 1");
  return NormedSpace{dimension, p};
}

/// True exactly when 1 < p < infinity. For p in {1, inf} the unit sphere
/// contains segments and nearest points in convex sets need not be unique.
inline bool strictly_convex(const NormedSpace& space) {
  return space.p > 1.0 && !std::isinf(space.p);
}

inline void check_dimension(const NormedSpace& space, const Point& x, const char* where) {
  if (static_cast<int>(x.size()) != space.dimension)
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (point has " +
                                std::to_string(x.size()) + ", space has " +
                                std::to_string(space.dimension) + ")");
}

inline bool all_finite(const Point& x) {
  for (double c : x)
    if (!std::isfinite(c)) return false;
  return true;
}

inline double norm(const NormedSpace& space, const Point& x) {
  check_dimension(space, x, "norm");
  if (space.dimension == 1) return std::fabs(x[0]);
  if (std::isinf(space.p)) {
    double m = 0.0;
    for (double c : x) m = std::max(m, std::fabs(c));
    return m;
  }
  if (space.p == 1.0) {
    double s = 0.0;
    for (double c : x) s += std::fabs(c);
    return s;
  }
  if (space.p == 2.0) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
  }
  // General p: scale by the max coordinate to avoid overflow in pow.
  double m = 0.0;
  for (double c : x) m = std::max(m, std::fabs(c));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double c : x) s += std::pow(std::fabs(c) / m, space.p);
  return m * std::pow(s, 1.0 / space.p);
}

// Pointwise vector helpers. Sizes are the caller's responsibility except
// where noted; the hot loops live here.

inline Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point add(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point scale(double c, const Point& a) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

/// (1-t)*a + t*b, evaluated so that t=0 and t=1 reproduce a and b exactly.
inline Point lerp(const Point& a, const Point& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (1.0 - t) * a[i] + t * b[i];
  return r;
}

inline double distance(const NormedSpace& space, const Point& a, const Point& b) {
  return norm(space, sub(a, b));
}

inline Point midpoint(const Point& a, const Point& b) { return lerp(a, b, 0.5); }

inline bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Coordinatewise bitwise equality; used for exception-point matching, which
/// is defined pointwise rather than by tolerance.
inline bool exact_equal(const Point& a, const Point& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace nonex
