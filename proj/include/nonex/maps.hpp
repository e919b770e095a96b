// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Single- and multivalued self-maps of a compact convex domain, described by
// closed-form tagged rules so that runs are reproducible from a config file.
// Exceptional points (the discontinuities the built-in catalog relies on) are
// matched exactly, coordinate by coordinate, never by tolerance: the rules are
// defined pointwise and an inexact match must evaluate the base rule.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nonex/sets.hpp"
#include "nonex/space.hpp"

namespace nonex {

/// t(x) = scale * x + offset everywhere except at the listed exception
/// points.
struct SingleValuedMap {
  NormedSpace space;
  CompactSet domain;  // convex
  double affine_scale = 0.0;
  Point affine_offset;

  struct Exception {
    Point at;
    Point value;
  };
  std::vector<Exception> exceptions;

  std::optional<double> declared_lambda;  // smallest lambda the map is known to satisfy
  std::optional<double> declared_mu;
  std::string name = "affine";
};

struct IntervalScalingRule {
  double factor = 0.0;  // x -> interval between 0 and factor * x
};

struct ConstantSetRule {
  CompactSet value;
};

/// Multivalued map with a tagged base rule plus exact exception points.
struct MultiValuedMap {
  NormedSpace space;
  CompactSet domain;  // convex
  std::variant<IntervalScalingRule, ConstantSetRule> rule;

  struct Exception {
    Point at;
    CompactSet value;
  };
  std::vector<Exception> exceptions;

  std::optional<double> declared_lambda;
  std::optional<double> declared_mu;
  std::string name = "multivalued";
};

inline void check_in_domain(const NormedSpace& space, const CompactSet& domain, const Point& x,
                            const char* where) {
  check_dimension(space, x, where);
  if (!contains(space, domain, x))
    throw std::domain_error(std::string(where) + ": point is outside the map's domain");
}

inline Point evaluate(const SingleValuedMap& map, const Point& x) {
  check_in_domain(map.space, map.domain, x, "evaluate");
  for (const auto& e : map.exceptions)
    if (exact_equal(x, e.at)) return e.value;
  Point r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = map.affine_scale * x[i] + map.affine_offset[i];
  return r;
}

inline CompactSet evaluate(const MultiValuedMap& map, const Point& x) {
  check_in_domain(map.space, map.domain, x, "evaluate");
  for (const auto& e : map.exceptions)
    if (exact_equal(x, e.at)) return e.value;
  if (const auto* sc = std::get_if<IntervalScalingRule>(&map.rule)) {
    double v = sc->factor * x[0];
    return Interval{std::min(0.0, v), std::max(0.0, v)};
  }
  return std::get<ConstantSetRule>(map.rule).value;
}

/// Exception points of the rule; condition samples always include these as
/// grid nodes since that is where the catalog maps misbehave.
inline std::vector<Point> exception_points(const SingleValuedMap& map) {
  std::vector<Point> out;
  for (const auto& e : map.exceptions) out.push_back(e.at);
  return out;
}

inline std::vector<Point> exception_points(const MultiValuedMap& map) {
  std::vector<Point> out;
  for (const auto& e : map.exceptions) out.push_back(e.at);
  return out;
}

// ---------------------------------------------------------------------------
// Built-in catalog.
// ---------------------------------------------------------------------------

/// On [0,3]: t(x) = 0 for x != 3 and t(3) = 1. Discontinuous, hence not
/// nonexpansive, yet it passes the half-residual conditional check.
inline SingleValuedMap suzuki_example() {
  SingleValuedMap m;
  m.space = lp_space(1, 2.0);
  m.domain = make_interval(0.0, 3.0);
  m.affine_scale = 0.0;
  m.affine_offset = {0.0};
  m.exceptions.push_back({{3.0}, {1.0}});
  m.declared_lambda = 0.5;
  m.name = "suzuki";
  return m;
}

/// On [0,1]: t(x) = x/2 for x != 1 and t(1) = (1+lambda)/(2+lambda).
/// Satisfies the conditional check exactly from its own lambda upward and
/// fails below it; its minimal unconditional-bound constant is (2+lambda)/2.
inline SingleValuedMap garcia_example(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("garcia_example: lambda must lie in (0,1)");
  SingleValuedMap m;
  m.space = lp_space(1, 2.0);
  m.domain = make_interval(0.0, 1.0);
  m.affine_scale = 0.5;
  m.affine_offset = {0.0};
  m.exceptions.push_back({{1.0}, {(1.0 + lambda) / (2.0 + lambda)}});
  m.declared_lambda = lambda;
  m.declared_mu = (2.0 + lambda) / 2.0;
  m.name = "garcia(" + std::to_string(lambda) + ")";
  return m;
}

/// On [0,5]: T(x) = [0, x/5] for x != 5 and T(5) = {1}. Not nonexpansive in
/// the Hausdorff metric, but passes the multivalued conditional checks.
inline MultiValuedMap multivalued_example() {
  MultiValuedMap m;
  m.space = lp_space(1, 2.0);
  m.domain = make_interval(0.0, 5.0);
  m.rule = IntervalScalingRule{1.0 / 5.0};
  m.exceptions.push_back({{5.0}, make_point_set({{1.0}})});
  m.declared_lambda = 0.5;
  m.name = "mv5";
  return m;
}

inline SingleValuedMap affine_map(const NormedSpace& space, const CompactSet& domain, double scale,
                                  Point offset, std::string name = "affine") {
  SingleValuedMap m;
  m.space = space;
  m.domain = domain;
  m.affine_scale = scale;
  if (offset.size() == 1 && space.dimension > 1) offset.assign(space.dimension, offset[0]);
  check_dimension(space, offset, "affine_map offset");
  m.affine_offset = std::move(offset);
  m.name = std::move(name);
  return m;
}

inline SingleValuedMap identity_map(const NormedSpace& space, const CompactSet& domain) {
  auto m = affine_map(space, domain, 1.0, Point(space.dimension, 0.0), "identity");
  m.declared_lambda = 0.5;
  m.declared_mu = 1.0;
  return m;
}

}  // namespace nonex
