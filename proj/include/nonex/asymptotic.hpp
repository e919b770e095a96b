// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Discretized asymptotic radius and center of a finite sequence relative to a
// compact convex set. The limsup of an infinite sequence is not computable;
// it is replaced by the maximum over a trailing window of W terms. For a
// sequence that has converged to within delta of its limit by the window, the
// surrogate differs from the true limsup by at most that delta, which is the
// error bound quoted in the docs. The regularity probe draws finite
// subsequences; it can refute regularity (a deviating subsequence is a
// counterexample) but can never certify it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nonex/random.hpp"
#include "nonex/sets.hpp"
#include "nonex/space.hpp"

namespace nonex {

inline constexpr double center_tol_default = 1e-6;

struct AsymptoticResult {
  double radius = 0.0;
  std::vector<Point> center;  // probed minimizers within center_tol of optimal
  std::size_t window = 1;
  double resolution = 1e-3;
  double center_tol = center_tol_default;
  std::size_t evaluations = 0;
};

namespace detail {

struct TailObjective {
  const NormedSpace& space;
  std::vector<Point> tail;
  mutable std::size_t evals = 0;

  double operator()(const Point& c) const {
    ++evals;
    double m = 0.0;
    for (const Point& x : tail) m = std::max(m, distance(space, x, c));
    return m;
  }
};

/// Ternary search for a convex objective on [lo, hi], robust to flat bottoms
/// by final midpoint comparison against both bracket ends.
inline double refine_interval_min(const TailObjective& f, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (f(Point{m1}) <= f(Point{m2}))
      hi = m2;
    else
      lo = m1;
  }
  double mid = 0.5 * (lo + hi);
  double best = mid;
  double bv = f(Point{mid});
  for (double c : {lo, hi})
    if (f(Point{c}) < bv) {
      bv = f(Point{c});
      best = c;
    }
  return best;
}

inline Point subgradient_minimax(const NormedSpace& space, const TailObjective& f,
                                 const std::vector<Point>& vertices, std::vector<double> w,
                                 int budget) {
  double diam = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      diam = std::max(diam, distance(space, vertices[i], vertices[j]));
  std::vector<double> best_w = w;
  double best_f = f(combine(vertices, w));
  for (int it = 0; it < budget; ++it) {
    Point c = combine(vertices, w);
    // Steepest tail term; smallest index wins ties for determinism.
    std::size_t worst = 0;
    double m = -1.0;
    for (std::size_t i = 0; i < f.tail.size(); ++i) {
      double d = distance(space, f.tail[i], c);
      if (d > m) {
        m = d;
        worst = i;
      }
    }
    Point r = sub(c, f.tail[worst]);
    Point u = (space.p > 1.0 && !std::isinf(space.p)) ? p_norm_sq_gradient(space, r)
                                                      : p_norm_subgradient(space, r);
    double un = norm(space, u);
    if (un == 0.0) break;
    std::vector<double> grad(vertices.size(), 0.0);
    double gn = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      for (std::size_t k = 0; k < u.size(); ++k) grad[i] += u[k] * vertices[i][k];
      gn += grad[i] * grad[i];
    }
    gn = std::sqrt(gn);
    if (gn == 0.0) break;
    double alpha = (diam > 0 ? diam : 1.0) / (gn * std::sqrt(static_cast<double>(it + 1)));
    for (std::size_t i = 0; i < vertices.size(); ++i) w[i] -= alpha * grad[i];
    w = project_simplex(std::move(w));
    double v = f(combine(vertices, w));
    if (v < best_f) {
      best_f = v;
      best_w = w;
    }
  }
  return combine(vertices, best_w);
}

}  // namespace detail

inline AsymptoticResult asymptotic_radius_center(const NormedSpace& space,
                                                 const std::vector<Point>& sequence,
                                                 const CompactSet& D, std::size_t W,
                                                 double resolution,
                                                 double center_tol = center_tol_default) {
  if (sequence.empty()) throw std::invalid_argument("asymptotic_radius_center: empty sequence");
  if (W < 1 || W > sequence.size())
    throw std::invalid_argument("asymptotic_radius_center: window must satisfy 1 <= W <= length");
  if (!is_convex_set(D))
    throw std::invalid_argument("asymptotic_radius_center: D must be convex");
  check_set_dimension(space, D, "asymptotic_radius_center");
  for (const Point& x : sequence) check_dimension(space, x, "asymptotic_radius_center");

  detail::TailObjective f{space, {sequence.end() - static_cast<std::ptrdiff_t>(W), sequence.end()}};

  AsymptoticResult out;
  out.window = W;
  out.resolution = resolution;
  out.center_tol = center_tol;

  std::vector<std::pair<Point, double>> probes;
  if (const auto* iv = std::get_if<Interval>(&D)) {
    std::size_t n =
        iv->hi > iv->lo
            ? std::max<std::size_t>(2, static_cast<std::size_t>((iv->hi - iv->lo) / resolution) + 1)
            : 1;
    std::vector<Point> nodes = grid_points(D, n);
    double best = f(nodes.front());
    double best_c = nodes.front()[0];
    for (const Point& node : nodes) {
      double v = f(node);
      probes.emplace_back(node, v);
      if (v < best) {
        best = v;
        best_c = node[0];
      }
    }
    // The one-dimensional objective is convex: refine around the best node.
    double lo = std::max(iv->lo, best_c - resolution);
    double hi = std::min(iv->hi, best_c + resolution);
    double refined = detail::refine_interval_min(f, lo, hi, 1e-9);
    probes.emplace_back(Point{refined}, f(Point{refined}));
  } else {
    std::vector<Point> nodes = grid_points(D, 512);
    for (const Point& node : nodes) probes.emplace_back(node, f(node));
    const auto& poly = std::get<Polytope>(D);
    const std::size_t nv = poly.vertices.size();
    std::vector<std::vector<double>> starts;
    for (std::size_t i = 0; i < nv; ++i) {
      std::vector<double> e(nv, 0.0);
      e[i] = 1.0;
      starts.push_back(std::move(e));
    }
    starts.emplace_back(nv, 1.0 / static_cast<double>(nv));
    for (const auto& w0 : starts) {
      Point c = detail::subgradient_minimax(space, f, poly.vertices, w0, 10000);
      probes.emplace_back(c, f(c));
    }
  }

  double best = probes.front().second;
  for (const auto& [c, v] : probes) best = std::min(best, v);
  out.radius = best;
  for (const auto& [c, v] : probes) {
    if (v > best + center_tol) continue;
    bool dup = false;
    for (const Point& kept : out.center)
      if (distance(space, kept, c) <= 1e-12) {
        dup = true;
        break;
      }
    if (!dup) out.center.push_back(c);
  }
  std::sort(out.center.begin(), out.center.end(), lex_less);
  out.evaluations = f.evals;
  return out;
}

/// Regularity probe: recompute the radius on deterministic even/odd-index
/// subsequences and K seeded random keep-half subsequences, and compare
/// against the base radius at tolerance 10 * resolution.
struct RegularityReport {
  double base_radius = 0.0;
  std::vector<double> subsequence_radii;
  std::vector<std::string> patterns;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool regular = true;
  std::string note =
      "finite subsequence probe: a deviating radius refutes regularity, agreement cannot certify it";
};

inline RegularityReport regularity_probe(const NormedSpace& space,
                                         const std::vector<Point>& sequence, const CompactSet& D,
                                         std::size_t K, std::uint64_t seed, std::size_t W,
                                         double resolution) {
  if (K < 1) throw std::invalid_argument("regularity_probe: K must be >= 1");
  RegularityReport rep;
  rep.tolerance = 10.0 * resolution;
  rep.base_radius = asymptotic_radius_center(space, sequence, D, W, resolution).radius;

  auto add_subsequence = [&](const std::vector<Point>& sub, const std::string& pattern) {
    std::size_t w = std::min(W, sub.size());
    double r = asymptotic_radius_center(space, sub, D, w, resolution).radius;
    rep.subsequence_radii.push_back(r);
    rep.patterns.push_back(pattern);
    rep.max_deviation = std::max(rep.max_deviation, std::fabs(r - rep.base_radius));
  };

  std::vector<Point> even, odd;
  for (std::size_t i = 0; i < sequence.size(); ++i) (i % 2 == 0 ? even : odd).push_back(sequence[i]);
  if (!even.empty()) add_subsequence(even, "even-index");
  if (!odd.empty()) add_subsequence(odd, "odd-index");

  Rng rng(seed);
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<Point> sub;
    int retries = 0;
    while (retries < 100) {
      sub.clear();
      for (const Point& x : sequence)
        if (rng.coin()) sub.push_back(x);
      if (sub.size() >= W) break;
      ++retries;
    }
    if (sub.size() < W)
      throw std::runtime_error("regularity_probe: could not sample a long enough subsequence");
    add_subsequence(sub, "random keep-half #" + std::to_string(k));
  }
  rep.regular = rep.max_deviation <= rep.tolerance;
  return rep;
}

}  // namespace nonex
