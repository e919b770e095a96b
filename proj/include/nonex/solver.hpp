// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Common-fixed-point search for a commuting pair (t, T) on a compact convex
// domain: a single-valued map and a multivalued map that both satisfy the
// generalized-nonexpansiveness conditions. The pipeline mirrors the
// construction that proves existence:
//
//   1. approximate Fix(t) by multi-start averaged iteration and take the
//      convex hull of the certified points as a surrogate set;
//   2. verify that T(x) meets the surrogate for sampled x in it;
//   3. drive an averaged multivalued sequence inside the surrogate,
//      anchoring each selection at the previous one and projecting it onto
//      the surrogate when it drifts;
//   4. compute the asymptotic center of that sequence relative to the
//      surrogate;
//   5. run an inner averaged sequence from a center point, preferring
//      selections that stay near the center set;
//   6. certify the limit by re-evaluating both residuals.
//
// Exact membership in Fix(t) is not available numerically, so every
// membership claim becomes a distance-to-surrogate bound with a factor-10
// tolerance; the projection distances incurred in step 3 are reported as a
// diagnostic because the underlying construction says they vanish exactly.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nonex/asymptotic.hpp"
#include "nonex/conditions.hpp"
#include "nonex/iteration.hpp"
#include "nonex/maps.hpp"
#include "nonex/sets.hpp"
#include "nonex/space.hpp"

namespace nonex {

inline constexpr double commuting_tol = 1e-8;

struct CommutingWitness {
  Point y;       // sampled domain point
  Point x;       // x in T(y)
  Point tx;      // t(x)
  double dist;   // dist(t(x), T(t(y)))
};

struct CommutingReport {
  bool commuting = true;
  std::size_t checks = 0;
  std::size_t violation_count = 0;
  std::vector<CommutingWitness> violations;  // capped
  double tol = commuting_tol;
};

/// Samples y over the domain, enumerates x over the vertices plus a grid of
/// T(y), and verifies dist(t(x), T(t(y))) <= tol whenever t(y) stays in the
/// domain.
inline CommutingReport check_commuting(const SingleValuedMap& t, const MultiValuedMap& T,
                                       const CompactSet& domain, std::size_t sample_size,
                                       std::uint64_t seed) {
  CommutingReport rep;
  const NormedSpace& sp = t.space;
  std::vector<Point> ys = grid_points(domain, std::max<std::size_t>(2, sample_size / 2));
  Rng rng(seed);
  while (ys.size() < sample_size) ys.push_back(sample_point(domain, rng));
  for (const Point& y : ys) {
    Point ty = evaluate(t, y);
    if (!contains(sp, domain, ty)) continue;
    CompactSet Ty = evaluate(T, y);
    CompactSet Tty = evaluate(T, ty);
    std::vector<Point> xs = set_vertices(Ty);
    for (Point& g : grid_points(Ty, 17)) xs.push_back(std::move(g));
    for (const Point& x : xs) {
      if (!contains(sp, domain, x)) continue;
      Point tx = evaluate(t, x);
      double d = distance_point_set(sp, tx, Tty);
      ++rep.checks;
      if (d > rep.tol) {
        ++rep.violation_count;
        if (rep.violations.size() < 16) rep.violations.push_back({y, x, tx, d});
      }
    }
  }
  rep.commuting = rep.violation_count == 0;
  return rep;
}

struct CommonFixedPointProblem {
  NormedSpace space;
  CompactSet domain;
  SingleValuedMap t;
  MultiValuedMap T;
  double lambda = 0.5;

  double eps = 1e-8;          // residual target
  double fix_step = 0.0;      // step for the Fix(t) stage; 0 = max(lambda, 1/2)
  std::size_t fix_starts = 11;
  std::size_t window = 64;
  double resolution = 1e-3;
  std::size_t budget = 100000;
  std::size_t sample_size = 64;
  std::uint64_t seed = 0;
  int threads = 1;
};

enum class SolveStatus {
  certified,
  non_certified,
  aborted_commuting,
  aborted_intersection,
  aborted_no_fixed_points,
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::certified: return "certified";
    case SolveStatus::non_certified: return "non_certified";
    case SolveStatus::aborted_commuting: return "aborted_commuting";
    case SolveStatus::aborted_intersection: return "aborted_intersection";
    case SolveStatus::aborted_no_fixed_points: return "aborted_no_fixed_points";
  }
  return "unknown";
}

struct CommonFixedPointResult {
  SolveStatus status = SolveStatus::non_certified;
  Point z;
  double residual_single = 0.0;  // ||z - t(z)||
  double residual_multi = 0.0;   // dist(z, T(z))
  CommutingReport commuting;
  FixSetApproximation fix_set;
  std::optional<CompactSet> fix_surrogate;
  std::optional<AsymptoticResult> center;
  std::optional<IterationTrace> outer;
  std::optional<IterationTrace> inner;
  double max_projection_drift = 0.0;
  std::vector<std::string> diagnostics;

  bool certified() const { return status == SolveStatus::certified; }
};

namespace detail {

inline CompactSet hull_of_points(const std::vector<Point>& pts) {
  if (pts.front().size() == 1) {
    double lo = pts.front()[0], hi = lo;
    for (const Point& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return Interval{lo, hi};
  }
  return Polytope{pts};
}

/// Averaged multivalued iteration constrained to a surrogate set: selections
/// anchor at the previous selection and are projected onto the surrogate when
/// they drift beyond eps. Records the worst drift seen.
inline IterationTrace constrained_multi_iteration(const MultiValuedMap& T, const Point& x1,
                                                  double lambda, const CompactSet& surrogate,
                                                  double eps, std::size_t budget,
                                                  double& max_drift) {
  IterationTrace trace;
  trace.step = lambda;
  trace.rule = SelectionRule::anchor_previous;
  trace.start = x1;
  trace.tol = eps;
  trace.budget = budget;
  trace.multivalued = true;
  const NormedSpace& sp = T.space;
  Point x = x1;
  std::optional<Point> prev;
  while (true) {
    CompactSet Tx = evaluate(T, x);
    double res = distance_point_set(sp, x, Tx);
    const Point& anchor = prev ? *prev : x;
    Point y = nearest_point(sp, anchor, Tx).point;
    double drift = distance_point_set(sp, y, surrogate);
    if (drift > eps) {
      max_drift = std::max(max_drift, drift);
      y = nearest_point(sp, y, surrogate).point;
    }
    trace.points.push_back(x);
    trace.selections.push_back(y);
    trace.residuals.push_back(res);
    if (res <= eps) {
      trace.converged = true;
      trace.termination = "converged";
      break;
    }
    if (trace.points.size() >= budget) {
      trace.termination = "budget_exhausted";
      break;
    }
    Point next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = (1.0 - lambda) * x[i] + lambda * y[i];
    x = std::move(next);
    prev = trace.selections.back();
  }
  return trace;
}

/// Inner sequence: selections prefer grid points of T(z_n) lying within
/// 10*eps of the center surrogate; when none qualify, the plain nearest point
/// is used.
inline IterationTrace center_seeking_iteration(const MultiValuedMap& T, const Point& z0,
                                               double lambda, const CompactSet& center_surrogate,
                                               double eps, std::size_t budget) {
  IterationTrace trace;
  trace.step = lambda;
  trace.rule = SelectionRule::anchor_previous;
  trace.start = z0;
  trace.tol = eps;
  trace.budget = budget;
  trace.multivalued = true;
  const NormedSpace& sp = T.space;
  Point z = z0;
  std::optional<Point> prev;
  while (true) {
    CompactSet Tz = evaluate(T, z);
    double res = distance_point_set(sp, z, Tz);
    const Point& anchor = prev ? *prev : z;
    Point y;
    double best = -1.0;
    for (const Point& g : grid_points(Tz, 129)) {
      if (distance_point_set(sp, g, center_surrogate) > 10.0 * eps) continue;
      double d = distance(sp, anchor, g);
      if (best < 0.0 || d < best) {
        best = d;
        y = g;
      }
    }
    if (best < 0.0) y = nearest_point(sp, anchor, Tz).point;
    trace.points.push_back(z);
    trace.selections.push_back(y);
    trace.residuals.push_back(res);
    if (res <= eps) {
      trace.converged = true;
      trace.termination = "converged";
      break;
    }
    if (trace.points.size() >= budget) {
      trace.termination = "budget_exhausted";
      break;
    }
    Point next(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) next[i] = (1.0 - lambda) * z[i] + lambda * y[i];
    z = std::move(next);
    prev = trace.selections.back();
  }
  return trace;
}

}  // namespace detail

inline CommonFixedPointResult solve_common(const CommonFixedPointProblem& problem) {
  if (!(problem.lambda > 0.0 && problem.lambda < 1.0))
    throw std::invalid_argument("solve_common: lambda must lie in (0,1)");
  const NormedSpace& sp = problem.space;
  CommonFixedPointResult out;

  out.commuting =
      check_commuting(problem.t, problem.T, problem.domain, problem.sample_size, problem.seed);
  if (!out.commuting.commuting) {
    out.status = SolveStatus::aborted_commuting;
    out.diagnostics.push_back("maps do not commute on the sampled pairs");
    return out;
  }

  {  // Declared-condition spot checks; failures are warnings, not errors.
    SampleSpec ss;
    ss.grid_per_dim = 41;
    ss.random_pairs = 512;
    ss.seed = problem.seed;
    PairSample ps = build_pair_sample(sp, problem.domain, exception_points(problem.t), ss);
    if (!check_Clambda(problem.t, problem.lambda, ps, problem.threads).satisfied)
      out.diagnostics.push_back("warning: single-valued map failed its conditional check at lambda");
    MuEstimate mu = minimal_mu(problem.t, ps);
    if (!check_E(problem.t, std::max(1.0, mu.mu), ps, problem.threads).satisfied)
      out.diagnostics.push_back("warning: single-valued map failed the unconditional bound check");
    PairSample pm = build_pair_sample(sp, problem.domain, exception_points(problem.T), ss);
    if (!check_Clambda(problem.T, problem.lambda, pm, problem.threads).satisfied)
      out.diagnostics.push_back("warning: multivalued map failed its conditional check at lambda");
    MuEstimate muT = minimal_mu(problem.T, pm);
    if (!check_E(problem.T, std::max(1.0, muT.mu), pm, problem.threads).satisfied)
      out.diagnostics.push_back("warning: multivalued map failed the unconditional bound check");
  }

  // Stage 1: Fix(t) surrogate.
  double step = problem.fix_step > 0.0 ? problem.fix_step : std::max(problem.lambda, 0.5);
  std::vector<Point> starts = grid_points(problem.domain, problem.fix_starts);
  out.fix_set = approximate_fix_set(problem.t, starts, step, problem.eps, problem.budget);
  if (out.fix_set.points.empty()) {
    out.status = SolveStatus::aborted_no_fixed_points;
    out.diagnostics.push_back("no certified fixed point of the single-valued map was found");
    return out;
  }
  CompactSet surrogate = detail::hull_of_points(out.fix_set.points);
  out.fix_surrogate = surrogate;

  // Stage 2: T(x) must meet the surrogate for sampled x in it.
  {
    std::vector<Point> probes = out.fix_set.points;
    for (Point& g : grid_points(surrogate, 16)) probes.push_back(std::move(g));
    for (const Point& x : probes) {
      CompactSet Tx = evaluate(problem.T, x);
      double best = -1.0;
      std::vector<Point> candidates = set_vertices(Tx);
      for (Point& g : grid_points(Tx, 64)) candidates.push_back(std::move(g));
      for (const Point& c : candidates) {
        double d = distance_point_set(sp, c, surrogate);
        if (best < 0.0 || d < best) best = d;
      }
      if (best > 10.0 * problem.eps) {
        out.status = SolveStatus::aborted_intersection;
        out.diagnostics.push_back("image of a surrogate point stays " + std::to_string(best) +
                                  " away from the surrogate; intersection hypothesis violated");
        return out;
      }
    }
  }

  // Stage 3: outer averaged sequence inside the surrogate.
  IterationTrace outer =
      detail::constrained_multi_iteration(problem.T, out.fix_set.points.front(), problem.lambda,
                                          surrogate, problem.eps, problem.budget,
                                          out.max_projection_drift);
  out.outer = outer;

  // Stage 4: asymptotic center of the outer sequence relative to the surrogate.
  std::size_t W = std::min<std::size_t>(std::max<std::size_t>(1, problem.window),
                                        outer.points.size());
  AsymptoticResult center =
      asymptotic_radius_center(sp, outer.points, surrogate, W, problem.resolution);
  out.center = center;
  CompactSet center_surrogate = detail::hull_of_points(center.center);

  // Stage 5: inner sequence from a center point, with one restart allowed.
  IterationTrace inner = detail::center_seeking_iteration(
      problem.T, center.center.front(), problem.lambda, center_surrogate, problem.eps,
      problem.budget);
  if (!inner.converged && center.center.size() > 1) {
    out.diagnostics.push_back("inner sequence stalled; restarting from another center point");
    inner = detail::center_seeking_iteration(problem.T, center.center.back(), problem.lambda,
                                             center_surrogate, problem.eps, problem.budget);
  }
  out.inner = inner;

  // Stage 6: certify the limit.
  out.z = inner.points.back();
  out.residual_single = distance(sp, out.z, evaluate(problem.t, out.z));
  out.residual_multi = distance_point_set(sp, out.z, evaluate(problem.T, out.z));
  bool ok = inner.converged && out.residual_single <= problem.eps &&
            out.residual_multi <= problem.eps;
  out.status = ok ? SolveStatus::certified : SolveStatus::non_certified;
  if (!ok)
    out.diagnostics.push_back("result returned without certification: residuals " +
                              std::to_string(out.residual_single) + ", " +
                              std::to_string(out.residual_multi));
  return out;
}

}  // namespace nonex
