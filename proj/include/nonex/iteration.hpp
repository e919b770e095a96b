// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Averaged fixed-point iterations. The single-valued scheme updates
// x_{n+1} = r*t(x_n) + (1-r)*x_n; the multivalued scheme replaces t(x_n) by a
// selected point of T(x_n), either the one nearest the previous selection
// (the default, which the common-fixed-point construction relies on) or the
// one nearest the current iterate. Convergence is declared on the residual
// dist(x_n, T x_n), not on the iterates being Cauchy.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nonex/maps.hpp"
#include "nonex/sets.hpp"
#include "nonex/space.hpp"

namespace nonex {

enum class SelectionRule {
  anchor_previous,  // y_n nearest to y_{n-1} in T(x_n)
  anchor_current,   // y_n nearest to x_n in T(x_n)
};

inline const char* to_string(SelectionRule r) {
  return r == SelectionRule::anchor_previous ? "anchor-previous" : "anchor-current";
}

/// Trace of one iteration run. points[k] is x_{k+1}; selections[k] is the
/// image point y_k used to step away from points[k] (for single-valued maps,
/// t(x_{k+1}) itself); residuals[k] is the fixed-point residual at points[k].
/// Invariant: points[k+1] = (1-step)*points[k] + step*selections[k] to 1e-12.
struct IterationTrace {
  double step = 0.5;
  SelectionRule rule = SelectionRule::anchor_previous;
  Point start;
  double tol = 1e-8;
  std::size_t budget = 100000;
  bool multivalued = false;

  std::vector<Point> points;
  std::vector<Point> selections;
  std::vector<double> residuals;
  bool converged = false;
  std::string termination;  // "converged" | "budget_exhausted"
  std::vector<std::string> warnings;

  /// First 1-based index with residual <= threshold, if any.
  std::optional<std::size_t> first_below(double threshold) const {
    for (std::size_t i = 0; i < residuals.size(); ++i)
      if (residuals[i] <= threshold) return i + 1;
    return std::nullopt;
  }
};

/// Worst componentwise deviation of the recorded recurrence; tests pin this
/// at 1e-12.
inline double trace_recurrence_deviation(const IterationTrace& t) {
  double dev = 0.0;
  for (std::size_t k = 0; k + 1 < t.points.size(); ++k) {
    for (std::size_t i = 0; i < t.points[k].size(); ++i) {
      double expect = (1.0 - t.step) * t.points[k][i] + t.step * t.selections[k][i];
      dev = std::max(dev, std::fabs(t.points[k + 1][i] - expect));
    }
  }
  return dev;
}

inline IterationTrace krasnoselskii_single(const SingleValuedMap& t, const Point& x1, double r,
                                           double tol, std::size_t budget) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("krasnoselskii_single: r must lie in (0,1)");
  check_in_domain(t.space, t.domain, x1, "krasnoselskii_single");
  IterationTrace trace;
  trace.step = r;
  trace.start = x1;
  trace.tol = tol;
  trace.budget = budget;
  if (t.declared_lambda && r < *t.declared_lambda)
    trace.warnings.push_back("step r below the map's declared condition parameter; the residual guarantee may not apply");
  Point x = x1;
  while (true) {
    Point img = evaluate(t, x);
    double res = distance(t.space, x, img);
    trace.points.push_back(x);
    trace.selections.push_back(img);
    trace.residuals.push_back(res);
    if (res <= tol) {
      trace.converged = true;
      trace.termination = "converged";
      break;
    }
    if (trace.points.size() >= budget) {
      trace.termination = "budget_exhausted";
      break;
    }
    Point next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) next[i] = (1.0 - r) * x[i] + r * img[i];
    x = std::move(next);
  }
  return trace;
}

inline IterationTrace krasnoselskii_multi(const MultiValuedMap& T, const Point& x1, double lambda,
                                          SelectionRule rule, double tol, std::size_t budget) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("krasnoselskii_multi: lambda must lie in (0,1)");
  check_in_domain(T.space, T.domain, x1, "krasnoselskii_multi");
  IterationTrace trace;
  trace.step = lambda;
  trace.rule = rule;
  trace.start = x1;
  trace.tol = tol;
  trace.budget = budget;
  trace.multivalued = true;
  Point x = x1;
  std::optional<Point> prev_selection;
  while (true) {
    CompactSet Tx = evaluate(T, x);
    double res = distance_point_set(T.space, x, Tx);
    // First selection is anchored at the start point under either rule.
    const Point& anchor = (rule == SelectionRule::anchor_previous && prev_selection)
                              ? *prev_selection
                              : x;
    Point y = nearest_point(T.space, anchor, Tx).point;
    trace.points.push_back(x);
    trace.selections.push_back(y);
    trace.residuals.push_back(res);
    if (res <= tol) {
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
    prev_selection = trace.selections.back();
  }
  return trace;
}

/// Two-sequence averaging property: if z_{n+1} = lambda*w_n + (1-lambda)*z_n
/// and the w increments never exceed the z increments, the gap ||w_n - z_n||
/// must die out. The check verifies both hypotheses on the given finite
/// sequences and then tests the conclusion on the trailing tenth.
struct GoebelKirkReport {
  bool recurrence_ok = false;
  double max_recurrence_deviation = 0.0;
  bool increments_ok = false;
  double max_increment_excess = 0.0;
  bool hypotheses_hold = false;
  bool conclusion_evaluated = false;
  bool conclusion_pass = false;
  double min_tail_gap = 0.0;
  double final_gap = 0.0;
  std::string note;
};

inline GoebelKirkReport goebel_kirk_check(const NormedSpace& space, const std::vector<Point>& z,
                                          const std::vector<Point>& w, double lambda,
                                          double run_tol) {
  if (z.size() != w.size()) throw std::invalid_argument("goebel_kirk_check: length mismatch");
  if (z.size() < 3) throw std::invalid_argument("goebel_kirk_check: needs length >= 3");
  GoebelKirkReport rep;
  for (std::size_t n = 0; n + 1 < z.size(); ++n)
    for (std::size_t i = 0; i < z[n].size(); ++i) {
      double expect = lambda * w[n][i] + (1.0 - lambda) * z[n][i];
      rep.max_recurrence_deviation =
          std::max(rep.max_recurrence_deviation, std::fabs(z[n + 1][i] - expect));
    }
  rep.recurrence_ok = rep.max_recurrence_deviation <= 1e-12;
  for (std::size_t n = 0; n + 1 < w.size(); ++n) {
    double wi = distance(space, w[n + 1], w[n]);
    double zi = distance(space, z[n + 1], z[n]);
    rep.max_increment_excess = std::max(rep.max_increment_excess, wi - zi);
  }
  rep.increments_ok = rep.max_increment_excess <= 1e-12;
  rep.hypotheses_hold = rep.recurrence_ok && rep.increments_ok;
  rep.final_gap = distance(space, w.back(), z.back());
  if (!rep.hypotheses_hold) {
    rep.note = "hypotheses failed; conclusion not evaluated";
    return rep;
  }
  rep.conclusion_evaluated = true;
  std::size_t tail = std::max<std::size_t>(1, z.size() / 10);
  double m = rep.final_gap;
  for (std::size_t n = z.size() - tail; n < z.size(); ++n)
    m = std::min(m, distance(space, w[n], z[n]));
  rep.min_tail_gap = m;
  rep.conclusion_pass = m <= run_tol;
  return rep;
}

/// Convenience wrapper over a trace's (x, y) pair. Traces too short for the
/// three-term check report through the final gap alone.
inline GoebelKirkReport goebel_kirk_from_trace(const NormedSpace& space, const IterationTrace& t,
                                               double run_tol) {
  if (t.points.size() < 3) {
    GoebelKirkReport rep;
    rep.recurrence_ok = rep.increments_ok = rep.hypotheses_hold = true;
    rep.conclusion_evaluated = true;
    rep.final_gap = t.points.empty()
                        ? 0.0
                        : distance(space, t.selections.back(), t.points.back());
    rep.min_tail_gap = rep.final_gap;
    rep.conclusion_pass = rep.final_gap <= run_tol || t.converged;
    rep.note = "trace shorter than three steps; gap check only";
    return rep;
  }
  return goebel_kirk_check(space, t.points, t.selections, t.step, run_tol);
}

/// Near-fixed points of t found by running the averaged iteration from many
/// starts. Points are certified (residual re-verified at collection time),
/// deduplicated, and checked for midpoint closure as a convexity probe.
struct FixSetApproximation {
  std::vector<Point> points;
  double dedup_radius = 0.0;
  double tol = 0.0;
  std::size_t starts = 0;
  std::size_t converged_runs = 0;
  bool convexity_checked = false;
  bool convex_ok = false;
  double max_midpoint_residual = 0.0;
  std::vector<std::string> diagnostics;
};

inline FixSetApproximation approximate_fix_set(const SingleValuedMap& t,
                                               const std::vector<Point>& starts, double r,
                                               double tol, std::size_t budget) {
  if (starts.empty()) throw std::invalid_argument("approximate_fix_set: needs at least one start");
  FixSetApproximation fix;
  fix.tol = tol;
  fix.dedup_radius = 10.0 * tol;
  fix.starts = starts.size();
  for (const Point& s : starts) {
    IterationTrace trace = krasnoselskii_single(t, s, r, tol, budget);
    if (!trace.converged) continue;
    ++fix.converged_runs;
    const Point& candidate = trace.points.back();
    if (distance(t.space, candidate, evaluate(t, candidate)) > tol) continue;
    bool dup = false;
    for (const Point& kept : fix.points)
      if (distance(t.space, kept, candidate) <= fix.dedup_radius) {
        dup = true;
        break;
      }
    if (!dup) fix.points.push_back(candidate);
  }
  if (fix.points.empty()) {
    fix.diagnostics.push_back("no start converged within the budget");
    return fix;
  }
  fix.convexity_checked = true;
  fix.convex_ok = true;
  for (std::size_t i = 0; i < fix.points.size(); ++i)
    for (std::size_t j = i + 1; j < fix.points.size(); ++j) {
      Point m = midpoint(fix.points[i], fix.points[j]);
      double res = distance(t.space, m, evaluate(t, m));
      fix.max_midpoint_residual = std::max(fix.max_midpoint_residual, res);
      if (res > 10.0 * tol) fix.convex_ok = false;
    }
  return fix;
}

}  // namespace nonex
