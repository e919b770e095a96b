// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Compact subsets of l_p spaces and the metric machinery on them: point-set
// distance, nearest-point projection onto convex sets, and the Hausdorff
// metric.
//
// Hausdorff distances involving polytopes are computed by maximizing over
// vertices. This is exact whenever the target set B is convex: x -> dist(x, B)
// is then a convex function, and a convex function attains its maximum over
// conv{v_1..v_k} at one of the v_i. Both directed deviations are computed this
// way and the larger one is returned. For a non-convex target (a finite set
// with two or more points) the vertex argument fails; the one-dimensional case
// is still handled exactly through the peaks of the piecewise-linear distance
// function, and higher-dimensional combinations are rejected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include "nonex/random.hpp"
#include "nonex/space.hpp"

namespace nonex {

inline constexpr double membership_tol = 1e-9;

/// Closed interval [lo, hi] on the line; dimension-1 sets only.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Convex hull of a nonempty vertex list. Interior points in the list are
/// harmless: they do not change the hull.
struct Polytope {
  std::vector<Point> vertices;
};

/// Nonempty finite set of points, not assumed convex.
struct FinitePointSet {
  std::vector<Point> points;
};

using CompactSet = std::variant<Interval, Polytope, FinitePointSet>;

inline CompactSet make_interval(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("make_interval: requires lo <= hi");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("make_interval: endpoints must be finite");
  return Interval{lo, hi};
}

inline CompactSet make_polytope(std::vector<Point> vertices) {
  if (vertices.empty()) throw std::invalid_argument("make_polytope: vertex list is empty");
  const std::size_t d = vertices.front().size();
  for (const Point& v : vertices) {
    if (v.size() != d) throw std::invalid_argument("make_polytope: mixed vertex dimensions");
    if (!all_finite(v)) throw std::invalid_argument("make_polytope: non-finite vertex");
  }
  return Polytope{std::move(vertices)};
}

inline CompactSet make_point_set(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("make_point_set: point list is empty");
  const std::size_t d = points.front().size();
  for (const Point& p : points) {
    if (p.size() != d) throw std::invalid_argument("make_point_set: mixed point dimensions");
    if (!all_finite(p)) throw std::invalid_argument("make_point_set: non-finite point");
  }
  return FinitePointSet{std::move(points)};
}

inline int set_dimension(const CompactSet& s) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Interval>)
          return 1;
        else if constexpr (std::is_same_v<T, Polytope>)
          return static_cast<int>(v.vertices.front().size());
        else
          return static_cast<int>(v.points.front().size());
      },
      s);
}

/// Convex as a set: intervals and polytopes always, finite sets only when
/// they hold a single point.
inline bool is_convex_set(const CompactSet& s) {
  if (const auto* f = std::get_if<FinitePointSet>(&s)) return f->points.size() == 1;
  return true;
}

inline void check_set_dimension(const NormedSpace& space, const CompactSet& s, const char* where) {
  if (set_dimension(s) != space.dimension)
    throw std::invalid_argument(std::string(where) + ": set/space dimension mismatch");
}

namespace detail {

inline double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

/// Euclidean projection onto the probability simplex {w >= 0, sum w = 1}.
inline std::vector<double> project_simplex(std::vector<double> w) {
  std::vector<double> u = w;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  if (rho == 0) theta = (css - 1.0) / static_cast<double>(u.size());
  for (double& c : w) c = std::max(0.0, c - theta);
  double s = std::accumulate(w.begin(), w.end(), 0.0);
  if (s > 0.0)
    for (double& c : w) c /= s;
  else
    w.assign(w.size(), 1.0 / static_cast<double>(w.size()));
  return w;
}

inline Point combine(const std::vector<Point>& vertices, const std::vector<double>& w) {
  Point r(vertices.front().size(), 0.0);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += w[i] * vertices[i][k];
  return r;
}

/// Gradient of r -> (1/2)||r||_p^2 for finite p > 1; also the Euclidean case.
inline Point p_norm_sq_gradient(const NormedSpace& space, const Point& r) {
  Point g(r.size(), 0.0);
  if (space.p == 2.0) {
    for (std::size_t i = 0; i < r.size(); ++i) g[i] = r[i];
    return g;
  }
  double n = norm(space, r);
  if (n == 0.0) return g;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double a = std::fabs(r[i]);
    if (a == 0.0) continue;
    g[i] = std::pow(n, 2.0 - space.p) * std::pow(a, space.p - 1.0) * (r[i] > 0 ? 1.0 : -1.0);
  }
  return g;
}

/// A subgradient of r -> ||r||_p at p in {1, inf}.
inline Point p_norm_subgradient(const NormedSpace& space, const Point& r) {
  Point g(r.size(), 0.0);
  if (std::isinf(space.p)) {
    std::size_t j = 0;
    double m = -1.0;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (std::fabs(r[i]) > m) {
        m = std::fabs(r[i]);
        j = i;
      }
    if (m > 0.0) g[j] = (r[j] > 0 ? 1.0 : -1.0);
    return g;
  }
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] != 0.0) g[i] = (r[i] > 0 ? 1.0 : -1.0);
  return g;
}

struct WeightSolve {
  std::vector<double> weights;
  Point point;
  double distance = 0.0;
};

/// Away-step Frank-Wolfe for min_w (1/2)||x - Vw||_2^2 over the simplex.
/// Exact line search. `dist_tol` is a tolerance on the returned point: the
/// loop stops once the Frank-Wolfe gap certifies f - f* <= dist_tol^2 / 2,
/// which bounds the distance error by dist_tol, or once a step no longer
/// moves the weights.
inline WeightSolve frank_wolfe_l2(const NormedSpace& space, const Point& x,
                                  const std::vector<Point>& vertices, std::vector<double> w,
                                  double dist_tol, int budget) {
  const std::size_t nv = vertices.size();
  const double gap_threshold = 0.5 * dist_tol * dist_tol;
  Point y = combine(vertices, w);
  for (int it = 0; it < budget; ++it) {
    Point r = sub(y, x);  // gradient of the objective w.r.t. y
    // g_i = <r, v_i>
    std::vector<double> g(nv, 0.0);
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t k = 0; k < r.size(); ++k) g[i] += r[k] * vertices[i][k];
    double gw = 0.0;
    for (std::size_t i = 0; i < nv; ++i) gw += g[i] * w[i];
    std::size_t s = 0, a = 0;
    bool have_a = false;
    for (std::size_t i = 0; i < nv; ++i) {
      if (g[i] < g[s]) s = i;
      if (w[i] > 0.0 && (!have_a || g[i] > g[a])) {
        a = i;
        have_a = true;
      }
    }
    double fw_gap = gw - g[s];
    if (fw_gap <= gap_threshold) break;
    bool away = have_a && (g[a] - gw > fw_gap) && w[a] < 1.0;
    Point dir;          // direction in point space
    double gamma_max;   // feasible step bound
    double ddot;        // <grad, dir>
    if (away) {
      dir = sub(y, vertices[a]);
      gamma_max = w[a] / (1.0 - w[a]);
      ddot = gw - g[a];
    } else {
      dir = sub(vertices[s], y);
      gamma_max = 1.0;
      ddot = g[s] - gw;
    }
    double dd = 0.0;
    for (double c : dir) dd += c * c;
    double gamma = gamma_max;
    if (dd > 0.0) gamma = clamp(-ddot / dd, 0.0, gamma_max);
    if (gamma <= 0.0) break;
    std::vector<double> next = w;
    if (away) {
      for (std::size_t i = 0; i < nv; ++i) next[i] *= (1.0 + gamma);
      next[a] -= gamma;
    } else {
      for (std::size_t i = 0; i < nv; ++i) next[i] *= (1.0 - gamma);
      next[s] += gamma;
    }
    for (double& c : next)
      if (c < 1e-15) c = 0.0;
    double sum = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& c : next) c /= sum;
    if (next == w) break;  // floating-point fixpoint: exact line search stalled
    w = std::move(next);
    y = combine(vertices, w);
  }
  return WeightSolve{w, y, distance(space, x, y)};
}

/// Projected gradient with backtracking for min_w (1/2)||x - Vw||_p^2,
/// finite p in (1, inf).
inline WeightSolve projected_gradient_lp(const NormedSpace& space, const Point& x,
                                         const std::vector<Point>& vertices,
                                         std::vector<double> w, int budget) {
  const std::size_t nv = vertices.size();
  auto value = [&](const std::vector<double>& ww) {
    double n = distance(space, x, combine(vertices, ww));
    return 0.5 * n * n;
  };
  double f = value(w);
  double step = 1.0;
  for (int it = 0; it < budget; ++it) {
    Point y = combine(vertices, w);
    Point gy = p_norm_sq_gradient(space, sub(y, x));
    std::vector<double> grad(nv, 0.0);
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t k = 0; k < gy.size(); ++k) grad[i] += gy[k] * vertices[i][k];
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> trial(nv);
      for (std::size_t i = 0; i < nv; ++i) trial[i] = w[i] - step * grad[i];
      trial = project_simplex(std::move(trial));
      double ft = value(trial);
      double move = 0.0;
      for (std::size_t i = 0; i < nv; ++i) move += (trial[i] - w[i]) * (trial[i] - w[i]);
      if (ft <= f - 1e-4 * move / std::max(step, 1e-300)) {
        if (move <= 1e-24) {
          w = std::move(trial);
          f = ft;
          accepted = false;  // converged
          break;
        }
        w = std::move(trial);
        f = ft;
        step *= 1.5;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  Point y = combine(vertices, w);
  return WeightSolve{w, y, distance(space, x, y)};
}

/// Projected subgradient with diminishing steps for min_w ||x - Vw||_p,
/// p in {1, inf}. Keeps the best iterate seen.
inline WeightSolve subgradient_flat(const NormedSpace& space, const Point& x,
                                    const std::vector<Point>& vertices, std::vector<double> w,
                                    int budget) {
  const std::size_t nv = vertices.size();
  double diam = 0.0;
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = i + 1; j < nv; ++j)
      diam = std::max(diam, distance(space, vertices[i], vertices[j]));
  std::vector<double> best_w = w;
  double best_f = distance(space, x, combine(vertices, w));
  for (int it = 0; it < budget; ++it) {
    Point y = combine(vertices, w);
    Point u = p_norm_subgradient(space, sub(y, x));
    std::vector<double> grad(nv, 0.0);
    double gn = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      for (std::size_t k = 0; k < u.size(); ++k) grad[i] += u[k] * vertices[i][k];
      gn += grad[i] * grad[i];
    }
    gn = std::sqrt(gn);
    if (gn == 0.0) break;
    double alpha = (diam > 0 ? diam : 1.0) / (gn * std::sqrt(static_cast<double>(it + 1)));
    for (std::size_t i = 0; i < nv; ++i) w[i] -= alpha * grad[i];
    w = project_simplex(std::move(w));
    double f = distance(space, x, combine(vertices, w));
    if (f < best_f) {
      best_f = f;
      best_w = w;
    }
  }
  Point y = combine(vertices, best_w);
  return WeightSolve{best_w, y, distance(space, x, y)};
}

}  // namespace detail

/// Result of a nearest-point computation. `unique` is evidence-based: the
/// multi-start search found no two near-optimal candidates farther apart than
/// `uniqueness_tol`. In a strictly convex space the minimizer is unique by
/// theory; for p in {1, inf} ties are broken toward the lexicographically
/// smallest minimizing weight vector produced by the search.
struct ProjectionResult {
  Point point;
  std::vector<double> weights;  // convex-combination weights (polytopes only)
  double distance = 0.0;
  bool unique = true;
  double candidate_spread = 0.0;
};

inline constexpr double projection_gap_tol = 1e-9;
inline constexpr int projection_budget = 10000;
inline constexpr double uniqueness_tol = 1e-6;

inline ProjectionResult nearest_point(const NormedSpace& space, const Point& x,
                                      const CompactSet& s) {
  check_dimension(space, x, "nearest_point");
  check_set_dimension(space, s, "nearest_point");
  if (const auto* f = std::get_if<FinitePointSet>(&s)) {
    if (f->points.size() != 1)
      throw std::invalid_argument("nearest_point: set must be convex (interval, polytope, or a single point)");
    return ProjectionResult{f->points.front(), {1.0}, distance(space, x, f->points.front()), true, 0.0};
  }
  if (const auto* iv = std::get_if<Interval>(&s)) {
    double c = detail::clamp(x[0], iv->lo, iv->hi);
    return ProjectionResult{{c}, {}, std::fabs(x[0] - c), true, 0.0};
  }
  const auto& poly = std::get<Polytope>(s);
  const std::vector<Point>& V = poly.vertices;
  const std::size_t nv = V.size();
  if (nv == 1) return ProjectionResult{V[0], {1.0}, distance(space, x, V[0]), true, 0.0};
  if (space.dimension == 1) {
    // One-dimensional hull is an interval; the clamp is exact for every p.
    double lo = V[0][0], hi = V[0][0];
    for (const Point& v : V) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    double c = detail::clamp(x[0], lo, hi);
    std::vector<double> w(nv, 0.0);
    // Express the clamp as weights on the two extreme vertices.
    std::size_t ilo = 0, ihi = 0;
    for (std::size_t i = 0; i < nv; ++i) {
      if (V[i][0] == lo) ilo = i;
      if (V[i][0] == hi) ihi = i;
    }
    if (hi == lo || c == lo)
      w[ilo] = 1.0;
    else if (c == hi)
      w[ihi] = 1.0;
    else {
      double t = (c - lo) / (hi - lo);
      w[ilo] = 1.0 - t;
      w[ihi] += t;
    }
    return ProjectionResult{{c}, w, std::fabs(x[0] - c), true, 0.0};
  }

  // Multi-start weight search: one start at each vertex plus the centroid.
  std::vector<std::vector<double>> starts;
  for (std::size_t i = 0; i < nv; ++i) {
    std::vector<double> e(nv, 0.0);
    e[i] = 1.0;
    starts.push_back(std::move(e));
  }
  starts.emplace_back(nv, 1.0 / static_cast<double>(nv));

  std::vector<detail::WeightSolve> candidates;
  for (const auto& w0 : starts) {
    detail::WeightSolve ws;
    if (space.p == 2.0)
      ws = detail::frank_wolfe_l2(space, x, V, w0, projection_gap_tol, projection_budget);
    else if (!std::isinf(space.p) && space.p > 1.0)
      ws = detail::projected_gradient_lp(space, x, V, w0, projection_budget);
    else
      ws = detail::subgradient_flat(space, x, V, w0, projection_budget);
    candidates.push_back(std::move(ws));
  }
  double best = candidates.front().distance;
  for (const auto& c : candidates) best = std::min(best, c.distance);
  const detail::WeightSolve* chosen = nullptr;
  double spread = 0.0;
  std::vector<const detail::WeightSolve*> near;
  for (const auto& c : candidates)
    if (c.distance <= best + projection_gap_tol) near.push_back(&c);
  for (std::size_t i = 0; i < near.size(); ++i)
    for (std::size_t j = i + 1; j < near.size(); ++j)
      spread = std::max(spread, distance(space, near[i]->point, near[j]->point));
  for (const auto* c : near)
    if (!chosen || std::lexicographical_compare(c->weights.begin(), c->weights.end(),
                                                chosen->weights.begin(), chosen->weights.end()))
      chosen = c;
  ProjectionResult r;
  r.point = chosen->point;
  r.weights = chosen->weights;
  r.distance = chosen->distance;
  r.candidate_spread = spread;
  r.unique = spread <= uniqueness_tol;
  return r;
}

/// dist(x, S) = inf { ||x - z|| : z in S }. Exact for intervals and finite
/// sets; for polytopes it is the value at the nearest-point output.
inline double distance_point_set(const NormedSpace& space, const Point& x, const CompactSet& s) {
  check_dimension(space, x, "distance_point_set");
  check_set_dimension(space, s, "distance_point_set");
  if (const auto* iv = std::get_if<Interval>(&s)) {
    return std::fabs(x[0] - detail::clamp(x[0], iv->lo, iv->hi));
  }
  if (const auto* f = std::get_if<FinitePointSet>(&s)) {
    double d = distance(space, x, f->points.front());
    for (const Point& p : f->points) d = std::min(d, distance(space, x, p));
    return d;
  }
  return nearest_point(space, x, s).distance;
}

inline bool contains(const NormedSpace& space, const CompactSet& s, const Point& x,
                     double tol = membership_tol) {
  return distance_point_set(space, x, s) <= tol;
}

namespace detail {

/// sup_{a in A} dist(a, B), exact by case analysis; see the header comment.
inline double directed_deviation(const NormedSpace& space, const CompactSet& A,
                                 const CompactSet& B) {
  if (const auto* f = std::get_if<FinitePointSet>(&A)) {
    double m = 0.0;
    for (const Point& p : f->points) m = std::max(m, distance_point_set(space, p, B));
    return m;
  }
  if (const auto* iv = std::get_if<Interval>(&A)) {
    const auto* fb = std::get_if<FinitePointSet>(&B);
    if (fb && fb->points.size() > 1) {
      // dist(., B) is piecewise linear with peaks at midpoints of consecutive
      // target points; the sup over [lo, hi] is attained at an endpoint or at
      // a peak inside the interval.
      std::vector<double> targets;
      for (const Point& p : fb->points) targets.push_back(p[0]);
      std::sort(targets.begin(), targets.end());
      double m = std::max(distance_point_set(space, {iv->lo}, B),
                          distance_point_set(space, {iv->hi}, B));
      for (std::size_t i = 0; i + 1 < targets.size(); ++i) {
        double peak = clamp(0.5 * (targets[i] + targets[i + 1]), iv->lo, iv->hi);
        m = std::max(m, distance_point_set(space, {peak}, B));
      }
      return m;
    }
    return std::max(distance_point_set(space, {iv->lo}, B),
                    distance_point_set(space, {iv->hi}, B));
  }
  const auto& poly = std::get<Polytope>(A);
  if (!is_convex_set(B)) {
    if (space.dimension == 1) {
      double lo = poly.vertices[0][0], hi = lo;
      for (const Point& v : poly.vertices) {
        lo = std::min(lo, v[0]);
        hi = std::max(hi, v[0]);
      }
      return directed_deviation(space, Interval{lo, hi}, B);
    }
    throw std::invalid_argument(
        "hausdorff: polytope versus multi-point finite set is unsupported above dimension 1");
  }
  double m = 0.0;
  for (const Point& v : poly.vertices) m = std::max(m, distance_point_set(space, v, B));
  return m;
}

}  // namespace detail

/// Hausdorff metric H(A, B) = max of the two directed deviations. Interval
/// pairs use the closed form max(|loA - loB|, |hiA - hiB|).
inline double hausdorff(const NormedSpace& space, const CompactSet& A, const CompactSet& B) {
  check_set_dimension(space, A, "hausdorff");
  check_set_dimension(space, B, "hausdorff");
  const auto* ia = std::get_if<Interval>(&A);
  const auto* ib = std::get_if<Interval>(&B);
  if (ia && ib) return std::max(std::fabs(ia->lo - ib->lo), std::fabs(ia->hi - ib->hi));
  return std::max(detail::directed_deviation(space, A, B),
                  detail::directed_deviation(space, B, A));
}

namespace detail {

inline void compositions(int total, int parts, std::vector<int>& cur,
                         const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int k = total; k >= 0; --k) {
    cur.push_back(k);
    compositions(total - k, parts - 1, cur, emit);
    cur.pop_back();
  }
}

inline std::size_t barycentric_count(int level, std::size_t nv) {
  // C(level + nv - 1, nv - 1), computed incrementally.
  double c = 1.0;
  for (std::size_t i = 1; i < nv; ++i) c = c * (level + i) / i;
  return static_cast<std::size_t>(c + 0.5);
}

}  // namespace detail

/// Deterministic covering grid of a compact set with roughly `target` points.
/// Intervals get evenly spaced nodes with exact endpoints; polytopes get a
/// barycentric grid (which always contains the vertices); finite sets are
/// returned as-is.
inline std::vector<Point> grid_points(const CompactSet& s, std::size_t target) {
  if (target < 2) target = 2;
  if (const auto* f = std::get_if<FinitePointSet>(&s)) return f->points;
  if (const auto* iv = std::get_if<Interval>(&s)) {
    if (iv->hi == iv->lo) return {Point{iv->lo}};
    std::vector<Point> out;
    out.reserve(target);
    for (std::size_t i = 0; i < target; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(target - 1);
      out.push_back(lerp(Point{iv->lo}, Point{iv->hi}, t));
    }
    return out;
  }
  const auto& poly = std::get<Polytope>(s);
  const std::size_t nv = poly.vertices.size();
  if (nv == 1) return {poly.vertices.front()};
  int level = 1;
  while (detail::barycentric_count(level + 1, nv) <= target) ++level;
  std::vector<Point> out;
  std::vector<int> cur;
  detail::compositions(level, static_cast<int>(nv), cur, [&](const std::vector<int>& comp) {
    std::vector<double> w(nv);
    for (std::size_t i = 0; i < nv; ++i) w[i] = static_cast<double>(comp[i]) / level;
    out.push_back(detail::combine(poly.vertices, w));
  });
  return out;
}

/// Deterministic pseudorandom point of the set.
inline Point sample_point(const CompactSet& s, Rng& rng) {
  if (const auto* iv = std::get_if<Interval>(&s)) return {rng.uniform(iv->lo, iv->hi)};
  if (const auto* f = std::get_if<FinitePointSet>(&s))
    return f->points[static_cast<std::size_t>(rng.below(f->points.size()))];
  const auto& poly = std::get<Polytope>(s);
  const std::size_t nv = poly.vertices.size();
  // Dirichlet(1,..,1) weights via normalized exponentials.
  std::vector<double> w(nv);
  double sum = 0.0;
  for (double& c : w) {
    c = -std::log(1.0 - rng.uniform());
    sum += c;
  }
  for (double& c : w) c /= sum;
  return detail::combine(poly.vertices, w);
}

inline std::vector<Point> set_vertices(const CompactSet& s) {
  if (const auto* iv = std::get_if<Interval>(&s)) {
    if (iv->lo == iv->hi) return {Point{iv->lo}};
    return {Point{iv->lo}, Point{iv->hi}};
  }
  if (const auto* p = std::get_if<Polytope>(&s)) return p->vertices;
  return std::get<FinitePointSet>(s).points;
}

}  // namespace nonex
