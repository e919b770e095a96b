// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Sampled verification of the generalized-nonexpansiveness conditions. A
// check quantifies over a deterministic pair sample, never a continuum, so a
// "satisfied" verdict is evidence and a violation is a certificate: every
// stored witness re-evaluates to lhs > rhs + violation_margin.
//
// Comparison policy: premises use exact <=, consequents flag a violation only
// beyond a 1e-12 margin. This keeps floating-point noise from minting false
// witnesses at the boundary pairs where the catalog maps sit exactly on
// equality.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nonex/maps.hpp"
#include "nonex/parallel.hpp"
#include "nonex/random.hpp"
#include "nonex/sets.hpp"
#include "nonex/space.hpp"

namespace nonex {

inline constexpr double violation_margin = 1e-12;

struct SampleSpec {
  int grid_per_dim = 201;
  std::size_t pair_cap = 100000;
  std::size_t random_pairs = 10000;
  std::uint64_t seed = 0;
};

/// Ordered pairs (x, y) drawn from a map's domain: the full product of a
/// covering grid (exception points always injected as nodes) plus seeded
/// pseudorandom pairs. Deterministic given the sample parameters.
struct PairSample {
  std::vector<Point> nodes;
  std::vector<std::pair<Point, Point>> pairs;
  std::string description;
  std::uint64_t seed = 0;
};

inline PairSample build_pair_sample(const NormedSpace& space, const CompactSet& domain,
                                    const std::vector<Point>& exceptions,
                                    const SampleSpec& spec = {}) {
  PairSample s;
  s.seed = spec.seed;
  // Largest grid whose pair product fits the cap.
  std::size_t limit = static_cast<std::size_t>(std::sqrt(static_cast<double>(spec.pair_cap)));
  std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(spec.grid_per_dim) > 0
                                                 ? static_cast<std::size_t>(spec.grid_per_dim)
                                                 : 2,
                                             std::max<std::size_t>(limit, 2));
  if (space.dimension > 1) {
    // grid_points caps the polytope grid by total node count.
    target = std::max<std::size_t>(limit, 2);
  }
  s.nodes = grid_points(domain, target);
  for (const Point& e : exceptions) {
    if (!contains(space, domain, e)) continue;
    bool present = false;
    for (const Point& n : s.nodes)
      if (exact_equal(n, e)) {
        present = true;
        break;
      }
    if (!present) s.nodes.push_back(e);
  }
  while (s.nodes.size() * s.nodes.size() > spec.pair_cap && s.nodes.size() > 2)
    s.nodes.pop_back();
  s.pairs.reserve(s.nodes.size() * s.nodes.size() + spec.random_pairs);
  for (const Point& x : s.nodes)
    for (const Point& y : s.nodes) s.pairs.emplace_back(x, y);
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < spec.random_pairs; ++i) {
    Point x = sample_point(domain, rng);
    Point y = sample_point(domain, rng);
    s.pairs.emplace_back(std::move(x), std::move(y));
  }
  s.description = "grid " + std::to_string(s.nodes.size()) + " nodes, " +
                  std::to_string(s.pairs.size()) + " pairs, seed " + std::to_string(spec.seed);
  return s;
}

inline PairSample default_sample(const SingleValuedMap& map, std::uint64_t seed = 0) {
  SampleSpec spec;
  spec.seed = seed;
  return build_pair_sample(map.space, map.domain, exception_points(map), spec);
}

inline PairSample default_sample(const MultiValuedMap& map, std::uint64_t seed = 0) {
  SampleSpec spec;
  spec.seed = seed;
  return build_pair_sample(map.space, map.domain, exception_points(map), spec);
}

struct Witness {
  Point x;
  Point y;
  double lhs = 0.0;
  double rhs = 0.0;

  double gap() const { return lhs - rhs; }
};

inline bool witness_lex_less(const Witness& a, const Witness& b) {
  if (a.x != b.x) return lex_less(a.x, b.x);
  return lex_less(a.y, b.y);
}

/// Verdict of one sampled condition check. satisfied <=> violations empty;
/// `vacuous` means no pair exercised a nontrivial premise (conditional
/// checks) or the sample was empty (unconditional ones). `violations` keeps
/// the lexicographically smallest witnesses up to `witness_cap`; `worst`
/// keeps the maximal-gap witness regardless.
struct ConditionReport {
  std::string condition;  // "C" | "C_lambda" | "E_mu" | "nonexpansive"
  std::string flavor;     // "single" | "multi"
  std::optional<double> parameter;
  std::string sample_description;
  std::size_t pairs_checked = 0;
  std::size_t premise_hits = 0;  // premise held with positive left-hand side
  bool satisfied = true;
  bool vacuous = false;
  std::size_t violation_count = 0;
  std::vector<Witness> violations;
  std::optional<Witness> worst;
  std::size_t witness_cap = 64;
};

namespace detail {

struct PairVerdict {
  bool premise_held = false;
  bool premise_nontrivial = false;
  std::optional<Witness> violation;
};

struct ChunkStats {
  std::size_t premise_hits = 0;
  std::size_t violation_count = 0;
  std::vector<Witness> violations;
  std::optional<Witness> worst;
};

template <class PairCheck>
ConditionReport run_check(std::string condition, std::string flavor, std::optional<double> parameter,
                          const PairSample& sample, std::size_t witness_cap, int threads,
                          PairCheck&& check) {
  ConditionReport rep;
  rep.condition = std::move(condition);
  rep.flavor = std::move(flavor);
  rep.parameter = parameter;
  rep.sample_description = sample.description;
  rep.pairs_checked = sample.pairs.size();
  rep.witness_cap = witness_cap;
  auto stats = run_chunked<ChunkStats>(
      sample.pairs.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        ChunkStats cs;
        for (std::size_t i = begin; i < end; ++i) {
          PairVerdict v = check(sample.pairs[i].first, sample.pairs[i].second);
          if (v.premise_nontrivial) ++cs.premise_hits;
          if (v.violation) {
            ++cs.violation_count;
            if (!cs.worst || v.violation->gap() > cs.worst->gap()) cs.worst = v.violation;
            cs.violations.push_back(std::move(*v.violation));
            if (cs.violations.size() > 2 * witness_cap) {
              std::sort(cs.violations.begin(), cs.violations.end(), witness_lex_less);
              cs.violations.resize(witness_cap);
            }
          }
        }
        return cs;
      });
  for (auto& cs : stats) {
    rep.premise_hits += cs.premise_hits;
    rep.violation_count += cs.violation_count;
    if (cs.worst && (!rep.worst || cs.worst->gap() > rep.worst->gap())) rep.worst = cs.worst;
    rep.violations.insert(rep.violations.end(), cs.violations.begin(), cs.violations.end());
  }
  std::sort(rep.violations.begin(), rep.violations.end(), witness_lex_less);
  if (rep.violations.size() > witness_cap) rep.violations.resize(witness_cap);
  rep.satisfied = rep.violation_count == 0;
  return rep;
}

}  // namespace detail

// --- Single-valued checks ---------------------------------------------------

inline ConditionReport check_Clambda(const SingleValuedMap& t, double lambda,
                                     const PairSample& sample, int threads = 1) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("check_Clambda: lambda must lie in (0,1)");
  const NormedSpace& sp = t.space;
  auto rep = detail::run_check(
      "C_lambda", "single", lambda, sample, 64, threads,
      [&](const Point& x, const Point& y) {
        detail::PairVerdict v;
        Point tx = evaluate(t, x);
        double res = distance(sp, x, tx);
        double dxy = distance(sp, x, y);
        if (!(lambda * res <= dxy)) return v;
        v.premise_held = true;
        v.premise_nontrivial = res > 0.0;
        double lhs = distance(sp, tx, evaluate(t, y));
        if (lhs > dxy + violation_margin) v.violation = Witness{x, y, lhs, dxy};
        return v;
      });
  rep.vacuous = rep.premise_hits == 0;
  return rep;
}

inline ConditionReport check_C_single(const SingleValuedMap& t, const PairSample& sample,
                                      int threads = 1) {
  auto rep = check_Clambda(t, 0.5, sample, threads);
  rep.condition = "C";
  rep.parameter.reset();
  return rep;
}

inline ConditionReport check_E(const SingleValuedMap& t, double mu, const PairSample& sample,
                               int threads = 1) {
  if (!(mu >= 1.0)) throw std::invalid_argument("check_E: mu must be >= 1");
  const NormedSpace& sp = t.space;
  auto rep = detail::run_check(
      "E_mu", "single", mu, sample, 64, threads, [&](const Point& x, const Point& y) {
        detail::PairVerdict v;
        double lhs = distance(sp, x, evaluate(t, y));
        double rhs = mu * distance(sp, x, evaluate(t, x)) + distance(sp, x, y);
        if (lhs > rhs + violation_margin) v.violation = Witness{x, y, lhs, rhs};
        return v;
      });
  rep.vacuous = rep.pairs_checked == 0;
  return rep;
}

inline ConditionReport check_nonexpansive(const SingleValuedMap& t, const PairSample& sample,
                                          int threads = 1) {
  const NormedSpace& sp = t.space;
  auto rep = detail::run_check(
      "nonexpansive", "single", std::nullopt, sample, 64, threads,
      [&](const Point& x, const Point& y) {
        detail::PairVerdict v;
        double lhs = distance(sp, evaluate(t, x), evaluate(t, y));
        double rhs = distance(sp, x, y);
        if (lhs > rhs + violation_margin) v.violation = Witness{x, y, lhs, rhs};
        return v;
      });
  rep.vacuous = rep.pairs_checked == 0;
  return rep;
}

// --- Multivalued checks: premises use dist(x, Tx), consequents use the
// --- Hausdorff metric.

inline ConditionReport check_Clambda(const MultiValuedMap& T, double lambda,
                                     const PairSample& sample, int threads = 1) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("check_Clambda: lambda must lie in (0,1)");
  const NormedSpace& sp = T.space;
  auto rep = detail::run_check(
      "C_lambda", "multi", lambda, sample, 64, threads,
      [&](const Point& x, const Point& y) {
        detail::PairVerdict v;
        CompactSet Tx = evaluate(T, x);
        double res = distance_point_set(sp, x, Tx);
        double dxy = distance(sp, x, y);
        if (!(lambda * res <= dxy)) return v;
        v.premise_held = true;
        v.premise_nontrivial = res > 0.0;
        double lhs = hausdorff(sp, Tx, evaluate(T, y));
        if (lhs > dxy + violation_margin) v.violation = Witness{x, y, lhs, dxy};
        return v;
      });
  rep.vacuous = rep.premise_hits == 0;
  return rep;
}

inline ConditionReport check_C_multi(const MultiValuedMap& T, const PairSample& sample,
                                     int threads = 1) {
  auto rep = check_Clambda(T, 0.5, sample, threads);
  rep.condition = "C";
  rep.parameter.reset();
  return rep;
}

inline ConditionReport check_E(const MultiValuedMap& T, double mu, const PairSample& sample,
                               int threads = 1) {
  if (!(mu >= 1.0)) throw std::invalid_argument("check_E: mu must be >= 1");
  const NormedSpace& sp = T.space;
  auto rep = detail::run_check(
      "E_mu", "multi", mu, sample, 64, threads, [&](const Point& x, const Point& y) {
        detail::PairVerdict v;
        double lhs = distance_point_set(sp, x, evaluate(T, y));
        double rhs = mu * distance_point_set(sp, x, evaluate(T, x)) + distance(sp, x, y);
        if (lhs > rhs + violation_margin) v.violation = Witness{x, y, lhs, rhs};
        return v;
      });
  rep.vacuous = rep.pairs_checked == 0;
  return rep;
}

inline ConditionReport check_nonexpansive(const MultiValuedMap& T, const PairSample& sample,
                                          int threads = 1) {
  const NormedSpace& sp = T.space;
  auto rep = detail::run_check(
      "nonexpansive", "multi", std::nullopt, sample, 64, threads,
      [&](const Point& x, const Point& y) {
        detail::PairVerdict v;
        double lhs = hausdorff(sp, evaluate(T, x), evaluate(T, y));
        double rhs = distance(sp, x, y);
        if (lhs > rhs + violation_margin) v.violation = Witness{x, y, lhs, rhs};
        return v;
      });
  rep.vacuous = rep.pairs_checked == 0;
  return rep;
}

// --- Extremal-parameter estimation ------------------------------------------

/// Sample supremum of (||x - Ty|| - ||x - y||) / ||x - Tx|| over pairs with a
/// positive denominator, floored at 1. A lower estimate of the true minimal
/// unconditional-bound constant; the maximizing pair is reported.
struct MuEstimate {
  double mu = 1.0;
  std::optional<Witness> argmax;  // lhs = ratio numerator, rhs = denominator
  std::size_t contributing_pairs = 0;
};

namespace detail {

template <class Residual, class CrossDist>
MuEstimate minimal_mu_impl(const NormedSpace& sp, const PairSample& sample, Residual residual,
                           CrossDist cross) {
  MuEstimate est;
  double best = -1.0;
  for (const auto& [x, y] : sample.pairs) {
    double den = residual(x);
    if (!(den > 0.0)) continue;
    ++est.contributing_pairs;
    double num = cross(x, y) - distance(sp, x, y);
    double ratio = num / den;
    if (ratio > best) {
      best = ratio;
      est.argmax = Witness{x, y, num, den};
    }
  }
  est.mu = std::max(1.0, best);
  return est;
}

}  // namespace detail

inline MuEstimate minimal_mu(const SingleValuedMap& t, const PairSample& sample) {
  return detail::minimal_mu_impl(
      t.space, sample,
      [&](const Point& x) { return distance(t.space, x, evaluate(t, x)); },
      [&](const Point& x, const Point& y) { return distance(t.space, x, evaluate(t, y)); });
}

inline MuEstimate minimal_mu(const MultiValuedMap& T, const PairSample& sample) {
  return detail::minimal_mu_impl(
      T.space, sample,
      [&](const Point& x) { return distance_point_set(T.space, x, evaluate(T, x)); },
      [&](const Point& x, const Point& y) {
        return distance_point_set(T.space, x, evaluate(T, y));
      });
}

/// Meta-check of the checker: satisfaction at lambda1 must imply satisfaction
/// at lambda2 > lambda1 on the same sample.
template <class Map>
bool monotonicity_probe(const Map& map, double lambda1, double lambda2, const PairSample& sample,
                        int threads = 1) {
  if (!(0.0 < lambda1 && lambda1 < lambda2 && lambda2 < 1.0))
    throw std::invalid_argument("monotonicity_probe: requires 0 < lambda1 < lambda2 < 1");
  if (!check_Clambda(map, lambda1, sample, threads).satisfied) return true;
  return check_Clambda(map, lambda2, sample, threads).satisfied;
}

}  // namespace nonex
