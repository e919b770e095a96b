// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <cmath>
#include <stdexcept>

#include "nonex/conditions.hpp"
#include "nonex/maps.hpp"

using namespace nonex;

namespace {

// Re-derive a stored witness from the map itself.
bool witness_reproduces(const SingleValuedMap& t, const Witness& w, const char* kind) {
  double lhs = 0.0, rhs = 0.0;
  if (std::string(kind) == "nonexpansive" || std::string(kind) == "C_lambda") {
    lhs = distance(t.space, evaluate(t, w.x), evaluate(t, w.y));
    rhs = distance(t.space, w.x, w.y);
  } else {  // E_mu with the stored rhs recomputed from mu is not needed here
    return false;
  }
  return std::fabs(lhs - w.lhs) <= 1e-12 && std::fabs(rhs - w.rhs) <= 1e-12 &&
         lhs > rhs + violation_margin;
}

}  // namespace

TEST_CASE("pair samples are deterministic and include exception nodes") {
  SingleValuedMap t = suzuki_example();
  PairSample a = default_sample(t, 5);
  PairSample b = default_sample(t, 5);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); i += 997) {
    CHECK(exact_equal(a.pairs[i].first, b.pairs[i].first));
    CHECK(exact_equal(a.pairs[i].second, b.pairs[i].second));
  }
  bool has_exception = false;
  for (const Point& n : a.nodes) has_exception |= (n[0] == 3.0);
  CHECK(has_exception);
  CHECK(a.pairs.size() >= 10000);
}

TEST_CASE("half-residual check: catalog verdicts") {
  PairSample suzuki_sample = default_sample(suzuki_example());
  ConditionReport suz = check_C_single(suzuki_example(), suzuki_sample);
  CHECK(suz.satisfied);
  CHECK(suz.violation_count == 0);

  NormedSpace sp = lp_space(1, 2.0);
  SingleValuedMap id = identity_map(sp, make_interval(0.0, 1.0));
  CHECK(check_C_single(id, default_sample(id)).satisfied);

  // The jump map at lambda=0.5 coincides with the half-residual case.
  SingleValuedMap g5 = garcia_example(0.5);
  CHECK(check_C_single(g5, default_sample(g5)).satisfied);
  // At lambda=0.8 the half-residual premise is weaker than the map tolerates.
  SingleValuedMap g8 = garcia_example(0.8);
  CHECK_FALSE(check_C_single(g8, default_sample(g8)).satisfied);
}

TEST_CASE("conditional check at the map's own parameter and below it") {
  SingleValuedMap t = garcia_example(0.5);
  PairSample sample = default_sample(t);
  CHECK(check_Clambda(t, 0.5, sample).satisfied);

  ConditionReport below = check_Clambda(t, 0.25, sample);
  CHECK_FALSE(below.satisfied);
  bool found_at_one = false;
  for (const Witness& w : below.violations) {
    CHECK(witness_reproduces(t, w, "C_lambda"));
    if (w.x[0] == 1.0) found_at_one = true;
  }
  CHECK(found_at_one);

  // Hand-checked violating pair: x = 1, y = 0.89.
  // premise: 0.25 * |1 - 0.6| = 0.1 <= 0.11; consequent: |0.6 - 0.445| = 0.155 > 0.11.
  Point x{1.0}, y{0.89};
  double premise_lhs = 0.25 * distance(t.space, x, evaluate(t, x));
  double dxy = distance(t.space, x, y);
  CHECK(premise_lhs <= dxy);
  double lhs = distance(t.space, evaluate(t, x), evaluate(t, y));
  CHECK(lhs == Approx(0.155).margin(1e-12));
  CHECK(dxy == Approx(0.11).margin(1e-12));
  CHECK(lhs > dxy + violation_margin);

  CHECK_THROWS_AS(check_Clambda(t, 0.0, sample), std::invalid_argument);
  CHECK_THROWS_AS(check_Clambda(t, 1.0, sample), std::invalid_argument);
}

TEST_CASE("multivalued conditional and unconditional checks on the [0,5] map") {
  MultiValuedMap T = multivalued_example();
  PairSample sample = default_sample(T);
  CHECK(check_Clambda(T, 0.5, sample).satisfied);
  CHECK(check_C_multi(T, sample).satisfied);

  MuEstimate mu = minimal_mu(T, sample);
  CHECK(mu.mu >= 1.0);
  CHECK(check_E(T, std::max(1.0, mu.mu), sample).satisfied);

  ConditionReport ne = check_nonexpansive(T, sample);
  CHECK_FALSE(ne.satisfied);
  // Direct evaluation of the derived witness pair (5, 4.9):
  // H({1}, [0, 0.98]) = 1 > 0.1.
  double h = hausdorff(T.space, evaluate(T, {5.0}), evaluate(T, {4.9}));
  CHECK(h == Approx(1.0));
  CHECK(h > distance(T.space, {5.0}, {4.9}) + violation_margin);
}

TEST_CASE("unconditional bound check on the jump map") {
  SingleValuedMap t = garcia_example(0.5);
  PairSample sample = default_sample(t);
  CHECK(check_E(t, 1.25, sample).satisfied);

  ConditionReport tight = check_E(t, 1.0, sample);
  CHECK_FALSE(tight.satisfied);
  REQUIRE(tight.worst.has_value());
  // Witnesses cluster at the jump: x = 1 with y close to 1.
  CHECK(tight.worst->x[0] == 1.0);
  // Direct check at (1, 0.999): |1 - 0.4995| = 0.5005 > 0.4 + 0.001.
  double lhs = distance(t.space, {1.0}, evaluate(t, {0.999}));
  double rhs = 1.0 * distance(t.space, {1.0}, evaluate(t, {1.0})) + distance(t.space, {1.0}, {0.999});
  CHECK(lhs == Approx(0.5005).margin(1e-12));
  CHECK(rhs == Approx(0.401).margin(1e-12));

  CHECK_THROWS_AS(check_E(t, 0.99, sample), std::invalid_argument);
}

TEST_CASE("nonexpansiveness check on the discontinuous [0,3] map") {
  SingleValuedMap t = suzuki_example();
  PairSample sample = default_sample(t);
  ConditionReport rep = check_nonexpansive(t, sample);
  CHECK_FALSE(rep.satisfied);
  for (const Witness& w : rep.violations) CHECK(witness_reproduces(t, w, "nonexpansive"));
  // The derived witness (3, 2.9): |1 - 0| = 1 > 0.1.
  double lhs = distance(t.space, evaluate(t, {3.0}), evaluate(t, {2.9}));
  CHECK(lhs == Approx(1.0));
  CHECK(lhs > distance(t.space, {3.0}, {2.9}) + violation_margin);

  NormedSpace sp = lp_space(1, 2.0);
  SingleValuedMap half = affine_map(sp, make_interval(0.0, 1.0), 0.5, {0.0});
  CHECK(check_nonexpansive(half, default_sample(half)).satisfied);
}

TEST_CASE("minimal mu estimates match the jump map's closed form") {
  for (double lambda : {0.5, 0.8}) {
    SingleValuedMap t = garcia_example(lambda);
    MuEstimate est = minimal_mu(t, default_sample(t));
    CHECK(est.mu == Approx((2.0 + lambda) / 2.0).margin(0.01));
    REQUIRE(est.argmax.has_value());
    // The maximizing ratio re-derives from the map.
    double num = distance(t.space, est.argmax->x, evaluate(t, est.argmax->y)) -
                 distance(t.space, est.argmax->x, est.argmax->y);
    double den = distance(t.space, est.argmax->x, evaluate(t, est.argmax->x));
    CHECK(num / den == Approx(est.mu).margin(1e-12));
  }
  NormedSpace sp = lp_space(1, 2.0);
  SingleValuedMap id = identity_map(sp, make_interval(0.0, 1.0));
  MuEstimate est = minimal_mu(id, default_sample(id));
  CHECK(est.mu == 1.0);
  CHECK(est.contributing_pairs == 0);
}

TEST_CASE("monotonicity probe across parameters") {
  SingleValuedMap g = garcia_example(0.5);
  PairSample sample = default_sample(g);
  CHECK(monotonicity_probe(g, 0.5, 0.9, sample));
  CHECK(monotonicity_probe(g, 0.25, 0.3, sample));  // premise fails, vacuously true
  MultiValuedMap T = multivalued_example();
  CHECK(monotonicity_probe(T, 0.5, 0.75, default_sample(T)));
  CHECK_THROWS_AS(monotonicity_probe(g, 0.9, 0.5, sample), std::invalid_argument);
}

TEST_CASE("vacuous verdicts are flagged") {
  NormedSpace sp = lp_space(1, 2.0);
  SingleValuedMap id = identity_map(sp, make_interval(0.0, 1.0));
  ConditionReport rep = check_Clambda(id, 0.5, default_sample(id));
  CHECK(rep.satisfied);
  CHECK(rep.vacuous);  // every premise has a zero left-hand side

  // A sample holding only fixed points of the map.
  SingleValuedMap half = affine_map(sp, make_interval(0.0, 1.0), 0.5, {0.0});
  PairSample fixed_only;
  fixed_only.pairs = {{{0.0}, {0.0}}};
  fixed_only.description = "fixed points only";
  ConditionReport fp = check_Clambda(half, 0.5, fixed_only);
  CHECK(fp.satisfied);
  CHECK(fp.vacuous);

  PairSample empty;
  empty.description = "empty";
  ConditionReport er = check_E(half, 1.0, empty);
  CHECK(er.satisfied);
  CHECK(er.vacuous);
}

TEST_CASE("violations arrive lexicographically sorted and capped") {
  SingleValuedMap t = suzuki_example();
  ConditionReport rep = check_nonexpansive(t, default_sample(t));
  REQUIRE(rep.violations.size() >= 2);
  CHECK(rep.violations.size() <= rep.witness_cap);
  CHECK(rep.violation_count >= rep.violations.size());
  for (std::size_t i = 0; i + 1 < rep.violations.size(); ++i)
    CHECK_FALSE(witness_lex_less(rep.violations[i + 1], rep.violations[i]));
  REQUIRE(rep.worst.has_value());
  for (const Witness& w : rep.violations) CHECK(w.gap() <= rep.worst->gap() + 1e-15);
}

TEST_CASE("stored multivalued witnesses re-derive from the map") {
  MultiValuedMap T = multivalued_example();
  ConditionReport rep = check_nonexpansive(T, default_sample(T));
  REQUIRE_FALSE(rep.violations.empty());
  for (const Witness& w : rep.violations) {
    double lhs = hausdorff(T.space, evaluate(T, w.x), evaluate(T, w.y));
    double rhs = distance(T.space, w.x, w.y);
    CHECK(std::fabs(lhs - w.lhs) <= 1e-12);
    CHECK(std::fabs(rhs - w.rhs) <= 1e-12);
    CHECK(lhs > rhs + violation_margin);
  }
}

TEST_CASE("threaded checking merges to the same report") {
  SingleValuedMap t = suzuki_example();
  PairSample sample = default_sample(t);
  ConditionReport one = check_nonexpansive(t, sample, 1);
  ConditionReport four = check_nonexpansive(t, sample, 4);
  CHECK(one.violation_count == four.violation_count);
  REQUIRE(one.violations.size() == four.violations.size());
  for (std::size_t i = 0; i < one.violations.size(); ++i) {
    CHECK(exact_equal(one.violations[i].x, four.violations[i].x));
    CHECK(exact_equal(one.violations[i].y, four.violations[i].y));
  }
  CHECK(one.worst->gap() == four.worst->gap());
}
