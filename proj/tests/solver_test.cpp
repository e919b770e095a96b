// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <cmath>
#include <stdexcept>

#include "nonex/io.hpp"
#include "nonex/solver.hpp"

using namespace nonex;

namespace {

CommonFixedPointProblem halving_problem() {
  CommonFixedPointProblem p;
  p.space = lp_space(1, 2.0);
  p.domain = make_interval(0.0, 1.0);
  p.t = affine_map(p.space, p.domain, 0.5, {0.0});
  p.T.space = p.space;
  p.T.domain = p.domain;
  p.T.rule = IntervalScalingRule{0.5};
  p.T.name = "half-interval";
  p.lambda = 0.5;
  return p;
}

}  // namespace

TEST_CASE("commuting check: positive and negative cases") {
  CommonFixedPointProblem p = halving_problem();
  CommutingReport good = check_commuting(p.t, p.T, p.domain, 64, 0);
  CHECK(good.commuting);
  CHECK(good.checks > 0);

  MultiValuedMap constant;
  constant.space = p.space;
  constant.domain = p.domain;
  constant.rule = ConstantSetRule{make_point_set({{1.0}})};
  CommutingReport bad = check_commuting(p.t, constant, p.domain, 64, 0);
  CHECK_FALSE(bad.commuting);
  REQUIRE_FALSE(bad.violations.empty());
  // x = 1 in T(y), t(x) = 0.5, T(t(y)) = {1}: the gap is exactly one half.
  const CommutingWitness& w = bad.violations.front();
  CHECK(w.x[0] == 1.0);
  CHECK(w.tx[0] == Approx(0.5));
  CHECK(w.dist == Approx(0.5));

  NormedSpace sp = lp_space(1, 2.0);
  MultiValuedMap mv = multivalued_example();
  SingleValuedMap id = identity_map(sp, mv.domain);
  CHECK(check_commuting(id, mv, mv.domain, 64, 0).commuting);
}

TEST_CASE("solver certifies the halving pair at zero") {
  CommonFixedPointResult res = solve_common(halving_problem());
  CHECK(res.status == SolveStatus::certified);
  REQUIRE_FALSE(res.z.empty());
  CHECK(std::fabs(res.z[0]) <= 1e-6);
  CHECK(res.residual_single <= 1e-8);
  CHECK(res.residual_multi <= 1e-8);

  // Certified output re-verifies independently.
  CommonFixedPointProblem p = halving_problem();
  CHECK(distance(p.space, res.z, evaluate(p.t, res.z)) <= p.eps);
  CHECK(distance_point_set(p.space, res.z, evaluate(p.T, res.z)) <= p.eps);

  // Membership: inside the domain and near the fixed-point surrogate.
  CHECK(contains(p.space, p.domain, res.z));
  REQUIRE(res.fix_surrogate.has_value());
  CHECK(distance_point_set(p.space, res.z, *res.fix_surrogate) <= 10.0 * p.eps);

  // Both stage traces satisfy the averaging-check hypotheses.
  REQUIRE(res.outer.has_value());
  REQUIRE(res.inner.has_value());
  CHECK(goebel_kirk_from_trace(p.space, *res.outer, 1e-6).conclusion_pass);
  CHECK(goebel_kirk_from_trace(p.space, *res.inner, 1e-6).conclusion_pass);
}

TEST_CASE("solver with the identity reduces to the multivalued iteration") {
  NormedSpace sp = lp_space(1, 2.0);
  MultiValuedMap mv = multivalued_example();
  CommonFixedPointProblem p;
  p.space = sp;
  p.domain = mv.domain;
  p.t = identity_map(sp, mv.domain);
  p.T = mv;
  p.lambda = 0.5;
  CommonFixedPointResult res = solve_common(p);
  CHECK(res.status == SolveStatus::certified);
  CHECK(std::fabs(res.z[0]) <= 1e-6);
  REQUIRE(res.fix_surrogate.has_value());
  // Fix(identity) spans the whole domain.
  const auto& iv = std::get<Interval>(*res.fix_surrogate);
  CHECK(iv.lo == Approx(0.0).margin(1e-9));
  CHECK(iv.hi == Approx(5.0).margin(1e-9));
}

TEST_CASE("solver aborts on a non-commuting pair with a witness") {
  CommonFixedPointProblem p = halving_problem();
  p.T.rule = ConstantSetRule{make_point_set({{1.0}})};
  p.T.name = "constant {1}";
  CommonFixedPointResult res = solve_common(p);
  CHECK(res.status == SolveStatus::aborted_commuting);
  CHECK_FALSE(res.commuting.commuting);
  REQUIRE_FALSE(res.commuting.violations.empty());
  CHECK(res.commuting.violations.front().x[0] == 1.0);
  CHECK(res.z.empty());
}

TEST_CASE("declared-condition failures surface as warnings, not aborts") {
  CommonFixedPointProblem p = halving_problem();
  p.t = garcia_example(0.8);  // commutes with the halving interval map
  p.lambda = 0.4;             // below the map's threshold: the check must fail
  CommonFixedPointResult res = solve_common(p);
  CHECK(res.status == SolveStatus::certified);
  bool warned = false;
  for (const std::string& d : res.diagnostics)
    warned |= d.find("warning") != std::string::npos;
  CHECK(warned);
  CHECK(std::fabs(res.z[0]) <= 1e-6);
}

TEST_CASE("identical problems and seeds serialize identically") {
  CommonFixedPointProblem p = halving_problem();
  p.seed = 123;
  std::string a = to_json(solve_common(p)).dump();
  std::string b = to_json(solve_common(p)).dump();
  CHECK(a == b);
}

TEST_CASE("solver parameter validation") {
  CommonFixedPointProblem p = halving_problem();
  p.lambda = 0.0;
  CHECK_THROWS_AS(solve_common(p), std::invalid_argument);
  p.lambda = 1.0;
  CHECK_THROWS_AS(solve_common(p), std::invalid_argument);
}
