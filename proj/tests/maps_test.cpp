// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <cmath>
#include <stdexcept>

#include "nonex/maps.hpp"
#include "nonex/sets.hpp"

using namespace nonex;

TEST_CASE("the [0,3] catalog map evaluates its piecewise rule exactly") {
  SingleValuedMap t = suzuki_example();
  CHECK(evaluate(t, {0.0})[0] == 0.0);
  CHECK(evaluate(t, {3.0})[0] == 1.0);
  CHECK(evaluate(t, {2.9})[0] == 0.0);
  CHECK(evaluate(t, {1.7})[0] == 0.0);
  // The exception point matches bitwise, never by tolerance.
  CHECK(evaluate(t, {std::nextafter(3.0, 0.0)})[0] == 0.0);
}

TEST_CASE("the [0,1] catalog map hits its jump value") {
  SingleValuedMap t = garcia_example(0.5);
  CHECK(evaluate(t, {0.6})[0] == Approx(0.3));
  CHECK(evaluate(t, {1.0})[0] == Approx(1.5 / 2.5));
  CHECK(evaluate(t, {0.0})[0] == 0.0);
  CHECK(garcia_example(0.8).declared_mu.value() == Approx(1.4));
  CHECK_THROWS_AS(garcia_example(0.0), std::invalid_argument);
  CHECK_THROWS_AS(garcia_example(1.0), std::invalid_argument);
}

TEST_CASE("the multivalued [0,5] catalog map returns scaled intervals") {
  MultiValuedMap T = multivalued_example();
  CompactSet at2 = evaluate(T, {2.0});
  const auto& iv = std::get<Interval>(at2);
  CHECK(iv.lo == 0.0);
  CHECK(iv.hi == Approx(0.4));

  CompactSet at5 = evaluate(T, {5.0});
  const auto& pts = std::get<FinitePointSet>(at5);
  REQUIRE(pts.points.size() == 1);
  CHECK(pts.points[0][0] == 1.0);

  CompactSet at0 = evaluate(T, {0.0});
  const auto& deg = std::get<Interval>(at0);
  CHECK(deg.lo == 0.0);
  CHECK(deg.hi == 0.0);

  CompactSet near5 = evaluate(T, {std::nextafter(5.0, 0.0)});
  CHECK(std::holds_alternative<Interval>(near5));
}

TEST_CASE("affine and interval-scaling rules evaluate deterministically") {
  NormedSpace sp = lp_space(1, 2.0);
  CompactSet dom = make_interval(0.0, 1.0);
  SingleValuedMap t = affine_map(sp, dom, 0.5, {0.0});
  CHECK(evaluate(t, {0.8})[0] == Approx(0.4));

  MultiValuedMap T;
  T.space = sp;
  T.domain = dom;
  T.rule = IntervalScalingRule{0.5};
  const auto& iv = std::get<Interval>(evaluate(T, {1.0}));
  CHECK(iv.lo == 0.0);
  CHECK(iv.hi == Approx(0.5));
}

TEST_CASE("out-of-domain evaluation is rejected") {
  SingleValuedMap t = garcia_example(0.5);
  CHECK_THROWS_AS(evaluate(t, {1.5}), std::domain_error);
  MultiValuedMap T = multivalued_example();
  CHECK_THROWS_AS(evaluate(T, {-0.1}), std::domain_error);
}

TEST_CASE("catalog maps are self-maps on a thousand-point grid") {
  auto check_single = [](const SingleValuedMap& t) {
    for (const Point& x : grid_points(t.domain, 1000))
      CHECK(distance_point_set(t.space, evaluate(t, x), t.domain) <= 1e-9);
  };
  check_single(suzuki_example());
  check_single(garcia_example(0.3));
  check_single(garcia_example(0.8));

  MultiValuedMap T = multivalued_example();
  for (const Point& x : grid_points(T.domain, 1000)) {
    CompactSet img = evaluate(T, x);
    for (const Point& v : set_vertices(img))
      CHECK(distance_point_set(T.space, v, T.domain) <= 1e-9);
  }
}

TEST_CASE("the multivalued example has fixed-point set {0}") {
  MultiValuedMap T = multivalued_example();
  // Grid scan: any point with a small residual must itself be small.
  std::size_t hits = 0;
  for (const Point& x : grid_points(T.domain, 10000)) {
    double res = distance_point_set(T.space, x, evaluate(T, x));
    if (res <= 1e-6) {
      ++hits;
      CHECK(std::fabs(x[0]) <= 1.3e-6);
    }
  }
  CHECK(hits >= 1);  // x = 0 itself qualifies
  CHECK(distance_point_set(T.space, {0.0}, evaluate(T, {0.0})) == 0.0);
}

TEST_CASE("kc-valued images of the catalog maps are convex") {
  MultiValuedMap T = multivalued_example();
  for (const Point& x : grid_points(T.domain, 100)) CHECK(is_convex_set(evaluate(T, x)));
}
