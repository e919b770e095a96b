// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// JSON config parsing and report serialization. Parse errors carry the path
// of the offending field so the CLI can name it; serializers are plain
// value-to-json maps with no hidden state, which keeps byte-identical output
// for identical inputs.

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nonex/asymptotic.hpp"
#include "nonex/conditions.hpp"
#include "nonex/iteration.hpp"
#include "nonex/maps.hpp"
#include "nonex/sets.hpp"
#include "nonex/solver.hpp"
#include "nonex/space.hpp"

namespace nonex {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  std::string path;
  ConfigError(std::string field_path, const std::string& what)
      : std::runtime_error(field_path + ": " + what), path(std::move(field_path)) {}
};

namespace cfg {

inline const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(path.empty() ? key : path + "." + key, "missing field");
  return j.at(key);
}

inline std::string join(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

inline double as_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return inf_exponent;
  }
  throw ConfigError(path, "expected a number");
}

inline std::size_t as_count(const json& j, const std::string& path) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0))
    return j.get<std::size_t>();
  throw ConfigError(path, "expected a nonnegative integer");
}

inline std::string as_string(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  throw ConfigError(path, "expected a string");
}

inline Point as_point(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array() && !j.empty()) {
    Point p;
    for (const auto& c : j) {
      if (!c.is_number()) throw ConfigError(path, "expected an array of numbers");
      p.push_back(c.get<double>());
    }
    return p;
  }
  throw ConfigError(path, "expected a number or an array of numbers");
}

inline NormedSpace parse_space(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  int dim = 1;
  if (j.contains("dimension")) {
    if (!j.at("dimension").is_number_integer() || j.at("dimension").get<int>() < 1)
      throw ConfigError(join(path, "dimension"), "expected a positive integer");
    dim = j.at("dimension").get<int>();
  }
  double p = 2.0;
  if (j.contains("p")) p = as_number(j.at("p"), join(path, "p"));
  if (!(p >= 1.0)) throw ConfigError(join(path, "p"), "expected p >= 1 (or \"inf\")");
  return lp_space(dim, p);
}

inline CompactSet parse_set(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a set literal object");
  if (j.contains("interval")) {
    const auto& a = j.at("interval");
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      throw ConfigError(join(path, "interval"), "expected [lo, hi]");
    double lo = a[0].get<double>(), hi = a[1].get<double>();
    if (!(lo <= hi)) throw ConfigError(join(path, "interval"), "requires lo <= hi");
    return Interval{lo, hi};
  }
  if (j.contains("polytope")) {
    const auto& a = j.at("polytope");
    if (!a.is_array() || a.empty())
      throw ConfigError(join(path, "polytope"), "expected a nonempty array of points");
    std::vector<Point> vs;
    for (std::size_t i = 0; i < a.size(); ++i)
      vs.push_back(as_point(a[i], join(path, "polytope") + "[" + std::to_string(i) + "]"));
    return make_polytope(std::move(vs));
  }
  if (j.contains("points")) {
    const auto& a = j.at("points");
    if (!a.is_array() || a.empty())
      throw ConfigError(join(path, "points"), "expected a nonempty array of points");
    std::vector<Point> ps;
    for (std::size_t i = 0; i < a.size(); ++i)
      ps.push_back(as_point(a[i], join(path, "points") + "[" + std::to_string(i) + "]"));
    return make_point_set(std::move(ps));
  }
  throw ConfigError(path, "expected one of: interval, polytope, points");
}

inline bool map_spec_is_multivalued(const json& j) {
  if (!j.is_object()) return false;
  if (j.contains("interval_scaling") || j.contains("constant_set")) return true;
  if (j.contains("catalog") && j.at("catalog").is_string())
    return j.at("catalog").get<std::string>() == "mv5";
  return false;
}

inline SingleValuedMap parse_single_map(const json& j, const std::string& path,
                                        const std::optional<NormedSpace>& space,
                                        const std::optional<CompactSet>& domain) {
  if (!j.is_object()) throw ConfigError(path, "expected a map object");
  SingleValuedMap m;
  if (j.contains("catalog")) {
    std::string name = as_string(j.at("catalog"), join(path, "catalog"));
    if (name == "suzuki") {
      m = suzuki_example();
    } else if (name == "garcia") {
      double lambda = as_number(require(j, "lambda", path), join(path, "lambda"));
      if (!(lambda > 0.0 && lambda < 1.0))
        throw ConfigError(join(path, "lambda"), "expected a number in (0,1)");
      m = garcia_example(lambda);
    } else if (name == "mv5") {
      throw ConfigError(join(path, "catalog"), "mv5 is multivalued; expected a single-valued map");
    } else {
      throw ConfigError(join(path, "catalog"), "unknown catalog entry '" + name + "'");
    }
  } else if (j.contains("affine")) {
    const json& a = j.at("affine");
    double s = as_number(require(a, "scale", join(path, "affine")), join(path, "affine.scale"));
    Point b = as_point(require(a, "offset", join(path, "affine")), join(path, "affine.offset"));
    if (!space) throw ConfigError("space", "missing field (affine maps need an explicit space)");
    if (!domain) throw ConfigError("domain", "missing field (affine maps need an explicit domain)");
    m = affine_map(*space, *domain, s, std::move(b));
  } else if (j.contains("interval_scaling") || j.contains("constant_set")) {
    throw ConfigError(path, "this rule form is multivalued; expected a single-valued map");
  } else {
    throw ConfigError(path, "expected one of: catalog, affine");
  }
  if (j.contains("exception")) {
    auto add = [&](const json& e, const std::string& epath) {
      Point at = as_point(require(e, "at", epath), join(epath, "at"));
      Point value = as_point(require(e, "value", epath), join(epath, "value"));
      m.exceptions.push_back({std::move(at), std::move(value)});
    };
    const json& e = j.at("exception");
    if (e.is_array())
      for (std::size_t i = 0; i < e.size(); ++i)
        add(e[i], join(path, "exception") + "[" + std::to_string(i) + "]");
    else
      add(e, join(path, "exception"));
  }
  return m;
}

inline MultiValuedMap parse_multi_map(const json& j, const std::string& path,
                                      const std::optional<NormedSpace>& space,
                                      const std::optional<CompactSet>& domain) {
  if (!j.is_object()) throw ConfigError(path, "expected a map object");
  MultiValuedMap m;
  if (j.contains("catalog")) {
    std::string name = as_string(j.at("catalog"), join(path, "catalog"));
    if (name == "mv5")
      m = multivalued_example();
    else
      throw ConfigError(join(path, "catalog"),
                        "'" + name + "' is not a multivalued catalog entry");
  } else if (j.contains("interval_scaling")) {
    const json& a = j.at("interval_scaling");
    double c = as_number(require(a, "c", join(path, "interval_scaling")),
                         join(path, "interval_scaling.c"));
    if (!space) throw ConfigError("space", "missing field (interval_scaling needs a space)");
    if (space->dimension != 1)
      throw ConfigError(join(path, "interval_scaling"), "requires a one-dimensional space");
    if (!domain) throw ConfigError("domain", "missing field (interval_scaling needs a domain)");
    m.space = *space;
    m.domain = *domain;
    m.rule = IntervalScalingRule{c};
    m.name = "interval_scaling(" + std::to_string(c) + ")";
  } else if (j.contains("constant_set")) {
    if (!space) throw ConfigError("space", "missing field (constant_set needs a space)");
    if (!domain) throw ConfigError("domain", "missing field (constant_set needs a domain)");
    m.space = *space;
    m.domain = *domain;
    m.rule = ConstantSetRule{parse_set(j.at("constant_set"), join(path, "constant_set"))};
    m.name = "constant_set";
  } else if (j.contains("affine")) {
    throw ConfigError(path, "affine is single-valued; expected a multivalued map");
  } else {
    throw ConfigError(path, "expected one of: catalog, interval_scaling, constant_set");
  }
  if (j.contains("exception")) {
    auto add = [&](const json& e, const std::string& epath) {
      Point at = as_point(require(e, "at", epath), join(epath, "at"));
      const json& v = require(e, "value", epath);
      CompactSet value = v.is_object() ? parse_set(v, join(epath, "value"))
                                       : CompactSet(make_point_set({as_point(v, join(epath, "value"))}));
      m.exceptions.push_back({std::move(at), std::move(value)});
    };
    const json& e = j.at("exception");
    if (e.is_array())
      for (std::size_t i = 0; i < e.size(); ++i)
        add(e[i], join(path, "exception") + "[" + std::to_string(i) + "]");
    else
      add(e, join(path, "exception"));
  }
  return m;
}

inline SelectionRule parse_rule(const json& j, const std::string& path) {
  std::string s = as_string(j, path);
  if (s == "anchor-previous") return SelectionRule::anchor_previous;
  if (s == "anchor-current") return SelectionRule::anchor_current;
  throw ConfigError(path, "expected \"anchor-previous\" or \"anchor-current\"");
}

}  // namespace cfg

// --- Serialization -----------------------------------------------------------

inline json to_json(const Point& p) { return json(p); }

inline json to_json(const CompactSet& s) {
  if (const auto* iv = std::get_if<Interval>(&s)) return json{{"interval", {iv->lo, iv->hi}}};
  if (const auto* poly = std::get_if<Polytope>(&s)) {
    json vs = json::array();
    for (const Point& v : poly->vertices) vs.push_back(v);
    return json{{"polytope", vs}};
  }
  json ps = json::array();
  for (const Point& p : std::get<FinitePointSet>(s).points) ps.push_back(p);
  return json{{"points", ps}};
}

inline json to_json(const Witness& w) {
  return json{{"x", w.x}, {"y", w.y}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"gap", w.gap()}};
}

inline json to_json(const ConditionReport& r) {
  json j{{"condition", r.condition},
         {"flavor", r.flavor},
         {"sample", r.sample_description},
         {"pairs_checked", r.pairs_checked},
         {"premise_hits", r.premise_hits},
         {"satisfied", r.satisfied},
         {"vacuous", r.vacuous},
         {"violation_count", r.violation_count},
         {"witness_cap", r.witness_cap}};
  j["parameter"] = r.parameter ? json(*r.parameter) : json(nullptr);
  json vs = json::array();
  for (const Witness& w : r.violations) vs.push_back(to_json(w));
  j["violations"] = vs;
  j["worst"] = r.worst ? to_json(*r.worst) : json(nullptr);
  return j;
}

inline json to_json(const MuEstimate& e) {
  json j{{"mu", e.mu},
         {"contributing_pairs", e.contributing_pairs},
         {"note", "sample supremum; a lower estimate of the true minimal mu"}};
  j["argmax"] = e.argmax ? to_json(*e.argmax) : json(nullptr);
  return j;
}

inline json trace_summary(const IterationTrace& t) {
  json j{{"step", t.step},
         {"start", t.start},
         {"tol", t.tol},
         {"budget", t.budget},
         {"multivalued", t.multivalued},
         {"steps", t.points.size()},
         {"converged", t.converged},
         {"termination", t.termination},
         {"final_point", t.points.empty() ? json(nullptr) : json(t.points.back())},
         {"final_residual", t.residuals.empty() ? json(nullptr) : json(t.residuals.back())},
         {"warnings", t.warnings}};
  if (t.multivalued) j["rule"] = to_string(t.rule);
  return j;
}

inline json to_json(const GoebelKirkReport& r) {
  return json{{"recurrence_ok", r.recurrence_ok},
              {"max_recurrence_deviation", r.max_recurrence_deviation},
              {"increments_ok", r.increments_ok},
              {"max_increment_excess", r.max_increment_excess},
              {"hypotheses_hold", r.hypotheses_hold},
              {"conclusion_evaluated", r.conclusion_evaluated},
              {"conclusion_pass", r.conclusion_pass},
              {"min_tail_gap", r.min_tail_gap},
              {"final_gap", r.final_gap},
              {"note", r.note}};
}

inline json to_json(const AsymptoticResult& r) {
  json centers = json::array();
  for (const Point& c : r.center) centers.push_back(c);
  return json{{"radius", r.radius},       {"center", centers},
              {"window", r.window},       {"resolution", r.resolution},
              {"center_tol", r.center_tol}, {"evaluations", r.evaluations}};
}

inline json to_json(const RegularityReport& r) {
  return json{{"base_radius", r.base_radius},
              {"subsequence_radii", r.subsequence_radii},
              {"patterns", r.patterns},
              {"max_deviation", r.max_deviation},
              {"tolerance", r.tolerance},
              {"regular", r.regular},
              {"note", r.note}};
}

inline json to_json(const CommutingReport& r) {
  json vs = json::array();
  for (const CommutingWitness& w : r.violations)
    vs.push_back(json{{"y", w.y}, {"x", w.x}, {"tx", w.tx}, {"dist", w.dist}});
  return json{{"commuting", r.commuting},
              {"checks", r.checks},
              {"violation_count", r.violation_count},
              {"violations", vs},
              {"tol", r.tol}};
}

inline json to_json(const FixSetApproximation& f) {
  json ps = json::array();
  for (const Point& p : f.points) ps.push_back(p);
  return json{{"points", ps},
              {"dedup_radius", f.dedup_radius},
              {"tol", f.tol},
              {"starts", f.starts},
              {"converged_runs", f.converged_runs},
              {"convexity_checked", f.convexity_checked},
              {"convex_ok", f.convex_ok},
              {"max_midpoint_residual", f.max_midpoint_residual},
              {"diagnostics", f.diagnostics}};
}

inline json to_json(const CommonFixedPointResult& r) {
  json j{{"status", to_string(r.status)},
         {"z", r.z},
         {"residual_single", r.residual_single},
         {"residual_multi", r.residual_multi},
         {"commuting", to_json(r.commuting)},
         {"fix_set", to_json(r.fix_set)},
         {"max_projection_drift", r.max_projection_drift},
         {"diagnostics", r.diagnostics}};
  j["fix_surrogate"] = r.fix_surrogate ? to_json(*r.fix_surrogate) : json(nullptr);
  j["center"] = r.center ? to_json(*r.center) : json(nullptr);
  j["outer"] = r.outer ? trace_summary(*r.outer) : json(nullptr);
  j["inner"] = r.inner ? trace_summary(*r.inner) : json(nullptr);
  return j;
}

// --- CSV traces ---------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_coords(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ';';
    s += format_double(p[i]);
  }
  return s;
}

}  // namespace detail

/// One header line, then rows n,x,y,residual with n starting at 1 and
/// coordinates semicolon-joined.
inline std::string trace_to_csv(const IterationTrace& t) {
  std::string out = "n,x,y,residual\n";
  for (std::size_t k = 0; k < t.points.size(); ++k) {
    out += std::to_string(k + 1);
    out += ',';
    out += detail::join_coords(t.points[k]);
    out += ',';
    out += k < t.selections.size() ? detail::join_coords(t.selections[k]) : std::string();
    out += ',';
    out += detail::format_double(t.residuals[k]);
    out += '\n';
  }
  return out;
}

}  // namespace nonex
