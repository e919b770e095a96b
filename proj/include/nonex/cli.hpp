// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Command-line harness. Exit codes: 0 = success or condition satisfied,
// 1 = condition violated / non-certified result (a report is still written),
// 2 = usage or config error (the message names the offending field).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nonex/io.hpp"
#include "nonex/parallel.hpp"
#include "nonex/suite.hpp"

namespace nonex::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_violated = 1;
inline constexpr int exit_usage = 2;

struct GlobalFlags {
  std::string config_path;
  std::string out_path;
  std::string trace_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0 = available parallelism
  std::optional<double> tol;
};

namespace detail {

inline json load_config(const GlobalFlags& flags) {
  if (flags.config_path.empty()) throw ConfigError("--config", "missing required flag");
  std::ifstream in(flags.config_path);
  if (!in) throw ConfigError("--config", "cannot open '" + flags.config_path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("--config", "top level must be a JSON object");
  return j;
}

inline void emit(const json& report, const GlobalFlags& flags, std::ostream& out) {
  if (!flags.out_path.empty()) {
    std::ofstream f(flags.out_path);
    if (!f) throw ConfigError("--out", "cannot open '" + flags.out_path + "' for writing");
    f << report.dump(2) << "\n";
  } else {
    out << report.dump(2) << "\n";
  }
}

inline void write_trace(const IterationTrace& trace, const std::string& dir,
                        const std::string& name) {
  std::string path = dir.empty() ? name : dir + "/" + name;
  std::ofstream f(path);
  if (!f) throw ConfigError("--trace-dir", "cannot open '" + path + "' for writing");
  f << trace_to_csv(trace);
}

inline std::optional<NormedSpace> optional_space(const json& j) {
  if (!j.contains("space")) return std::nullopt;
  return cfg::parse_space(j.at("space"), "space");
}

inline std::optional<CompactSet> optional_domain(const json& j) {
  if (!j.contains("domain")) return std::nullopt;
  return cfg::parse_set(j.at("domain"), "domain");
}

inline std::uint64_t effective_seed(const json& j, const GlobalFlags& flags) {
  if (flags.seed) return *flags.seed;
  if (j.contains("seed")) return cfg::as_count(j.at("seed"), "seed");
  return 0;
}

inline int effective_threads(const GlobalFlags& flags) {
  return flags.threads > 0 ? flags.threads : default_thread_count();
}

struct AnyMap {
  std::optional<SingleValuedMap> single;
  std::optional<MultiValuedMap> multi;
  const NormedSpace& space() const { return single ? single->space : multi->space; }
  const CompactSet& domain() const { return single ? single->domain : multi->domain; }
};

inline AnyMap parse_any_map(const json& j, const char* key, const json& root) {
  const json& mj = cfg::require(root, key, "");
  AnyMap m;
  auto space = optional_space(root);
  auto domain = optional_domain(root);
  if (cfg::map_spec_is_multivalued(mj))
    m.multi = cfg::parse_multi_map(mj, key, space, domain);
  else
    m.single = cfg::parse_single_map(mj, key, space, domain);
  return m;
}

inline SampleSpec parse_sample_spec(const json& j, std::uint64_t seed) {
  SampleSpec ss;
  ss.seed = seed;
  if (!j.contains("sample")) return ss;
  const json& s = j.at("sample");
  if (!s.is_object()) throw ConfigError("sample", "expected an object");
  if (s.contains("grid")) ss.grid_per_dim = static_cast<int>(cfg::as_count(s.at("grid"), "sample.grid"));
  if (s.contains("random_pairs")) ss.random_pairs = cfg::as_count(s.at("random_pairs"), "sample.random_pairs");
  if (s.contains("pair_cap")) ss.pair_cap = cfg::as_count(s.at("pair_cap"), "sample.pair_cap");
  return ss;
}

inline int run_check_conditions(const json& j, const GlobalFlags& flags, std::ostream& out) {
  AnyMap map = parse_any_map(j, "map", j);
  std::string condition = cfg::as_string(cfg::require(j, "condition", ""), "condition");
  std::uint64_t seed = effective_seed(j, flags);
  SampleSpec ss = parse_sample_spec(j, seed);
  int threads = effective_threads(flags);

  PairSample sample =
      map.single
          ? build_pair_sample(map.single->space, map.single->domain, exception_points(*map.single), ss)
          : build_pair_sample(map.multi->space, map.multi->domain, exception_points(*map.multi), ss);

  json report;
  ConditionReport rep;
  if (condition == "C") {
    rep = map.single ? check_C_single(*map.single, sample, threads)
                     : check_C_multi(*map.multi, sample, threads);
  } else if (condition == "C_lambda") {
    double lambda = cfg::as_number(cfg::require(j, "lambda", ""), "lambda");
    if (!(lambda > 0.0 && lambda < 1.0))
      throw ConfigError("lambda", "expected a number in (0,1)");
    rep = map.single ? check_Clambda(*map.single, lambda, sample, threads)
                     : check_Clambda(*map.multi, lambda, sample, threads);
  } else if (condition == "E") {
    MuEstimate est = map.single ? minimal_mu(*map.single, sample) : minimal_mu(*map.multi, sample);
    double mu = j.contains("mu") ? cfg::as_number(j.at("mu"), "mu") : std::max(1.0, est.mu);
    if (!(mu >= 1.0)) throw ConfigError("mu", "expected a number >= 1");
    rep = map.single ? check_E(*map.single, mu, sample, threads)
                     : check_E(*map.multi, mu, sample, threads);
    report["minimal_mu"] = to_json(est);
  } else if (condition == "nonexpansive") {
    rep = map.single ? check_nonexpansive(*map.single, sample, threads)
                     : check_nonexpansive(*map.multi, sample, threads);
  } else {
    throw ConfigError("condition", "expected one of: C, C_lambda, E, nonexpansive");
  }
  report["report"] = to_json(rep);
  report["map"] = map.single ? map.single->name : map.multi->name;
  emit(report, flags, out);
  return rep.satisfied ? exit_ok : exit_violated;
}

inline IterationTrace run_iteration_from_config(const json& j, const std::string& path,
                                                const GlobalFlags& flags) {
  AnyMap map = parse_any_map(j, "map", j);
  Point start = cfg::as_point(cfg::require(j, "start", path), cfg::join(path, "start"));
  double step = 0.5;
  if (j.contains("step"))
    step = cfg::as_number(j.at("step"), cfg::join(path, "step"));
  else if (j.contains("r"))
    step = cfg::as_number(j.at("r"), cfg::join(path, "r"));
  else if (j.contains("lambda"))
    step = cfg::as_number(j.at("lambda"), cfg::join(path, "lambda"));
  double tol = flags.tol ? *flags.tol
                         : (j.contains("tol") ? cfg::as_number(j.at("tol"), cfg::join(path, "tol"))
                                              : 1e-8);
  std::size_t budget =
      j.contains("budget") ? cfg::as_count(j.at("budget"), cfg::join(path, "budget")) : 100000;
  if (map.single) return krasnoselskii_single(*map.single, start, step, tol, budget);
  SelectionRule rule = j.contains("rule")
                           ? cfg::parse_rule(j.at("rule"), cfg::join(path, "rule"))
                           : SelectionRule::anchor_previous;
  return krasnoselskii_multi(*map.multi, start, step, rule, tol, budget);
}

inline int run_iterate(const json& j, const GlobalFlags& flags, std::ostream& out) {
  IterationTrace trace = run_iteration_from_config(j, "", flags);
  write_trace(trace, flags.trace_dir, "iterate_trace.csv");
  json report{{"trace", trace_summary(trace)},
              {"trace_csv", flags.trace_dir + "/iterate_trace.csv"}};
  emit(report, flags, out);
  return trace.converged ? exit_ok : exit_violated;
}

inline int run_asymptotic_center(const json& j, const GlobalFlags& flags, std::ostream& out) {
  NormedSpace space = j.contains("space") ? cfg::parse_space(j.at("space"), "space") : lp_space(1, 2.0);
  CompactSet D = cfg::parse_set(cfg::require(j, "domain", ""), "domain");
  std::vector<Point> sequence;
  if (j.contains("sequence")) {
    const json& s = j.at("sequence");
    if (!s.is_array() || s.empty()) throw ConfigError("sequence", "expected a nonempty array");
    for (std::size_t i = 0; i < s.size(); ++i)
      sequence.push_back(cfg::as_point(s[i], "sequence[" + std::to_string(i) + "]"));
  } else if (j.contains("iterate")) {
    IterationTrace trace = run_iteration_from_config(j.at("iterate"), "iterate", flags);
    sequence = trace.points;
  } else {
    throw ConfigError("sequence", "missing field (provide \"sequence\" or \"iterate\")");
  }
  std::size_t W = j.contains("window")
                      ? cfg::as_count(j.at("window"), "window")
                      : std::min<std::size_t>(64, std::max<std::size_t>(1, sequence.size() / 2));
  double resolution =
      j.contains("resolution") ? cfg::as_number(j.at("resolution"), "resolution") : 1e-3;
  AsymptoticResult res = asymptotic_radius_center(space, sequence, D, W, resolution);
  json report{{"asymptotic", to_json(res)}};
  if (j.contains("regularity")) {
    const json& r = j.at("regularity");
    std::size_t K = r.contains("K") ? cfg::as_count(r.at("K"), "regularity.K") : 8;
    std::uint64_t seed = effective_seed(j, flags);
    report["regularity"] = to_json(regularity_probe(space, sequence, D, K, seed, W, resolution));
  }
  emit(report, flags, out);
  return exit_ok;
}

inline int run_check_commuting(const json& j, const GlobalFlags& flags, std::ostream& out) {
  AnyMap t = parse_any_map(j, "t", j);
  AnyMap T = parse_any_map(j, "T", j);
  if (!t.single) throw ConfigError("t", "expected a single-valued map");
  if (!T.multi) throw ConfigError("T", "expected a multivalued map");
  CompactSet domain = j.contains("domain") ? cfg::parse_set(j.at("domain"), "domain")
                                           : t.single->domain;
  std::size_t n = j.contains("sample_size") ? cfg::as_count(j.at("sample_size"), "sample_size") : 64;
  CommutingReport rep = check_commuting(*t.single, *T.multi, domain, n, effective_seed(j, flags));
  emit(json{{"commuting", to_json(rep)}}, flags, out);
  return rep.commuting ? exit_ok : exit_violated;
}

inline int run_solve_common(const json& j, const GlobalFlags& flags, std::ostream& out) {
  AnyMap t = parse_any_map(j, "t", j);
  AnyMap T = parse_any_map(j, "T", j);
  if (!t.single) throw ConfigError("t", "expected a single-valued map");
  if (!T.multi) throw ConfigError("T", "expected a multivalued map");
  CommonFixedPointProblem p;
  p.t = *t.single;
  p.T = *T.multi;
  p.space = p.t.space;
  p.domain = j.contains("domain") ? cfg::parse_set(j.at("domain"), "domain") : p.t.domain;
  if (j.contains("lambda")) p.lambda = cfg::as_number(j.at("lambda"), "lambda");
  if (!(p.lambda > 0.0 && p.lambda < 1.0)) throw ConfigError("lambda", "expected a number in (0,1)");
  p.eps = flags.tol ? *flags.tol : (j.contains("eps") ? cfg::as_number(j.at("eps"), "eps") : 1e-8);
  if (j.contains("fix_step")) p.fix_step = cfg::as_number(j.at("fix_step"), "fix_step");
  if (j.contains("fix_starts")) p.fix_starts = cfg::as_count(j.at("fix_starts"), "fix_starts");
  if (j.contains("window")) p.window = cfg::as_count(j.at("window"), "window");
  if (j.contains("resolution")) p.resolution = cfg::as_number(j.at("resolution"), "resolution");
  if (j.contains("budget")) p.budget = cfg::as_count(j.at("budget"), "budget");
  if (j.contains("sample_size")) p.sample_size = cfg::as_count(j.at("sample_size"), "sample_size");
  p.seed = effective_seed(j, flags);
  p.threads = effective_threads(flags);
  CommonFixedPointResult res = solve_common(p);
  if (res.outer) write_trace(*res.outer, flags.trace_dir, "solve_outer_trace.csv");
  if (res.inner) write_trace(*res.inner, flags.trace_dir, "solve_inner_trace.csv");
  emit(to_json(res), flags, out);
  return res.certified() ? exit_ok : exit_violated;
}

inline int run_reproduce(const GlobalFlags& flags, std::ostream& out) {
  suite::SuiteOptions opts;
  opts.threads = effective_threads(flags);
  if (flags.seed) opts.seed = *flags.seed;
  std::vector<suite::CriterionResult> results = suite::run_builtin_suite(opts);
  out << suite::format_table(results);
  if (!flags.out_path.empty()) {
    json arr = json::array();
    for (const auto& r : results)
      arr.push_back(json{{"id", r.id},
                         {"label", r.label},
                         {"pass", r.pass},
                         {"details", r.details},
                         {"seconds", r.seconds}});
    std::ofstream f(flags.out_path);
    if (!f) throw ConfigError("--out", "cannot open '" + flags.out_path + "' for writing");
    f << arr.dump(2) << "\n";
  }
  return suite::all_passed(results) ? exit_ok : exit_violated;
}

}  // namespace detail

/// Parses args (without argv[0]) and runs the selected subcommand. All output
/// goes to the given streams so tests can run the CLI in-process.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"numerical toolkit for generalized nonexpansive maps in finite-dimensional l_p spaces"};
  app.require_subcommand(1);
  GlobalFlags flags;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", flags.config_path, "problem definition (JSON)");
    if (needs_config) opt->required();
    sub->add_option("--out", flags.out_path, "write the JSON report here instead of stdout");
    sub->add_option("--trace-dir", flags.trace_dir, "directory for CSV traces");
    sub->add_option("--seed", [&flags](const std::vector<std::string>& v) {
      flags.seed = std::stoull(v.front());
      return true;
    }, "override the config seed");
    sub->add_option("--threads", flags.threads, "worker threads (0 = available parallelism)");
    sub->add_option("--tol", [&flags](const std::vector<std::string>& v) {
      flags.tol = std::stod(v.front());
      return true;
    }, "override the residual tolerance");
  };

  CLI::App* conditions = app.add_subcommand("check-conditions", "sampled condition check for one map");
  add_common(conditions, true);
  CLI::App* iterate = app.add_subcommand("iterate", "run an averaged fixed-point iteration");
  add_common(iterate, true);
  CLI::App* asym = app.add_subcommand("asymptotic-center", "asymptotic radius / center of a sequence");
  add_common(asym, true);
  CLI::App* commuting = app.add_subcommand("check-commuting", "sampled commuting check for a pair");
  add_common(commuting, true);
  CLI::App* solve = app.add_subcommand("solve-common", "common fixed point of a commuting pair");
  add_common(solve, true);
  CLI::App* repro = app.add_subcommand("reproduce-paper", "run the built-in verification suite");
  add_common(repro, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (repro->parsed()) return detail::run_reproduce(flags, out);
    json config = detail::load_config(flags);
    if (conditions->parsed()) return detail::run_check_conditions(config, flags, out);
    if (iterate->parsed()) return detail::run_iterate(config, flags, out);
    if (asym->parsed()) return detail::run_asymptotic_center(config, flags, out);
    if (commuting->parsed()) return detail::run_check_commuting(config, flags, out);
    if (solve->parsed()) return detail::run_solve_common(config, flags, out);
    err << "usage error: no subcommand selected\n";
    return exit_usage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return exit_usage;
  }
}

}  // namespace nonex::cli
