// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nonex/cli.hpp"

namespace fs = std::filesystem;
using nonex::json;

namespace {

struct CliRun {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = nonex::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fs::path("nonex-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream f(p);
    f << content;
    return p.string();
  }
  std::string read(const std::string& name) const {
    std::ifstream f(path / name);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_CASE("check-conditions: satisfied and violated exits") {
  TempDir tmp;
  std::string good = tmp.file("good.json", R"({"map":{"catalog":"suzuki"},"condition":"C"})");
  CliRun ok = run({"check-conditions", "--config", good});
  CHECK(ok.exit_code == 0);
  json rep = json::parse(ok.out);
  CHECK(rep.at("report").at("satisfied").get<bool>());
  CHECK(rep.at("report").at("violation_count").get<std::size_t>() == 0);

  std::string bad =
      tmp.file("bad.json", R"({"map":{"catalog":"suzuki"},"condition":"nonexpansive"})");
  CliRun violated = run({"check-conditions", "--config", bad});
  CHECK(violated.exit_code == 1);
  json vrep = json::parse(violated.out);
  CHECK_FALSE(vrep.at("report").at("satisfied").get<bool>());
  CHECK(vrep.at("report").at("worst").at("gap").get<double>() >= 0.9);
}

TEST_CASE("config errors name the offending field and exit 2") {
  TempDir tmp;
  std::string missing_map = tmp.file("m1.json", R"({"condition":"C"})");
  CliRun r1 = run({"check-conditions", "--config", missing_map});
  CHECK(r1.exit_code == 2);
  CHECK(r1.err.find("map") != std::string::npos);

  std::string missing_lambda =
      tmp.file("m2.json", R"({"map":{"catalog":"garcia"},"condition":"C"})");
  CliRun r2 = run({"check-conditions", "--config", missing_lambda});
  CHECK(r2.exit_code == 2);
  CHECK(r2.err.find("map.lambda") != std::string::npos);

  std::string bad_condition =
      tmp.file("m3.json", R"({"map":{"catalog":"suzuki"},"condition":"nope"})");
  CliRun r3 = run({"check-conditions", "--config", bad_condition});
  CHECK(r3.exit_code == 2);
  CHECK(r3.err.find("condition") != std::string::npos);

  CliRun r4 = run({"check-conditions", "--config", (tmp.path / "absent.json").string()});
  CHECK(r4.exit_code == 2);

  CliRun r5 = run({"bogus"});
  CHECK(r5.exit_code == 2);

  std::string bad_set = tmp.file(
      "m4.json",
      R"({"space":{"dimension":1},"domain":{"interval":[2,1]},"map":{"affine":{"scale":0.5,"offset":0}},"condition":"C"})");
  CliRun r6 = run({"check-conditions", "--config", bad_set});
  CHECK(r6.exit_code == 2);
  CHECK(r6.err.find("domain.interval") != std::string::npos);
}

TEST_CASE("byte-identical reports for identical invocations") {
  TempDir tmp;
  std::string cfg = tmp.file(
      "c.json", R"({"map":{"catalog":"garcia","lambda":0.5},"condition":"C_lambda","lambda":0.25})");
  CliRun a = run({"check-conditions", "--config", cfg, "--seed", "9"});
  CliRun b = run({"check-conditions", "--config", cfg, "--seed", "9"});
  CHECK(a.exit_code == 1);
  CHECK(a.out == b.out);
  CliRun c = run({"check-conditions", "--config", cfg, "--seed", "10"});
  CHECK(c.out != a.out);  // the sample description carries the seed
}

TEST_CASE("iterate writes the trace csv and reports convergence") {
  TempDir tmp;
  std::string cfg = tmp.file(
      "it.json",
      R"({"map":{"catalog":"mv5"},"start":5.0,"lambda":0.5,"rule":"anchor-previous","tol":1e-8,"budget":500})");
  CliRun r = run({"iterate", "--config", cfg, "--trace-dir", tmp.path.string()});
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep.at("trace").at("converged").get<bool>());

  std::string csv = tmp.read("iterate_trace.csv");
  REQUIRE_FALSE(csv.empty());
  CHECK(csv.rfind("n,x,y,residual\n", 0) == 0);
  CHECK(csv.find("\n1,5,1,4\n") != std::string::npos);
  CHECK(csv.find("\n2,3,") != std::string::npos);

  CliRun again = run({"iterate", "--config", cfg, "--trace-dir", tmp.path.string()});
  CHECK(tmp.read("iterate_trace.csv") == csv);
  CHECK(again.out == r.out);
}

TEST_CASE("tol override changes the iterate target") {
  TempDir tmp;
  std::string cfg = tmp.file(
      "it2.json", R"({"map":{"catalog":"mv5"},"start":5.0,"lambda":0.5,"budget":500})");
  CliRun strict = run({"iterate", "--config", cfg, "--trace-dir", tmp.path.string(), "--tol", "1e-10"});
  json rep = json::parse(strict.out);
  CHECK(rep.at("trace").at("tol").get<double>() == Approx(1e-10));
  CHECK(rep.at("trace").at("final_residual").get<double>() <= 1e-10);
}

TEST_CASE("asymptotic-center subcommand reports radius and center") {
  TempDir tmp;
  std::string cfg = tmp.file("a.json", R"({
    "domain":{"interval":[0,1]},
    "sequence":[0,1,0,1,0,1,0,1,0,1,0,1],
    "window":6,"resolution":0.001,
    "regularity":{"K":4}
  })");
  CliRun r = run({"asymptotic-center", "--config", cfg});
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep.at("asymptotic").at("radius").get<double>() == Approx(0.5).margin(1e-4));
  CHECK_FALSE(rep.at("regularity").at("regular").get<bool>());
}

TEST_CASE("asymptotic-center accepts a generated sequence") {
  TempDir tmp;
  std::string cfg = tmp.file("a2.json", R"({
    "domain":{"interval":[0,5]},
    "iterate":{"map":{"catalog":"mv5"},"start":5.0,"lambda":0.5,"budget":200},
    "window":8,"resolution":0.001
  })");
  CliRun r = run({"asymptotic-center", "--config", cfg});
  CHECK(r.exit_code == 0);
  json rep = json::parse(r.out);
  CHECK(rep.at("asymptotic").at("radius").get<double>() == Approx(0.0).margin(1e-4));
}

TEST_CASE("check-commuting and solve-common exits") {
  TempDir tmp;
  std::string violating = tmp.file("v.json", R"({
    "space":{"dimension":1,"p":2},
    "domain":{"interval":[0,1]},
    "t":{"affine":{"scale":0.5,"offset":0}},
    "T":{"constant_set":{"points":[[1]]}}
  })");
  CliRun bad = run({"check-commuting", "--config", violating});
  CHECK(bad.exit_code == 1);

  std::string halving = tmp.file("h.json", R"({
    "space":{"dimension":1,"p":2},
    "domain":{"interval":[0,1]},
    "t":{"affine":{"scale":0.5,"offset":0}},
    "T":{"interval_scaling":{"c":0.5}},
    "lambda":0.5
  })");
  CliRun good = run({"check-commuting", "--config", halving});
  CHECK(good.exit_code == 0);

  CliRun solved = run({"solve-common", "--config", halving, "--trace-dir", tmp.path.string()});
  CHECK(solved.exit_code == 0);
  json rep = json::parse(solved.out);
  CHECK(rep.at("status").get<std::string>() == "certified");
  CHECK(std::abs(rep.at("z").at(0).get<double>()) <= 1e-6);
  CHECK_FALSE(tmp.read("solve_outer_trace.csv").empty());
  CHECK_FALSE(tmp.read("solve_inner_trace.csv").empty());

  CliRun aborted = run({"solve-common", "--config", violating, "--trace-dir", tmp.path.string()});
  CHECK(aborted.exit_code == 1);
  CHECK(json::parse(aborted.out).at("status").get<std::string>() == "aborted_commuting");
}

TEST_CASE("--out writes the report to a file") {
  TempDir tmp;
  std::string cfg = tmp.file("o.json", R"({"map":{"catalog":"suzuki"},"condition":"C"})");
  std::string out_path = (tmp.path / "report.json").string();
  CliRun r = run({"check-conditions", "--config", cfg, "--out", out_path});
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  json rep = json::parse(tmp.read("report.json"));
  CHECK(rep.at("report").at("satisfied").get<bool>());
}

TEST_CASE("exception wrappers rebuild the catalog maps from plain rules") {
  TempDir tmp;
  // Affine base plus an exact exception point: the [0,3] catalog map.
  std::string single = tmp.file("w1.json", R"({
    "space":{"dimension":1,"p":2},
    "domain":{"interval":[0,3]},
    "map":{"affine":{"scale":0,"offset":0},"exception":{"at":3,"value":1}},
    "condition":"nonexpansive"
  })");
  CliRun r1 = run({"check-conditions", "--config", single});
  CHECK(r1.exit_code == 1);
  CHECK(json::parse(r1.out).at("report").at("worst").at("gap").get<double>() >= 0.9);

  // Interval scaling plus a set-valued exception: the multivalued [0,5] map.
  std::string multi = tmp.file("w2.json", R"({
    "space":{"dimension":1,"p":2},
    "domain":{"interval":[0,5]},
    "map":{"interval_scaling":{"c":0.2},"exception":{"at":5,"value":{"points":[[1]]}}},
    "condition":"C_lambda",
    "lambda":0.5
  })");
  CliRun r2 = run({"check-conditions", "--config", multi});
  CHECK(r2.exit_code == 0);
  CHECK(json::parse(r2.out).at("report").at("flavor").get<std::string>() == "multi");
}

TEST_CASE("help text lists the subcommands") {
  CliRun r = run({"--help"});
  CHECK(r.exit_code == 0);
  for (const char* name : {"check-conditions", "iterate", "asymptotic-center", "check-commuting",
                           "solve-common", "reproduce-paper"})
    CHECK(r.out.find(name) != std::string::npos);
}
