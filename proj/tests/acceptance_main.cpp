// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: executes the built-in verification suite and prints one
// pass/fail line per criterion. Exit status is nonzero if any criterion
// fails, so CI can gate on this binary directly.

#include <cstdlib>
#include <iostream>

#include "nonex/parallel.hpp"
#include "nonex/suite.hpp"

int main() {
  nonex::suite::SuiteOptions opts;
  opts.threads = nonex::default_thread_count();
  std::vector<nonex::suite::CriterionResult> results = nonex::suite::run_builtin_suite(opts);
  std::cout << nonex::suite::format_table(results);
  return nonex::suite::all_passed(results) ? EXIT_SUCCESS : EXIT_FAILURE;
}
