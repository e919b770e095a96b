// Copyright (c) 2026 the nonex authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace nonex {

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

/// Splits [0, n) into contiguous chunks, runs `work(chunk_index, begin, end)`
/// on each, and returns the per-chunk results in chunk order. The caller sees
/// the same chunk boundaries and ordering for any thread count, so a
/// deterministic per-chunk computation merges deterministically.
template <class Result, class Work>
std::vector<Result> run_chunked(std::size_t n, int threads, Work&& work) {
  if (threads < 1) threads = 1;
  std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(n, 1));
  std::vector<Result> results(chunks);
  const std::size_t per = (n + chunks - 1) / chunks;
  auto run = [&](std::size_t c) {
    std::size_t begin = c * per;
    std::size_t end = std::min(n, begin + per);
    results[c] = work(c, begin, end);
  };
  if (chunks == 1) {
    run(0);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(run, c);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace nonex
