// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

namespace spinvar {

/// Deterministic pairwise summation. The reduction tree depends only on the
/// length of the input, never on how the values were produced, so sums are
/// bit-identical across thread counts.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 32) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;  // sqrt(sample variance / n); 0 for n < 2
};

inline SampleStats sample_stats(std::span<const double> values) {
  SampleStats out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  out.mean = pairwise_sum(values) / static_cast<double>(n);
  if (n < 2) return out;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n));
  return out;
}

/// ln Gamma(n+1) for integer n >= 0.
inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// ln C(n, k); requires 0 <= k <= n.
inline double log_binomial(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Runs fn(begin, end) over [0, count) split into contiguous chunks, one per
/// worker. Chunk boundaries depend only on (count, threads); results written
/// by index stay deterministic for any thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1 || count < 2) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end);
  }
  for (auto& t : pool) t.join();
}

}  // namespace spinvar
