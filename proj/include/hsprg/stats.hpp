// Copyright 2026 The hsprg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace hsprg {

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

/// Binomial proportion with a 95% interval: normal approximation, switching
/// to Wilson when n*p or n*(1-p) is below 10.
struct ProportionEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  double mean() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
  double std_error() const {
    const double p = mean();
    return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  bool uses_wilson() const {
    const double n = static_cast<double>(trials);
    return n * mean() < 10.0 || n * (1.0 - mean()) < 10.0;
  }
  Interval ci95() const {
    if (uses_wilson()) return wilson_interval(successes, trials);
    const double h = kZ95 * std_error();
    return {mean() - h, mean() + h};
  }
  double half_width() const { return ci95().half_width(); }

  ProportionEstimate& operator+=(const ProportionEstimate& o) {
    successes += o.successes;
    trials += o.trials;
    return *this;
  }
};

/// Sample mean and variance via running sums.
struct MeanEstimate {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  double variance() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    return std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  }
  double std_error() const { return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count)); }
  double half_width() const { return kZ95 * std_error(); }

  MeanEstimate& operator+=(const MeanEstimate& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
};

/// Runs fn(shard) for shard in [0, shards) on up to `threads` workers and
/// returns results in shard order, so merges do not depend on scheduling.
template <class R>
std::vector<R> run_shards(std::uint64_t shards, unsigned threads, const std::function<R(std::uint64_t)>& fn) {
  std::vector<R> out(shards);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(shards)));
  if (threads == 1) {
    for (std::uint64_t s = 0; s < shards; ++s) out[s] = fn(s);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t s = w; s < shards; s += threads) out[s] = fn(s);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace hsprg
