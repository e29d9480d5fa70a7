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

// delta-regularity, the critical index and the REG/JUNTA head set.
//
// A sequence of independent terms X_j is delta-regular when
// sum ||X_j||_4^4 <= delta * (sum ||X_j||_2^2)^2.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hsprg/common.hpp"
#include "hsprg/distributions.hpp"
#include "hsprg/rng.hpp"
#include "hsprg/stats.hpp"

namespace hsprg {

/// Per-term norms: sigma_j^2 = ||x_j||_2^2 and ||x_j||_4^4.
struct TermNorms {
  std::vector<double> two_norm_sq;
  std::vector<double> four_norm_4;

  std::size_t size() const { return two_norm_sq.size(); }

  /// tau_i^2 = sum_{j >= i} sigma_j^2, with a trailing 0 at index n.
  std::vector<double> tail_two() const {
    std::vector<double> tau(size() + 1, 0.0);
    CompensatedSum s;
    for (std::size_t i = size(); i-- > 0;) {
      s.add(two_norm_sq[i]);
      tau[i] = s.value();
    }
    return tau;
  }

  /// Terms w_j x_j with E x_j^2, E x_j^4 taken from the profiles.
  static TermNorms from_weights(std::span<const double> w, std::span<const MomentProfile> profiles) {
    if (w.size() != profiles.size()) throw std::invalid_argument("TermNorms: weights/profiles size mismatch");
    TermNorms t;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double w2 = w[j] * w[j];
      t.two_norm_sq.push_back(w2 * profiles[j].second_moment);
      t.four_norm_4.push_back(w2 * w2 * profiles[j].fourth_moment);
    }
    return t;
  }

  /// Terms w_j x_j with every x_j distributed like `p`.
  static TermNorms from_weights(std::span<const double> w, const MomentProfile& p) {
    std::vector<MomentProfile> ps(w.size(), p);
    return from_weights(w, ps);
  }

  TermNorms permuted(std::span<const std::size_t> perm) const {
    TermNorms t;
    for (auto j : perm) {
      t.two_norm_sq.push_back(two_norm_sq.at(j));
      t.four_norm_4.push_back(four_norm_4.at(j));
    }
    return t;
  }
};

/// Regularity of the terms listed in `idx`. Equality counts as regular.
inline bool is_delta_regular(const TermNorms& t, std::span<const std::size_t> idx, double delta) {
  CompensatedSum s2, s4;
  for (auto j : idx) {
    s2.add(t.two_norm_sq.at(j));
    s4.add(t.four_norm_4.at(j));
  }
  return s4.value() <= delta * s2.value() * s2.value();
}

inline bool is_delta_regular(const TermNorms& t, double delta) {
  if (t.size() == 0) throw std::invalid_argument("is_delta_regular: empty index set");
  std::vector<std::size_t> idx(t.size());
  std::iota(idx.begin(), idx.end(), 0);
  return is_delta_regular(t, idx, delta);
}

struct CriticalIndexResult {
  std::optional<std::size_t> index;  // nullopt means infinity
  std::vector<std::size_t> permutation;  // sorted position -> original term
};

/// Order by nonincreasing sigma^2; ties keep the original order.
inline std::vector<std::size_t> sort_by_two_norm(const TermNorms& t) {
  std::vector<std::size_t> perm(t.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return t.two_norm_sq[a] > t.two_norm_sq[b]; });
  return perm;
}

/// Smallest 0-based l such that sorted terms l, l+1, ..., n-1 are
/// delta-regular.
inline CriticalIndexResult critical_index(const TermNorms& t, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("critical_index: delta must be in (0, 1)");
  CriticalIndexResult r;
  r.permutation = sort_by_two_norm(t);
  const auto s = t.permuted(r.permutation);
  const std::size_t n = s.size();
  std::vector<double> s2(n), s4(n);
  CompensatedSum a2, a4;
  for (std::size_t i = n; i-- > 0;) {
    a2.add(s.two_norm_sq[i]);
    a4.add(s.four_norm_4[i]);
    s2[i] = a2.value();
    s4[i] = a4.value();
  }
  for (std::size_t l = 0; l < n; ++l) {
    if (s4[l] <= delta * s2[l] * s2[l]) {
      r.index = l;
      break;
    }
  }
  return r;
}

enum class DimClass { kReg, kJunta };

struct HeadSetResult {
  std::vector<std::size_t> H0;        // in the order added
  std::vector<DimClass> classification;
  std::vector<std::uint64_t> counters;  // c_i
  double delta = 0.0;
  std::uint64_t L = 0;
  std::uint64_t steps = 0;
};

/// Iterative head-set construction. W is n rows of d weights; the j-th term
/// in dimension i is x_j W[j][i]. Each step takes the smallest i with
/// c_i < L whose surviving terms are not delta-regular, and moves the
/// surviving j of largest ||x_j W[j][i]||_2^2 (smallest j on ties) into H0.
inline HeadSetResult head_set_partition(const std::vector<std::vector<double>>& W,
                                        std::span<const MomentProfile> profiles, double delta, std::uint64_t L) {
  const std::size_t n = W.size();
  if (profiles.size() != n) throw std::invalid_argument("head_set_partition: profiles size mismatch");
  const std::size_t d = n == 0 ? 0 : W[0].size();
  for (const auto& row : W) {
    if (row.size() != d) throw std::invalid_argument("head_set_partition: ragged weight matrix");
  }
  std::vector<TermNorms> dims(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = W[j][i];
    dims[i] = TermNorms::from_weights(col, profiles);
  }

  HeadSetResult r;
  r.delta = delta;
  r.L = L;
  r.counters.assign(d, 0);
  std::vector<std::size_t> survivors(n);
  std::iota(survivors.begin(), survivors.end(), 0);

  while (true) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < d && !pick; ++i) {
      if (r.counters[i] < L && !is_delta_regular(dims[i], survivors, delta)) pick = i;
    }
    if (!pick || survivors.empty()) break;
    const auto& norms = dims[*pick].two_norm_sq;
    std::size_t best = survivors.front();
    for (auto j : survivors) {
      if (norms[j] > norms[best]) best = j;
    }
    r.H0.push_back(best);
    ++r.counters[*pick];
    ++r.steps;
    survivors.erase(std::find(survivors.begin(), survivors.end(), best));
  }
  for (std::size_t i = 0; i < d; ++i) {
    r.classification.push_back(is_delta_regular(dims[i], survivors, delta) ? DimClass::kReg : DimClass::kJunta);
  }
  return r;
}

inline HeadSetResult head_set_partition(const std::vector<std::vector<double>>& W, const MomentProfile& p,
                                        double delta, std::uint64_t L) {
  std::vector<MomentProfile> ps(W.size(), p);
  return head_set_partition(W, ps, delta, L);
}

/// b, r and L = b r for the head-set step limit. L may exceed any
/// integer type, so it is kept as a double alongside its log2.
struct HeadBudget {
  double b = 0.0;
  double r = 0.0;
  double L = 0.0;
  double log2_L = 0.0;
};

inline HeadBudget head_budget(double eta, double eps, double delta, double s) {
  HeadBudget h;
  const double e4 = std::pow(eta, 4);
  h.b = std::ceil((2.0 / e4) * std::log(1.0 / eps));
  h.r = std::ceil((1.0 / (e4 * delta)) * std::log1p(16.0 * s * s));
  h.L = h.b * h.r;
  h.log2_L = std::log2(h.b) + std::log2(h.r);
  return h;
}

/// Monte Carlo estimate of Pr[|sum_j w_j x_j - theta| <= s * tau].
inline ProportionEstimate anticoncentration_probe(std::span<const CoordinateSpec> head, std::span<const double> w,
                                                  double theta, double s, double tau, std::uint64_t trials,
                                                  std::uint64_t seed, std::uint64_t shards = 8) {
  if (trials == 0) throw std::invalid_argument("anticoncentration_probe: zero trials");
  if (head.size() != w.size()) throw std::invalid_argument("anticoncentration_probe: size mismatch");
  const double window = s * tau;
  std::function<ProportionEstimate(std::uint64_t)> shard = [&](std::uint64_t k) {
    CounterRng rng(seed, k);
    ProportionEstimate p;
    const std::uint64_t lo = trials * k / shards, hi = trials * (k + 1) / shards;
    for (std::uint64_t t = lo; t < hi; ++t) {
      double acc = 0.0;
      for (std::size_t j = 0; j < head.size(); ++j) acc += w[j] * head[j].sample(rng);
      p.successes += std::abs(acc - theta) <= window;
      ++p.trials;
    }
    return p;
  };
  ProportionEstimate total;
  for (const auto& p : run_shards<ProportionEstimate>(shards, default_threads(), shard)) total += p;
  return total;
}

}  // namespace hsprg
