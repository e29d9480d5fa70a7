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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsprg/regularity.hpp"

namespace {

using namespace hsprg;

const MomentProfile kRad = moment_profile(CoordinateSpec::rademacher());
const MomentProfile kGauss = moment_profile(CoordinateSpec::gaussian());

TermNorms rad_terms(const std::vector<double>& w) { return TermNorms::from_weights(w, kRad); }

// Definition-level scan: recompute each suffix sum from scratch in long double.
std::optional<std::size_t> brute_critical_index(const TermNorms& t, double delta) {
  std::vector<std::size_t> order(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return t.two_norm_sq[a] > t.two_norm_sq[b]; });
  for (std::size_t l = 0; l < order.size(); ++l) {
    long double s2 = 0, s4 = 0;
    for (std::size_t k = l; k < order.size(); ++k) {
      s2 += t.two_norm_sq[order[k]];
      s4 += t.four_norm_4[order[k]];
    }
    if (s4 <= static_cast<long double>(delta) * s2 * s2) return l;
  }
  return std::nullopt;
}

TEST(Regular, FourUnitRademacherTerms) {
  const auto t = rad_terms({1, 1, 1, 1});
  EXPECT_TRUE(is_delta_regular(t, 0.3));
  EXPECT_FALSE(is_delta_regular(t, 0.2));
  EXPECT_TRUE(is_delta_regular(t, 0.25));  // equality is regular
}

TEST(Regular, SingleTerms) {
  EXPECT_FALSE(is_delta_regular(rad_terms({1}), 0.99));
  EXPECT_FALSE(is_delta_regular(TermNorms::from_weights(std::vector<double>{1.0}, kGauss), 0.99));
  EXPECT_THROW(is_delta_regular(TermNorms{}, 0.5), std::invalid_argument);
}

TEST(CriticalIndex, Examples) {
  // 16 equal terms: a tail of length m is regular iff 1/m <= delta, so the
  // whole sequence already is and tails starting past 6 are not.
  const auto eq = rad_terms(std::vector<double>(16, 1.0));
  EXPECT_EQ(critical_index(eq, 0.1).index, 0u);
  for (std::size_t l = 0; l < 16; ++l) {
    std::vector<std::size_t> tail;
    for (std::size_t k = l; k < 16; ++k) tail.push_back(k);
    EXPECT_EQ(is_delta_regular(eq, tail, 0.1), l <= 6) << l;
  }
  std::vector<double> w(10, 1.0);
  w[0] = 10;
  EXPECT_EQ(critical_index(rad_terms(w), 0.2).index, 1u);
  EXPECT_FALSE(critical_index(TermNorms::from_weights(std::vector<double>{1.0}, kGauss), 0.5).index.has_value());
}

TEST(CriticalIndex, SortsAndReturnsPermutation) {
  const auto r = critical_index(rad_terms({1, 1, 10, 1, 1, 1, 1, 1, 1, 1}), 0.2);
  EXPECT_EQ(r.index, 1u);
  EXPECT_EQ(r.permutation.front(), 2u);
  EXPECT_EQ(r.permutation[1], 0u);
}

TEST(CriticalIndex, MatchesBruteForceOnRandomSequences) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    std::vector<double> w(n);
    const int style = trial % 3;
    for (auto& x : w) {
      const double u = std::uniform_real_distribution<double>(0, 1)(rng);
      x = style == 0 ? u : (style == 1 ? std::exp(-6 * u) : (u < 0.2 ? 5 * u : 1.0));
    }
    const auto& prof = trial % 2 ? kRad : kGauss;
    const auto t = TermNorms::from_weights(w, prof);
    for (double delta : {0.05, 0.1, 0.25}) {
      ASSERT_EQ(critical_index(t, delta).index, brute_critical_index(t, delta)) << "trial " << trial;
    }
  }
}

TEST(TermNorms, TailAndInvariants) {
  const auto t = TermNorms::from_weights(std::vector<double>{3, 2, 1}, kGauss);
  const auto tau = t.tail_two();
  EXPECT_DOUBLE_EQ(tau[0], 14.0);
  EXPECT_DOUBLE_EQ(tau[2], 1.0);
  EXPECT_DOUBLE_EQ(tau[3], 0.0);
  for (std::size_t j = 0; j < t.size(); ++j) EXPECT_GE(t.four_norm_4[j], t.two_norm_sq[j] * t.two_norm_sq[j]);
}

TEST(HeadSet, OneDimensionMatchesCriticalIndex) {
  std::vector<double> w{0.5, 4, 1, 1, 3, 1, 1, 1, 1, 1, 1, 1};
  std::vector<std::vector<double>> W;
  for (double x : w) W.push_back({x});
  const auto ci = critical_index(rad_terms(w), 0.15);
  ASSERT_TRUE(ci.index.has_value());
  const auto r = head_set_partition(W, kRad, 0.15, 100);
  ASSERT_EQ(r.H0.size(), *ci.index);
  for (std::size_t k = 0; k < r.H0.size(); ++k) EXPECT_EQ(r.H0[k], ci.permutation[k]);
  EXPECT_EQ(r.classification[0], DimClass::kReg);
}

TEST(HeadSet, AllRegularGivesEmptyHead) {
  std::vector<std::vector<double>> W(20, {1.0, -1.0});
  const auto r = head_set_partition(W, kRad, 0.1, 5);
  EXPECT_TRUE(r.H0.empty());
  EXPECT_EQ(r.classification, (std::vector<DimClass>{DimClass::kReg, DimClass::kReg}));
}

TEST(HeadSet, GiantWeightInOneDimension) {
  std::vector<std::vector<double>> W{{10, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}};
  const auto r = head_set_partition(W, kRad, 0.2, 3);
  EXPECT_EQ(r.H0, (std::vector<std::size_t>{0}));
  EXPECT_EQ(r.counters, (std::vector<std::uint64_t>{1, 0}));
  EXPECT_EQ(r.classification, (std::vector<DimClass>{DimClass::kReg, DimClass::kReg}));
}

TEST(HeadSet, GeometricWeightsBecomeJunta) {
  std::vector<std::vector<double>> W;
  for (int j = 0; j < 20; ++j) W.push_back({std::ldexp(1.0, -j)});
  const auto r = head_set_partition(W, kRad, 0.2, 8);
  EXPECT_EQ(r.H0.size(), 8u);
  EXPECT_EQ(r.classification[0], DimClass::kJunta);
  EXPECT_EQ(r.counters[0], 8u);
}

TEST(HeadSet, RandomInstancesRespectBudgetAndRecheck) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 40, d = 1 + rng() % 4;
    const std::uint64_t L = 1 + rng() % 6;
    std::vector<std::vector<double>> W(n, std::vector<double>(d));
    for (auto& row : W) {
      for (auto& x : row) x = std::exp(-4 * std::uniform_real_distribution<double>(0, 1)(rng));
    }
    const auto r = head_set_partition(W, kRad, 0.1, L);
    ASSERT_LE(r.H0.size(), d * L);
    ASSERT_LE(r.steps, d * L);
    std::vector<bool> head(n, false);
    for (auto j : r.H0) head[j] = true;
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<double> col;
      for (std::size_t j = 0; j < n; ++j) {
        if (!head[j]) col.push_back(W[j][i]);
      }
      const bool reg = col.empty() || is_delta_regular(rad_terms(col), 0.1);
      ASSERT_EQ(r.classification[i] == DimClass::kReg, reg);
      if (!reg) {
        ASSERT_EQ(r.counters[i], L);
      }
    }
  }
}

TEST(HeadBudget, Formula) {
  const double eta = 1 / std::sqrt(3.0), eps = 0.1, s = 3 / std::sqrt(0.1), delta = std::pow(eta, 4) * 1e-8;
  const auto h = head_budget(eta, eps, delta, s);
  EXPECT_DOUBLE_EQ(h.b, std::ceil(18 * std::log(10.0)));
  EXPECT_DOUBLE_EQ(h.r, std::ceil(9 / delta * std::log(1 + 16 * s * s)));
  EXPECT_DOUBLE_EQ(h.L, h.b * h.r);
}

TEST(Anticoncentration, JuntaDimensionIsAnticoncentrated) {
  const int L = 8;
  std::vector<double> w;
  double tau2 = 0;
  for (int j = 0; j < 20; ++j) {
    if (j < L) {
      w.push_back(std::ldexp(1.0, -j));
    } else {
      tau2 += std::ldexp(1.0, -2 * j);
    }
  }
  const double eps = 0.1, s = 1.0 / (kRad.eta * kRad.eta * std::sqrt(eps));
  const std::vector<CoordinateSpec> head(L, CoordinateSpec::rademacher());
  for (double theta : {0.0, 0.3, -0.77}) {
    const auto p = anticoncentration_probe(head, w, theta, s, std::sqrt(tau2), 1000000, 3);
    EXPECT_LE(p.ci95().hi, 2 * eps) << "theta=" << theta;
  }
}

TEST(Anticoncentration, TrivialCases) {
  const std::vector<CoordinateSpec> head(4, CoordinateSpec::rademacher());
  const std::vector<double> w{1, 1, 1, 1};
  EXPECT_EQ(anticoncentration_probe(head, w, 1e6, 1.0, 1.0, 10000, 1).successes, 0u);
  const std::vector<CoordinateSpec> g(3, CoordinateSpec::gaussian());
  EXPECT_EQ(anticoncentration_probe(g, std::vector<double>{1, 1, 1}, 0.0, 1e-12, 1.0, 10000, 1).successes, 0u);
  EXPECT_THROW(anticoncentration_probe(head, w, 0, 1, 1, 0, 1), std::invalid_argument);
}

}  // namespace
