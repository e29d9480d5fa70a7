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
#include <map>

#include "hsprg/mz_generator.hpp"

namespace {

using namespace hsprg;

const double kEta = 1.0 / std::sqrt(3.0);

TEST(DeriveParams, DefaultSchedule) {
  const auto p = derive_params(1, 0.1, kEta);
  EXPECT_NEAR(p.s_param, 3.0 / std::sqrt(0.1), 1e-12);
  EXPECT_NEAR(p.delta, 1e-8 / 9.0, 1e-22);
  const auto hb = head_budget(kEta, 0.1, p.delta, p.s_param);
  EXPECT_DOUBLE_EQ(p.L, hb.L);
  EXPECT_EQ(p.k, 5u);
  EXPECT_TRUE(p.schedule_satisfied);
  // 2^t_log2 is the smallest power of 2 at least L^2 / eps.
  const double need = 2 * std::log2(p.L) - std::log2(0.1);
  EXPECT_GE(p.t_log2, need);
  EXPECT_LT(p.t_log2 - 1, need);
  EXPECT_FALSE(p.t_fits());
  EXPECT_THROW(p.t(), ResourceError);
}

TEST(DeriveParams, FloorCaseIsFinite) {
  const auto p = derive_params(1, 0.5, kEta);
  for (double v : {p.s_param, p.delta, p.L}) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
  }
  ASSERT_TRUE(p.t_fits());
  EXPECT_TRUE(is_pow2(p.t()));
  EXPECT_GE(static_cast<double>(p.t()), p.L * p.L / 0.5);
  EXPECT_LT(static_cast<double>(p.t()) / 2, p.L * p.L / 0.5);
}

TEST(DeriveParams, OverridesAndErrors) {
  MZOverrides ov;
  ov.L = 4;
  ov.t_log2 = 3;
  ov.k = 4;
  const auto p = derive_params(2, 0.1, kEta, ov);
  EXPECT_EQ(p.L, 4.0);
  EXPECT_EQ(p.t(), 8u);
  EXPECT_EQ(p.k, 4u);
  EXPECT_FALSE(p.schedule_satisfied);  // (2*4)^2 / 0.1 = 640 > 8
  ov.t_log2 = 10;
  EXPECT_TRUE(derive_params(2, 0.1, kEta, ov).schedule_satisfied);
  EXPECT_THROW(derive_params(1, 0.6, kEta), std::invalid_argument);
  EXPECT_THROW(derive_params(1, 0.1, 0.7), std::invalid_argument);
  EXPECT_THROW(derive_params(0, 0.1, kEta), std::invalid_argument);
  ov.k = 3;
  EXPECT_THROW(derive_params(1, 0.1, kEta, ov), std::invalid_argument);
}

std::vector<double> alphabet16() {
  std::vector<double> a(16);
  for (int i = 0; i < 16; ++i) a[i] = i - 7.5;
  return a;
}

TEST(SeedBits, Examples) {
  const auto mult = MZGenerator::iid(alphabet16(), 16, 4, 5, HashVariant::kMultiplicative);
  EXPECT_EQ(seed_bits(mult), 85u);
  EXPECT_EQ(mult.accounting().multiplicative_hash_bits, 5u);
  const auto one = MZGenerator::iid(alphabet16(), 16, 1, 5);
  EXPECT_EQ(one.hash_bits(), 0u);
  EXPECT_EQ(seed_bits(one), 20u);
  const auto aff = MZGenerator::iid(alphabet16(), 16, 4, 5);
  EXPECT_EQ(aff.hash_bits(), 8u);
  EXPECT_EQ(seed_bits(aff) - seed_bits(mult), 3u);  // 2 log n - log 2n
  EXPECT_EQ(aff.accounting().affine_hash_bits, 8u);
}

TEST(Generate, WrongSeedLengthThrows) {
  const auto g = MZGenerator::iid({-1, 1}, 4, 2);
  EXPECT_THROW(g.generate(BitString(g.seed_bits() + 1)), std::invalid_argument);
  EXPECT_THROW(MZGenerator::iid({-1, 0, 1}, 4, 2), std::invalid_argument);
  EXPECT_THROW(MZGenerator::iid({-1, 1}, 4, 3), std::invalid_argument);
}

TEST(Generate, SingleBucketIsPlainKWise) {
  const auto g = MZGenerator::iid(alphabet16(), 12, 1, 5);
  KWiseFamily fam(4, 5, 12);
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto seed = g.random_seed(rng);
    const auto out = g.generate(seed);
    const auto ks = fam.seed_from_bits(seed);
    for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(out[j], alphabet16()[kwise_expand(fam, ks, j)]);
  }
}

TEST(Generate, Deterministic) {
  const auto g = MZGenerator::iid(alphabet16(), 20, 8, 5);
  CounterRng rng(3, 1);
  const auto seed = g.random_seed(rng);
  EXPECT_EQ(g.generate(seed), g.generate(seed));
  EXPECT_EQ(generate_sample(g, seed), g.generate(seed));
}

TEST(Generate, RanksFollowIndexOrder) {
  const auto g = MZGenerator::iid(alphabet16(), 10, 2, 2);
  CounterRng rng(5, 0);
  const auto seed = g.random_seed(rng);
  const auto b = g.buckets(g.hash_function(seed));
  const auto idx = g.generate_indices(seed);
  std::map<std::uint64_t, std::uint64_t> rank;
  for (std::size_t j = 0; j < 10; ++j) {
    const auto off = g.hash_bits() + b[j] * g.bucket_seed_bits();
    KWiseSeed s{{static_cast<std::uint32_t>(seed.read(off, 4)), static_cast<std::uint32_t>(seed.read(off + 4, 4))}};
    EXPECT_EQ(idx[j], g.bucket_family().expand(s, rank[b[j]]++));
  }
}

// n=4, t=2, |alphabet|=4: with k >= 4 every hash leaves the full joint law
// uniform, so all 4^4 cells are hit equally often over all seeds.
void expect_full_product_law(unsigned k) {
  const std::vector<double> alpha{-1.5, -0.5, 0.5, 1.5};
  const auto g = MZGenerator::iid(alpha, 4, 2, k);
  const std::uint64_t seeds = std::uint64_t{1} << g.seed_bits();
  std::vector<std::uint64_t> cells(256, 0);
  std::vector<std::uint32_t> idx;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    g.generate_indices_into(BitString::from_uint(s, g.seed_bits()), idx);
    ++cells[idx[0] | idx[1] << 2 | idx[2] << 4 | idx[3] << 6];
  }
  for (auto c : cells) ASSERT_EQ(c, seeds / 256);
}

TEST(Generate, FullLawSmallCaseK4) { expect_full_product_law(4); }
TEST(Generate, FullLawSmallCaseK5) { expect_full_product_law(5); }

TEST(Generate, MarginalsFollowMultisetLaw) {
  // Repeated atoms: the marginal is the uniform law on the multiset.
  const std::vector<double> alpha{-1, -1, 0, 2};
  const auto g = MZGenerator::iid(alpha, 3, 2, 2);
  const std::uint64_t seeds = std::uint64_t{1} << g.seed_bits();
  std::vector<std::map<double, std::uint64_t>> counts(3);
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const auto x = g.generate(BitString::from_uint(s, g.seed_bits()));
    for (std::size_t j = 0; j < 3; ++j) ++counts[j][x[j]];
  }
  for (const auto& c : counts) {
    EXPECT_EQ(c.at(-1), seeds / 2);
    EXPECT_EQ(c.at(0), seeds / 4);
    EXPECT_EQ(c.at(2), seeds / 4);
  }
}

// n=8 Rademacher, t=2, k=4: for every hash function, each bucket's segment is
// enumerated with the other segment pinned to two different values. Every
// 4 coordinates of the bucket must be exactly uniform, and coordinates of the
// other bucket must stay fixed.
TEST(Generate, WithinBucketIndependenceAndSegmentIsolation) {
  const auto g = MZGenerator::iid({-1, 1}, 8, 2, 4);
  const unsigned hb = static_cast<unsigned>(g.hash_bits()), seg = static_cast<unsigned>(g.bucket_seed_bits());
  ASSERT_EQ(hb, 6u);
  ASSERT_EQ(seg, 12u);
  for (std::uint64_t hidx = 0; hidx < 64; ++hidx) {
    const auto bucket_of = g.buckets(g.hash_family().function(hidx));
    for (std::uint64_t bucket = 0; bucket < 2; ++bucket) {
      std::vector<std::size_t> members, others;
      for (std::size_t j = 0; j < 8; ++j) (bucket_of[j] == bucket ? members : others).push_back(j);
      for (std::uint64_t pin : {std::uint64_t{0}, std::uint64_t{0xA5C}}) {
        std::map<std::vector<std::uint32_t>, std::uint64_t> law;
        std::vector<std::uint32_t> other_vals;
        bool first = true;
        for (std::uint64_t s = 0; s < (1u << seg); ++s) {
          BitString seed(g.seed_bits());
          seed.write(0, hb, hidx);
          seed.write(hb + bucket * seg, seg, s);
          seed.write(hb + (1 - bucket) * seg, seg, pin);
          const auto idx = g.generate_indices(seed);
          std::vector<std::uint32_t> key, ov;
          for (auto j : members) key.push_back(idx[j]);
          for (auto j : others) ov.push_back(idx[j]);
          if (first) {
            other_vals = ov;
            first = false;
          }
          ASSERT_EQ(ov, other_vals);
          ++law[key];
        }
        // Every 4-subset (or the whole bucket if smaller) is uniform.
        const std::size_t r = std::min<std::size_t>(4, members.size());
        for (std::uint64_t mask = 0; mask < (1u << members.size()); ++mask) {
          if (static_cast<std::size_t>(__builtin_popcountll(mask)) != r) continue;
          std::map<std::vector<std::uint32_t>, std::uint64_t> marg;
          for (const auto& [key, c] : law) {
            std::vector<std::uint32_t> sub;
            for (std::size_t i = 0; i < members.size(); ++i) {
              if (mask >> i & 1u) sub.push_back(key[i]);
            }
            marg[sub] += c;
          }
          ASSERT_EQ(marg.size(), std::size_t{1} << r);
          for (const auto& [sub, c] : marg) ASSERT_EQ(c, (1u << seg) >> r);
        }
      }
    }
  }
}

TEST(Generate, FourthMomentsMatchProduct) {
  // k=4, n=4, t=2 over a non-symmetric alphabet: every mixed moment of total
  // degree <= 4 equals the independent product's value.
  const std::vector<double> alpha{-2, 0, 1, 1};
  const auto g = MZGenerator::iid(alpha, 4, 2, 4);
  const std::uint64_t seeds = std::uint64_t{1} << g.seed_bits();
  std::vector<double> single(5, 0.0);
  for (int p = 0; p <= 4; ++p) {
    for (double a : alpha) single[p] += std::pow(a, p) / 4;
  }
  std::map<std::vector<int>, long double> sums;
  std::vector<std::vector<int>> exps;
  for (int e0 = 0; e0 <= 4; ++e0) {
    for (int e1 = 0; e0 + e1 <= 4; ++e1) {
      for (int e2 = 0; e0 + e1 + e2 <= 4; ++e2) {
        for (int e3 = 0; e0 + e1 + e2 + e3 <= 4; ++e3) exps.push_back({e0, e1, e2, e3});
      }
    }
  }
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const auto x = g.generate(BitString::from_uint(s, g.seed_bits()));
    double pw[4][5];
    for (int j = 0; j < 4; ++j) {
      pw[j][0] = 1;
      for (int p = 1; p <= 4; ++p) pw[j][p] = pw[j][p - 1] * x[j];
    }
    for (const auto& e : exps) {
      long double v = 1;
      for (int j = 0; j < 4; ++j) v *= pw[j][e[j]];
      sums[e] += v;
    }
  }
  for (const auto& e : exps) {
    double expect = 1;
    for (int j = 0; j < 4; ++j) expect *= single[e[j]];
    EXPECT_NEAR(static_cast<double>(sums[e] / seeds), expect, 1e-12);
  }
}

}  // namespace
