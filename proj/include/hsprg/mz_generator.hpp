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

// Bucket-hashed bounded-independence generator.
//
// A hash function splits the n coordinates into t buckets. Inside a bucket
// the coordinates receive k-wise independent words; different buckets use
// disjoint seed segments and are fully independent. Each word indexes the
// coordinate's alphabet, a sorted multiset whose size is a power of 2.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsprg/bits.hpp"
#include "hsprg/common.hpp"
#include "hsprg/ffield.hpp"
#include "hsprg/hashing.hpp"
#include "hsprg/regularity.hpp"
#include "hsprg/rng.hpp"

namespace hsprg {

struct MZOverrides {
  std::optional<double> s;
  std::optional<double> delta;
  std::optional<double> L;
  std::optional<unsigned> t_log2;
  std::optional<unsigned> k;
};

/// Analysis schedule. L and t can be far beyond 64-bit range at realistic
/// parameters, so L is a double and t is kept as its base-2 logarithm.
struct MZParams {
  std::size_t d = 1;
  double eps = 0.1;
  double eta = 0.0;
  double C = 0.0;
  double s_param = 0.0;
  double delta = 0.0;
  double L = 0.0;
  double log2_L = 0.0;
  unsigned t_log2 = 0;
  unsigned k = 5;
  bool schedule_satisfied = true;  // t >= (dL)^2 / eps

  bool t_fits() const { return t_log2 < 64; }
  std::uint64_t t() const {
    if (!t_fits()) throw ResourceError("MZParams: t = 2^" + std::to_string(t_log2) + " does not fit in 64 bits");
    return std::uint64_t{1} << t_log2;
  }
};

inline MZParams derive_params(std::size_t d, double eps, double eta, const MZOverrides& ov = {}) {
  if (d == 0) throw std::invalid_argument("derive_params: d must be positive");
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("derive_params: eps must be in (0, 1/2]");
  if (!(eta > 0.0 && eta <= 1.0 / std::sqrt(3.0) + 1e-15)) {
    throw std::invalid_argument("derive_params: eta must be in (0, 1/sqrt(3)]");
  }
  MZParams p;
  p.d = d;
  p.eps = eps;
  p.eta = eta;
  p.C = 1.0 / std::pow(eta, 4);
  p.s_param = ov.s.value_or(1.0 / (eta * eta * std::sqrt(eps)));
  p.delta = ov.delta.value_or(std::pow(eta, 4) * std::pow(eps, 8) / std::pow(static_cast<double>(d), 7));
  if (ov.L) {
    if (!(*ov.L >= 1.0)) throw std::invalid_argument("derive_params: L override must be >= 1");
    p.L = *ov.L;
    p.log2_L = std::log2(p.L);
  } else {
    const auto hb = head_budget(eta, eps, p.delta, p.s_param);
    p.L = hb.L;
    p.log2_L = hb.log2_L;
  }
  // Smallest power of 2 at least (dL)^2 / eps, computed in log2 space.
  const double need = 2.0 * (std::log2(static_cast<double>(d)) + p.log2_L) - std::log2(eps);
  const auto auto_t = static_cast<unsigned>(std::max(0.0, std::ceil(need - 1e-12)));
  p.t_log2 = ov.t_log2.value_or(auto_t);
  p.schedule_satisfied = p.t_log2 >= auto_t;
  p.k = ov.k.value_or(5);
  if (p.k != 4 && p.k != 5) throw std::invalid_argument("derive_params: k must be 4 or 5");
  return p;
}

/// Seed length split, with the multiplicative-hash figure ceil(log2 2n) for
/// comparison.
struct SeedAccounting {
  std::size_t hash_bits = 0;
  std::size_t bucket_bits = 0;
  std::size_t total = 0;
  std::size_t multiplicative_hash_bits = 0;
  std::size_t affine_hash_bits = 0;
};

class MZGenerator {
 public:
  /// alphabets[j] is coordinate j's sorted multiset; sizes must be powers
  /// of 2.
  MZGenerator(std::vector<std::vector<double>> alphabets, std::uint64_t t, unsigned k = 5,
              HashVariant variant = HashVariant::kAffine)
      : alphabets_(std::move(alphabets)), t_(t), k_(k), variant_(variant) {
    const std::size_t n = alphabets_.size();
    if (n == 0) throw std::invalid_argument("MZGenerator: no coordinates");
    if (!is_pow2(t_)) throw std::invalid_argument("MZGenerator: t must be a power of 2");
    if (k_ < 1) throw std::invalid_argument("MZGenerator: k must be >= 1");
    std::uint64_t omega = 1;
    for (auto& a : alphabets_) {
      if (a.empty() || !is_pow2(a.size())) throw std::invalid_argument("MZGenerator: alphabet size must be a power of 2");
      std::sort(a.begin(), a.end());
      omega = std::max<std::uint64_t>(omega, a.size());
    }
    omega_ = omega;
    m_ = std::max(ceil_log2(std::max<std::uint64_t>(n, omega)), 1u);
    if (m_ > kMaxFieldBits) throw std::invalid_argument("MZGenerator: word size exceeds field table range");
    const std::uint64_t domain = variant_ == HashVariant::kMultiplicative ? n + 1 : n;
    hash_m_ = std::max({ceil_log2(domain), ceil_log2(t_), 1u});
    if (hash_m_ > kMaxFieldBits) throw std::invalid_argument("MZGenerator: hash field too large");
    hash_ = HashFamily(hash_m_, t_, variant_);
    bucket_ = KWiseFamily(m_, k_, n);
    for (const auto& a : alphabets_) masks_.push_back(static_cast<std::uint32_t>(a.size() - 1));
  }

  static MZGenerator iid(const std::vector<double>& alphabet, std::size_t n, std::uint64_t t, unsigned k = 5,
                         HashVariant variant = HashVariant::kAffine) {
    return MZGenerator(std::vector<std::vector<double>>(n, alphabet), t, k, variant);
  }

  std::size_t n() const { return alphabets_.size(); }
  std::uint64_t t() const { return t_; }
  unsigned k() const { return k_; }
  unsigned word_bits() const { return m_; }
  std::uint64_t alphabet_size() const { return omega_; }
  const std::vector<double>& alphabet(std::size_t j) const { return alphabets_.at(j); }
  const HashFamily& hash_family() const { return *hash_; }
  const KWiseFamily& bucket_family() const { return *bucket_; }

  std::size_t hash_bits() const { return hash_->index_bits(); }
  std::size_t bucket_seed_bits() const { return static_cast<std::size_t>(k_) * m_; }
  std::size_t seed_bits() const { return hash_bits() + t_ * bucket_seed_bits(); }

  SeedAccounting accounting() const {
    SeedAccounting a;
    a.hash_bits = hash_bits();
    a.bucket_bits = t_ * bucket_seed_bits();
    a.total = a.hash_bits + a.bucket_bits;
    if (t_ > 1) {
      a.multiplicative_hash_bits = std::max({ceil_log2(2 * n()), ceil_log2(t_), 1u});
      a.affine_hash_bits = 2 * std::max({ceil_log2(n()), ceil_log2(t_), 1u});
    }
    return a;
  }

  HashFunction hash_function(const BitString& seed) const {
    check_seed(seed);
    const auto hb = static_cast<unsigned>(hash_bits());
    return hash_->function_from_index_bits(hb == 0 ? 0 : seed.read(0, hb));
  }

  /// Bucket of each coordinate under h.
  std::vector<std::uint64_t> buckets(const HashFunction& h) const {
    std::vector<std::uint64_t> b(n());
    const std::uint64_t shift = variant_ == HashVariant::kMultiplicative ? 1 : 0;
    for (std::size_t j = 0; j < n(); ++j) b[j] = t_ == 1 ? 0 : h(j + shift);
    return b;
  }

  /// Alphabet index chosen for every coordinate.
  std::vector<std::uint32_t> generate_indices(const BitString& seed) const {
    std::vector<std::uint32_t> out;
    generate_indices_into(seed, out);
    return out;
  }

  void generate_indices_into(const BitString& seed, std::vector<std::uint32_t>& out) const {
    const auto b = buckets(hash_function(seed));
    out.resize(n());
    std::vector<std::uint64_t> next_rank(t_, 0);
    std::vector<std::uint32_t> coeffs(k_);
    std::vector<std::int64_t> loaded(t_, -1);
    std::vector<std::uint32_t> cache;
    for (std::size_t j = 0; j < n(); ++j) {
      const std::uint64_t bucket = b[j];
      if (loaded[bucket] < 0) {
        loaded[bucket] = static_cast<std::int64_t>(cache.size());
        const std::size_t off = hash_bits() + bucket * bucket_seed_bits();
        for (unsigned c = 0; c < k_; ++c) cache.push_back(static_cast<std::uint32_t>(seed.read(off + c * m_, m_)));
      }
      const std::uint32_t x = bucket_->evaluation_points()[next_rank[bucket]++];
      const std::uint32_t word = bucket_->eval_unchecked(cache.data() + loaded[bucket], x);
      out[j] = word & masks_[j];
    }
  }

  std::vector<double> generate(const BitString& seed) const {
    std::vector<double> out;
    generate_into(seed, out);
    return out;
  }

  void generate_into(const BitString& seed, std::vector<double>& out) const {
    std::vector<std::uint32_t> idx;
    generate_indices_into(seed, idx);
    out.resize(n());
    for (std::size_t j = 0; j < n(); ++j) out[j] = alphabets_[j][idx[j]];
  }

  /// Uniformly random seed.
  BitString random_seed(CounterRng& rng) const { return rng.bits(seed_bits()); }

 private:
  void check_seed(const BitString& seed) const {
    if (seed.size() != seed_bits()) {
      throw std::invalid_argument("MZGenerator: seed has " + std::to_string(seed.size()) + " bits, expected " +
                                  std::to_string(seed_bits()));
    }
  }

  std::vector<std::vector<double>> alphabets_;
  std::uint64_t t_;
  unsigned k_;
  HashVariant variant_;
  std::uint64_t omega_ = 1;
  unsigned m_ = 1;
  unsigned hash_m_ = 1;
  std::optional<HashFamily> hash_;
  std::optional<KWiseFamily> bucket_;
  std::vector<std::uint32_t> masks_;
};

inline std::vector<double> generate_sample(const MZGenerator& gen, const BitString& seed) { return gen.generate(seed); }

inline std::size_t seed_bits(const MZGenerator& gen) { return gen.seed_bits(); }

}  // namespace hsprg
