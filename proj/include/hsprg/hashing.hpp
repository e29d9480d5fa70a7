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

// Hash families [n] -> [t] over GF(2^m): the affine family
// h_{a,c}(x) = (a*x + c) mod t and the multiplicative family h_a(x) = (a*x) mod t,
// where the field value is read as an integer before reducing mod t.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hsprg/ffield.hpp"

namespace hsprg {

enum class HashVariant { kAffine, kMultiplicative };

struct HashFunction {
  FieldElement a;
  FieldElement c;  // zero for the multiplicative variant
  std::uint64_t t = 1;

  std::uint64_t operator()(std::uint64_t x) const {
    const auto& f = GF2m::get(a.field_bits());
    if (x >= f.size()) throw std::out_of_range("HashFunction: x outside field");
    const std::uint32_t y = f.mul(a.bits, static_cast<std::uint32_t>(x)) ^ c.bits;
    return y & (t - 1);
  }
};

inline std::uint64_t hash_eval(const HashFunction& h, std::uint64_t x) { return h(x); }

/// An enumerable hash family. n_pow2 = 2^m is the domain size; t | n_pow2.
class HashFamily {
 public:
  HashFamily(unsigned m, std::uint64_t t, HashVariant variant = HashVariant::kAffine, double b = 1.0)
      : m_(m), t_(t), variant_(variant), b_(b) {
    GF2m::get(m);  // validates m
    if (!is_pow2(t)) throw std::invalid_argument("HashFamily: t must be a power of 2");
    if (t > (std::uint64_t{1} << m)) throw std::invalid_argument("HashFamily: t must divide 2^m");
  }

  /// A family consisting of exactly the listed multipliers/offsets.
  static HashFamily restricted(unsigned m, std::uint64_t t, std::vector<std::pair<std::uint32_t, std::uint32_t>> ac) {
    HashFamily fam(m, t, HashVariant::kAffine);
    const auto size = std::uint64_t{1} << m;
    for (const auto& [a, c] : ac) {
      if (a >= size || c >= size) throw std::invalid_argument("HashFamily::restricted: element outside field");
    }
    fam.explicit_ = std::move(ac);
    return fam;
  }

  unsigned field_bits() const { return m_; }
  std::uint64_t n_pow2() const { return std::uint64_t{1} << m_; }
  std::uint64_t t() const { return t_; }
  HashVariant variant() const { return variant_; }
  double target_b() const { return b_; }

  std::uint64_t size() const {
    if (explicit_) return explicit_->size();
    if (t_ == 1) return 1;
    return variant_ == HashVariant::kAffine ? n_pow2() * n_pow2() : n_pow2() - 1;
  }

  /// Number of seed bits needed to index a member of the family.
  unsigned index_bits() const {
    if (t_ == 1) return 0;
    return variant_ == HashVariant::kAffine ? 2 * m_ : m_;
  }

  /// The i-th function in enumeration order.
  HashFunction function(std::uint64_t i) const {
    if (i >= size()) throw std::out_of_range("HashFamily::function: index out of range");
    if (explicit_) return make((*explicit_)[i].first, (*explicit_)[i].second);
    if (t_ == 1) return make(1, 0);
    if (variant_ == HashVariant::kAffine) return make(static_cast<std::uint32_t>(i >> m_),
                                                      static_cast<std::uint32_t>(i & (n_pow2() - 1)));
    return make(static_cast<std::uint32_t>(i + 1), 0);
  }

  /// Maps raw seed bits of width index_bits() to a function. For the
  /// multiplicative variant the m-bit index is folded onto the n-1 nonzero
  /// multipliers, so a = 1 carries probability 2/2^m.
  HashFunction function_from_index_bits(std::uint64_t raw) const {
    if (t_ == 1) return make(1, 0);
    if (variant_ == HashVariant::kAffine) return function(raw);
    return make(static_cast<std::uint32_t>(1 + raw % (n_pow2() - 1)), 0);
  }

  std::vector<HashFunction> functions() const {
    std::vector<HashFunction> out;
    out.reserve(size());
    for (std::uint64_t i = 0; i < size(); ++i) out.push_back(function(i));
    return out;
  }

 private:
  HashFunction make(std::uint32_t a, std::uint32_t c) const {
    return HashFunction{FieldElement::make(m_, a), FieldElement::make(m_, c), t_};
  }

  unsigned m_;
  std::uint64_t t_;
  HashVariant variant_;
  double b_;
  std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> explicit_;
};

/// Exact probability as a count over an enumerated family.
struct ExactProb {
  std::uint64_t count = 0;
  std::uint64_t total = 1;
  double value() const { return static_cast<double>(count) / static_cast<double>(total); }
  /// this <= num/den, compared exactly.
  bool at_most(std::uint64_t num, std::uint64_t den) const {
    return static_cast<unsigned __int128>(count) * den <= static_cast<unsigned __int128>(num) * total;
  }
};

/// Bucket of every (point, function) pair for points in `domain`, laid out
/// point-major so per-point rows are contiguous.
class HashTable {
 public:
  static constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 28;

  HashTable(const HashFamily& family, std::span<const std::uint64_t> domain) : family_size_(family.size()) {
    if (family_size_ * domain.size() > kMaxEntries) throw ResourceError("HashTable: family too large to enumerate");
    const auto fns = family.functions();
    rows_.resize(domain.size() * family_size_);
    index_.assign(family.n_pow2(), kAbsent);
    for (std::size_t p = 0; p < domain.size(); ++p) {
      index_.at(domain[p]) = p;
      for (std::uint64_t f = 0; f < family_size_; ++f) {
        rows_[p * family_size_ + f] = static_cast<std::uint32_t>(fns[f](domain[p]));
      }
    }
  }

  explicit HashTable(const HashFamily& family) : HashTable(family, iota(family.n_pow2())) {}

  std::uint64_t family_size() const { return family_size_; }

  std::span<const std::uint32_t> row(std::uint64_t x) const {
    const auto p = index_.at(x);
    if (p == kAbsent) throw std::out_of_range("HashTable: point not tabulated");
    return {rows_.data() + p * family_size_, family_size_};
  }

 private:
  static constexpr std::uint64_t kAbsent = ~std::uint64_t{0};
  static std::vector<std::uint64_t> iota(std::uint64_t n) {
    std::vector<std::uint64_t> v(n);
    for (std::uint64_t i = 0; i < n; ++i) v[i] = i;
    return v;
  }

  std::uint64_t family_size_;
  std::vector<std::uint32_t> rows_;
  std::vector<std::uint64_t> index_;
};

struct CollisionStats {
  ExactProb max_bucket;     // max over (i, l) of Pr[h(i) = l]
  ExactProb max_collision;  // max over i != j of Pr[h(i) = h(j)]
  std::uint64_t t = 1;
  std::pair<std::uint64_t, std::uint64_t> worst_pair{0, 0};

  /// Smallest b for which the family is b-collision preserving.
  double certified_b() const { return static_cast<double>(t) * std::max(max_bucket.value(), max_collision.value()); }
  bool certifies(std::uint64_t b_num, std::uint64_t b_den = 1) const {
    return max_bucket.at_most(b_num, b_den * t) && max_collision.at_most(b_num, b_den * t);
  }
};

/// Exact single-bucket and pairwise-collision probabilities over the whole
/// family, for every point / pair of distinct points below `domain_size`.
inline CollisionStats collision_stats(const HashFamily& family, std::optional<std::uint64_t> domain_size = {}) {
  const std::uint64_t n = domain_size.value_or(family.n_pow2());
  if (n > family.n_pow2()) throw std::invalid_argument("collision_stats: domain larger than field");
  std::vector<std::uint64_t> domain(n);
  for (std::uint64_t i = 0; i < n; ++i) domain[i] = i;
  const HashTable table(family, domain);
  const auto F = table.family_size();

  CollisionStats st;
  st.t = family.t();
  st.max_bucket.total = F;
  st.max_collision.total = F;
  std::vector<std::uint64_t> counts(family.t());
  for (std::uint64_t i = 0; i < n; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    for (auto b : table.row(i)) ++counts[b];
    st.max_bucket.count = std::max(st.max_bucket.count, *std::max_element(counts.begin(), counts.end()));
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto ri = table.row(i);
    for (std::uint64_t j = i + 1; j < n; ++j) {
      const auto rj = table.row(j);
      std::uint64_t same = 0;
      for (std::uint64_t f = 0; f < F; ++f) same += (ri[f] == rj[f]);
      if (same > st.max_collision.count) {
        st.max_collision.count = same;
        st.worst_pair = {i, j};
      }
    }
  }
  if (n < 2) st.max_collision.count = 0;
  return st;
}

/// Exact Pr_h[h is not S-isolating], i.e. some pair of S shares a bucket.
inline ExactProb isolation_failure_prob(const HashTable& table, std::span<const std::uint64_t> S) {
  if (S.empty()) throw std::invalid_argument("isolation_failure_prob: S must be nonempty");
  const auto F = table.family_size();
  std::vector<std::uint8_t> fail(F, 0);
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto ri = table.row(S[i]);
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      const auto rj = table.row(S[j]);
      for (std::uint64_t f = 0; f < F; ++f) fail[f] |= static_cast<std::uint8_t>(ri[f] == rj[f]);
    }
  }
  ExactProb p;
  p.total = F;
  for (auto v : fail) p.count += v;
  return p;
}

inline ExactProb isolation_failure_prob(const HashFamily& family, std::span<const std::uint64_t> S) {
  return isolation_failure_prob(HashTable(family, S), S);
}

/// The union bound b * |S|^2 / (2t) on the isolation failure probability.
inline double isolation_bound(double b, std::size_t set_size, std::uint64_t t) {
  return b * static_cast<double>(set_size * set_size) / (2.0 * static_cast<double>(t));
}

}  // namespace hsprg
