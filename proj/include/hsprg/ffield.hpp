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

// GF(2^m) arithmetic for m <= 32 and k-wise independent sample spaces built
// from degree-(k-1) polynomials over those fields.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsprg/bits.hpp"
#include "hsprg/common.hpp"

namespace hsprg {

inline constexpr unsigned kMaxFieldBits = 32;

/// Pinned modulus for each m in [1, 32], including the leading x^m term.
/// These are the usual low-weight primitive trinomials/pentanomials. Seeds
/// are only portable across implementations that agree on this table.
///
///   m  modulus                      m  modulus
///   1  x + 1                        17 x^17 + x^3 + 1
///   2  x^2 + x + 1                  18 x^18 + x^7 + 1
///   3  x^3 + x + 1                  19 x^19 + x^5 + x^2 + x + 1
///   4  x^4 + x + 1                  20 x^20 + x^3 + 1
///   5  x^5 + x^2 + 1                21 x^21 + x^2 + 1
///   6  x^6 + x + 1                  22 x^22 + x + 1
///   7  x^7 + x + 1                  23 x^23 + x^5 + 1
///   8  x^8 + x^4 + x^3 + x^2 + 1    24 x^24 + x^7 + x^2 + x + 1
///   9  x^9 + x^4 + 1                25 x^25 + x^3 + 1
///   10 x^10 + x^3 + 1               26 x^26 + x^6 + x^2 + x + 1
///   11 x^11 + x^2 + 1               27 x^27 + x^5 + x^2 + x + 1
///   12 x^12 + x^6 + x^4 + x + 1     28 x^28 + x^3 + 1
///   13 x^13 + x^4 + x^3 + x + 1     29 x^29 + x^2 + 1
///   14 x^14 + x^10 + x^6 + x + 1    30 x^30 + x^23 + x^2 + x + 1
///   15 x^15 + x + 1                 31 x^31 + x^3 + 1
///   16 x^16 + x^12 + x^3 + x + 1    32 x^32 + x^22 + x^2 + x + 1
inline constexpr std::array<std::uint64_t, kMaxFieldBits + 1> kPinnedModuli = {
    0x0,         0x3,        0x7,        0xB,        0x13,       0x25,       0x43,
    0x83,        0x11D,      0x211,      0x409,      0x805,      0x1053,     0x201B,
    0x4443,      0x8003,     0x1100B,    0x20009,    0x40081,    0x80027,    0x100009,
    0x200005,    0x400003,   0x800021,   0x1000087,  0x2000009,  0x4000047,  0x8000027,
    0x10000009,  0x20000005, 0x40800007, 0x80000009, 0x100400007};

namespace gf2poly {

inline int degree(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

/// Remainder of a modulo b over GF(2)[x].
inline std::uint64_t mod(std::uint64_t a, std::uint64_t b) {
  const int db = degree(b);
  if (db < 0) throw std::invalid_argument("gf2poly::mod: zero divisor");
  for (int da = degree(a); da >= db; da = degree(a)) a ^= b << (da - db);
  return a;
}

/// Carry-less product of two polynomials of degree < 32.
inline std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1u) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return mod(clmul(a, b), m);
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a = mod(a, b);
    std::swap(a, b);
  }
  return a;
}

/// Irreducibility by trial division against every polynomial of degree
/// 1..deg/2. Cheap for deg <= 16.
inline bool irreducible_trial_division(std::uint64_t p) {
  const int d = degree(p);
  if (d < 1) return false;
  for (int dd = 1; dd <= d / 2; ++dd) {
    for (std::uint64_t q = std::uint64_t{1} << dd; q < (std::uint64_t{2} << dd); ++q) {
      if (mod(p, q) == 0) return false;
    }
  }
  return true;
}

/// Rabin's irreducibility test: x^(2^d) = x mod p and
/// gcd(x^(2^(d/r)) - x, p) = 1 for each prime r | d.
inline bool irreducible_rabin(std::uint64_t p) {
  const int d = degree(p);
  if (d < 1) return false;
  if (d == 1) return true;
  auto frobenius_power = [&](int k) {
    std::uint64_t x = 2;  // the polynomial "x"
    for (int i = 0; i < k; ++i) x = mulmod(x, x, p);
    return x;
  };
  if (frobenius_power(d) != mod(2, p)) return false;
  for (int r = 2; r <= d; ++r) {
    if (d % r != 0) continue;
    bool prime = true;
    for (int f = 2; f * f <= r; ++f) prime = prime && (r % f != 0);
    if (!prime) continue;
    if (gcd(p, frobenius_power(d / r) ^ 2) != 1) return false;
  }
  return true;
}

}  // namespace gf2poly

/// The field GF(2^m) under its pinned modulus. Instances are shared and
/// immutable; obtain them through GF2m::get(m).
class GF2m {
 public:
  static const GF2m& get(unsigned m) {
    if (m < 1 || m > kMaxFieldBits) throw std::invalid_argument("GF2m: m must be in [1, 32]");
    static std::array<std::once_flag, kMaxFieldBits + 1> flags;
    static std::array<std::unique_ptr<GF2m>, kMaxFieldBits + 1> fields;
    std::call_once(flags[m], [m] { fields[m].reset(new GF2m(m)); });
    return *fields[m];
  }

  unsigned bits() const { return m_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t size() const { return std::uint64_t{1} << m_; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (!log_.empty()) {
      if (a == 0 || b == 0) return 0;
      return exp_[log_[a] + log_[b]];
    }
    return static_cast<std::uint32_t>(gf2poly::mulmod(a, b, modulus_));
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("GF2m::inv: zero has no inverse");
    if (!log_.empty()) return exp_[(size() - 1 - log_[a]) % (size() - 1)];
    // a^(2^m - 2) by square-and-multiply.
    std::uint32_t r = 1, base = a;
    for (std::uint64_t e = size() - 2; e != 0; e >>= 1) {
      if (e & 1u) r = mul(r, base);
      base = mul(base, base);
    }
    return r;
  }

 private:
  explicit GF2m(unsigned m) : m_(m), modulus_(kPinnedModuli[m]) {
    if (gf2poly::degree(modulus_) != static_cast<int>(m)) {
      throw std::logic_error("GF2m: pinned modulus has wrong degree");
    }
    if (m <= 16) {
      if (!gf2poly::irreducible_trial_division(modulus_)) {
        throw std::logic_error("GF2m: pinned modulus is reducible for m=" + std::to_string(m));
      }
      build_tables();
    }
  }

  void build_tables() {
    const std::uint64_t order = size() - 1;
    if (order == 1) {  // GF(2)
      log_ = {0, 0};
      exp_ = {1, 1};
      return;
    }
    // Find a generator of the multiplicative group.
    for (std::uint32_t g = 2; g < size(); ++g) {
      std::vector<std::uint32_t> exp(2 * order);
      std::uint32_t x = 1;
      bool generator = true;
      for (std::uint64_t i = 0; i < order; ++i) {
        if (i > 0 && x == 1) {
          generator = false;
          break;
        }
        exp[i] = x;
        x = static_cast<std::uint32_t>(gf2poly::mulmod(x, g, modulus_));
      }
      if (!generator || x != 1) continue;
      for (std::uint64_t i = order; i < 2 * order; ++i) exp[i] = exp[i - order];
      log_.assign(size(), 0);
      for (std::uint64_t i = 0; i < order; ++i) log_[exp[i]] = static_cast<std::uint32_t>(i);
      exp_ = std::move(exp);
      return;
    }
    throw std::logic_error("GF2m: no generator found");
  }

  unsigned m_;
  std::uint64_t modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
};

/// An element of GF(2^m), tagged with the modulus it lives under.
struct FieldElement {
  std::uint32_t bits = 0;
  std::uint64_t modulus = kPinnedModuli[1];

  static FieldElement make(unsigned m, std::uint64_t value) {
    if (m < 1 || m > kMaxFieldBits) throw std::invalid_argument("FieldElement: m must be in [1, 32]");
    if (value >= (std::uint64_t{1} << m)) throw std::invalid_argument("FieldElement: value >= 2^m");
    return FieldElement{static_cast<std::uint32_t>(value), kPinnedModuli[m]};
  }

  unsigned field_bits() const { return static_cast<unsigned>(gf2poly::degree(modulus)); }
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

inline void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.modulus != b.modulus) throw std::invalid_argument("field elements have different moduli");
}

inline FieldElement field_add(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return FieldElement{a.bits ^ b.bits, a.modulus};
}

inline FieldElement field_mul(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  const auto& f = GF2m::get(a.field_bits());
  return FieldElement{f.mul(a.bits, b.bits), a.modulus};
}

inline FieldElement field_inv(const FieldElement& a) {
  const auto& f = GF2m::get(a.field_bits());
  return FieldElement{f.inv(a.bits), a.modulus};
}

/// Coefficients of a degree-(k-1) polynomial; coefficients[0] is the constant term.
struct KWiseSeed {
  std::vector<std::uint32_t> coefficients;
};

/// k-wise independent family of n words of m bits: output i is p(alpha_i) for a
/// uniformly random polynomial p of degree < k.
class KWiseFamily {
 public:
  /// Evaluation points default to the field elements 0, 1, ..., n-1.
  KWiseFamily(unsigned m, unsigned k, std::uint64_t n) : KWiseFamily(m, k, default_points(m, n)) {}

  KWiseFamily(unsigned m, unsigned k, std::vector<std::uint32_t> points)
      : field_(&GF2m::get(m)), k_(k), points_(std::move(points)) {
    if (k_ < 1) throw std::invalid_argument("KWiseFamily: k must be >= 1");
    if (points_.size() > field_->size()) throw std::invalid_argument("KWiseFamily: n > 2^m");
    std::vector<bool> seen(field_->size(), false);
    for (auto p : points_) {
      if (p >= field_->size()) throw std::invalid_argument("KWiseFamily: point outside field");
      if (seen[p]) throw std::invalid_argument("KWiseFamily: evaluation points must be distinct");
      seen[p] = true;
    }
  }

  unsigned m() const { return field_->bits(); }
  unsigned k() const { return k_; }
  std::uint64_t n() const { return points_.size(); }
  const GF2m& field() const { return *field_; }
  const std::vector<std::uint32_t>& evaluation_points() const { return points_; }

  std::size_t seed_bits() const { return static_cast<std::size_t>(k_) * m(); }

  KWiseSeed read_seed(BitReader& reader) const {
    KWiseSeed s;
    s.coefficients.resize(k_);
    for (auto& c : s.coefficients) c = static_cast<std::uint32_t>(reader.take(m()));
    return s;
  }

  KWiseSeed seed_from_bits(const BitString& bits) const {
    if (bits.size() != seed_bits()) throw std::invalid_argument("KWiseFamily: wrong seed length");
    BitReader r(bits);
    return read_seed(r);
  }

  std::uint32_t expand(const KWiseSeed& seed, std::uint64_t index) const {
    if (seed.coefficients.size() != k_) throw std::invalid_argument("KWiseFamily: seed must have k coefficients");
    if (index >= points_.size()) throw std::out_of_range("KWiseFamily: index out of range");
    return eval_unchecked(seed.coefficients.data(), points_[index]);
  }

  /// Horner evaluation without validation; `coeffs` holds k words.
  std::uint32_t eval_unchecked(const std::uint32_t* coeffs, std::uint32_t x) const {
    std::uint32_t r = coeffs[k_ - 1];
    for (unsigned i = k_ - 1; i-- > 0;) r = field_->mul(r, x) ^ coeffs[i];
    return r;
  }

 private:
  static std::vector<std::uint32_t> default_points(unsigned m, std::uint64_t n) {
    const auto& f = GF2m::get(m);
    if (n > f.size()) throw std::invalid_argument("KWiseFamily: n > 2^m");
    std::vector<std::uint32_t> pts(n);
    for (std::uint64_t i = 0; i < n; ++i) pts[i] = static_cast<std::uint32_t>(i);
    return pts;
  }

  const GF2m* field_;
  unsigned k_;
  std::vector<std::uint32_t> points_;
};

/// k-wise independent words wider than the field: `width` output bits are the
/// concatenation of ceil(width / m) independent families over GF(2^m).
class WideKWiseFamily {
 public:
  WideKWiseFamily(unsigned m, unsigned k, std::uint64_t n, unsigned width)
      : part_(m, k, n), width_(width), parts_((width + m - 1) / m) {
    if (width < 1 || width > 64) throw std::invalid_argument("WideKWiseFamily: width must be in [1, 64]");
  }

  unsigned width() const { return width_; }
  std::size_t seed_bits() const { return parts_ * part_.seed_bits(); }

  std::vector<KWiseSeed> read_seed(BitReader& reader) const {
    std::vector<KWiseSeed> seeds;
    for (unsigned p = 0; p < parts_; ++p) seeds.push_back(part_.read_seed(reader));
    return seeds;
  }

  std::uint64_t expand(const std::vector<KWiseSeed>& seeds, std::uint64_t index) const {
    if (seeds.size() != parts_) throw std::invalid_argument("WideKWiseFamily: wrong number of seed parts");
    std::uint64_t out = 0;
    for (unsigned p = 0; p < parts_; ++p) {
      out |= static_cast<std::uint64_t>(part_.expand(seeds[p], index)) << (p * part_.m());
    }
    return width_ == 64 ? out : (out & ((std::uint64_t{1} << width_) - 1));
  }

 private:
  KWiseFamily part_;
  unsigned width_;
  unsigned parts_;
};

inline std::uint32_t kwise_expand(const KWiseFamily& family, const KWiseSeed& seed, std::uint64_t index) {
  return family.expand(seed, index);
}

inline std::size_t kwise_seed_bits(const KWiseFamily& family) { return family.seed_bits(); }

}  // namespace hsprg
