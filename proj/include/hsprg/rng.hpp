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

// Counter-based random streams. Philox4x32-10 keyed by (master seed, shard);
// the counter is the draw index, so any draw of any shard can be regenerated
// independently of the others.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "hsprg/bits.hpp"

namespace hsprg {

inline constexpr std::uint64_t kDefaultMasterSeed = 0x5EED0F5EEDULL;

/// Master seed from HSPRG_SEED if set, else the library default.
inline std::uint64_t default_master_seed() {
  if (const char* s = std::getenv("HSPRG_SEED"); s != nullptr && *s != '\0') {
    return std::stoull(s, nullptr, 0);
  }
  return kDefaultMasterSeed;
}

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kM0 = 0xD2511F53u;
inline constexpr std::uint32_t kM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline Counter round(const Counter& c, const Key& k) {
  const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
}

/// Philox4x32 with 10 rounds.
inline Counter block(Counter c, Key k) {
  for (int r = 0; r < 10; ++r) {
    c = round(c, k);
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

}  // namespace philox

/// A stream of 64-bit words for one (master seed, shard) pair. Satisfies
/// UniformRandomBitGenerator so it plugs into standard and Boost distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t master_seed, std::uint64_t shard, std::uint64_t start = 0)
      : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
        shard_(shard),
        counter_(start) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (!have_spare_) {
      const philox::Counter in{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                               static_cast<std::uint32_t>(shard_), static_cast<std::uint32_t>(shard_ >> 32)};
      const auto out = philox::block(in, key_);
      ++counter_;
      spare_ = (std::uint64_t{out[3]} << 32) | out[2];
      have_spare_ = true;
      return (std::uint64_t{out[1]} << 32) | out[0];
    }
    have_spare_ = false;
    return spare_;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool coin() { return ((*this)() >> 63) != 0; }

  double normal() {
    boost::random::normal_distribution<double> nd;
    return nd(*this);
  }

  /// Fresh uniform bit string of the given length.
  BitString bits(std::size_t n) {
    BitString b(n);
    for (std::size_t off = 0; off < n; off += 64) {
      const unsigned w = static_cast<unsigned>(std::min<std::size_t>(64, n - off));
      b.write(off, w, (*this)());
    }
    return b;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  philox::Key key_;
  std::uint64_t shard_;
  std::uint64_t counter_;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace hsprg
