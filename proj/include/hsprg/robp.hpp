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

// Read-once branching programs over D-bit labels: evaluation, halfspace
// compilation, monotonicity certificates, monotone sandwiching and a
// recursive-hashing generator for small-width programs.

#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hsprg/bits.hpp"
#include "hsprg/common.hpp"
#include "hsprg/ffield.hpp"
#include "hsprg/halfspace.hpp"
#include "hsprg/rng.hpp"

namespace hsprg {

/// Layer i (0..T) has width(i) states; step i maps (state in layer i, label)
/// to a state in layer i+1. Layer 0 holds the start state.
class ROBP {
 public:
  ROBP() = default;

  ROBP(unsigned D, std::vector<std::uint32_t> widths, std::vector<std::vector<std::uint32_t>> next,
       std::vector<std::uint8_t> accept, std::uint32_t start = 0)
      : D_(D), widths_(std::move(widths)), next_(std::move(next)), accept_(std::move(accept)), start_(start) {
    validate();
  }

  /// Width-1 program with a constant answer.
  static ROBP constant(std::size_t T, unsigned D, bool value) {
    const std::size_t L = std::size_t{1} << D;
    return ROBP(D, std::vector<std::uint32_t>(T + 1, 1), std::vector<std::vector<std::uint32_t>>(T, std::vector<std::uint32_t>(L, 0)),
                {static_cast<std::uint8_t>(value)});
  }

  std::size_t T() const { return next_.size(); }
  unsigned D() const { return D_; }
  std::size_t labels() const { return std::size_t{1} << D_; }
  std::uint32_t width(std::size_t layer) const { return widths_.at(layer); }
  const std::vector<std::uint32_t>& widths() const { return widths_; }
  std::uint32_t max_width() const { return *std::max_element(widths_.begin(), widths_.end()); }
  std::uint32_t start() const { return start_; }
  std::uint32_t next(std::size_t step, std::uint32_t v, std::uint32_t label) const {
    return next_[step][static_cast<std::size_t>(v) * labels() + label];
  }
  bool accept(std::uint32_t v) const { return accept_.at(v); }
  const std::vector<std::uint8_t>& accept_bits() const { return accept_; }
  const std::vector<std::vector<std::uint32_t>>& transitions() const { return next_; }

  /// Smallest S with every width <= 2^S.
  unsigned space_bits() const { return ceil_log2(max_width()); }

  bool eval(std::span<const std::uint32_t> z) const {
    if (z.size() != T()) throw std::invalid_argument("ROBP::eval: expected " + std::to_string(T()) + " labels");
    std::uint32_t v = start_;
    for (std::size_t i = 0; i < T(); ++i) {
      if (z[i] >= labels()) throw std::invalid_argument("ROBP::eval: label wider than D bits");
      v = next(i, v, z[i]);
    }
    return accept_[v];
  }

  /// Labels packed D bits at a time, step 0 in the low bits.
  bool eval_packed(std::uint64_t packed) const {
    const std::uint64_t mask = labels() - 1;
    std::uint32_t v = start_;
    for (std::size_t i = 0; i < T(); ++i) v = next(i, v, static_cast<std::uint32_t>(packed >> (i * D_) & mask));
    return accept_[v];
  }

 private:
  void validate() const {
    if (D_ < 1 || D_ > 16) throw std::invalid_argument("ROBP: D must be in [1, 16]");
    if (widths_.size() != next_.size() + 1) throw std::invalid_argument("ROBP: need T+1 layer widths");
    for (auto w : widths_) {
      if (w == 0) throw std::invalid_argument("ROBP: empty layer");
    }
    if (widths_[0] != 1 || start_ != 0) throw std::invalid_argument("ROBP: layer 0 must hold exactly the start state");
    for (std::size_t i = 0; i < next_.size(); ++i) {
      if (next_[i].size() != static_cast<std::size_t>(widths_[i]) * labels()) {
        throw std::invalid_argument("ROBP: step " + std::to_string(i) + " transitions are not total");
      }
      for (auto u : next_[i]) {
        if (u >= widths_[i + 1]) throw std::invalid_argument("ROBP: transition to missing state");
      }
    }
    if (accept_.size() != widths_.back()) throw std::invalid_argument("ROBP: accept bits size mismatch");
    for (auto a : accept_) {
      if (a > 1) throw std::invalid_argument("ROBP: accept bits must be 0/1");
    }
  }

  unsigned D_ = 1;
  std::vector<std::uint32_t> widths_{1};
  std::vector<std::vector<std::uint32_t>> next_;
  std::vector<std::uint8_t> accept_{0};
  std::uint32_t start_ = 0;
};

inline bool eval_robp(const ROBP& b, std::span<const std::uint32_t> z) { return b.eval(z); }

/// Per layer, the states listed from smallest to largest accepting set.
struct MonotoneCertificate {
  std::vector<std::vector<std::uint32_t>> order;
};

/// Two states of one layer with incomparable accepting sets.
struct MonotoneWitness {
  std::size_t layer = 0;
  std::uint32_t v = 0;
  std::uint32_t w = 0;
};

/// Per-step label probabilities; empty means uniform.
using StepDistribution = std::vector<std::vector<double>>;

inline std::vector<double> step_probs(const ROBP& b, const StepDistribution& dist, std::size_t step) {
  if (dist.empty()) return std::vector<double>(b.labels(), 1.0 / static_cast<double>(b.labels()));
  if (dist.size() != b.T() || dist[step].size() != b.labels()) {
    throw std::invalid_argument("StepDistribution: shape does not match the program");
  }
  return dist[step];
}

/// P(v) = Pr[accept | at v] for every state of every layer.
inline std::vector<std::vector<double>> acceptance_probs(const ROBP& b, const StepDistribution& dist = {}) {
  std::vector<std::vector<double>> P(b.T() + 1);
  P[b.T()].resize(b.width(b.T()));
  for (std::uint32_t v = 0; v < b.width(b.T()); ++v) P[b.T()][v] = b.accept(v);
  for (std::size_t i = b.T(); i-- > 0;) {
    const auto p = step_probs(b, dist, i);
    P[i].assign(b.width(i), 0.0);
    for (std::uint32_t v = 0; v < b.width(i); ++v) {
      CompensatedSum s;
      for (std::uint32_t l = 0; l < b.labels(); ++l) s.add(p[l] * P[i + 1][b.next(i, v, l)]);
      P[i][v] = s.value();
    }
  }
  return P;
}

inline double acceptance_probability(const ROBP& b, const StepDistribution& dist = {}) {
  return acceptance_probs(b, dist)[0][b.start()];
}

/// Calls f(packed labels) for every input; T*D must be at most 40.
inline void for_each_input(const ROBP& b, const std::function<void(std::uint64_t)>& f) {
  const std::size_t bits = b.T() * b.D();
  if (bits > 40) throw ResourceError("for_each_input: more than 2^40 inputs");
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << bits); ++z) f(z);
}

inline std::vector<std::uint32_t> unpack_labels(std::uint64_t packed, std::size_t T, unsigned D) {
  std::vector<std::uint32_t> z(T);
  for (std::size_t i = 0; i < T; ++i) z[i] = static_cast<std::uint32_t>(packed >> (i * D) & ((1u << D) - 1));
  return z;
}

/// Drops states unreachable from the start and renumbers the rest in
/// ascending original order.
inline ROBP compact(const ROBP& b) {
  std::vector<std::vector<std::int64_t>> id(b.T() + 1);
  for (std::size_t i = 0; i <= b.T(); ++i) id[i].assign(b.width(i), -1);
  id[0][0] = 0;
  std::vector<std::uint32_t> widths(b.T() + 1, 0);
  widths[0] = 1;
  for (std::size_t i = 0; i < b.T(); ++i) {
    std::vector<bool> hit(b.width(i + 1), false);
    for (std::uint32_t v = 0; v < b.width(i); ++v) {
      if (id[i][v] < 0) continue;
      for (std::uint32_t l = 0; l < b.labels(); ++l) hit[b.next(i, v, l)] = true;
    }
    for (std::uint32_t u = 0; u < b.width(i + 1); ++u) {
      if (hit[u]) id[i + 1][u] = widths[i + 1]++;
    }
  }
  std::vector<std::vector<std::uint32_t>> next(b.T());
  for (std::size_t i = 0; i < b.T(); ++i) {
    next[i].resize(static_cast<std::size_t>(widths[i]) * b.labels());
    for (std::uint32_t v = 0; v < b.width(i); ++v) {
      if (id[i][v] < 0) continue;
      for (std::uint32_t l = 0; l < b.labels(); ++l) {
        next[i][static_cast<std::size_t>(id[i][v]) * b.labels() + l] = static_cast<std::uint32_t>(id[i + 1][b.next(i, v, l)]);
      }
    }
  }
  std::vector<std::uint8_t> acc(widths[b.T()]);
  for (std::uint32_t v = 0; v < b.width(b.T()); ++v) {
    if (id[b.T()][v] >= 0) acc[id[b.T()][v]] = b.accept(v);
  }
  return ROBP(b.D(), std::move(widths), std::move(next), std::move(acc));
}

/// Merges states with identical accepting suffix sets, layer by layer from
/// the end, then drops unreachable states.
inline ROBP minimize(const ROBP& b) {
  const std::size_t T = b.T(), L = b.labels();
  std::vector<std::vector<std::uint32_t>> cls(T + 1);
  std::vector<std::uint32_t> widths(T + 1);
  cls[T].resize(b.width(T));
  std::vector<std::uint8_t> acc;
  {
    std::map<std::uint8_t, std::uint32_t> ids;
    for (std::uint32_t v = 0; v < b.width(T); ++v) {
      auto [it, fresh] = ids.emplace(b.accept(v), static_cast<std::uint32_t>(ids.size()));
      if (fresh) acc.push_back(b.accept(v));
      cls[T][v] = it->second;
    }
    widths[T] = static_cast<std::uint32_t>(ids.size());
  }
  std::vector<std::vector<std::uint32_t>> next(T);
  for (std::size_t i = T; i-- > 0;) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    cls[i].resize(b.width(i));
    for (std::uint32_t v = 0; v < b.width(i); ++v) {
      std::vector<std::uint32_t> sig(L);
      for (std::uint32_t l = 0; l < L; ++l) sig[l] = cls[i + 1][b.next(i, v, l)];
      auto [it, fresh] = ids.emplace(sig, static_cast<std::uint32_t>(ids.size()));
      if (fresh) next[i].insert(next[i].end(), sig.begin(), sig.end());
      cls[i][v] = it->second;
    }
    widths[i] = static_cast<std::uint32_t>(ids.size());
  }
  // Layer 0 holds only the start state, so it stays a single class.
  return compact(ROBP(b.D(), std::move(widths), std::move(next), std::move(acc)));
}

/// Walks the layers from the end computing inc(v, u) = [Acc(v) is a subset
/// of Acc(u)]: it holds iff it holds for the successors under every label.
/// visit(layer, width, inc) sees each layer's relation, row-major; returning
/// false stops the sweep.
inline void inclusion_sweep(const ROBP& b,
                            const std::function<bool(std::size_t, std::uint32_t, const std::vector<std::uint8_t>&)>& visit) {
  const std::size_t T = b.T();
  std::vector<std::uint8_t> later, cur;
  for (std::size_t i = T + 1; i-- > 0;) {
    const std::uint32_t w = b.width(i);
    cur.assign(static_cast<std::size_t>(w) * w, 0);
    for (std::uint32_t v = 0; v < w; ++v) {
      for (std::uint32_t u = 0; u < w; ++u) {
        bool inc = true;
        if (i == T) {
          inc = b.accept(v) <= b.accept(u);
        } else {
          const std::uint32_t wn = b.width(i + 1);
          for (std::uint32_t l = 0; l < b.labels() && inc; ++l) {
            inc = later[static_cast<std::size_t>(b.next(i, v, l)) * wn + b.next(i, u, l)];
          }
        }
        cur[static_cast<std::size_t>(v) * w + u] = inc;
      }
    }
    if (!visit(i, w, cur)) return;
    std::swap(later, cur);
  }
}

/// Certificate when every layer is totally ordered by inclusion of accepting
/// sets, otherwise an incomparable pair.
inline std::variant<MonotoneCertificate, MonotoneWitness> check_monotone(const ROBP& b) {
  MonotoneCertificate cert;
  cert.order.resize(b.T() + 1);
  std::optional<MonotoneWitness> bad;
  inclusion_sweep(b, [&](std::size_t i, std::uint32_t w, const std::vector<std::uint8_t>& inc) {
    for (std::uint32_t v = 0; v < w; ++v) {
      for (std::uint32_t u = v + 1; u < w; ++u) {
        if (!inc[static_cast<std::size_t>(v) * w + u] && !inc[static_cast<std::size_t>(u) * w + v]) {
          bad = MonotoneWitness{i, v, u};
          return false;
        }
      }
    }
    // Total preorder: rank by the number of states below.
    std::vector<std::uint32_t> below(w, 0);
    for (std::uint32_t v = 0; v < w; ++v) {
      for (std::uint32_t u = 0; u < w; ++u) below[v] += inc[static_cast<std::size_t>(u) * w + v];
    }
    auto& ord = cert.order[i];
    ord.resize(w);
    std::iota(ord.begin(), ord.end(), 0u);
    std::stable_sort(ord.begin(), ord.end(), [&](auto x, auto y) { return below[x] < below[y]; });
    return true;
  });
  if (bad) return *bad;
  return cert;
}

/// Checks that each layer's listed order is a chain under inclusion.
inline bool verify_certificate(const ROBP& b, const MonotoneCertificate& cert) {
  if (cert.order.size() != b.T() + 1) return false;
  for (std::size_t i = 0; i <= b.T(); ++i) {
    auto sorted = cert.order[i];
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t k = 0; k < sorted.size(); ++k) {
      if (sorted.size() != b.width(i) || sorted[k] != k) return false;
    }
  }
  bool ok = true;
  inclusion_sweep(b, [&](std::size_t i, std::uint32_t w, const std::vector<std::uint8_t>& inc) {
    const auto& ord = cert.order[i];
    for (std::size_t k = 1; k < ord.size() && ok; ++k) ok = inc[static_cast<std::size_t>(ord[k - 1]) * w + ord[k]];
    return ok;
  });
  return ok;
}

struct CompiledHalfspace {
  ROBP program;
  MonotoneCertificate certificate;
  std::vector<std::vector<Rational>> partial_sums;  // per layer, ascending
};

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 20;

/// Compiles 1[sum_j w_j x_j >= theta] (or > theta when strict). Step j reads
/// label l and sets x_j = alphabets[j][l]; every alphabet has 2^D entries.
inline CompiledHalfspace halfspace_to_robp(std::span<const double> w, double theta,
                                           const std::vector<std::vector<double>>& alphabets, bool strict = false,
                                           std::size_t state_cap = kDefaultStateCap) {
  const std::size_t T = w.size();
  if (alphabets.size() != T) throw std::invalid_argument("halfspace_to_robp: need one alphabet per step");
  if (T == 0) throw std::invalid_argument("halfspace_to_robp: empty weight vector");
  const std::size_t L = alphabets[0].size();
  if (!is_pow2(L) || L < 2) throw std::invalid_argument("halfspace_to_robp: alphabet size must be a power of 2 >= 2");
  for (const auto& a : alphabets) {
    if (a.size() != L) throw std::invalid_argument("halfspace_to_robp: alphabets must share one size");
  }
  const unsigned D = ceil_log2(L);
  CompiledHalfspace out;
  out.partial_sums.push_back({Rational(0)});
  std::vector<std::vector<std::uint32_t>> next(T);
  for (std::size_t j = 0; j < T; ++j) {
    const auto& cur = out.partial_sums[j];
    std::vector<Rational> steps;
    for (double a : alphabets[j]) steps.push_back(Rational(w[j]) * Rational(a));
    std::vector<Rational> nxt;
    nxt.reserve(cur.size() * L);
    for (const auto& s : cur) {
      for (const auto& d : steps) nxt.push_back(s + d);
    }
    std::sort(nxt.begin(), nxt.end());
    nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
    if (nxt.size() > state_cap) {
      throw ResourceError("halfspace_to_robp: layer " + std::to_string(j + 1) + " exceeds the state cap of " +
                          std::to_string(state_cap));
    }
    next[j].resize(cur.size() * L);
    for (std::size_t v = 0; v < cur.size(); ++v) {
      for (std::size_t l = 0; l < L; ++l) {
        const auto it = std::lower_bound(nxt.begin(), nxt.end(), cur[v] + steps[l]);
        next[j][v * L + l] = static_cast<std::uint32_t>(it - nxt.begin());
      }
    }
    out.partial_sums.push_back(std::move(nxt));
  }
  const Rational th(theta);
  std::vector<std::uint8_t> acc;
  for (const auto& s : out.partial_sums.back()) acc.push_back(strict ? s > th : s >= th);
  std::vector<std::uint32_t> widths;
  for (const auto& layer : out.partial_sums) widths.push_back(static_cast<std::uint32_t>(layer.size()));
  out.program = ROBP(D, std::move(widths), std::move(next), std::move(acc));
  for (const auto& layer : out.partial_sums) {
    std::vector<std::uint32_t> ord(layer.size());
    std::iota(ord.begin(), ord.end(), 0u);
    out.certificate.order.push_back(std::move(ord));
  }
  return out;
}

/// Product program accepting g(B_1(z), ..., B_d(z)); states are the
/// reachable tuples.
inline ROBP product_program(std::span<const ROBP> programs, const std::function<bool(std::uint64_t)>& g,
                            std::size_t state_cap = kDefaultStateCap) {
  if (programs.empty()) throw std::invalid_argument("product_program: no programs");
  const std::size_t T = programs[0].T();
  const unsigned D = programs[0].D();
  for (const auto& p : programs) {
    if (p.T() != T || p.D() != D) throw std::invalid_argument("product_program: programs must share T and D");
  }
  const std::size_t d = programs.size(), L = std::size_t{1} << D;
  std::vector<std::vector<std::uint32_t>> layer{std::vector<std::uint32_t>(d, 0)};
  std::vector<std::vector<std::uint32_t>> next(T);
  std::vector<std::uint32_t> widths{1};
  for (std::size_t i = 0; i < T; ++i) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::vector<std::uint32_t>> nl;
    next[i].resize(layer.size() * L);
    for (std::size_t v = 0; v < layer.size(); ++v) {
      for (std::uint32_t l = 0; l < L; ++l) {
        std::vector<std::uint32_t> tup(d);
        for (std::size_t k = 0; k < d; ++k) tup[k] = programs[k].next(i, layer[v][k], l);
        auto [it, fresh] = ids.emplace(tup, static_cast<std::uint32_t>(nl.size()));
        if (fresh) {
          nl.push_back(tup);
          if (nl.size() > state_cap) throw ResourceError("product_program: state cap exceeded");
        }
        next[i][v * L + l] = it->second;
      }
    }
    layer = std::move(nl);
    widths.push_back(static_cast<std::uint32_t>(layer.size()));
  }
  std::vector<std::uint8_t> acc;
  for (const auto& tup : layer) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < d; ++k) bits |= std::uint64_t{programs[k].accept(tup[k])} << k;
    acc.push_back(g(bits));
  }
  return ROBP(D, std::move(widths), std::move(next), std::move(acc));
}

struct SandwichPair {
  ROBP down;
  ROBP up;
  double eps = 0.0;   // requested gap
  double gap = 0.0;   // Pr[up] - Pr[down] under the step distribution
};

/// Groups each layer's states by floor(P(v) / (eps / 2T)) along the
/// certificate order; the down program enters every group at its smallest
/// member and the up program at its largest.
inline SandwichPair sandwich_monotone(const ROBP& b, const MonotoneCertificate& cert, double eps,
                                      const StepDistribution& dist = {}) {
  if (!(eps > 0.0)) throw std::invalid_argument("sandwich_monotone: eps must be positive");
  if (cert.order.size() != b.T() + 1) throw std::invalid_argument("sandwich_monotone: missing certificate");
  for (std::size_t i = 0; i <= b.T(); ++i) {
    if (cert.order[i].size() != b.width(i)) throw std::invalid_argument("sandwich_monotone: certificate shape mismatch");
  }
  const auto P = acceptance_probs(b, dist);
  const double width = eps / (2.0 * static_cast<double>(std::max<std::size_t>(b.T(), 1)));
  std::vector<std::vector<std::uint32_t>> lo(b.T() + 1), hi(b.T() + 1);
  for (std::size_t i = 0; i <= b.T(); ++i) {
    const auto& ord = cert.order[i];
    lo[i].resize(b.width(i));
    hi[i].resize(b.width(i));
    std::size_t k = 0;
    std::int64_t running = -1;
    while (k < ord.size()) {
      std::size_t e = k;
      std::int64_t key = std::max<std::int64_t>(running, static_cast<std::int64_t>(std::floor(P[i][ord[k]] / width)));
      while (e + 1 < ord.size() &&
             std::max<std::int64_t>(key, static_cast<std::int64_t>(std::floor(P[i][ord[e + 1]] / width))) == key) {
        ++e;
      }
      running = key;
      for (std::size_t q = k; q <= e; ++q) {
        lo[i][ord[q]] = ord[k];
        hi[i][ord[q]] = ord[e];
      }
      k = e + 1;
    }
  }
  auto rebuild = [&](const std::vector<std::vector<std::uint32_t>>& rep) {
    std::vector<std::vector<std::uint32_t>> next(b.T());
    for (std::size_t i = 0; i < b.T(); ++i) {
      next[i] = b.transitions()[i];
      for (auto& u : next[i]) u = rep[i + 1][u];
    }
    return compact(ROBP(b.D(), b.widths(), std::move(next), b.accept_bits()));
  };
  SandwichPair sp;
  sp.down = rebuild(lo);
  sp.up = rebuild(hi);
  sp.eps = eps;
  sp.gap = acceptance_probability(sp.up, dist) - acceptance_probability(sp.down, dist);
  return sp;
}

/// f_down = g(down_1, ..., down_d), f_up = g(up_1, ..., up_d) for monotone g
/// given as a truth table over the d accept bits.
inline SandwichPair compose_monotone_sandwich(const CombinerSpec& g, std::span<const ROBP> programs,
                                              std::span<const MonotoneCertificate> certs, double eps,
                                              const StepDistribution& dist = {}) {
  if (programs.size() != certs.size() || programs.empty()) {
    throw std::invalid_argument("compose_monotone_sandwich: need one certificate per program");
  }
  if (g.d() != programs.size()) throw std::invalid_argument("compose_monotone_sandwich: arity mismatch");
  if (!g.declared_monotone()) throw std::invalid_argument("compose_monotone_sandwich: g is not monotone");
  // Brute-force monotonicity check over {0,1}^d.
  const std::size_t d = programs.size();
  if (d > 10) throw std::invalid_argument("compose_monotone_sandwich: d must be at most 10");
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); ++s) {
    for (std::size_t k = 0; k < d; ++k) {
      if (!(s >> k & 1u) && g.apply(s) > g.apply(s | (std::uint64_t{1} << k))) {
        throw std::invalid_argument("compose_monotone_sandwich: g is not monotone");
      }
    }
  }
  std::vector<ROBP> downs, ups;
  for (std::size_t k = 0; k < d; ++k) {
    auto sp = sandwich_monotone(programs[k], certs[k], eps, dist);
    downs.push_back(std::move(sp.down));
    ups.push_back(std::move(sp.up));
  }
  auto gf = [&](std::uint64_t bits) { return g.apply(bits); };
  SandwichPair out;
  out.down = minimize(product_program(downs, gf));
  out.up = minimize(product_program(ups, gf));
  out.eps = static_cast<double>(d) * eps;
  out.gap = acceptance_probability(out.up, dist) - acceptance_probability(out.down, dist);
  return out;
}

/// Random program whose transitions are nondecreasing in the state index
/// under every label and whose accept bits are a threshold, so the index
/// order certifies monotonicity.
inline ROBP random_monotone_robp(std::size_t T, std::uint32_t max_width, unsigned D, CounterRng& rng) {
  if (max_width == 0) throw std::invalid_argument("random_monotone_robp: zero width");
  const std::size_t L = std::size_t{1} << D;
  std::vector<std::uint32_t> widths{1};
  for (std::size_t i = 1; i <= T; ++i) widths.push_back(1 + static_cast<std::uint32_t>(rng() % max_width));
  std::vector<std::vector<std::uint32_t>> next(T);
  for (std::size_t i = 0; i < T; ++i) {
    next[i].resize(static_cast<std::size_t>(widths[i]) * L);
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<std::uint32_t> col(widths[i]);
      for (auto& u : col) u = static_cast<std::uint32_t>(rng() % widths[i + 1]);
      std::sort(col.begin(), col.end());
      for (std::uint32_t v = 0; v < widths[i]; ++v) next[i][v * L + l] = col[v];
    }
  }
  const std::uint32_t cut = static_cast<std::uint32_t>(rng() % (widths[T] + 1));
  std::vector<std::uint8_t> acc(widths[T]);
  for (std::uint32_t v = 0; v < widths[T]; ++v) acc[v] = v >= cut;
  return ROBP(D, std::move(widths), std::move(next), std::move(acc));
}

/// Random program with no structure.
inline ROBP random_robp(std::size_t T, std::uint32_t max_width, unsigned D, CounterRng& rng) {
  const std::size_t L = std::size_t{1} << D;
  std::vector<std::uint32_t> widths{1};
  for (std::size_t i = 1; i <= T; ++i) widths.push_back(1 + static_cast<std::uint32_t>(rng() % max_width));
  std::vector<std::vector<std::uint32_t>> next(T);
  for (std::size_t i = 0; i < T; ++i) {
    next[i].resize(static_cast<std::size_t>(widths[i]) * L);
    for (auto& u : next[i]) u = static_cast<std::uint32_t>(rng() % widths[i + 1]);
  }
  std::vector<std::uint8_t> acc(widths[T]);
  for (auto& a : acc) a = rng() & 1u;
  return ROBP(D, std::move(widths), std::move(next), std::move(acc));
}

/// Recursive-hashing generator for (S, D, T) programs. Blocks are elements of
/// GF(2^l) with l = S + D + 2; level r doubles the output with the affine
/// hash h_r(x) = a_r x + c_r. Seed layout: [x][a_1 c_1]...[a_R c_R] with
/// R = log2 T after padding T to a power of 2. Each output label is the low
/// D bits of its block.
class NisanGenerator {
 public:
  NisanGenerator(unsigned S, unsigned D, std::size_t T) : S_(S), D_(D), T_(T) {
    if (T == 0) throw std::invalid_argument("NisanGenerator: T must be positive");
    if (D < 1) throw std::invalid_argument("NisanGenerator: D must be positive");
    ell_ = S + D + 2;
    if (ell_ > kMaxFieldBits) throw std::invalid_argument("NisanGenerator: S + D + 2 exceeds 32 bits");
    levels_ = ceil_log2(T);
  }

  unsigned S() const { return S_; }
  unsigned D() const { return D_; }
  std::size_t T() const { return T_; }
  unsigned block_bits() const { return ell_; }
  unsigned levels() const { return levels_; }
  std::size_t seed_bits() const { return static_cast<std::size_t>(ell_) * (1 + 2 * levels_); }

  std::vector<std::uint32_t> generate(const BitString& seed) const {
    if (seed.size() != seed_bits()) {
      throw std::invalid_argument("NisanGenerator: seed has " + std::to_string(seed.size()) + " bits, expected " +
                                  std::to_string(seed_bits()));
    }
    const auto& f = GF2m::get(ell_);
    const auto x = static_cast<std::uint32_t>(seed.read(0, ell_));
    std::vector<std::uint32_t> a(levels_), c(levels_);
    for (unsigned r = 0; r < levels_; ++r) {
      a[r] = static_cast<std::uint32_t>(seed.read(ell_ + 2 * r * ell_, ell_));
      c[r] = static_cast<std::uint32_t>(seed.read(ell_ + (2 * r + 1) * ell_, ell_));
    }
    // Block b applies h_r for every set bit r of b, highest level first.
    const std::uint32_t mask = (1u << D_) - 1;
    std::vector<std::uint32_t> out(T_);
    for (std::size_t b = 0; b < T_; ++b) {
      std::uint32_t v = x;
      for (unsigned r = levels_; r-- > 0;) {
        if (b >> r & 1u) v = f.mul(a[r], v) ^ c[r];
      }
      out[b] = v & mask;
    }
    return out;
  }

 private:
  unsigned S_, D_;
  std::size_t T_;
  unsigned ell_ = 0;
  unsigned levels_ = 0;
};

inline std::vector<std::uint32_t> nisan_generate(unsigned S, unsigned D, std::size_t T, const BitString& seed) {
  return NisanGenerator(S, D, T).generate(seed);
}

/// Aggregate bound for a decision tree of halfspaces: s (eps + delta) with
/// s the total leaf count, alongside the figure for the smaller of the
/// 0-leaf and 1-leaf counts.
struct DecisionTreeBound {
  std::size_t zero_leaves = 0;
  std::size_t one_leaves = 0;
  double per_leaf = 0.0;
  double bound = 0.0;
  double bound_min_leaves = 0.0;
};

inline DecisionTreeBound decision_tree_error_bound(double eps_plus_delta, std::size_t zero_leaves,
                                                   std::size_t one_leaves) {
  DecisionTreeBound b;
  b.zero_leaves = zero_leaves;
  b.one_leaves = one_leaves;
  b.per_leaf = eps_plus_delta;
  b.bound = static_cast<double>(zero_leaves + one_leaves) * eps_plus_delta;
  b.bound_min_leaves = static_cast<double>(std::min(zero_leaves, one_leaves)) * eps_plus_delta;
  return b;
}

/// Per-leaf gaps summed; s = gaps.size().
inline double decision_tree_error_bound(std::span<const double> leaf_gaps) {
  CompensatedSum s;
  for (double g : leaf_gaps) s.add(g);
  return s.value();
}

}  // namespace hsprg
