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

// Coordinate distributions and the truncate -> standardize -> bucket ->
// sandwich discretization pipeline.
//
// A CoordinateSpec describes z = (y - shift) / scale with y = x * 1[|x| < B]
// and x drawn from one of four base laws.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hsprg/common.hpp"
#include "hsprg/rng.hpp"

namespace hsprg {

enum class CoordKind { kDiscrete, kGaussian, kUniformInterval, kUniformMultiset };

inline const char* to_string(CoordKind k) {
  switch (k) {
    case CoordKind::kDiscrete: return "discrete";
    case CoordKind::kGaussian: return "gaussian";
    case CoordKind::kUniformInterval: return "uniform_interval";
    case CoordKind::kUniformMultiset: return "uniform_multiset";
  }
  return "?";
}

struct Atom {
  double value;
  double prob;
};

/// Raw moments E z^p for p = 0..4.
using RawMoments = std::array<double, 5>;

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

class CoordinateSpec {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static CoordinateSpec gaussian() { return CoordinateSpec(CoordKind::kGaussian); }

  static CoordinateSpec uniform_interval(double half_width = 1.0) {
    if (!(half_width > 0.0)) throw std::invalid_argument("uniform_interval: half width must be positive");
    CoordinateSpec c(CoordKind::kUniformInterval);
    c.half_width_ = half_width;
    return c;
  }

  static CoordinateSpec discrete(std::vector<double> values, std::vector<double> probs) {
    if (values.empty() || values.size() != probs.size()) {
      throw std::invalid_argument("discrete: values and probabilities must be nonempty and equal length");
    }
    CompensatedSum total;
    for (double p : probs) {
      if (!(p >= 0.0)) throw std::invalid_argument("discrete: probabilities must be nonnegative");
      total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) throw std::invalid_argument("discrete: probabilities must sum to 1");
    CoordinateSpec c(CoordKind::kDiscrete);
    c.values_ = std::move(values);
    c.probs_ = std::move(probs);
    return c;
  }

  static CoordinateSpec uniform_multiset(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("uniform_multiset: empty multiset");
    CoordinateSpec c(CoordKind::kUniformMultiset);
    std::sort(values.begin(), values.end());
    c.values_ = std::move(values);
    return c;
  }

  static CoordinateSpec rademacher() { return discrete({-1.0, 1.0}, {0.5, 0.5}); }

  CoordKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == CoordKind::kDiscrete || kind_ == CoordKind::kUniformMultiset; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  double half_width() const { return half_width_; }
  double truncation() const { return truncation_; }
  double shift() const { return shift_; }
  double scale() const { return scale_; }
  bool is_transformed() const { return truncation_ != kInf || shift_ != 0.0 || scale_ != 1.0; }

  /// Same base law with y = x * 1[|x| < B] and z = (y - shift) / scale.
  CoordinateSpec with_transform(double B, double shift, double scale) const {
    if (!(B > 0.0)) throw std::invalid_argument("with_transform: B must be positive");
    if (!(scale > 0.0)) throw std::invalid_argument("with_transform: scale must be positive");
    CoordinateSpec c = *this;
    c.truncation_ = B;
    c.shift_ = shift;
    c.scale_ = scale;
    return c;
  }

  /// Base-law probability of |x| >= B.
  double tail_mass() const { return std::max(0.0, 1.0 - base_moment(0)); }

  /// E z^p for p = 0..4, from exact truncated base moments.
  RawMoments moments() const {
    RawMoments y{};
    y[0] = 1.0;
    for (int p = 1; p <= 4; ++p) y[p] = base_moment(p);
    if (shift_ == 0.0 && scale_ == 1.0) return y;
    static constexpr int kBinom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
    RawMoments z{};
    for (int p = 0; p <= 4; ++p) {
      double acc = 0.0;
      for (int i = 0; i <= p; ++i) acc += kBinom[p][i] * y[i] * std::pow(-shift_, p - i);
      z[p] = acc / std::pow(scale_, p);
    }
    return z;
  }

  /// Pr[z <= x].
  double cdf(double x) const {
    const double v = scale_ * x + shift_;
    double mass = base_mass_up_to(v);
    if (v >= 0.0) mass += tail_mass();
    return std::clamp(mass, 0.0, 1.0);
  }

  /// Support atoms of z, merged and sorted (discrete kinds only).
  std::vector<Atom> atoms() const {
    if (!is_discrete()) throw std::logic_error("atoms: continuous coordinate");
    std::map<double, double> m;
    const double w = 1.0 / static_cast<double>(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double p = kind_ == CoordKind::kDiscrete ? probs_[i] : w;
      if (p == 0.0) continue;
      const double y = std::abs(values_[i]) < truncation_ ? values_[i] : 0.0;
      m[(y - shift_) / scale_] += p;
    }
    std::vector<Atom> out;
    for (const auto& [v, p] : m) out.push_back({v, p});
    return out;
  }

  /// Smallest nonzero atom probability (discrete kinds).
  std::optional<double> min_atom_prob() const {
    if (!is_discrete()) return std::nullopt;
    double a = 1.0;
    for (const auto& at : atoms()) a = std::min(a, at.prob);
    return a;
  }

  bool is_symmetric() const {
    if (shift_ != 0.0) return false;
    if (!is_discrete()) return true;
    const auto at = atoms();
    for (std::size_t i = 0, j = at.size() - 1; i <= j && j < at.size(); ++i, --j) {
      if (std::abs(at[i].value + at[j].value) > 1e-12 * (1.0 + std::abs(at[i].value))) return false;
      if (std::abs(at[i].prob - at[j].prob) > 1e-12) return false;
      if (j == 0) break;
    }
    return true;
  }

  double sample(CounterRng& rng) const {
    double x = 0.0;
    switch (kind_) {
      case CoordKind::kGaussian: x = rng.normal(); break;
      case CoordKind::kUniformInterval: x = (2.0 * rng.uniform() - 1.0) * half_width_; break;
      case CoordKind::kUniformMultiset: x = values_[static_cast<std::size_t>(rng.uniform() * values_.size())]; break;
      case CoordKind::kDiscrete: {
        const double u = rng.uniform();
        double acc = 0.0;
        x = values_.back();
        for (std::size_t i = 0; i < values_.size(); ++i) {
          acc += probs_[i];
          if (u < acc) {
            x = values_[i];
            break;
          }
        }
        break;
      }
    }
    const double y = std::abs(x) < truncation_ ? x : 0.0;
    return (y - shift_) / scale_;
  }

 private:
  explicit CoordinateSpec(CoordKind k) : kind_(k) {}

  double base_prob(std::size_t i) const {
    return kind_ == CoordKind::kDiscrete ? probs_[i] : 1.0 / static_cast<double>(values_.size());
  }

  /// E[x^p 1(|x| < B)] for the base law.
  double base_moment(int p) const {
    const double B = truncation_;
    switch (kind_) {
      case CoordKind::kGaussian: {
        if (p % 2 == 1) return 0.0;
        if (B == kInf) return p == 0 ? 1.0 : (p == 2 ? 1.0 : 3.0);
        const double m0 = std::erf(B / std::sqrt(2.0));
        const double phi = std_normal_pdf(B);
        if (p == 0) return m0;
        if (p == 2) return m0 - 2.0 * B * phi;
        return 3.0 * m0 - 2.0 * (B * B * B + 3.0 * B) * phi;
      }
      case CoordKind::kUniformInterval: {
        if (p % 2 == 1) return 0.0;
        const double c = std::min(half_width_, B);
        return std::pow(c, p + 1) / ((p + 1) * half_width_);
      }
      default: {
        CompensatedSum s;
        for (std::size_t i = 0; i < values_.size(); ++i) {
          if (std::abs(values_[i]) < B) s.add(base_prob(i) * std::pow(values_[i], p));
        }
        return s.value();
      }
    }
  }

  /// Pr[x <= v and |x| < B] for the base law.
  double base_mass_up_to(double v) const {
    const double B = truncation_;
    switch (kind_) {
      case CoordKind::kGaussian: {
        if (v <= -B) return 0.0;
        return std_normal_cdf(std::min(v, B)) - (B == kInf ? 0.0 : std_normal_cdf(-B));
      }
      case CoordKind::kUniformInterval: {
        const double c = std::min(half_width_, B);
        if (v <= -c) return 0.0;
        return (std::min(v, c) + c) / (2.0 * half_width_);
      }
      default: {
        CompensatedSum s;
        for (std::size_t i = 0; i < values_.size(); ++i) {
          if (values_[i] <= v && std::abs(values_[i]) < B) s.add(base_prob(i));
        }
        return s.value();
      }
    }
  }

  CoordKind kind_;
  std::vector<double> values_;
  std::vector<double> probs_;
  double half_width_ = 1.0;
  double truncation_ = kInf;
  double shift_ = 0.0;
  double scale_ = 1.0;
};

struct MomentProfile {
  double mean = 0.0;
  double second_moment = 1.0;
  double fourth_moment = 1.0;
  double C = 1.0;  // fourth moment of the standardized variable
  double eta = 0.0;
  double eta0 = 0.0;
  std::optional<double> alpha;
};

/// Moments plus the hypercontractivity parameter: eta0 = (E x^2^2 / E x^4)^(1/4),
/// eta = eta0 / (2 sqrt 3), or min(eta0, 1/sqrt 3) for symmetric laws.
inline MomentProfile moment_profile(const CoordinateSpec& c) {
  const auto m = c.moments();
  if (!std::isfinite(m[4]) || !(m[2] > 0.0)) throw std::domain_error("moment_profile: moments not finite/positive");
  MomentProfile p;
  p.mean = m[1];
  p.second_moment = m[2];
  p.fourth_moment = m[4];
  const double var = m[2] - m[1] * m[1];
  const double c4 = m[4] - 4 * m[3] * m[1] + 6 * m[2] * m[1] * m[1] - 3 * m[1] * m[1] * m[1] * m[1];
  p.C = var > 0 ? c4 / (var * var) : std::numeric_limits<double>::infinity();
  p.eta0 = std::pow(m[2] * m[2] / m[4], 0.25);
  p.eta = c.is_symmetric() ? std::min(p.eta0, 1.0 / std::sqrt(3.0)) : p.eta0 / (2.0 * std::sqrt(3.0));
  p.alpha = c.min_atom_prob();
  return p;
}

struct TruncationReport {
  CoordinateSpec standardized;
  double B = 0.0;             // truncation radius (n C^2 / eps)^(1/4)
  double B_std = 0.0;         // (B + |mu|) / sigma, radius of the standardized support
  double tail_mass = 0.0;     // Pr[|x| >= B] = SD(x, y) for this coordinate
  double tail_bound = 0.0;    // eps / (n C)
  double mean_truncated = 0.0;
  double second_truncated = 0.0;
  double second_deficit_bound = 0.0;  // sqrt(eps / n)
};

inline double truncation_radius(std::size_t n, double C, double eps) {
  return std::pow(static_cast<double>(n) * C * C / eps, 0.25);
}

/// Truncates to (-B, B) with B = (n C^2 / eps)^(1/4), then shifts and
/// rescales to mean 0, second moment 1.
inline TruncationReport truncate_and_standardize(const CoordinateSpec& coord, std::size_t n, double C, double eps) {
  if (coord.is_transformed()) throw std::invalid_argument("truncate_and_standardize: coordinate already transformed");
  if (!(eps > 0.0) || !(C > 0.0) || n == 0) throw std::invalid_argument("truncate_and_standardize: bad parameters");
  const double B = truncation_radius(n, C, eps);
  const auto truncated = coord.with_transform(B, 0.0, 1.0);
  const auto m = truncated.moments();
  if (m[2] < 0.5) {
    throw std::domain_error("truncate_and_standardize: truncated second moment below 1/2; eps too large for C, n");
  }
  const double mu = m[1];
  const double sigma = std::sqrt(m[2] - mu * mu);
  TruncationReport r{truncated.with_transform(B, mu, sigma), B};
  r.B_std = (B + std::abs(mu)) / sigma;
  r.tail_mass = truncated.tail_mass();
  r.tail_bound = eps / (static_cast<double>(n) * C);
  r.mean_truncated = mu;
  r.second_truncated = m[2];
  r.second_deficit_bound = std::sqrt(eps / static_cast<double>(n));
  return r;
}

/// Largest 2^-s with 2^-s <= eps / (2 n B^4).
inline double default_gamma(std::size_t n, double B, double eps) {
  const double target = eps / (2.0 * static_cast<double>(n) * std::pow(B, 4));
  if (!(target > 0.0)) throw std::invalid_argument("default_gamma: nonpositive target");
  double g = 1.0;
  while (g > target) g *= 0.5;
  return g;
}

inline constexpr std::uint64_t kMaxBuckets = std::uint64_t{1} << 26;
inline constexpr double kBisectionTol = 1e-12;

inline std::uint64_t bucket_count(double gamma) {
  const double g = 1.0 / gamma;
  if (!(gamma > 0.0) || g != std::round(g) || !is_pow2(static_cast<std::uint64_t>(g))) {
    throw std::invalid_argument("gamma must be 2^-s");
  }
  if (g > static_cast<double>(kMaxBuckets)) throw ResourceError("bucket count exceeds cap");
  return static_cast<std::uint64_t>(g);
}

/// b_k = min{x in [-B, B] : F(x) >= k gamma} for an arbitrary CDF, by
/// bisection. F is checked for monotonicity on a grid first.
inline std::vector<double> bucket_boundaries(const std::function<double(double)>& F, double gamma, double B) {
  const std::uint64_t g = bucket_count(gamma);
  constexpr int kGrid = 4096;
  double prev = F(-B);
  for (int i = 1; i <= kGrid; ++i) {
    const double cur = F(-B + 2.0 * B * i / kGrid);
    if (cur < prev) throw std::domain_error("bucket_boundaries: CDF is not monotone");
    prev = cur;
  }
  std::vector<double> b(g + 1);
  b[0] = -B;
  double lo_hint = -B;
  for (std::uint64_t k = 1; k <= g; ++k) {
    const double target = static_cast<double>(k) * gamma;
    if (F(lo_hint) >= target) {
      b[k] = lo_hint;
      continue;
    }
    double lo = lo_hint, hi = B;
    if (F(hi) < target) {
      b[k] = B;
      lo_hint = B;
      continue;
    }
    while (hi - lo > kBisectionTol) {
      const double mid = 0.5 * (lo + hi);
      (F(mid) >= target ? hi : lo) = mid;
    }
    b[k] = hi;
    lo_hint = hi;
  }
  for (std::uint64_t k = 1; k <= g; ++k) {
    if (b[k] < b[k - 1]) throw std::domain_error("bucket_boundaries: CDF is not monotone");
  }
  return b;
}

/// Coordinate version: exact scan over sorted atoms for discrete kinds,
/// bisection on the CDF otherwise.
inline std::vector<double> bucket_boundaries(const CoordinateSpec& c, double gamma, double B) {
  if (!c.is_discrete()) return bucket_boundaries([&c](double x) { return c.cdf(x); }, gamma, B);
  const std::uint64_t g = bucket_count(gamma);
  const auto atoms = c.atoms();
  std::vector<double> b(g + 1);
  b[0] = -B;
  std::size_t i = 0;
  CompensatedSum cum;
  for (std::uint64_t k = 1; k <= g; ++k) {
    const double target = static_cast<double>(k) * gamma - 1e-13;
    while (i < atoms.size() && cum.value() < target) cum.add(atoms[i++].prob);
    const double v = (cum.value() >= target && i > 0) ? atoms[i - 1].value : B;
    b[k] = std::clamp(v, -B, B);
  }
  return b;
}

/// Sandwiching uniform multisets: lower = {b_0..b_{g-1}}, upper = {b_1..b_g}.
struct SandwichedCoordinate {
  std::vector<double> boundaries;
  double gamma = 1.0;
  std::uint64_t g = 1;
  double B = 0.0;

  std::vector<double> lower_values() const { return {boundaries.begin(), boundaries.end() - 1}; }
  std::vector<double> upper_values() const { return {boundaries.begin() + 1, boundaries.end()}; }
  CoordinateSpec lower() const { return CoordinateSpec::uniform_multiset(lower_values()); }
  CoordinateSpec upper() const { return CoordinateSpec::uniform_multiset(upper_values()); }
};

inline std::pair<CoordinateSpec, CoordinateSpec> sandwich_pair(const SandwichedCoordinate& s) {
  return {s.lower(), s.upper()};
}

inline SandwichedCoordinate make_sandwich(std::vector<double> boundaries, double gamma, double B) {
  SandwichedCoordinate s;
  s.g = bucket_count(gamma);
  if (boundaries.size() != s.g + 1) throw std::invalid_argument("make_sandwich: need g + 1 boundaries");
  s.boundaries = std::move(boundaries);
  s.gamma = gamma;
  s.B = B;
  return s;
}

/// Half the L1 distance between two discrete laws.
inline double statistical_distance(const CoordinateSpec& a, const CoordinateSpec& b) {
  std::map<double, double> diff;
  for (const auto& at : a.atoms()) diff[at.value] += at.prob;
  for (const auto& at : b.atoms()) diff[at.value] -= at.prob;
  CompensatedSum s;
  for (const auto& [v, d] : diff) s.add(std::abs(d));
  return 0.5 * s.value();
}

/// Moments of a uniform multiset, by compensated summation.
inline RawMoments multiset_moments(const std::vector<double>& values) {
  std::array<CompensatedSum, 5> s;
  for (double v : values) {
    double p = 1.0;
    for (int k = 0; k <= 4; ++k, p *= v) s[k].add(p);
  }
  RawMoments m{};
  for (int k = 0; k <= 4; ++k) m[k] = s[k].value() / static_cast<double>(values.size());
  return m;
}

struct DiscretizationReport {
  TruncationReport truncation;
  SandwichedCoordinate sandwich;
  RawMoments continuous{};
  RawMoments lower{};
  RawMoments upper{};
  double sd_lower_upper = 0.0;
  double C = 0.0;
  // Analytic drift budgets 2 B gamma, 2 B^2 gamma, 2 B^4 gamma with B = B_std.
  double mean_budget = 0.0;
  double second_budget = 0.0;
  double fourth_budget = 0.0;
};

/// The full pipeline for one coordinate of an n-dimensional product.
inline DiscretizationReport discretize(const CoordinateSpec& coord, std::size_t n, double C, double eps,
                                       std::optional<double> gamma = {}) {
  DiscretizationReport r{truncate_and_standardize(coord, n, C, eps), {}};
  r.C = C;
  const double gam = gamma.value_or(default_gamma(n, r.truncation.B, eps));
  const double B = r.truncation.B_std;
  r.sandwich = make_sandwich(bucket_boundaries(r.truncation.standardized, gam, B), gam, B);
  r.continuous = r.truncation.standardized.moments();
  r.lower = multiset_moments(r.sandwich.lower_values());
  r.upper = multiset_moments(r.sandwich.upper_values());
  r.sd_lower_upper = statistical_distance(r.sandwich.lower(), r.sandwich.upper());
  r.mean_budget = 2.0 * B * gam;
  r.second_budget = 2.0 * B * B * gam;
  r.fourth_budget = 2.0 * std::pow(B, 4) * gam;
  return r;
}

class ProductDistribution {
 public:
  ProductDistribution() = default;
  explicit ProductDistribution(std::vector<CoordinateSpec> coords) : coords_(std::move(coords)) {}
  static ProductDistribution iid(const CoordinateSpec& c, std::size_t n) {
    return ProductDistribution(std::vector<CoordinateSpec>(n, c));
  }

  std::size_t n() const { return coords_.size(); }
  const CoordinateSpec& operator[](std::size_t i) const { return coords_.at(i); }
  const std::vector<CoordinateSpec>& coords() const { return coords_; }
  bool is_discrete() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const auto& c) { return c.is_discrete(); });
  }

  void sample(CounterRng& rng, std::vector<double>& out) const {
    out.resize(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = coords_[i].sample(rng);
  }

 private:
  std::vector<CoordinateSpec> coords_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Calls visit(x, Pr[x]) for every point of a discrete product space, last
/// coordinate varying fastest.
inline void for_each_point(const ProductDistribution& dist,
                           const std::function<void(const std::vector<double>&, double)>& visit,
                           std::uint64_t cap = kDefaultEnumerationCap) {
  if (!dist.is_discrete()) throw std::invalid_argument("for_each_point: continuous coordinate");
  const std::size_t n = dist.n();
  std::vector<std::vector<Atom>> atoms(n);
  long double size = 1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    atoms[j] = dist[j].atoms();
    size *= static_cast<long double>(atoms[j].size());
  }
  if (size > static_cast<long double>(cap)) {
    throw ResourceError("for_each_point: product space exceeds the cap of " + std::to_string(cap) + " points");
  }
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = atoms[j][0].value;
  while (true) {
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) p *= atoms[j][idx[j]].prob;
    visit(x, p);
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (++idx[j] < atoms[j].size()) {
        x[j] = atoms[j][idx[j]].value;
        break;
      }
      idx[j] = 0;
      x[j] = atoms[j][0].value;
      if (j == 0) return;
    }
    if (n == 0) return;
  }
}

/// Empirical Pr[|x| >= t ||x||_2] next to the bound 1 / (eta^4 t^4).
/// The atoms of a discrete coordinate as a uniform multiset of the smallest
/// power-of-2 size at least min_size; requires dyadic probabilities.
inline std::vector<double> uniform_alphabet(const CoordinateSpec& c, std::size_t min_size = 1,
                                            std::size_t max_size = std::size_t{1} << 20) {
  if (!c.is_discrete()) throw std::invalid_argument("uniform_alphabet: continuous coordinate");
  const auto atoms = c.atoms();
  std::size_t size = 1;
  while (size < min_size) size *= 2;
  for (;; size *= 2) {
    if (size > max_size) throw std::invalid_argument("uniform_alphabet: atom probabilities are not dyadic");
    const bool ok = std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) {
      const double m = a.prob * static_cast<double>(size);
      return m == std::floor(m);
    });
    if (ok) break;
  }
  std::vector<double> out;
  out.reserve(size);
  for (const auto& a : atoms) out.insert(out.end(), static_cast<std::size_t>(a.prob * static_cast<double>(size)), a.value);
  return out;
}

inline std::vector<std::vector<double>> uniform_alphabets(const ProductDistribution& dist, std::size_t min_size = 1) {
  std::vector<std::vector<double>> out;
  for (const auto& c : dist.coords()) out.push_back(uniform_alphabet(c, min_size));
  return out;
}

struct TailProbe {
  double t = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
};

inline std::vector<TailProbe> concentration_probe(const CoordinateSpec& c, const std::vector<double>& ts,
                                                  std::uint64_t samples, std::uint64_t seed) {
  const auto prof = moment_profile(c);
  const double norm = std::sqrt(prof.second_moment);
  std::vector<std::uint64_t> hits(ts.size());
  CounterRng rng(seed, 0);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double x = std::abs(c.sample(rng));
    for (std::size_t i = 0; i < ts.size(); ++i) hits[i] += x >= ts[i] * norm;
  }
  std::vector<TailProbe> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double p = static_cast<double>(hits[i]) / static_cast<double>(samples);
    out.push_back({ts[i], p, std::sqrt(p * (1 - p) / static_cast<double>(samples)),
                   1.0 / (std::pow(prof.eta, 4) * std::pow(ts[i], 4))});
  }
  return out;
}

/// Empirical Pr[|x - theta| > t ||x||_2] next to the bound eta^4 (1 - t^2)^2.
inline TailProbe anticoncentration_probe_coord(const CoordinateSpec& c, double theta, double t,
                                               std::uint64_t samples, std::uint64_t seed) {
  const auto prof = moment_profile(c);
  const double norm = std::sqrt(prof.second_moment);
  CounterRng rng(seed, 1);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) hits += std::abs(c.sample(rng) - theta) > t * norm;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {t, p, std::sqrt(p * (1 - p) / static_cast<double>(samples)),
          std::pow(prof.eta, 4) * std::pow(1.0 - t * t, 2)};
}

}  // namespace hsprg
