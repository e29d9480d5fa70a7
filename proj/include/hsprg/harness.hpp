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


// Measurement and reporting: exact and Monte Carlo expectations, fooling
// error of seeded generators, sphere transfer, Berry-Esseen probes and
// CSV/JSON reports.

#pragma once

#include <Eigen/Dense>

#include <boost/math/special_functions/beta.hpp>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "hsprg/common.hpp"
#include "hsprg/distributions.hpp"
#include "hsprg/halfspace.hpp"
#include "hsprg/mz_generator.hpp"
#include "hsprg/rng.hpp"
#include "hsprg/robp.hpp"
#include "hsprg/stats.hpp"

namespace hsprg {

using BoolFunction = std::function<bool(std::span<const double>)>;

inline BoolFunction system_function(const HalfspaceSystem& sys, const CombinerSpec& g, bool exact = false) {
  check_compatible(sys, g);
  if (exact) return [sys, g](std::span<const double> x) { return g.apply(sys.sign_vector_exact(x)); };
  return [sys, g](std::span<const double> x) { return g.apply(sys.sign_vector(x)); };
}

/// E f(X) over a discrete product space. Probabilities of equal value are
/// pooled by count, so the result is exact whenever the per-point
/// probabilities are exact doubles (always for dyadic atoms).
inline Rational exact_expectation(const BoolFunction& f, const ProductDistribution& dist,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
  std::map<double, std::uint64_t> pooled;
  for_each_point(
      dist,
      [&](const std::vector<double>& x, double p) {
        if (f(x)) ++pooled[p];
      },
      cap);
  Rational sum = 0;
  for (const auto& [p, c] : pooled) sum += Rational(p) * c;
  return sum;
}

/// Pr[g(h_1(X), ..., h_d(X)) = 1] by compiling each halfspace to a branching
/// program and running the product program; needs dyadic atoms.
inline double robp_expectation(const HalfspaceSystem& sys, const CombinerSpec& g, const ProductDistribution& dist,
                               std::size_t state_cap = kDefaultStateCap) {
  check_compatible(sys, g);
  if (sys.n() != dist.n()) throw std::invalid_argument("robp_expectation: dimension mismatch");
  std::size_t L = 2;
  for (const auto& c : dist.coords()) L = std::max(L, uniform_alphabet(c).size());
  const auto alphabets = uniform_alphabets(dist, L);
  std::vector<ROBP> programs;
  for (std::size_t i = 0; i < sys.d(); ++i) {
    std::vector<double> w(sys.n());
    for (std::size_t j = 0; j < sys.n(); ++j) w[j] = sys.raw_weights()[j][i];
    programs.push_back(halfspace_to_robp(w, sys.raw_thresholds()[i], alphabets, sys.strict(i), state_cap).program);
  }
  const auto prod = product_program(programs, [&](std::uint64_t s) { return g.apply(s); }, state_cap);
  return acceptance_probability(prod);
}

/// A generator as a map from seed bits to a point of R^n.
struct SeededGenerator {
  std::string name;
  std::size_t n = 0;
  std::size_t seed_bits = 0;
  std::function<void(const BitString&, std::vector<double>&)> generate;
};

inline SeededGenerator mz_source(MZGenerator gen, std::string name = "mz") {
  auto g = std::make_shared<const MZGenerator>(std::move(gen));
  return {std::move(name), g->n(), g->seed_bits(),
          [g](const BitString& s, std::vector<double>& out) { g->generate_into(s, out); }};
}

/// MZ generator over the uniform-multiset expansion of dist.
inline SeededGenerator mz_source(const ProductDistribution& dist, std::uint64_t t, unsigned k = 5,
                                 HashVariant variant = HashVariant::kAffine) {
  return mz_source(MZGenerator(uniform_alphabets(dist), t, k, variant), "mz");
}

/// A single k-wise independent block.
inline SeededGenerator kwise_source(const ProductDistribution& dist, unsigned k) {
  return mz_source(MZGenerator(uniform_alphabets(dist), 1, k), "kwise:" + std::to_string(k));
}

/// n-wise independence over the expanded alphabets: exactly the law of dist.
inline SeededGenerator full_independence_source(const ProductDistribution& dist) {
  return mz_source(MZGenerator(uniform_alphabets(dist), 1, static_cast<unsigned>(dist.n())), "full");
}

/// Nisan's generator for width-2^S programs; labels index the expanded
/// alphabets, padded to a common power-of-2 size.
inline SeededGenerator nisan_source(const ProductDistribution& dist, unsigned S) {
  std::size_t L = 2;
  for (const auto& c : dist.coords()) L = std::max(L, uniform_alphabet(c).size());
  auto alph = std::make_shared<const std::vector<std::vector<double>>>(uniform_alphabets(dist, L));
  auto gen = std::make_shared<const NisanGenerator>(S, ceil_log2(L), dist.n());
  return {"nisan", dist.n(), gen->seed_bits(), [gen, alph](const BitString& s, std::vector<double>& out) {
            const auto labels = gen->generate(s);
            out.resize(labels.size());
            for (std::size_t j = 0; j < labels.size(); ++j) out[j] = (*alph)[j][labels[j]];
          }};
}

enum class Method { kExact, kMonteCarlo };

inline const char* to_string(Method m) { return m == Method::kExact ? "exact-enumeration" : "monte-carlo"; }

inline Method method_from_string(const std::string& s) {
  if (s == "exact" || s == "exact-enumeration") return Method::kExact;
  if (s == "mc" || s == "monte-carlo") return Method::kMonteCarlo;
  throw std::invalid_argument("unknown method: " + s);
}

struct EstimationReport {
  std::string experiment;
  std::size_t n = 0;
  std::size_t d = 0;
  double eps = 0.0;
  Method method = Method::kExact;
  std::uint64_t samples = 0;
  double true_expectation = 0.0;
  double prg_expectation = 0.0;
  double fooling_error = 0.0;  // |true - prg|
  double ci95 = 0.0;           // half-width; 0 for exact
  std::size_t seed_bits = 0;
  double wall_ms = 0.0;
  std::optional<double> budget;  // sphere transfer budget, when reported

  friend bool operator==(const EstimationReport&, const EstimationReport&) = default;
};

struct EstimateOptions {
  std::string experiment = "estimate";
  std::size_t d = 1;
  double eps = 0.0;
  std::uint64_t trials = 100000;
  std::uint64_t master_seed = default_master_seed();
  std::uint64_t shards = 16;
  unsigned threads = default_threads();
  std::uint64_t cap = kDefaultEnumerationCap;
  std::optional<double> true_expectation;  // use instead of measuring
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline std::uint64_t shard_trials(std::uint64_t trials, std::uint64_t shards, std::uint64_t s) {
  return trials / shards + (s < trials % shards ? 1 : 0);
}

}  // namespace detail

/// Pr over a uniform seed that f(G(seed)) = 1, by enumerating all seeds.
inline double exact_generator_expectation(const BoolFunction& f, const SeededGenerator& gen,
                                          std::uint64_t cap = kDefaultEnumerationCap) {
  if (gen.seed_bits >= 63 || (std::uint64_t{1} << gen.seed_bits) > cap) {
    throw ResourceError("exact_generator_expectation: 2^" + std::to_string(gen.seed_bits) + " seeds exceed the cap");
  }
  const std::uint64_t seeds = std::uint64_t{1} << gen.seed_bits;
  std::uint64_t hits = 0;
  std::vector<double> y;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    gen.generate(BitString::from_uint(s, gen.seed_bits), y);
    hits += f(y);
  }
  return std::ldexp(static_cast<double>(hits), -static_cast<int>(gen.seed_bits));
}

/// Monte Carlo Pr[f(X) = 1] and Pr[f(G(seed)) = 1]. Shard s draws X from
/// stream (master, 2s) and seeds from stream (master, 2s + 1).
inline std::pair<ProportionEstimate, ProportionEstimate> mc_expectations(const BoolFunction& f,
                                                                         const ProductDistribution& dist,
                                                                         const SeededGenerator& gen,
                                                                         const EstimateOptions& opt,
                                                                         bool sample_truth = true) {
  if (opt.trials == 0) throw std::invalid_argument("monte carlo: zero trials");
  const std::uint64_t shards = std::max<std::uint64_t>(1, std::min(opt.shards, opt.trials));
  using Pair = std::pair<ProportionEstimate, ProportionEstimate>;
  const auto parts = run_shards<Pair>(shards, opt.threads, [&](std::uint64_t s) {
    Pair r;
    const std::uint64_t m = detail::shard_trials(opt.trials, shards, s);
    std::vector<double> x;
    if (sample_truth) {
      CounterRng rng(opt.master_seed, 2 * s);
      for (std::uint64_t i = 0; i < m; ++i) {
        dist.sample(rng, x);
        r.first.successes += f(x);
      }
      r.first.trials = m;
    }
    CounterRng rng(opt.master_seed, 2 * s + 1);
    for (std::uint64_t i = 0; i < m; ++i) {
      gen.generate(rng.bits(gen.seed_bits), x);
      r.second.successes += f(x);
    }
    r.second.trials = m;
    return r;
  });
  Pair total;
  for (const auto& p : parts) {
    total.first += p.first;
    total.second += p.second;
  }
  return total;
}

inline EstimationReport estimate_fooling_error(const BoolFunction& f, const ProductDistribution& dist,
                                               const SeededGenerator& gen, Method mode,
                                               const EstimateOptions& opt = {}) {
  if (gen.n != dist.n()) throw std::invalid_argument("estimate_fooling_error: generator dimension mismatch");
  const auto t0 = std::chrono::steady_clock::now();
  EstimationReport r;
  r.experiment = opt.experiment;
  r.n = dist.n();
  r.d = opt.d;
  r.eps = opt.eps;
  r.method = mode;
  r.seed_bits = gen.seed_bits;
  if (mode == Method::kExact) {
    r.true_expectation = opt.true_expectation ? *opt.true_expectation
                                              : exact_expectation(f, dist, opt.cap).convert_to<double>();
    r.prg_expectation = exact_generator_expectation(f, gen, opt.cap);
    r.samples = std::uint64_t{1} << gen.seed_bits;
    r.ci95 = 0.0;
  } else {
    const auto [tx, ty] = mc_expectations(f, dist, gen, opt, !opt.true_expectation);
    r.true_expectation = opt.true_expectation ? *opt.true_expectation : tx.mean();
    r.prg_expectation = ty.mean();
    r.samples = opt.trials;
    const double ht = opt.true_expectation ? 0.0 : tx.half_width();
    r.ci95 = std::sqrt(ht * ht + ty.half_width() * ty.half_width());
  }
  r.fooling_error = std::abs(r.true_expectation - r.prg_expectation);
  r.wall_ms = detail::elapsed_ms(t0);
  return r;
}

/// Pr[x_1 >= h] for x uniform on the unit sphere of R^n.
inline double sphere_cap_probability(std::size_t n, double h) {
  if (n < 2) throw std::invalid_argument("sphere_cap_probability: n must be >= 2");
  if (h <= -1.0) return 1.0;
  if (h >= 1.0) return 0.0;
  const double half = 0.5 * boost::math::ibeta(0.5 * static_cast<double>(n - 1), 0.5, 1.0 - h * h);
  return h >= 0.0 ? half : 1.0 - half;
}

inline constexpr double kSphereTransferC = 1.0;

/// C d log n / n^(1/4).
inline double sphere_transfer_budget(std::size_t d, std::size_t n, double C = kSphereTransferC) {
  return C * static_cast<double>(d) * std::log(static_cast<double>(n)) / std::pow(static_cast<double>(n), 0.25);
}

using VectorSampler = std::function<void(CounterRng&, std::vector<double>&)>;

/// Independent N(0, 1/sqrt n) coordinates.
inline VectorSampler gaussian_sampler(std::size_t n) {
  const double sd = std::pow(static_cast<double>(n), -0.25);
  return [n, sd](CounterRng& rng, std::vector<double>& out) {
    out.resize(n);
    for (auto& v : out) v = sd * rng.normal();
  };
}

inline VectorSampler generator_sampler(const SeededGenerator& gen) {
  return [gen](CounterRng& rng, std::vector<double>& out) { gen.generate(rng.bits(gen.seed_bits), out); };
}

struct SphereOptions {
  std::string experiment = "sphere";
  std::size_t d = 1;
  std::uint64_t trials = 1000000;
  std::uint64_t master_seed = default_master_seed();
  std::uint64_t shards = 16;
  unsigned threads = default_threads();
  std::size_t seed_bits = 0;
  std::optional<double> true_expectation;  // spherical probability, if known
  double C = kSphereTransferC;
};

inline bool normalize_to_sphere(std::vector<double>& x) {
  long double s = 0.0L;
  for (double v : x) s += static_cast<long double>(v) * v;
  if (s == 0.0L) return false;
  const double inv = static_cast<double>(1.0L / std::sqrt(s));
  for (auto& v : x) v *= inv;
  return true;
}

/// Pr[f(Y / ||Y||_2) = 1] for Y from `sampler`, against the uniform sphere
/// (normalized true Gaussians unless the probability is given). Zero vectors
/// are redrawn.
inline EstimationReport sphere_transfer(const VectorSampler& sampler, const BoolFunction& f, std::size_t n,
                                        const SphereOptions& opt = {}) {
  if (n < 4) throw std::invalid_argument("sphere_transfer: n must be >= 4");
  if (opt.trials == 0) throw std::invalid_argument("sphere_transfer: zero trials");
  const auto t0 = std::chrono::steady_clock::now();
  const auto truth_sampler = gaussian_sampler(n);
  const std::uint64_t shards = std::max<std::uint64_t>(1, std::min(opt.shards, opt.trials));
  using Pair = std::pair<ProportionEstimate, ProportionEstimate>;
  const auto parts = run_shards<Pair>(shards, opt.threads, [&](std::uint64_t s) {
    Pair r;
    const std::uint64_t m = detail::shard_trials(opt.trials, shards, s);
    std::vector<double> x;
    const auto draw = [&](const VectorSampler& smp, CounterRng& rng, ProportionEstimate& est) {
      for (std::uint64_t i = 0; i < m; ++i) {
        do {
          smp(rng, x);
          if (x.size() != n) throw std::invalid_argument("sphere_transfer: sampler dimension mismatch");
        } while (!normalize_to_sphere(x));
        est.successes += f(x);
      }
      est.trials = m;
    };
    if (!opt.true_expectation) {
      CounterRng rng(opt.master_seed, 2 * s);
      draw(truth_sampler, rng, r.first);
    }
    CounterRng rng(opt.master_seed, 2 * s + 1);
    draw(sampler, rng, r.second);
    return r;
  });
  Pair total;
  for (const auto& p : parts) {
    total.first += p.first;
    total.second += p.second;
  }
  EstimationReport r;
  r.experiment = opt.experiment;
  r.n = n;
  r.d = opt.d;
  r.method = Method::kMonteCarlo;
  r.samples = opt.trials;
  r.true_expectation = opt.true_expectation ? *opt.true_expectation : total.first.mean();
  r.prg_expectation = total.second.mean();
  r.fooling_error = std::abs(r.true_expectation - r.prg_expectation);
  const double ht = opt.true_expectation ? 0.0 : total.first.half_width();
  r.ci95 = std::sqrt(ht * ht + total.second.half_width() * total.second.half_width());
  r.seed_bits = opt.seed_bits;
  r.budget = sphere_transfer_budget(opt.d, n, opt.C);
  r.wall_ms = detail::elapsed_ms(t0);
  return r;
}

/// Covariance data of S = sum_j X_j with X_j = x_j W[j].
struct CovarianceSummary {
  Eigen::MatrixXd M;
  Eigen::VectorXd mean;
  std::vector<double> sigma_sq;  // E ||X_j - E X_j||_2^2
  double sum_sigma4 = 0.0;
};

inline CovarianceSummary covariance_summary(const HalfspaceSystem& sys, const ProductDistribution& dist) {
  if (sys.n() != dist.n()) throw std::invalid_argument("covariance_summary: dimension mismatch");
  const std::size_t d = sys.d();
  CovarianceSummary c;
  c.M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  c.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < sys.n(); ++j) {
    const auto mp = moment_profile(dist[j]);
    const double var = mp.second_moment - mp.mean * mp.mean;
    Eigen::VectorXd w(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) w(static_cast<Eigen::Index>(i)) = sys.weight(j, i);
    c.M += var * w * w.transpose();
    c.mean += mp.mean * w;
    const double s2 = var * w.squaredNorm();
    c.sigma_sq.push_back(s2);
    c.sum_sigma4 += s2 * s2;
  }
  return c;
}

/// Sampler for N(mean, M) through a pivoted LDL^T factorization, which
/// handles singular M. If M is not PSD its negative eigenvalues are clamped
/// to 0 and a warning is printed.
class GaussianReference {
 public:
  GaussianReference(const Eigen::VectorXd& mean, const Eigen::MatrixXd& M) : mean_(mean) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    const Eigen::VectorXd D = ldlt.vectorD();
    if (ldlt.info() == Eigen::Success && (D.array() >= 0.0).all()) {
      const Eigen::MatrixXd L = ldlt.matrixL();
      A_ = ldlt.transpositionsP().transpose() * (L * D.cwiseSqrt().asDiagonal());
      return;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw std::invalid_argument("GaussianReference: eigendecomposition failed");
    clamped_ = true;
    std::clog << "warning: covariance is not PSD; negative eigenvalues clamped to 0\n";
    A_ = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }

  bool clamped() const { return clamped_; }
  const Eigen::MatrixXd& factor() const { return A_; }

  void sample(CounterRng& rng, Eigen::VectorXd& out) const {
    Eigen::VectorXd z(A_.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    out = mean_ + A_ * z;
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd A_;
  bool clamped_ = false;
};

struct BerryEsseenReport {
  CovarianceSummary cov;
  ProportionEstimate s_hits;  // Pr[S in A]
  ProportionEstimate g_hits;  // Pr[G in A]
  double gap = 0.0;
  double ci95 = 0.0;
  double sum_sigma4 = 0.0;
  double scaling = 0.0;  // (sum sigma_j^4)^(1/8)
  bool clamped = false;
};

struct ProbeOptions {
  std::uint64_t master_seed = default_master_seed();
  std::uint64_t shards = 16;
  unsigned threads = default_threads();
  double normalization_tol = 1e-9;
};

/// |Pr[S in A] - Pr[G in A]| where A = {y : orthants(sgn(y_i - theta_i))},
/// theta and strictness taken from sys, and G ~ N(E S, Cov S). The S side
/// is evaluated on the unscaled weights, so lattice atoms on the boundary
/// are counted exactly when the raw weights are integers.
inline BerryEsseenReport berry_esseen_probe(const HalfspaceSystem& sys, const ProductDistribution& dist,
                                            const CombinerSpec& orthants, std::uint64_t trials,
                                            const ProbeOptions& opt = {}) {
  check_compatible(sys, orthants);
  if (trials == 0) throw std::invalid_argument("berry_esseen_probe: zero trials");
  BerryEsseenReport r;
  r.cov = covariance_summary(sys, dist);
  for (Eigen::Index i = 0; i < r.cov.M.rows(); ++i) {
    if (std::abs(r.cov.M(i, i) - 1.0) > opt.normalization_tol) {
      throw std::invalid_argument("berry_esseen_probe: system is not normalized (diag M != 1)");
    }
  }
  const GaussianReference G(r.cov.mean, r.cov.M);
  r.clamped = G.clamped();
  const std::size_t d = sys.d();
  const auto in_A = [&](const Eigen::VectorXd& y) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const double v = y(static_cast<Eigen::Index>(i)) - sys.threshold(i);
      s |= std::uint64_t{sys.strict(i) ? v > 0 : v >= 0} << i;
    }
    return orthants.apply(s);
  };
  const std::uint64_t shards = std::max<std::uint64_t>(1, std::min(opt.shards, trials));
  using Pair = std::pair<ProportionEstimate, ProportionEstimate>;
  const auto parts = run_shards<Pair>(shards, opt.threads, [&](std::uint64_t s) {
    Pair p;
    const std::uint64_t m = detail::shard_trials(trials, shards, s);
    CounterRng rs(opt.master_seed, 2 * s), rg(opt.master_seed, 2 * s + 1);
    std::vector<double> x;
    Eigen::VectorXd g;
    for (std::uint64_t t = 0; t < m; ++t) {
      dist.sample(rs, x);
      p.first.successes += orthants.apply(sys.sign_vector(x));
      G.sample(rg, g);
      p.second.successes += in_A(g);
    }
    p.first.trials = p.second.trials = m;
    return p;
  });
  for (const auto& p : parts) {
    r.s_hits += p.first;
    r.g_hits += p.second;
  }
  r.gap = std::abs(r.s_hits.mean() - r.g_hits.mean());
  r.ci95 = std::hypot(r.s_hits.half_width(), r.g_hits.half_width());
  r.sum_sigma4 = r.cov.sum_sigma4;
  r.scaling = std::pow(r.sum_sigma4, 0.125);
  return r;
}

enum class ReportFormat { kCsv, kJson };

inline constexpr const char* kReportColumns[] = {"experiment", "n",       "d",     "eps",  "method",    "samples",
                                                 "true_exp",   "prg_exp", "error", "ci95", "seed_bits", "wall_ms"};

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument("parse_double: " + s);
  return v;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const EstimationReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["n"] = r.n;
  j["d"] = r.d;
  j["eps"] = format_double(r.eps);
  j["method"] = to_string(r.method);
  j["samples"] = r.samples;
  j["true_exp"] = format_double(r.true_expectation);
  j["prg_exp"] = format_double(r.prg_expectation);
  j["error"] = format_double(r.fooling_error);
  j["ci95"] = format_double(r.ci95);
  j["seed_bits"] = r.seed_bits;
  j["wall_ms"] = format_double(r.wall_ms);
  if (r.budget) j["budget"] = format_double(*r.budget);
  return j;
}

inline EstimationReport report_from_json(const nlohmann::json& j) {
  EstimationReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.d = j.at("d").get<std::size_t>();
  r.eps = parse_double(j.at("eps").get<std::string>());
  r.method = method_from_string(j.at("method").get<std::string>());
  r.samples = j.at("samples").get<std::uint64_t>();
  r.true_expectation = parse_double(j.at("true_exp").get<std::string>());
  r.prg_expectation = parse_double(j.at("prg_exp").get<std::string>());
  r.fooling_error = parse_double(j.at("error").get<std::string>());
  r.ci95 = parse_double(j.at("ci95").get<std::string>());
  r.seed_bits = j.at("seed_bits").get<std::size_t>();
  r.wall_ms = parse_double(j.at("wall_ms").get<std::string>());
  if (j.contains("budget")) r.budget = parse_double(j.at("budget").get<std::string>());
  return r;
}

inline void emit_report(const std::vector<EstimationReport>& reports, ReportFormat format, std::ostream& os) {
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    os << arr.dump(2) << '\n';
  } else {
    for (std::size_t c = 0; c < std::size(kReportColumns); ++c) os << (c ? "," : "") << kReportColumns[c];
    os << '\n';
    for (const auto& r : reports) {
      os << detail::csv_field(r.experiment) << ',' << r.n << ',' << r.d << ',' << format_double(r.eps) << ','
         << to_string(r.method) << ',' << r.samples << ',' << format_double(r.true_expectation) << ','
         << format_double(r.prg_expectation) << ',' << format_double(r.fooling_error) << ','
         << format_double(r.ci95) << ',' << r.seed_bits << ',' << format_double(r.wall_ms) << '\n';
    }
  }
  if (!os) throw std::runtime_error("emit_report: write failed");
}

/// Writes to path; the format follows the extension (.json, else CSV).
inline void emit_report(const std::vector<EstimationReport>& reports, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_report: cannot open " + path);
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  emit_report(reports, json ? ReportFormat::kJson : ReportFormat::kCsv, f);
}

inline std::vector<EstimationReport> read_reports_json(std::istream& is) {
  const auto arr = nlohmann::json::parse(is);
  if (!arr.is_array()) throw std::invalid_argument("read_reports_json: expected an array");
  std::vector<EstimationReport> out;
  for (const auto& j : arr) out.push_back(report_from_json(j));
  return out;
}

}  // namespace hsprg
