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

#include <boost/math/distributions/binomial.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "hsprg/harness.hpp"

namespace {

using namespace hsprg;

const auto kRad = CoordinateSpec::rademacher();

HalfspaceSystem two_halfspaces(std::size_t n, double t1, double t2) {
  std::vector<std::vector<double>> W;
  for (std::size_t j = 0; j < n; ++j) W.push_back({1.0, j % 2 ? -1.0 : 1.0});
  return HalfspaceSystem(W, {t1, t2});
}

TEST(ExactExpectation, Constants) {
  const auto dist = ProductDistribution::iid(kRad, 5);
  EXPECT_EQ(exact_expectation([](std::span<const double>) { return true; }, dist), Rational(1));
  EXPECT_EQ(exact_expectation([](std::span<const double>) { return false; }, dist), Rational(0));
}

TEST(ExactExpectation, ThreeCoordinateThreshold) {
  // Sums of 3 signs are +-1 or +-3; half the 8 points have sum >= 1.
  const auto dist = ProductDistribution::iid(kRad, 3);
  const auto f = system_function(HalfspaceSystem::single({1, 1, 1}, 1.0), CombinerSpec::single(), true);
  EXPECT_EQ(exact_expectation(f, dist), Rational(1, 2));
}

TEST(ExactExpectation, NonUniformAtomsAreExact) {
  const auto dist = ProductDistribution::iid(CoordinateSpec::discrete({0, 1}, {0.75, 0.25}), 4);
  // Pr[at least two ones] = 1 - (3/4)^4 - 4 (1/4)(3/4)^3 = 67/256.
  const auto f = [](std::span<const double> x) { return x[0] + x[1] + x[2] + x[3] >= 2; };
  EXPECT_EQ(exact_expectation(f, dist), Rational(67, 256));
}

TEST(ExactExpectation, CapIsEnforced) {
  const auto dist = ProductDistribution::iid(kRad, 12);
  EXPECT_THROW(exact_expectation([](std::span<const double>) { return true; }, dist, 1000), ResourceError);
  EXPECT_THROW(exact_expectation([](std::span<const double>) { return true; },
                                 ProductDistribution::iid(CoordinateSpec::gaussian(), 2)),
               std::invalid_argument);
}

TEST(ExactExpectation, IntersectionAgreesWithMonteCarlo) {
  const auto dist = ProductDistribution::iid(kRad, 6);
  const auto sys = two_halfspaces(6, 0.0, 1.0);
  const auto f = system_function(sys, CombinerSpec::intersection(2));
  const double exact = exact_expectation(f, dist).convert_to<double>();
  EstimateOptions opt;
  opt.trials = 200000;
  opt.master_seed = 11;
  const auto [tx, ty] = mc_expectations(f, dist, full_independence_source(dist), opt);
  EXPECT_LE(std::abs(tx.mean() - exact), 4 * tx.std_error());
  EXPECT_LE(std::abs(ty.mean() - exact), 4 * ty.std_error());
}

TEST(RobpExpectation, MatchesEnumeration) {
  std::mt19937_64 rng(5);
  const std::vector<ProductDistribution> dists{
      ProductDistribution::iid(kRad, 8),
      ProductDistribution::iid(CoordinateSpec::discrete({-1, 0, 2}, {0.25, 0.5, 0.25}), 6),
      ProductDistribution({kRad, CoordinateSpec::uniform_multiset({-1, 0, 1, 3}), kRad, kRad, kRad})};
  const std::vector<CombinerSpec> gs{CombinerSpec::intersection(2), CombinerSpec::truth_table(2, {0, 1, 1, 1}),
                                     CombinerSpec::truth_table(2, {1, 0, 0, 1}, false)};
  for (int trial = 0; trial < 30; ++trial) {
    const auto& dist = dists[trial % 3];
    std::vector<std::vector<double>> W(dist.n(), std::vector<double>(2));
    for (auto& row : W) {
      for (auto& v : row) v = static_cast<double>(static_cast<int>(rng() % 7) - 3);
    }
    const HalfspaceSystem sys(W, {static_cast<double>(static_cast<int>(rng() % 5) - 2), 0.5}, {false, trial % 2 == 0});
    const auto& g = gs[trial % 3];
    const double exact = exact_expectation(system_function(sys, g, true), dist).convert_to<double>();
    EXPECT_NEAR(robp_expectation(sys, g, dist), exact, 1e-14);
  }
}

TEST(Estimate, ConstantFunctionHasZeroError) {
  const auto dist = ProductDistribution::iid(kRad, 8);
  const auto one = [](std::span<const double>) { return true; };
  const auto small = ProductDistribution::iid(kRad, 4);
  for (const auto& [dist, gen] : {std::pair{dist, mz_source(dist, 2, 2)}, std::pair{dist, kwise_source(dist, 3)},
                                  std::pair{small, nisan_source(small, 1)}}) {
    const auto ex = estimate_fooling_error(one, dist, gen, Method::kExact);
    EXPECT_EQ(ex.fooling_error, 0.0);
    EXPECT_EQ(ex.ci95, 0.0);
    EstimateOptions opt;
    opt.trials = 1000;
    const auto mc = estimate_fooling_error(one, dist, gen, Method::kMonteCarlo, opt);
    EXPECT_EQ(mc.fooling_error, 0.0);
    EXPECT_EQ(mc.samples, 1000u);
  }
}

TEST(Estimate, FullIndependenceIsExact) {
  const std::vector<ProductDistribution> dists{
      ProductDistribution::iid(kRad, 6),
      ProductDistribution::iid(CoordinateSpec::discrete({-1, 0, 1}, {0.25, 0.5, 0.25}), 4)};
  for (const auto& dist : dists) {
    const auto sys = two_halfspaces(dist.n(), 0.0, -1.0);
    const auto f = system_function(sys, CombinerSpec::intersection(2));
    const auto gen = full_independence_source(dist);
    EstimateOptions opt;
    opt.d = 2;
    const auto r = estimate_fooling_error(f, dist, gen, Method::kExact, opt);
    EXPECT_EQ(r.fooling_error, 0.0);
    EXPECT_EQ(r.true_expectation, r.prg_expectation);
    EXPECT_EQ(r.method, Method::kExact);
    EXPECT_EQ(r.samples, std::uint64_t{1} << gen.seed_bits);
  }
}

TEST(Estimate, ExactReportInvariants) {
  const auto dist = ProductDistribution::iid(kRad, 8);
  const auto f = system_function(two_halfspaces(8, 1.0, 0.0), CombinerSpec::intersection(2));
  const auto r = estimate_fooling_error(f, dist, mz_source(dist, 2, 2), Method::kExact);
  EXPECT_EQ(r.ci95, 0.0);
  EXPECT_EQ(r.fooling_error, std::abs(r.true_expectation - r.prg_expectation));
  EXPECT_EQ(r.true_expectation, robp_expectation(two_halfspaces(8, 1.0, 0.0), CombinerSpec::intersection(2), dist));
}

TEST(Estimate, MonteCarloIsReproducible) {
  const auto dist = ProductDistribution::iid(kRad, 16);
  const auto f = system_function(two_halfspaces(16, 0.0, 2.0), CombinerSpec::intersection(2));
  const auto gen = mz_source(dist, 4, 2);
  EstimateOptions opt;
  opt.trials = 20000;
  opt.master_seed = 99;
  opt.shards = 8;
  opt.threads = 1;
  auto a = estimate_fooling_error(f, dist, gen, Method::kMonteCarlo, opt);
  opt.threads = 4;
  auto b = estimate_fooling_error(f, dist, gen, Method::kMonteCarlo, opt);
  a.wall_ms = b.wall_ms = 0;
  EXPECT_EQ(a, b);
  opt.master_seed = 100;
  auto c = estimate_fooling_error(f, dist, gen, Method::kMonteCarlo, opt);
  c.wall_ms = 0;
  EXPECT_NE(a.prg_expectation, c.prg_expectation);
}

TEST(Estimate, KnownTruthSkipsSampling) {
  const std::size_t n = 32;
  const auto dist = ProductDistribution::iid(kRad, n);
  const auto sys = two_halfspaces(n, 2.0, 2.0);
  const auto g = CombinerSpec::intersection(2);
  EstimateOptions opt;
  opt.trials = 100000;
  opt.master_seed = 3;
  opt.true_expectation = robp_expectation(sys, g, dist);
  const auto r = estimate_fooling_error(system_function(sys, g), dist, mz_source(dist, 16, 5), Method::kMonteCarlo, opt);
  EXPECT_EQ(r.true_expectation, *opt.true_expectation);
  EXPECT_LE(r.fooling_error, r.ci95 + 0.05);
  EXPECT_NEAR(r.ci95, kZ95 * std::sqrt(r.prg_expectation * (1 - r.prg_expectation) / 1e5), 1e-12);
}

TEST(Estimate, RejectsMismatchedGenerator) {
  const auto one = [](std::span<const double>) { return true; };
  EXPECT_THROW(estimate_fooling_error(one, ProductDistribution::iid(kRad, 4),
                                      kwise_source(ProductDistribution::iid(kRad, 5), 2), Method::kExact),
               std::invalid_argument);
  EstimateOptions opt;
  opt.cap = 1024;
  EXPECT_THROW(estimate_fooling_error(one, ProductDistribution::iid(kRad, 40),
                                      nisan_source(ProductDistribution::iid(kRad, 40), 6), Method::kExact, opt),
               ResourceError);
}

TEST(Sphere, CapMatchesLowDimensionalClosedForms) {
  for (double h : {-0.9, -0.3, 0.0, 0.25, 0.7, 1.0}) {
    EXPECT_NEAR(sphere_cap_probability(3, h), (1 - h) / 2, 1e-14);        // Archimedes
    EXPECT_NEAR(sphere_cap_probability(2, h), std::acos(h) / std::numbers::pi, 1e-14);
  }
  // Pr[x_1 >= h] on S^4 via the density (3/4)(1 - s^2) of x_1.
  const double h = 0.3;
  EXPECT_NEAR(sphere_cap_probability(5, h), 0.75 * ((1 - h) - (1 - h * h * h) / 3), 1e-14);
}

TEST(Sphere, OriginHalfspaceIsHalf) {
  const std::size_t n = 16;
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 + static_cast<double>(j % 3);
  const auto f = system_function(HalfspaceSystem::single(w, 0.0), CombinerSpec::single());
  SphereOptions opt;
  opt.trials = 200000;
  opt.master_seed = 8;
  opt.true_expectation = 0.5;
  const auto r = sphere_transfer(gaussian_sampler(n), f, n, opt);
  EXPECT_LE(r.fooling_error, 4 * std::sqrt(0.25 / 2e5));
  ASSERT_TRUE(r.budget.has_value());
  EXPECT_NEAR(*r.budget, std::log(16.0) / 2.0, 1e-15);
}

TEST(Sphere, CapAgainstIncompleteBeta) {
  const std::size_t n = 16;
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  const auto f = system_function(HalfspaceSystem::single(e1, 0.3), CombinerSpec::single());
  SphereOptions opt;
  opt.trials = 200000;
  opt.master_seed = 21;
  const auto r = sphere_transfer(gaussian_sampler(n), f, n, opt);
  const double p = sphere_cap_probability(n, 0.3);
  const double se = std::sqrt(p * (1 - p) / 2e5);
  EXPECT_LE(std::abs(r.prg_expectation - p), 4 * se);
  EXPECT_LE(std::abs(r.true_expectation - p), 4 * se);
}

TEST(Sphere, NormalizationInvarianceForHomogeneousSystems) {
  const std::size_t n = 8;
  const auto sys = two_halfspaces(n, 0.0, 0.0);
  const auto f = system_function(sys, CombinerSpec::intersection(2));
  CounterRng rng(4, 0);
  const auto smp = gaussian_sampler(n);
  std::vector<double> x;
  for (int i = 0; i < 1000; ++i) {
    smp(rng, x);
    auto y = x;
    ASSERT_TRUE(normalize_to_sphere(y));
    ASSERT_EQ(f(x), f(y));
  }
  std::vector<double> zero(n, 0.0);
  EXPECT_FALSE(normalize_to_sphere(zero));
}

TEST(Sphere, DiscreteGeneratorRedrawsZeroVectors) {
  // Coordinates in {0, 1}: the all-zero draw has probability 2^-4 and is
  // redrawn; among nonzero vectors Pr[x_1 = 1] = 8/15.
  const auto dist = ProductDistribution::iid(CoordinateSpec::discrete({0, 1}, {0.5, 0.5}), 4);
  std::vector<double> e1{1, 0, 0, 0};
  const auto f = system_function(HalfspaceSystem::single(e1, 0.5), CombinerSpec::single());
  SphereOptions opt;
  opt.trials = 100000;
  opt.true_expectation = 8.0 / 15.0;
  const auto r = sphere_transfer(generator_sampler(full_independence_source(dist)), f, 4, opt);
  EXPECT_LE(r.fooling_error, 4 * std::sqrt(0.25 / 1e5));
}

/// Equal unit weights with threshold theta sqrt n, normalized.
HalfspaceSystem equal_weight_system(std::size_t n, double theta) {
  const auto dist = ProductDistribution::iid(kRad, n);
  return normalize(HalfspaceSystem::single(std::vector<double>(n, 1.0), theta * std::sqrt(static_cast<double>(n))), dist);
}

ProbeOptions seeded(std::uint64_t s) {
  ProbeOptions o;
  o.master_seed = s;
  return o;
}

/// |Pr[sum of n signs >= theta sqrt n] - (1 - Phi(theta))|.
double binomial_gap(std::size_t n, double theta) {
  const double k = std::ceil((theta * std::sqrt(static_cast<double>(n)) + static_cast<double>(n)) / 2 - 1e-12);
  const boost::math::binomial_distribution<double> b(static_cast<double>(n), 0.5);
  const double p = k <= 0 ? 1.0 : boost::math::cdf(boost::math::complement(b, k - 1));
  return std::abs(p - 0.5 * std::erfc(theta / std::numbers::sqrt2));
}

TEST(BerryEsseen, FullSpaceHasNoGap) {
  const auto dist = ProductDistribution::iid(kRad, 20);
  const auto r = berry_esseen_probe(equal_weight_system(20, 0.3), dist, CombinerSpec::truth_table(1, {1, 1}), 5000);
  EXPECT_EQ(r.gap, 0.0);
  EXPECT_EQ(r.s_hits.successes, 5000u);
}

TEST(BerryEsseen, HalfLineMatchesBinomialDistanceAndShrinks) {
  std::vector<double> gaps;
  for (std::size_t n : {25, 100, 400}) {
    const auto dist = ProductDistribution::iid(kRad, n);
    const auto r = berry_esseen_probe(equal_weight_system(n, 0.2), dist, CombinerSpec::single(), 400000, seeded(7));
    const double want = binomial_gap(n, 0.2);
    EXPECT_LE(std::abs(r.gap - want), r.ci95) << "n=" << n;
    EXPECT_NEAR(r.sum_sigma4, 1.0 / static_cast<double>(n), 1e-12);
    EXPECT_NEAR(r.scaling, std::pow(static_cast<double>(n), -0.125), 1e-12);
    gaps.push_back(want);
  }
  EXPECT_GT(gaps[0], gaps[1]);
  EXPECT_GT(gaps[1], gaps[2]);
}

TEST(BerryEsseen, CovarianceSummaryInvariants) {
  const std::size_t n = 12;
  const auto dist = ProductDistribution::iid(kRad, n);
  auto sys = normalize(two_halfspaces(n, 0.0, 0.0), dist);
  const auto c = covariance_summary(sys, dist);
  EXPECT_NEAR(c.M(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(c.M(1, 1), 1.0, 1e-12);
  EXPECT_NEAR(c.M(0, 1), 0.0, 1e-12);
  double s2 = 0.0;
  for (double v : c.sigma_sq) s2 += v;
  EXPECT_NEAR(s2, 2.0, 1e-12);
  EXPECT_NEAR(c.sum_sigma4, static_cast<double>(n) * std::pow(2.0 / static_cast<double>(n), 2), 1e-12);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.M);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
}

TEST(BerryEsseen, SingularCovarianceFactorization) {
  Eigen::MatrixXd M(3, 3);
  M << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  const GaussianReference G(Eigen::VectorXd::Zero(3), M);
  EXPECT_LE((G.factor() * G.factor().transpose() - M).cwiseAbs().maxCoeff(), 1e-12);
  CounterRng rng(1, 0);
  Eigen::VectorXd g;
  for (int i = 0; i < 100; ++i) {
    G.sample(rng, g);
    ASSERT_NEAR(g(0), g(1), 1e-12);
  }
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0, 0, -1e-14;
  EXPECT_TRUE(GaussianReference(Eigen::VectorXd::Zero(2), bad).clamped());
}

TEST(BerryEsseen, RequiresNormalizedSystem) {
  const auto dist = ProductDistribution::iid(kRad, 4);
  EXPECT_THROW(berry_esseen_probe(HalfspaceSystem::single({1, 1, 1, 1}, 0), dist, CombinerSpec::single(), 10),
               std::invalid_argument);
}

TEST(BerryEsseen, PermutationInvariance) {
  const std::size_t n = 30;
  std::mt19937_64 rng(12);
  std::vector<double> w1(n), w2(n);
  for (std::size_t j = 0; j < n; ++j) {
    w1[j] = 1.0 + static_cast<double>(rng() % 4);
    w2[j] = static_cast<double>(static_cast<int>(rng() % 5) - 2);
  }
  const auto dist = ProductDistribution::iid(kRad, n);
  const auto build = [&](const std::vector<std::size_t>& perm) {
    std::vector<std::vector<double>> W(n);
    for (std::size_t j = 0; j < n; ++j) W[j] = {w1[perm[j]], w2[perm[j]]};
    return normalize(HalfspaceSystem(W, {0.1, 0.1}), dist);
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const auto A = CombinerSpec::intersection(2);
  const auto base = berry_esseen_probe(build(perm), dist, A, 200000, seeded(1));
  for (int k = 0; k < 3; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto r = berry_esseen_probe(build(perm), dist, A, 200000, seeded(2 + static_cast<std::uint64_t>(k)));
    EXPECT_LE(std::abs(r.gap - base.gap), r.ci95 + base.ci95);
    EXPECT_NEAR(r.sum_sigma4, base.sum_sigma4, 1e-12);
  }
}

TEST(Report, EmptyCsvIsHeaderOnly) {
  std::ostringstream os;
  emit_report({}, ReportFormat::kCsv, os);
  EXPECT_EQ(os.str(), "experiment,n,d,eps,method,samples,true_exp,prg_exp,error,ci95,seed_bits,wall_ms\n");
  std::ostringstream js;
  emit_report({}, ReportFormat::kJson, js);
  EXPECT_EQ(js.str(), "[]\n");
}

TEST(Report, ExactRowHasZeroCi) {
  EstimationReport r;
  r.experiment = "a,b";
  r.n = 6;
  r.d = 2;
  r.eps = 0.1;
  r.samples = 64;
  r.true_expectation = 0.25;
  r.prg_expectation = 0.3125;
  r.fooling_error = 0.0625;
  r.seed_bits = 6;
  r.wall_ms = 1.5;
  std::ostringstream os;
  emit_report({r}, ReportFormat::kCsv, os);
  const auto text = os.str();
  const auto row = text.substr(text.find('\n') + 1);
  EXPECT_EQ(row, "\"a,b\",6,2,0.1,exact-enumeration,64,0.25,0.3125,0.0625,0,6,1.5\n");
}

TEST(Report, JsonRoundTripIsBitExact) {
  std::mt19937_64 rng(77);
  std::vector<EstimationReport> reports;
  for (int i = 0; i < 50; ++i) {
    EstimationReport r;
    r.experiment = "exp" + std::to_string(i);
    r.n = rng() % 100;
    r.d = rng() % 5;
    r.eps = std::ldexp(static_cast<double>(rng() >> 11), -53);
    r.method = i % 2 ? Method::kExact : Method::kMonteCarlo;
    r.samples = rng();
    r.true_expectation = 0.1 + 0.2 * r.eps;
    r.prg_expectation = std::nextafter(r.true_expectation, 1.0);
    r.fooling_error = std::abs(r.true_expectation - r.prg_expectation);
    r.ci95 = i % 2 ? 0.0 : 1e-300 * static_cast<double>(i);
    r.seed_bits = rng() % 1000;
    r.wall_ms = std::numeric_limits<double>::denorm_min() * i;
    if (i % 3 == 0) r.budget = 1.0 / 3.0;
    reports.push_back(r);
  }
  std::stringstream ss;
  emit_report(reports, ReportFormat::kJson, ss);
  const auto back = read_reports_json(ss);
  ASSERT_EQ(back.size(), reports.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i], reports[i]);
}

TEST(Report, FileOutputFollowsExtension) {
  const std::string dir = ::testing::TempDir();
  EstimationReport r;
  r.experiment = "x";
  emit_report({r}, dir + "/r.json");
  std::ifstream f(dir + "/r.json");
  EXPECT_EQ(read_reports_json(f).at(0), r);
  emit_report({r}, dir + "/r.csv");
  std::ifstream g(dir + "/r.csv");
  std::string header;
  std::getline(g, header);
  EXPECT_EQ(header.substr(0, 12), "experiment,n");
  EXPECT_THROW(emit_report({r}, "/nonexistent-dir/r.csv"), std::runtime_error);
}

}  // namespace
