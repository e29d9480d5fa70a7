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

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hsprg/distributions.hpp"
#include "hsprg/stats.hpp"

namespace {

using namespace hsprg;

const CoordinateSpec kSkewed = CoordinateSpec::discrete({-2.0, 0.5}, {0.2, 0.8});

double normal_pdf(double x) { return std::exp(-x * x / 2) / std::sqrt(2 * M_PI); }

// Gauss-Kronrod quadrature of x^p phi(x) over (-B, B).
double quad_gauss_moment(int p, double B) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate([p](double x) { return std::pow(x, p) * normal_pdf(x); }, -B, B, 15,
                                              1e-14);
}

TEST(MomentProfile, Rademacher) {
  const auto p = moment_profile(CoordinateSpec::rademacher());
  EXPECT_DOUBLE_EQ(p.mean, 0.0);
  EXPECT_DOUBLE_EQ(p.second_moment, 1.0);
  EXPECT_DOUBLE_EQ(p.fourth_moment, 1.0);
  EXPECT_DOUBLE_EQ(p.eta, 1.0 / std::sqrt(3.0));
  ASSERT_TRUE(p.alpha.has_value());
  EXPECT_DOUBLE_EQ(*p.alpha, 0.5);
}

TEST(MomentProfile, Gaussian) {
  const auto p = moment_profile(CoordinateSpec::gaussian());
  EXPECT_DOUBLE_EQ(p.fourth_moment, 3.0);
  EXPECT_DOUBLE_EQ(p.eta, 1.0 / std::sqrt(3.0));
  EXPECT_FALSE(p.alpha.has_value());
}

TEST(MomentProfile, SkewedDiscrete) {
  const auto p = moment_profile(kSkewed);
  EXPECT_NEAR(p.mean, 0.0, 1e-15);
  EXPECT_NEAR(p.second_moment, 1.0, 1e-15);
  EXPECT_NEAR(p.fourth_moment, 3.25, 1e-15);
  EXPECT_NEAR(p.eta0, std::pow(1.0 / 3.25, 0.25), 1e-15);
  EXPECT_NEAR(p.eta, p.eta0 / (2 * std::sqrt(3.0)), 1e-15);
  EXPECT_DOUBLE_EQ(*p.alpha, 0.2);
}

TEST(MomentProfile, InvariantsAcrossKinds) {
  for (const auto& c : {CoordinateSpec::rademacher(), CoordinateSpec::gaussian(), CoordinateSpec::uniform_interval(),
                        kSkewed, CoordinateSpec::uniform_multiset({-3, -1, 0, 1, 3})}) {
    const auto p = moment_profile(c);
    EXPECT_GE(p.fourth_moment, p.second_moment * p.second_moment);
    EXPECT_GT(p.eta, 0.0);
    EXPECT_LE(p.eta, 1.0 / std::sqrt(3.0) + 1e-15);
  }
}

TEST(Truncation, GaussianWorkedExample) {
  const auto r = truncate_and_standardize(CoordinateSpec::gaussian(), 8, 3.0, 0.1);
  EXPECT_NEAR(r.B, std::pow(720.0, 0.25), 1e-12);
  EXPECT_NEAR(r.B, 5.18, 0.005);
  EXPECT_DOUBLE_EQ(r.tail_bound, 0.1 / 24.0);
  // Oracle: tail mass by quadrature.
  const double inside = quad_gauss_moment(0, r.B);
  EXPECT_NEAR(r.tail_mass, 1.0 - inside, 1e-12);
  EXPECT_LE(r.tail_mass, 3.0 / std::pow(r.B, 4));
  const double second = quad_gauss_moment(2, r.B);
  EXPECT_NEAR(r.second_truncated, second, 1e-12);
  EXPECT_LT(1.0 - r.second_truncated, std::sqrt(0.1 / 8));
  const auto m = r.standardized.moments();
  EXPECT_NEAR(m[1], 0.0, 1e-15);
  EXPECT_NEAR(m[2], 1.0, 1e-14);
  EXPECT_NEAR(m[4], quad_gauss_moment(4, r.B) / (second * second), 1e-12);
}

TEST(Truncation, BoundedCoordIsIdentity) {
  const auto r = truncate_and_standardize(CoordinateSpec::rademacher(), 8, 1.0, 0.1);
  EXPECT_DOUBLE_EQ(r.tail_mass, 0.0);
  const auto at = r.standardized.atoms();
  ASSERT_EQ(at.size(), 2u);
  EXPECT_DOUBLE_EQ(at[0].value, -1.0);
  EXPECT_DOUBLE_EQ(at[1].value, 1.0);
}

TEST(Truncation, VarianceCollapseRaises) {
  // C = 1 bound claimed for a heavy coordinate: most mass lies beyond B.
  const auto heavy = CoordinateSpec::discrete({-10, 0, 10}, {0.005, 0.99, 0.005});
  EXPECT_THROW(truncate_and_standardize(heavy, 1, 1.0, 0.4), std::domain_error);
}

TEST(Boundaries, Rademacher) {
  const auto b = bucket_boundaries(CoordinateSpec::rademacher(), 0.5, 2.0);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_DOUBLE_EQ(b[0], -2.0);
  EXPECT_DOUBLE_EQ(b[1], -1.0);
  EXPECT_DOUBLE_EQ(b[2], 1.0);
}

TEST(Boundaries, GaussianQuartiles) {
  const auto b = bucket_boundaries(CoordinateSpec::gaussian(), 0.25, 8.0);
  const boost::math::normal nd;
  ASSERT_EQ(b.size(), 5u);
  EXPECT_DOUBLE_EQ(b[0], -8.0);
  EXPECT_NEAR(b[1], boost::math::quantile(nd, 0.25), 2e-12);
  EXPECT_NEAR(b[2], 0.0, 2e-12);
  EXPECT_NEAR(b[3], boost::math::quantile(nd, 0.75), 2e-12);
  EXPECT_NEAR(b[3], 0.6745, 1e-4);
  EXPECT_DOUBLE_EQ(b[4], 8.0);
}

TEST(Boundaries, UniformInterval) {
  const auto b = bucket_boundaries(CoordinateSpec::uniform_interval(), 0.25, 1.0);
  const double expect[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(b[k], expect[k], 2e-12);
}

TEST(Boundaries, NonMonotoneCdfRaises) {
  EXPECT_THROW(bucket_boundaries([](double x) { return x < 0 ? 0.6 : 0.4; }, 0.5, 1.0), std::domain_error);
  EXPECT_THROW(bucket_boundaries(CoordinateSpec::gaussian(), 0.3, 1.0), std::invalid_argument);
}

TEST(Sandwich, RademacherPair) {
  const auto s = make_sandwich(bucket_boundaries(CoordinateSpec::rademacher(), 0.5, 2.0), 0.5, 2.0);
  const auto [lo, up] = sandwich_pair(s);
  EXPECT_EQ(up.values(), (std::vector<double>{-1.0, 1.0}));
  EXPECT_EQ(lo.values(), (std::vector<double>{-2.0, -1.0}));
  EXPECT_DOUBLE_EQ(statistical_distance(up, CoordinateSpec::rademacher()), 0.0);
  EXPECT_DOUBLE_EQ(statistical_distance(lo, up), 0.5);
}

TEST(Sandwich, FineGranularityOnDiscreteCoordinate) {
  // g = 4 with atoms of mass 1/4: lower and upper differ only at the ends.
  const auto c = CoordinateSpec::uniform_multiset({-3, -1, 1, 3});
  const auto s = make_sandwich(bucket_boundaries(c, 0.25, 3.0), 0.25, 3.0);
  EXPECT_EQ(s.upper_values(), (std::vector<double>{-3, -1, 1, 3}));
  EXPECT_EQ(s.lower_values(), (std::vector<double>{-3, -3, -1, 1}));
}

TEST(StatisticalDistance, Basics) {
  EXPECT_DOUBLE_EQ(statistical_distance(kSkewed, kSkewed), 0.0);
  EXPECT_DOUBLE_EQ(statistical_distance(CoordinateSpec::uniform_multiset({1, 2}), CoordinateSpec::uniform_multiset({3})),
                   1.0);
}

TEST(Discretize, SdAndMomentBudgetsAcrossCoords) {
  // Inputs have unit variance.
  for (const auto& c : {CoordinateSpec::gaussian(), CoordinateSpec::uniform_interval(std::sqrt(3.0)), kSkewed,
                        CoordinateSpec::rademacher()}) {
    const double C = std::max(3.0, moment_profile(c).C);
    const auto r = discretize(c, 4, C, 0.2, 1.0 / 1024);
    EXPECT_LE(r.sd_lower_upper, r.sandwich.gamma + 1e-15);
    for (const auto& m : {r.lower, r.upper}) {
      EXPECT_LE(std::abs(m[1] - r.continuous[1]), r.mean_budget + 1e-9);
      EXPECT_LE(std::abs(m[2] - r.continuous[2]), r.second_budget + 1e-9);
      EXPECT_LE(std::abs(m[4] - r.continuous[4]), r.fourth_budget + 1e-9);
    }
    for (double b : r.sandwich.boundaries) EXPECT_LE(std::abs(b), r.sandwich.B);
    EXPECT_EQ(r.sandwich.lower_values().size(), r.sandwich.g);
  }
}

TEST(Discretize, DefaultGammaIsPowerOfTwoBelowTarget) {
  const double B = truncation_radius(8, 3.0, 0.1);
  const double g = default_gamma(8, B, 0.1);
  EXPECT_DOUBLE_EQ(g, std::ldexp(1.0, -17));
  EXPECT_LE(g, 0.1 / (16 * std::pow(B, 4)));
  EXPECT_GT(2 * g, 0.1 / (16 * std::pow(B, 4)));
}

TEST(Diagnostics, HypercontractiveConcentration) {
  for (const auto& c : {CoordinateSpec::rademacher(), CoordinateSpec::gaussian(), CoordinateSpec::uniform_interval(),
                        kSkewed}) {
    for (const auto& pr : concentration_probe(c, {2.0, 4.0, 8.0}, 1000000, 11)) {
      EXPECT_LE(pr.estimate, pr.bound + 3 * pr.std_error) << to_string(c.kind()) << " t=" << pr.t;
    }
  }
}

TEST(Diagnostics, PaleyZygmundAnticoncentration) {
  for (const auto& c : {CoordinateSpec::rademacher(), CoordinateSpec::gaussian(), CoordinateSpec::uniform_interval(),
                        kSkewed}) {
    for (double t : {0.5, 0.75}) {
      for (double theta : {0.0, 1.0}) {
        const auto pr = anticoncentration_probe_coord(c, theta, t, 1000000, 12);
        EXPECT_GE(pr.estimate, pr.bound - 3 * pr.std_error) << to_string(c.kind()) << " t=" << t;
      }
    }
  }
}

TEST(Sampling, MatchesMoments) {
  const auto r = truncate_and_standardize(kSkewed, 4, 4.0, 0.1);
  CounterRng rng(5, 0);
  MeanEstimate m1, m2;
  for (int i = 0; i < 200000; ++i) {
    const double x = r.standardized.sample(rng);
    m1.add(x);
    m2.add(x * x);
  }
  EXPECT_NEAR(m1.mean(), 0.0, 5 * m1.std_error());
  EXPECT_NEAR(m2.mean(), 1.0, 5 * m2.std_error());
}

}  // namespace
