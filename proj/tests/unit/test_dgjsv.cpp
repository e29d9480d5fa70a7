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

#include "hsprg/dgjsv.hpp"

namespace {

using namespace hsprg;

TEST(Chebyshev, ClenshawMatchesPowerForm) {
  // T_5(x) = 16x^5 - 20x^3 + 5x; dyadic points make both sides exact.
  std::vector<long double> c(6, 0.0L);
  c[5] = 1.0L;
  const ChebyshevSeries t5(c);
  for (long double x = -1.0L; x <= 1.0L; x += 0.125L) EXPECT_EQ(t5(x), 16 * x * x * x * x * x - 20 * x * x * x + 5 * x);
  // Outside: T_5(2) = 362.
  EXPECT_NEAR(static_cast<double>(t5(2.0L)), 362.0, 1e-12);
}

TEST(Chebyshev, InterpolationIsExactForPolynomials) {
  // 3x^3 - x + 2 = 0.75 T_3 + 1.25 T_1 + 2 T_0.
  const auto s = ChebyshevSeries::interpolate([](long double x) { return 3 * x * x * x - x + 2; }, 4);
  ASSERT_EQ(s.degree(), 3u);
  EXPECT_NEAR(static_cast<double>(s.coefficients()[0]), 2.0, 1e-17);
  EXPECT_NEAR(static_cast<double>(s.coefficients()[1]), 1.25, 1e-17);
  EXPECT_NEAR(static_cast<double>(s.coefficients()[2]), 0.0, 1e-17);
  EXPECT_NEAR(static_cast<double>(s.coefficients()[3]), 0.75, 1e-17);
}

TEST(Chebyshev, IntegralVanishesAtMinusOne) {
  // Integral of 1 + 2x from -1 is x + x^2.
  const ChebyshevSeries f(std::vector<long double>{1.0L, 2.0L});
  const auto F = f.integral();
  for (long double x : {-1.0L, -0.3L, 0.0L, 0.5L, 2.0L}) EXPECT_NEAR(static_cast<double>(F(x)), static_cast<double>(x + x * x), 1e-17);
}

TEST(Chebyshev, ExactMonomialConversion) {
  // T_4 = 8x^4 - 8x^2 + 1.
  std::vector<long double> c(5, 0.0L);
  c[4] = 1.0L;
  c[0] = 0.5L;
  const auto m = ChebyshevSeries(c).monomial();
  ASSERT_EQ(m.size(), 5u);
  EXPECT_EQ(m[0], Rational(3, 2));
  EXPECT_EQ(m[1], Rational(0));
  EXPECT_EQ(m[2], Rational(-8));
  EXPECT_EQ(m[4], Rational(8));
}

TEST(Rationals, LongDoubleIsExact) {
  EXPECT_EQ(to_rational(0.375L), Rational(3, 8));
  EXPECT_EQ(to_rational(-3.0L), Rational(-3));
  EXPECT_EQ(to_rational(std::ldexp(1.0L, -70)), Rational(1) / Rational(BigInt(1) << 70));
  // All 64 significand bits survive.
  const std::uint64_t odd = 0xF123456789ABCDEFull;
  EXPECT_EQ(to_rational(-std::ldexp(static_cast<long double>(odd), -70)),
            Rational(-BigInt(odd), BigInt(1) << 70));
  EXPECT_THROW(to_rational(std::numeric_limits<long double>::infinity()), std::domain_error);
}

TEST(UnivariatePoly, QuadraticStep) {
  const auto P = UnivariatePoly::quadratic_step(Rational(2));
  EXPECT_EQ(P.degree(), 2u);
  EXPECT_EQ(P.coefficients(), (std::vector<Rational>{1, 4, 4}));
  EXPECT_EQ(P(-0.5L), 0.0L);
  EXPECT_EQ(P(0.0L), 1.0L);
  for (long double x = -2.0L; x <= 2.0L; x += 0.01L) EXPECT_GE(P(x), x >= 0 ? 1.0L : 0.0L);
  EXPECT_THROW(UnivariatePoly::quadratic_step(Rational(0)), std::invalid_argument);
}

TEST(Dgjsv, ReferencePoints) {
  const double a = 0.1, b = 1e-2;
  const auto P = dgjsv_poly(a, b);
  EXPECT_EQ(P.degree() % 2, 0u);
  EXPECT_GE(P(0.0L), 1.0L);
  EXPECT_LE(P(0.0L), 1.0L + b);
  EXPECT_GE(P(-1.0L), -1e-9L);
  EXPECT_LE(P(-1.0L), b);
  // (4x)^K at x = 2, compared in log space.
  EXPECT_LE(std::log(P(2.0L)), static_cast<long double>(P.degree()) * std::log(8.0L));
}

class DgjsvGrid : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(DgjsvGrid, SixPropertiesAndDegree) {
  const auto [a, b] = GetParam();
  const auto P = dgjsv_poly(a, b);
  const auto rep = audit_dgjsv(P, a, b, 1e-9, 10000, 8.0);
  EXPECT_EQ(rep.grid_points, 160005u);
  for (int k = 0; k < 6; ++k) EXPECT_TRUE(rep.props[k]) << "property " << k + 1 << " worst " << rep.worst[k];
  EXPECT_TRUE(rep.even_degree);
  EXPECT_LE(static_cast<double>(rep.K), kDgjsvC0 * std::log(2.0 / b) / a);
  EXPECT_TRUE(rep.ok());
}

INSTANTIATE_TEST_SUITE_P(Audit, DgjsvGrid,
                         ::testing::Values(std::pair{0.05, 1e-2}, std::pair{0.05, 1e-4}, std::pair{0.1, 1e-2},
                                           std::pair{0.1, 1e-4}, std::pair{0.2, 1e-2}, std::pair{0.2, 1e-4}));

TEST(Dgjsv, DominatesStepEverywhere) {
  const auto P = dgjsv_poly(0.2, 1e-4);
  for (long double x = -3.0L; x <= 3.0L; x += 1.0L / 1024) ASSERT_GE(P(x), x >= 0 ? 1.0L : 0.0L) << static_cast<double>(x);
}

TEST(Dgjsv, MonomialFormAgreesWithSeries) {
  const auto P = dgjsv_poly(0.2, 1e-2);
  const auto m = P.coefficients();
  ASSERT_EQ(m.size(), P.degree() + 1);
  for (const Rational& x : {Rational(0), Rational(-1, 2), Rational(1, 3), Rational(1)}) {
    Rational acc = 0;
    for (std::size_t k = m.size(); k-- > 0;) acc = acc * x + m[k];
    const long double xv = static_cast<long double>(x);
    EXPECT_NEAR(static_cast<double>(acc), static_cast<double>(P(xv)), 1e-12);
  }
}

TEST(Dgjsv, RejectsBadParameters) {
  EXPECT_THROW(dgjsv_poly(0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(dgjsv_poly(0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(dgjsv_poly(1.5, 0.1), std::invalid_argument);
}

TEST(Dgjsv, AuditFlagsBrokenPolynomial) {
  // x^2 fails the upper bound on [0, 1] and the lower bound just right of 0.
  const auto P = UnivariatePoly::monomial({0, 0, 1});
  const auto rep = audit_dgjsv(P, 0.1, 1e-2, 1e-9, 100);
  EXPECT_FALSE(rep.props[3]);
  EXPECT_FALSE(rep.ok());
}

}  // namespace
