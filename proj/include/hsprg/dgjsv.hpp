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

// Univariate polynomials and the step-function majorant P_{a,b}.
//
// P = R^2 where R is the normalized integral of the nonnegative kernel
// T_N(q(s))^2, q a downward parabola peaking inside [-a, 0]. R is
// nondecreasing, R(-1) = 0 and R(0) = 1 + kStepMargin, so every interval
// bound reduces to the values R(-a) and R(1). R is held in the Chebyshev
// basis and evaluated by Clenshaw's recurrence; monomial coefficients are
// derived exactly on request.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsprg/common.hpp"

namespace hsprg {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact value of a finite long double.
inline Rational to_rational(long double v) {
  if (!std::isfinite(v)) throw std::domain_error("to_rational: non-finite value");
  if (v == 0.0L) return Rational(0);
  int e = 0;
  const long double m = std::frexp(std::abs(v), &e);
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 64));
  const int shift = e - 64;
  Rational r(v < 0 ? -BigInt(mant) : BigInt(mant));
  if (shift > 0) r *= Rational(BigInt(1) << shift);
  if (shift < 0) r /= Rational(BigInt(1) << -shift);
  return r;
}

/// Sum_k c[k] T_k(x).
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  explicit ChebyshevSeries(std::vector<long double> c) : c_(std::move(c)) {}

  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<long double>& coefficients() const { return c_; }

  long double operator()(long double x) const {
    long double b1 = 0.0L, b2 = 0.0L;
    for (std::size_t k = c_.size(); k-- > 1;) {
      const long double b0 = 2.0L * x * b1 - b2 + c_[k];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + (c_.empty() ? 0.0L : c_[0]);
  }

  /// Antiderivative vanishing at x = -1.
  ChebyshevSeries integral() const {
    const std::size_t n = c_.size();
    std::vector<long double> C(n + 1, 0.0L);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == 0) {
        C[1] += c_[0];
      } else if (k == 1) {
        C[2] += c_[1] / 4.0L;
      } else {
        C[k + 1] += c_[k] / (2.0L * static_cast<long double>(k + 1));
        C[k - 1] -= c_[k] / (2.0L * static_cast<long double>(k - 1));
      }
    }
    ChebyshevSeries s(std::move(C));
    s.c_[0] -= s(-1.0L);
    return s;
  }

  /// Interpolant of f at M Chebyshev nodes of the first kind; exact for
  /// polynomials of degree < M.
  template <class F>
  static ChebyshevSeries interpolate(F f, std::size_t M) {
    std::vector<long double> vals(M);
    const long double pi = std::numbers::pi_v<long double>;
    for (std::size_t j = 0; j < M; ++j) {
      vals[j] = f(std::cos(pi * (static_cast<long double>(j) + 0.5L) / static_cast<long double>(M)));
    }
    // cos(pi k (2j+1) / 2M) read from a table over the 4M residues.
    std::vector<long double> table(4 * M);
    for (std::size_t i = 0; i < 4 * M; ++i) table[i] = std::cos(pi * static_cast<long double>(i) / (2.0L * M));
    std::vector<long double> c(M);
    for (std::size_t k = 0; k < M; ++k) {
      long double s = 0.0L;
      std::size_t idx = k % (4 * M);
      const std::size_t step = (2 * k) % (4 * M);
      for (std::size_t j = 0; j < M; ++j) {
        s += vals[j] * table[idx];
        idx += step;
        if (idx >= 4 * M) idx -= 4 * M;
      }
      c[k] = (k == 0 ? 1.0L : 2.0L) * s / static_cast<long double>(M);
    }
    return ChebyshevSeries(std::move(c));
  }

  /// Exact monomial coefficients.
  std::vector<Rational> monomial() const {
    const std::size_t n = c_.size();
    if (n == 0) return {Rational(0)};
    std::vector<BigInt> prev{1}, cur{0, 1};  // T_0, T_1
    std::vector<Rational> out(n, Rational(0));
    auto accumulate = [&](const std::vector<BigInt>& t, long double ck) {
      if (ck == 0.0L) return;
      const Rational r = to_rational(ck);
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] != 0) out[i] += r * Rational(t[i]);
      }
    };
    accumulate(prev, c_[0]);
    if (n > 1) accumulate(cur, c_[1]);
    for (std::size_t k = 2; k < n; ++k) {
      std::vector<BigInt> nxt(k + 1, 0);
      for (std::size_t i = 0; i < cur.size(); ++i) nxt[i + 1] += 2 * cur[i];
      for (std::size_t i = 0; i < prev.size(); ++i) nxt[i] -= prev[i];
      prev = std::move(cur);
      cur = std::move(nxt);
      accumulate(cur, c_[k]);
    }
    return out;
  }

 private:
  std::vector<long double> c_;
};

/// Real univariate polynomial. Either an explicit monomial expansion or the
/// square of a Chebyshev series; the latter is evaluated through the series
/// and so is nonnegative by construction.
class UnivariatePoly {
 public:
  UnivariatePoly() : mono_{Rational(0)}, mono_ld_{0.0L} {}

  static UnivariatePoly monomial(std::vector<Rational> coeffs) {
    UnivariatePoly p;
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    if (coeffs.empty()) coeffs.push_back(Rational(0));
    p.mono_ = std::move(coeffs);
    p.mono_ld_.clear();
    for (const auto& c : p.mono_) p.mono_ld_.push_back(static_cast<long double>(c));
    return p;
  }

  static UnivariatePoly square_of(ChebyshevSeries r) {
    UnivariatePoly p;
    p.mono_.clear();
    p.mono_ld_.clear();
    p.root_ = std::move(r);
    return p;
  }

  /// (1 + lambda x)^2, the quadratic majorant of 1[x >= 0].
  static UnivariatePoly quadratic_step(const Rational& lambda) {
    if (lambda <= 0) throw std::invalid_argument("quadratic_step: lambda must be positive");
    return monomial({Rational(1), 2 * lambda, lambda * lambda});
  }

  std::size_t degree() const {
    if (root_) return 2 * root_->degree();
    return mono_.size() - 1;
  }

  bool is_square() const { return root_.has_value(); }
  const ChebyshevSeries& root() const { return *root_; }

  long double operator()(long double x) const {
    if (root_) {
      const long double r = (*root_)(x);
      return r * r;
    }
    long double s = 0.0L;
    for (std::size_t k = mono_ld_.size(); k-- > 0;) s = s * x + mono_ld_[k];
    return s;
  }

  /// Monomial coefficients; exact. Degree + 1 entries.
  std::vector<Rational> coefficients() const {
    if (!root_) return mono_;
    const auto r = root_->monomial();
    std::vector<Rational> sq(2 * r.size() - 1, Rational(0));
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] == 0) continue;
      for (std::size_t j = 0; j < r.size(); ++j) sq[i + j] += r[i] * r[j];
    }
    return sq;
  }

 private:
  std::vector<Rational> mono_;
  std::vector<long double> mono_ld_;
  std::optional<ChebyshevSeries> root_;
};

/// Calibrated constant in K <= C0 log(2/b) / a.
inline constexpr double kDgjsvC0 = 9.0;

/// R(0) = 1 + kStepMargin keeps P(0) >= 1 robust to rounding.
inline constexpr long double kStepMargin = 1e-12L;

namespace detail {

/// Normalized step root for kernel order N.
inline ChebyshevSeries dgjsv_root(double a, std::size_t N) {
  const long double c = -static_cast<long double>(a) / 2, w = static_cast<long double>(a) / 2;
  const long double far = 1.0L + w;
  const long double beta = 2.0L / (far * far - w * w), alpha = 1.0L + beta * w * w;
  const long double peak = std::cosh(static_cast<long double>(N) * std::acosh(alpha));
  auto kernel = [&](long double s) {
    const long double q = alpha - beta * (s - c) * (s - c);
    long double t;
    if (q > 1.0L) {
      t = std::cosh(static_cast<long double>(N) * std::acosh(q));
    } else if (q < -1.0L) {
      t = std::cosh(static_cast<long double>(N) * std::acosh(-q));
    } else {
      t = std::cos(static_cast<long double>(N) * std::acos(q));
    }
    t /= peak;
    return t * t;
  };
  auto Q = ChebyshevSeries::interpolate(kernel, 4 * N + 1).integral();
  const long double q0 = Q(0.0L);
  auto coeffs = Q.coefficients();
  for (auto& v : coeffs) v *= (1.0L + kStepMargin) / q0;
  return ChebyshevSeries(std::move(coeffs));
}

inline bool dgjsv_root_ok(const ChebyshevSeries& r, double a, double b) {
  const long double lo = r(-static_cast<long double>(a)), hi = r(1.0L);
  return lo * lo <= 0.9L * b && hi * hi <= 1.0L + 0.9L * b;
}

}  // namespace detail

/// Six-property grid audit of a step majorant.
struct DgjsvAudit {
  double a = 0.0;
  double b = 0.0;
  std::size_t K = 0;
  double degree_bound = 0.0;  // C0 log(2/b) / a
  double c0_measured = 0.0;   // K a / log(2/b)
  bool even_degree = false;
  bool props[6] = {false, false, false, false, false, false};
  double worst[6] = {0, 0, 0, 0, 0, 0};  // largest violation per property
  std::size_t grid_points = 0;

  bool ok() const {
    bool all = even_degree && static_cast<double>(K) <= degree_bound;
    for (bool p : props) all = all && p;
    return all;
  }
};

/// Checks the six interval properties on a grid of `per_unit` points per
/// unit length over [-radius, radius], plus the degree bound.
inline DgjsvAudit audit_dgjsv(const UnivariatePoly& P, double a, double b, double tol = 1e-9,
                              std::size_t per_unit = 10000, double radius = 8.0) {
  DgjsvAudit r;
  r.a = a;
  r.b = b;
  r.K = P.degree();
  r.even_degree = r.K % 2 == 0;
  r.degree_bound = kDgjsvC0 * std::log(2.0 / b) / a;
  r.c0_measured = static_cast<double>(r.K) * a / std::log(2.0 / b);
  const auto steps = static_cast<std::int64_t>(std::llround(2.0 * radius * static_cast<double>(per_unit)));
  auto violate = [&](int k, long double amount) {
    if (amount > r.worst[k]) r.worst[k] = static_cast<double>(amount);
  };
  // Interval endpoints are included exactly.
  std::vector<long double> xs;
  xs.reserve(static_cast<std::size_t>(steps) + 8);
  for (std::int64_t i = 0; i <= steps; ++i) {
    xs.push_back(-static_cast<long double>(radius) +
                 static_cast<long double>(i) * 2.0L * radius / static_cast<long double>(steps));
  }
  for (long double e : {-1.0L, -static_cast<long double>(a), 0.0L, 1.0L}) xs.push_back(e);
  const long double A = a, B = b;
  for (long double x : xs) {
    const long double p = P(x);
    if (x <= -1.0L) violate(0, -p);
    if (x >= -1.0L && x <= -A) {
      violate(1, -p);
      violate(1, p - B);
    }
    if (x >= -A && x <= 0.0L) {
      violate(2, -p);
      violate(2, p - 1.0L);
    }
    if (x >= 0.0L && x <= 1.0L) {
      violate(3, 1.0L - p);
      violate(3, p - (1.0L + B));
    }
    if (x >= 1.0L) violate(4, 1.0L - p);
    if (std::abs(x) >= 1.0L) {
      // Compared in log space; P may exceed the long double range far out.
      const long double lp = std::log(std::abs(p)), env = static_cast<long double>(r.K) * std::log(4.0L * std::abs(x));
      if (!std::isfinite(p) || lp > env) violate(5, std::isfinite(p) ? lp - env : 1.0L);
    }
  }
  r.grid_points = xs.size();
  for (int k = 0; k < 6; ++k) r.props[k] = r.worst[k] <= tol;
  return r;
}

/// Even-degree P_{a,b} with P >= 1[x >= 0]; smallest kernel order passing
/// the endpoint checks. Audited before returning; a failed audit throws
/// VerificationError.
inline UnivariatePoly dgjsv_poly(double a, double b, bool audit = true) {
  if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0)) throw std::invalid_argument("dgjsv_poly: need 0 < a, b < 1");
  std::size_t lo = 0, hi = 1;
  while (!detail::dgjsv_root_ok(detail::dgjsv_root(a, hi), a, b)) {
    lo = hi;
    hi *= 2;
    if (hi > (std::size_t{1} << 14)) throw ResourceError("dgjsv_poly: kernel order exceeds 2^14");
  }
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (detail::dgjsv_root_ok(detail::dgjsv_root(a, mid), a, b)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  auto P = UnivariatePoly::square_of(detail::dgjsv_root(a, hi));
  if (audit) {
    const auto rep = audit_dgjsv(P, a, b, 1e-9, 200);
    if (!rep.ok()) {
      throw VerificationError("dgjsv_poly: audit failed for a=" + std::to_string(a) + " b=" + std::to_string(b) +
                              " K=" + std::to_string(rep.K));
    }
  }
  return P;
}

}  // namespace hsprg
