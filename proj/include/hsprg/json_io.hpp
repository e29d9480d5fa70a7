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


// JSON encodings of distributions, halfspace systems, combiners, branching
// programs and univariate polynomials. Rationals are decimal strings, exact
// for dyadic values and "p/q" otherwise.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsprg/dgjsv.hpp"
#include "hsprg/distributions.hpp"
#include "hsprg/halfspace.hpp"
#include "hsprg/robp.hpp"

namespace hsprg {

using Json = nlohmann::json;

inline Json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return Json::parse(f);
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

/// Exact decimal for dyadic rationals, "p/q" otherwise.
inline std::string rational_to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  if ((den & (den - 1)) != 0) return num.str() + "/" + den.str();
  const unsigned k = static_cast<unsigned>(boost::multiprecision::msb(den));
  BigInt scaled = boost::multiprecision::abs(num) * boost::multiprecision::pow(BigInt(5), k);
  std::string digits = scaled.str();
  if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
  digits.insert(digits.size() - k, ".");
  return (num < 0 ? "-" : "") + digits;
}

inline Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational_from_string: empty string");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = rational_from_string(s.substr(0, slash));
    const Rational den = rational_from_string(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational_from_string: zero denominator");
    return num / den;
  }
  const bool neg = s[0] == '-';
  const std::string body = neg || s[0] == '+' ? s.substr(1) : s;
  const auto dot = body.find('.');
  const std::string ip = body.substr(0, dot);
  const std::string fp = dot == std::string::npos ? "" : body.substr(dot + 1);
  std::string all = ip + fp;
  if (all.empty() || all.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("rational_from_string: malformed decimal " + s);
  }
  // A leading 0 would select octal.
  all.erase(0, std::min(all.find_first_not_of('0'), all.size() - 1));
  Rational v(BigInt(all), boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fp.size())));
  return neg ? Rational(-v) : v;
}

/// Exact when r is a dyadic value with at most 64 significant bits.
inline long double rational_to_long_double(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (num == 0) return 0.0L;
  const BigInt a = boost::multiprecision::abs(num);
  if ((den & (den - 1)) == 0 && boost::multiprecision::msb(a) < 64) {
    const long double m = static_cast<long double>(static_cast<std::uint64_t>(a));
    const long double v = std::ldexp(m, -static_cast<int>(boost::multiprecision::msb(den)));
    return num < 0 ? -v : v;
  }
  return static_cast<long double>(r);
}

// Distributions.

inline Json to_json(const CoordinateSpec& c) {
  Json j;
  j["kind"] = to_string(c.kind());
  switch (c.kind()) {
    case CoordKind::kDiscrete:
      j["values"] = c.values();
      j["probs"] = c.probs();
      break;
    case CoordKind::kUniformMultiset: j["values"] = c.values(); break;
    case CoordKind::kUniformInterval: j["half_width"] = c.half_width(); break;
    case CoordKind::kGaussian: break;
  }
  if (c.is_transformed()) {
    j["truncation"] = c.truncation();
    j["shift"] = c.shift();
    j["scale"] = c.scale();
  }
  return j;
}

inline CoordinateSpec coordinate_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  CoordinateSpec c = CoordinateSpec::rademacher();
  if (kind == "rademacher") {
  } else if (kind == "gaussian") {
    c = CoordinateSpec::gaussian();
  } else if (kind == "uniform_interval") {
    c = CoordinateSpec::uniform_interval(j.value("half_width", 1.0));
  } else if (kind == "discrete") {
    c = CoordinateSpec::discrete(j.at("values").get<std::vector<double>>(), j.at("probs").get<std::vector<double>>());
  } else if (kind == "uniform_multiset") {
    c = CoordinateSpec::uniform_multiset(j.at("values").get<std::vector<double>>());
  } else {
    throw std::invalid_argument("unknown coordinate kind: " + kind);
  }
  if (j.contains("truncation")) {
    const double B = j.at("truncation").is_null() ? CoordinateSpec::kInf : j.at("truncation").get<double>();
    c = c.with_transform(B, j.value("shift", 0.0), j.value("scale", 1.0));
  }
  return c;
}

inline Json to_json(const ProductDistribution& d) {
  Json arr = Json::array();
  for (const auto& c : d.coords()) arr.push_back(to_json(c));
  return Json{{"coords", arr}};
}

/// Accepts {"coords": [...]} or {"iid": coord, "n": n}.
inline ProductDistribution distribution_from_json(const Json& j) {
  if (j.contains("iid")) return ProductDistribution::iid(coordinate_from_json(j.at("iid")), j.at("n").get<std::size_t>());
  std::vector<CoordinateSpec> coords;
  for (const auto& c : j.at("coords")) coords.push_back(coordinate_from_json(c));
  return ProductDistribution(std::move(coords));
}

// Halfspace systems and combiners.

inline Json to_json(const HalfspaceSystem& s) {
  Json j;
  j["weights"] = s.raw_weights();
  j["thresholds"] = s.raw_thresholds();
  std::vector<bool> strict(s.d());
  std::vector<double> scale(s.d());
  for (std::size_t i = 0; i < s.d(); ++i) {
    strict[i] = s.strict(i);
    scale[i] = s.scale(i);
  }
  j["strict"] = strict;
  j["scale"] = scale;
  return j;
}

/// "weights" holds n rows of d entries; a flat array is one halfspace.
inline HalfspaceSystem system_from_json(const Json& j) {
  std::vector<std::vector<double>> W;
  for (const auto& row : j.at("weights")) {
    W.push_back(row.is_array() ? row.get<std::vector<double>>() : std::vector<double>{row.get<double>()});
  }
  const auto& th = j.contains("thresholds") ? j.at("thresholds") : j.at("threshold");
  std::vector<double> theta = th.is_array() ? th.get<std::vector<double>>() : std::vector<double>{th.get<double>()};
  std::vector<bool> strict;
  if (j.contains("strict")) {
    const auto& st = j.at("strict");
    strict = st.is_array() ? st.get<std::vector<bool>>() : std::vector<bool>(theta.size(), st.get<bool>());
  }
  HalfspaceSystem s(std::move(W), std::move(theta), std::move(strict));
  if (j.contains("scale")) {
    const auto sc = j.at("scale").get<std::vector<double>>();
    if (sc.size() != s.d()) throw std::invalid_argument("system_from_json: scale size mismatch");
    for (std::size_t i = 0; i < sc.size(); ++i) s.set_scale(i, sc[i]);
  }
  return s;
}

inline Json to_json(const CombinerSpec& g) {
  Json j;
  j["kind"] = to_string(g.kind());
  j["d"] = g.d();
  if (g.kind() == CombinerKind::kTruthTable) {
    j["table"] = g.table();
    j["monotone"] = g.declared_monotone();
  }
  if (g.kind() == CombinerKind::kTree) {
    Json nodes = Json::array();
    for (const auto& v : g.nodes()) {
      if (v.is_leaf()) {
        nodes.push_back(Json{{"leaf", v.value}});
      } else {
        nodes.push_back(Json{{"query", v.query}, {"if0", v.child[0]}, {"if1", v.child[1]}});
      }
    }
    j["nodes"] = nodes;
  }
  return j;
}

inline CombinerSpec combiner_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "single") return CombinerSpec::single();
  if (kind == "intersection") return CombinerSpec::intersection(j.at("d").get<std::size_t>());
  if (kind == "truth_table") {
    return CombinerSpec::truth_table(j.at("d").get<std::size_t>(), j.at("table").get<std::vector<std::uint8_t>>(),
                                     j.value("monotone", true));
  }
  if (kind == "tree") {
    std::vector<TreeNode> nodes;
    for (const auto& v : j.at("nodes")) {
      nodes.push_back(v.contains("leaf") ? TreeNode::leaf(v.at("leaf").get<int>())
                                         : TreeNode::internal(v.at("query").get<int>(), v.at("if0").get<int>(),
                                                              v.at("if1").get<int>()));
    }
    return CombinerSpec::tree(j.at("d").get<std::size_t>(), std::move(nodes));
  }
  throw std::invalid_argument("unknown combiner kind: " + kind);
}

// Branching programs.

inline Json to_json(const ROBP& b) {
  Json j;
  j["D"] = b.D();
  j["widths"] = b.widths();
  j["transitions"] = b.transitions();
  j["accept"] = b.accept_bits();
  j["start"] = b.start();
  return j;
}

inline ROBP robp_from_json(const Json& j) {
  return ROBP(j.at("D").get<unsigned>(), j.at("widths").get<std::vector<std::uint32_t>>(),
              j.at("transitions").get<std::vector<std::vector<std::uint32_t>>>(),
              j.at("accept").get<std::vector<std::uint8_t>>(), j.value("start", 0u));
}

// Univariate polynomials.

/// Monomial coefficients, constant term first; squares of Chebyshev series
/// also carry the root's Chebyshev coefficients so evaluation reproduces.
inline Json to_json(const UnivariatePoly& p) {
  Json j;
  j["degree"] = p.degree();
  Json coeffs = Json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(rational_to_string(c));
  j["coefficients"] = coeffs;
  if (p.is_square()) {
    Json root = Json::array();
    for (long double c : p.root().coefficients()) root.push_back(rational_to_string(to_rational(c)));
    j["chebyshev_root"] = root;
  }
  return j;
}

inline UnivariatePoly poly_from_json(const Json& j) {
  if (j.contains("chebyshev_root")) {
    std::vector<long double> root;
    for (const auto& c : j.at("chebyshev_root")) root.push_back(rational_to_long_double(rational_from_string(c.get<std::string>())));
    return UnivariatePoly::square_of(ChebyshevSeries(std::move(root)));
  }
  std::vector<Rational> coeffs;
  for (const auto& c : j.at("coefficients")) {
    coeffs.push_back(c.is_string() ? rational_from_string(c.get<std::string>()) : to_rational(c.get<double>()));
  }
  return UnivariatePoly::monomial(std::move(coeffs));
}

}  // namespace hsprg
