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

// Sandwiching polynomials for halfspaces and their combinations.
//
// For h = 1[w.x >= theta] split the coordinates into a head H and a tail,
// theta' = theta - sum_H w_j x_j and z = sum_tail w_j x_j. Given the head,
// the upper polynomial is
//   BAD  (tail irregular, |theta'| <= t ||z||_2): 1
//   NEAR (tail regular,   |theta'| <= t ||z||_2): P((z - theta') / (2 t ||z||_2))
//   FAR  (|theta'| > t ||z||_2): 1 if theta' < 0, (z / theta')^q if theta' > 0
// with P >= 1[x >= 0] and q even, so it dominates h at every point.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsprg/common.hpp"
#include "hsprg/dgjsv.hpp"
#include "hsprg/distributions.hpp"
#include "hsprg/halfspace.hpp"
#include "hsprg/mz_generator.hpp"
#include "hsprg/regularity.hpp"

namespace hsprg {

enum class TailEvent { kBad, kNear, kFar };

inline const char* to_string(TailEvent e) {
  switch (e) {
    case TailEvent::kBad: return "BAD";
    case TailEvent::kNear: return "NEAR";
    case TailEvent::kFar: return "FAR";
  }
  return "?";
}

/// Head/tail split of one halfspace. The events depend on theta' only.
struct RegularityPartition {
  std::vector<std::size_t> head;
  std::vector<std::size_t> tail;
  double t_scale = 4.0;
  long double tail_norm = 0.0L;  // ||z||_2 = sqrt(E z^2)
  bool tail_regular = false;

  TailEvent classify(long double theta_prime) const {
    if (std::abs(theta_prime) > static_cast<long double>(t_scale) * tail_norm) return TailEvent::kFar;
    return tail_regular ? TailEvent::kNear : TailEvent::kBad;
  }
};

/// Head = the critical-index prefix of the terms sorted by ||w_j x_j||_2,
/// capped at head_cap, unless given explicitly. An empty tail is never
/// regular.
inline RegularityPartition make_partition(std::span<const double> w, const ProductDistribution& dist, double delta,
                                          double t, std::size_t head_cap = 64,
                                          const std::optional<std::vector<std::size_t>>& head = std::nullopt) {
  const std::size_t n = w.size();
  if (dist.n() != n) throw std::invalid_argument("make_partition: weights/distribution size mismatch");
  if (!(t > 0.0)) throw std::invalid_argument("make_partition: t must be positive");
  std::vector<MomentProfile> profiles;
  for (const auto& c : dist.coords()) profiles.push_back(moment_profile(c));
  const auto norms = TermNorms::from_weights(w, profiles);
  RegularityPartition part;
  part.t_scale = t;
  std::vector<bool> in_head(n, false);
  if (head) {
    for (auto j : *head) {
      if (j >= n || in_head[j]) throw std::invalid_argument("make_partition: bad head index");
      in_head[j] = true;
    }
  } else {
    const auto ci = critical_index(norms, delta);
    const std::size_t L = std::min(ci.index.value_or(n), std::min(head_cap, n));
    for (std::size_t k = 0; k < L; ++k) in_head[ci.permutation[k]] = true;
  }
  for (std::size_t j = 0; j < n; ++j) (in_head[j] ? part.head : part.tail).push_back(j);
  long double var = 0.0L, mean = 0.0L;
  for (auto j : part.tail) {
    const long double wj = w[j];
    const long double mu = profiles[j].mean;
    var += wj * wj * (static_cast<long double>(profiles[j].second_moment) - mu * mu);
    mean += wj * mu;
  }
  part.tail_norm = std::sqrt(std::max(0.0L, var + mean * mean));
  part.tail_regular = !part.tail.empty() && part.tail_norm > 0.0L && is_delta_regular(norms, part.tail, delta);
  return part;
}

/// Parameters of the NEAR and FAR branch polynomials.
struct UpperPolyParams {
  double delta = 0.1;
  double t = 4.0;
  double T = 0.0;  // even hypercontractivity exponent
  std::size_t d = 1;
  double C0 = kDgjsvC0;
  std::size_t head_cap = 64;
  std::optional<std::vector<std::size_t>> head;
  std::optional<UnivariatePoly> P;  // replaces P_{a,b}
  std::optional<unsigned> q;        // replaces even-floor(T / 2d)
};

struct BranchPolys {
  double a = 0.0;  // 0 when P was supplied
  double b = 0.0;
  UnivariatePoly P;
  unsigned q = 0;
  double eps1 = 0.0;  // d t log(dt) / T, 0 without T
};

/// a = 16 C0 d log(td) / T, b = min(1/d^2, 1/t^4), q = T/2d rounded down to
/// an even integer.
inline BranchPolys branch_polys(const UpperPolyParams& prm) {
  BranchPolys out;
  const double d = static_cast<double>(prm.d);
  if (prm.d == 0) throw std::invalid_argument("branch_polys: d must be positive");
  if (prm.T > 0.0) out.eps1 = d * prm.t * std::log(d * prm.t) / prm.T;
  if (prm.P) {
    out.P = *prm.P;
  } else {
    if (!(prm.T > 0.0)) throw std::invalid_argument("branch_polys: T is required to build P");
    out.a = 16.0 * prm.C0 * d * std::log(prm.t * d) / prm.T;
    if (!(out.a < 1.0)) {
      throw std::invalid_argument("branch_polys: a = " + std::to_string(out.a) + " >= 1, T is too small for d and t");
    }
    out.b = std::min(1.0 / (d * d), 1.0 / std::pow(prm.t, 4));
    out.P = dgjsv_poly(out.a, out.b);
  }
  if (prm.q) {
    if (*prm.q % 2 != 0) throw std::invalid_argument("branch_polys: q must be even");
    out.q = *prm.q;
  } else {
    if (!(prm.T > 0.0)) throw std::invalid_argument("branch_polys: T is required to choose q");
    const auto half = static_cast<unsigned>(std::floor(prm.T / (2.0 * d)));
    out.q = half - half % 2;
  }
  return out;
}

/// Upper polynomial of one halfspace 1[w.x >= theta] (or > when strict).
class HalfspaceUpper {
 public:
  HalfspaceUpper(std::vector<double> w, double theta, bool strict, RegularityPartition part, UnivariatePoly P,
                 unsigned q)
      : w_(std::move(w)), theta_(theta), strict_(strict), part_(std::move(part)), P_(std::move(P)), q_(q) {
    if (q_ % 2 != 0) throw std::invalid_argument("HalfspaceUpper: q must be even");
  }

  std::size_t n() const { return w_.size(); }
  const std::vector<double>& weights() const { return w_; }
  double theta() const { return theta_; }
  bool strict() const { return strict_; }
  const RegularityPartition& partition() const { return part_; }
  const UnivariatePoly& near_poly() const { return P_; }
  unsigned far_exponent() const { return q_; }

  /// |H| plus the largest number of tail variables in one monomial.
  std::size_t order() const {
    return part_.head.size() + std::min<std::size_t>(std::max<std::size_t>(P_.degree(), q_), part_.tail.size());
  }

  long double theta_prime(std::span<const double> x) const {
    long double s = theta_;
    for (auto j : part_.head) s -= static_cast<long double>(w_[j]) * x[j];
    return s;
  }

  TailEvent event(std::span<const double> x) const { return part_.classify(theta_prime(x)); }

  bool indicator(std::span<const double> x) const {
    const Rational v = exact_margin(x);
    return strict_ ? v > 0 : v >= 0;
  }

  long double operator()(std::span<const double> x) const {
    check(x);
    const long double tp = theta_prime(x);
    switch (part_.classify(tp)) {
      case TailEvent::kBad: return 1.0L;
      case TailEvent::kNear: return P_(margin(x) / (2.0L * static_cast<long double>(part_.t_scale) * part_.tail_norm));
      case TailEvent::kFar: {
        if (tp < 0.0L) return 1.0L;
        // z / theta' = 1 + (z - theta') / theta' keeps the ratio >= 1 when z >= theta'.
        const long double ratio = 1.0L + margin(x) / tp;
        long double r = 1.0L;
        for (unsigned k = 0; k < q_; ++k) r *= ratio;
        return r;
      }
    }
    return 1.0L;
  }

 private:
  void check(std::span<const double> x) const {
    if (x.size() != n()) throw std::invalid_argument("HalfspaceUpper: point has wrong dimension");
  }

  Rational exact_margin(std::span<const double> x) const {
    check(x);
    Rational s = -Rational(theta_);
    for (std::size_t j = 0; j < n(); ++j) s += Rational(w_[j]) * Rational(x[j]);
    return s;
  }

  /// w.x - theta with the exact sign; long double magnitude unless small.
  long double margin(std::span<const double> x) const {
    long double s = -static_cast<long double>(theta_), scale = std::abs(static_cast<long double>(theta_));
    for (std::size_t j = 0; j < n(); ++j) {
      const long double v = static_cast<long double>(w_[j]) * x[j];
      s += v;
      scale += std::abs(v);
    }
    if (std::abs(s) > 1e-12L * scale) return s;
    return static_cast<long double>(exact_margin(x));
  }

  std::vector<double> w_;
  double theta_;
  bool strict_;
  RegularityPartition part_;
  UnivariatePoly P_;
  unsigned q_;
};

/// Upper polynomial of halfspace i of sys.
inline HalfspaceUpper build_upper_poly(const HalfspaceSystem& sys, std::size_t i, const ProductDistribution& dist,
                                       const UpperPolyParams& prm) {
  std::vector<double> w(sys.n());
  for (std::size_t j = 0; j < sys.n(); ++j) w[j] = sys.raw_weights()[j].at(i);
  auto part = make_partition(w, dist, prm.delta, prm.t, prm.head_cap, prm.head);
  auto bp = branch_polys(prm);
  return HalfspaceUpper(w, sys.raw_thresholds().at(i), sys.strict(i), std::move(part), std::move(bp.P), bp.q);
}

/// Sums and products of halfspace upper polynomials, constants and 1 - p.
class GeneralizedPolynomial {
 public:
  enum class Kind { kConstant, kLeaf, kSum, kProduct, kOneMinus };

  GeneralizedPolynomial() : GeneralizedPolynomial(constant(0.0L, 0)) {}

  static GeneralizedPolynomial constant(long double c, std::size_t n) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::kConstant;
    node->c = c;
    node->n = n;
    return GeneralizedPolynomial(std::move(node));
  }

  static GeneralizedPolynomial leaf(HalfspaceUpper u) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::kLeaf;
    node->n = u.n();
    node->leaf = std::make_shared<const HalfspaceUpper>(std::move(u));
    return GeneralizedPolynomial(std::move(node));
  }

  static GeneralizedPolynomial sum(std::vector<GeneralizedPolynomial> terms, std::size_t n) {
    return combine(Kind::kSum, std::move(terms), n);
  }

  static GeneralizedPolynomial product(std::vector<GeneralizedPolynomial> factors, std::size_t n) {
    return combine(Kind::kProduct, std::move(factors), n);
  }

  static GeneralizedPolynomial one_minus(GeneralizedPolynomial p) {
    const std::size_t n = p.n();
    return combine(Kind::kOneMinus, {std::move(p)}, n);
  }

  Kind kind() const { return node_->kind; }
  std::size_t n() const { return node_->n; }
  const std::vector<GeneralizedPolynomial>& children() const { return node_->kids; }
  const HalfspaceUpper& halfspace_upper() const { return *node_->leaf; }

  long double operator()(std::span<const double> x) const {
    switch (node_->kind) {
      case Kind::kConstant: return node_->c;
      case Kind::kLeaf: return (*node_->leaf)(x);
      case Kind::kSum: {
        long double s = 0.0L;
        for (const auto& k : node_->kids) s += k(x);
        return s;
      }
      case Kind::kProduct: {
        long double s = 1.0L;
        for (const auto& k : node_->kids) s *= k(x);
        return s;
      }
      case Kind::kOneMinus: return 1.0L - node_->kids[0](x);
    }
    return 0.0L;
  }

  /// Largest number of variables one summand depends on.
  std::size_t order() const {
    switch (node_->kind) {
      case Kind::kConstant: return 0;
      case Kind::kLeaf: return node_->leaf->order();
      case Kind::kSum:
      case Kind::kOneMinus: {
        std::size_t k = 0;
        for (const auto& c : node_->kids) k = std::max(k, c.order());
        return k;
      }
      case Kind::kProduct: {
        std::size_t k = 0;
        for (const auto& c : node_->kids) k += c.order();
        return std::min(k, node_->n);
      }
    }
    return 0;
  }

 private:
  struct Node {
    Kind kind = Kind::kConstant;
    long double c = 0.0L;
    std::size_t n = 0;
    std::shared_ptr<const HalfspaceUpper> leaf;
    std::vector<GeneralizedPolynomial> kids;
  };

  explicit GeneralizedPolynomial(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static GeneralizedPolynomial combine(Kind kind, std::vector<GeneralizedPolynomial> kids, std::size_t n) {
    for (const auto& k : kids) {
      if (k.n() != n && k.kind() != Kind::kConstant) {
        throw std::invalid_argument("GeneralizedPolynomial: operands over different dimensions");
      }
    }
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->n = n;
    node->kids = std::move(kids);
    return GeneralizedPolynomial(std::move(node));
  }

  std::shared_ptr<const Node> node_;
};

/// p_l = 1 - p_u, where p_u is an upper polynomial for the negation.
inline GeneralizedPolynomial lower_from_upper(const GeneralizedPolynomial& p_u_of_negation) {
  return GeneralizedPolynomial::one_minus(p_u_of_negation);
}

/// The combiner as an explicit decision tree over its halfspaces.
inline CombinerSpec as_decision_tree(const CombinerSpec& g) {
  switch (g.kind()) {
    case CombinerKind::kTree: return g;
    case CombinerKind::kSingle:
      return CombinerSpec::tree(1, {TreeNode::internal(0, 1, 2), TreeNode::leaf(0), TreeNode::leaf(1)});
    case CombinerKind::kIntersection: {
      // Node 2i asks halfspace i; node 2i+1 is its 0-leaf; node 2d is the 1-leaf.
      std::vector<TreeNode> nodes;
      const int d = static_cast<int>(g.d());
      for (int i = 0; i < d; ++i) {
        nodes.push_back(TreeNode::internal(i, 2 * i + 1, 2 * i + 2));
        nodes.push_back(TreeNode::leaf(0));
      }
      nodes.push_back(TreeNode::leaf(1));
      return CombinerSpec::tree(g.d(), std::move(nodes));
    }
    case CombinerKind::kTruthTable: {
      // Complete tree: internal nodes in heap order ask halfspace = depth.
      const std::size_t d = g.d();
      const std::size_t internal = (std::size_t{1} << d) - 1;
      std::vector<TreeNode> nodes;
      for (std::size_t v = 0; v < internal; ++v) {
        const int depth = static_cast<int>(std::bit_width(v + 1)) - 1;
        nodes.push_back(TreeNode::internal(depth, static_cast<int>(2 * v + 1), static_cast<int>(2 * v + 2)));
      }
      for (std::size_t leaf = 0; leaf < (std::size_t{1} << d); ++leaf) {
        // Heap leaf index encodes the answers MSB-first by depth.
        std::uint64_t s = 0;
        for (std::size_t k = 0; k < d; ++k) s |= ((leaf >> (d - 1 - k)) & 1u) << k;
        nodes.push_back(TreeNode::leaf(g.apply(s) ? 1 : 0));
      }
      return CombinerSpec::tree(d, std::move(nodes));
    }
  }
  throw std::logic_error("as_decision_tree: unknown combiner");
}

/// Same tree with every leaf flipped.
inline CombinerSpec complement_tree(const CombinerSpec& tree) {
  const auto t = as_decision_tree(tree);
  auto nodes = t.nodes();
  for (auto& nd : nodes) {
    if (nd.is_leaf()) nd.value = 1 - nd.value;
  }
  return CombinerSpec::tree(t.d(), std::move(nodes));
}

using AndTerm = std::vector<Literal>;

/// One AND of literals per 1-leaf; the indicators sum to the tree's value.
inline std::vector<AndTerm> tree_to_and_sum(const CombinerSpec& g) { return as_decision_tree(g).accepting_paths(); }

/// Upper polynomial of the literal: halfspace i or its negation.
inline HalfspaceUpper literal_upper(const HalfspaceSystem& sys, const Literal& lit, const ProductDistribution& dist,
                                    const UpperPolyParams& prm) {
  return lit.value ? build_upper_poly(sys, lit.halfspace, dist, prm)
                   : build_upper_poly(sys.negated(lit.halfspace), lit.halfspace, dist, prm);
}

/// Sum over AND terms of the product of literal upper polynomials.
inline GeneralizedPolynomial upper_from_terms(const HalfspaceSystem& sys, const std::vector<AndTerm>& terms,
                                              const ProductDistribution& dist, const UpperPolyParams& prm) {
  std::vector<GeneralizedPolynomial> sum;
  for (const auto& term : terms) {
    std::vector<GeneralizedPolynomial> prod;
    for (const auto& lit : term) prod.push_back(GeneralizedPolynomial::leaf(literal_upper(sys, lit, dist, prm)));
    sum.push_back(GeneralizedPolynomial::product(std::move(prod), sys.n()));
  }
  return GeneralizedPolynomial::sum(std::move(sum), sys.n());
}

struct SandwichPolynomials {
  GeneralizedPolynomial upper;
  GeneralizedPolynomial lower;
  std::size_t upper_terms = 0;
  std::size_t lower_terms = 0;

  std::size_t order() const { return std::max(upper.order(), lower.order()); }
};

/// Upper from the 1-leaf paths of g, lower as 1 minus the upper polynomial
/// of the 0-leaf paths.
inline SandwichPolynomials build_sandwich(const HalfspaceSystem& sys, const CombinerSpec& g,
                                          const ProductDistribution& dist, const UpperPolyParams& prm) {
  check_compatible(sys, g);
  const auto tree = as_decision_tree(g);
  const auto ones = tree_to_and_sum(tree);
  const auto zeros = tree_to_and_sum(complement_tree(tree));
  SandwichPolynomials s;
  s.upper = upper_from_terms(sys, ones, dist, prm);
  s.lower = lower_from_upper(upper_from_terms(sys, zeros, dist, prm));
  s.upper_terms = ones.size();
  s.lower_terms = zeros.size();
  return s;
}

/// Pointwise and expectation audit of one sandwich, by enumeration.
struct SandwichReport {
  bool pointwise_ok = true;        // p_l <= f <= p_u everywhere
  long double upper_gap = 0.0L;    // E[p_u - f]
  long double lower_gap = 0.0L;    // E[f - p_l]
  std::size_t order = 0;
  std::uint64_t points = 0;
  std::uint64_t violations = 0;

  long double gap() const { return std::max(upper_gap, lower_gap); }
};

inline SandwichReport audit_sandwich(const std::function<bool(std::span<const double>)>& f,
                                     const SandwichPolynomials& s, const ProductDistribution& dist,
                                     std::uint64_t cap = kDefaultEnumerationCap) {
  SandwichReport r;
  r.order = s.order();
  for_each_point(
      dist,
      [&](const std::vector<double>& x, double p) {
        const long double fx = f(x) ? 1.0L : 0.0L, up = s.upper(x), lo = s.lower(x);
        if (!(up >= fx) || !(lo <= fx)) {
          r.pointwise_ok = false;
          ++r.violations;
        }
        r.upper_gap += p * (up - fx);
        r.lower_gap += p * (fx - lo);
        ++r.points;
      },
      cap);
  return r;
}

/// Certified conditions of one factor for the hybrid bound.
struct FactorCertificate {
  bool pointwise_ok = true;       // p_i >= h_i
  long double gap = 0.0L;         // E[p_i - h_i]
  long double overshoot = 0.0L;   // Pr[p_i > 1 + 1/d^2]
  long double norm_2d = 0.0L;     // (E p_i^{2d})^{1/2d}
  bool norm_ok = false;           // norm_2d <= 1 + 2/d^2
};

struct HybridReport {
  GeneralizedPolynomial product;
  std::vector<FactorCertificate> factors;
  long double eps0 = 0.0L;
  long double gamma = 0.0L;
  long double bound = 0.0L;         // 2 d eps0 + 3 d^2 sqrt(gamma)
  long double measured_gap = 0.0L;  // E[prod p_i - prod h_i]
  bool pointwise_ok = true;         // prod p_i >= prod h_i
  bool certified = false;
  std::size_t order = 0;
};

struct HybridOptions {
  std::optional<long double> eps0;   // defaults to the largest measured gap
  std::optional<long double> gamma;  // defaults to the largest measured overshoot
  bool throw_on_failure = true;
  std::uint64_t cap = kDefaultEnumerationCap;
};

/// p = prod p_i for h = prod h_i, with h_i halfspace i of sys. All four
/// factor conditions and the bound are computed by exhaustive enumeration.
inline HybridReport hybrid_product(std::span<const GeneralizedPolynomial> ps, const HalfspaceSystem& sys,
                                   const ProductDistribution& dist, const HybridOptions& opt = {}) {
  const std::size_t d = ps.size();
  if (d == 0 || d != sys.d()) throw std::invalid_argument("hybrid_product: need one polynomial per halfspace");
  if (dist.n() != sys.n()) throw std::invalid_argument("hybrid_product: dimension mismatch");
  const long double dd = static_cast<long double>(d);
  const long double over = 1.0L + 1.0L / (dd * dd);
  HybridReport r;
  r.product = GeneralizedPolynomial::product(std::vector<GeneralizedPolynomial>(ps.begin(), ps.end()), sys.n());
  r.order = r.product.order();
  r.factors.assign(d, FactorCertificate{});
  std::vector<long double> moment(d, 0.0L);
  std::vector<long double> pv(d);
  for_each_point(
      dist,
      [&](const std::vector<double>& x, double prob) {
        long double prod_p = 1.0L;
        bool prod_h = true;
        for (std::size_t i = 0; i < d; ++i) {
          pv[i] = ps[i](x);
          const bool h = sys.sign_exact(i, x);
          auto& fc = r.factors[i];
          if (!(pv[i] >= (h ? 1.0L : 0.0L))) fc.pointwise_ok = false;
          fc.gap += prob * (pv[i] - (h ? 1.0L : 0.0L));
          if (pv[i] > over) fc.overshoot += prob;
          moment[i] += prob * std::pow(pv[i], 2.0L * dd);
          prod_p *= pv[i];
          prod_h = prod_h && h;
        }
        const long double hv = prod_h ? 1.0L : 0.0L;
        if (!(prod_p >= hv)) r.pointwise_ok = false;
        r.measured_gap += prob * (prod_p - hv);
      },
      opt.cap);
  long double eps0 = 0.0L, gamma = 0.0L;
  for (std::size_t i = 0; i < d; ++i) {
    auto& fc = r.factors[i];
    fc.norm_2d = std::pow(std::max(0.0L, moment[i]), 1.0L / (2.0L * dd));
    fc.norm_ok = fc.norm_2d <= 1.0L + 2.0L / (dd * dd);
    eps0 = std::max(eps0, fc.gap);
    gamma = std::max(gamma, fc.overshoot);
  }
  r.eps0 = opt.eps0.value_or(eps0);
  r.gamma = opt.gamma.value_or(gamma);
  r.bound = 2.0L * dd * r.eps0 + 3.0L * dd * dd * std::sqrt(r.gamma);
  r.certified = true;
  for (const auto& fc : r.factors) {
    r.certified = r.certified && fc.pointwise_ok && fc.norm_ok && fc.gap <= r.eps0 && fc.overshoot <= r.gamma;
  }
  if (!r.certified && opt.throw_on_failure) {
    throw VerificationError("hybrid_product: a factor fails the certification conditions");
  }
  return r;
}

/// Uniform distribution over an explicit list of points, with its
/// independence order.
struct KWiseSpace {
  std::vector<std::vector<double>> points;
  unsigned k = 0;
};

/// All outputs of the k-wise generator (one bucket) over the coordinate
/// alphabets of dist; every coordinate must be uniform over a multiset of
/// power-of-2 size.
inline KWiseSpace kwise_space(const ProductDistribution& dist, unsigned k, std::uint64_t cap = kDefaultEnumerationCap) {
  const auto alphabets = uniform_alphabets(dist);
  MZGenerator gen(alphabets, 1, k);
  if (gen.seed_bits() >= 63 || (std::uint64_t{1} << gen.seed_bits()) > cap) {
    throw ResourceError("kwise_space: seed space exceeds the cap");
  }
  KWiseSpace y;
  y.k = k;
  const std::uint64_t seeds = std::uint64_t{1} << gen.seed_bits();
  y.points.reserve(seeds);
  for (std::uint64_t s = 0; s < seeds; ++s) y.points.push_back(gen.generate(BitString::from_uint(s, gen.seed_bits())));
  return y;
}

/// Full independence as a point list: every point of the product space,
/// repeated by multiplicity over a common dyadic grid.
inline KWiseSpace full_space(const ProductDistribution& dist, std::uint64_t cap = kDefaultEnumerationCap) {
  KWiseSpace y;
  y.k = static_cast<unsigned>(dist.n());
  double min_p = 1.0;
  for_each_point(dist, [&](const std::vector<double>&, double p) { min_p = std::min(min_p, p); }, cap);
  for_each_point(
      dist,
      [&](const std::vector<double>& x, double p) {
        const double m = p / min_p;
        if (m != std::floor(m)) throw std::invalid_argument("full_space: probabilities are not multiples");
        for (double i = 0; i < m; ++i) y.points.push_back(x);
      },
      cap);
  return y;
}

struct FoolingCheck {
  Rational ef_x = 0;  // E f(X), exact for dyadic probabilities
  Rational ef_y = 0;  // E f(Y), exact
  long double fooling_gap = 0.0L;     // |E f(X) - E f(Y)|
  long double upper_gap = 0.0L;       // E[p_u(X) - f(X)]
  long double lower_gap = 0.0L;       // E[f(X) - p_l(X)]
  long double sandwich_gap = 0.0L;    // max of the two
  long double moment_mismatch = 0.0L; // max |E p(X) - E p(Y)| over p_u, p_l
  std::size_t order = 0;
  unsigned k = 0;
  bool pointwise_ok = true;
  bool holds = false;  // fooling_gap <= sandwich_gap
};

/// Checks |E f(X) - E f(Y)| <= max(E[p_u - f], E[f - p_l]) for a k-wise
/// space Y whose order is at least the polynomials' order.
inline FoolingCheck kwise_fooling_check(const std::function<bool(std::span<const double>)>& f,
                                        const GeneralizedPolynomial& p_l, const GeneralizedPolynomial& p_u,
                                        const ProductDistribution& X, const KWiseSpace& Y,
                                        std::uint64_t cap = kDefaultEnumerationCap) {
  FoolingCheck c;
  c.order = std::max(p_l.order(), p_u.order());
  c.k = Y.k;
  if (c.order > Y.k) {
    throw std::invalid_argument("kwise_fooling_check: polynomial order " + std::to_string(c.order) +
                                " exceeds the independence " + std::to_string(Y.k));
  }
  if (Y.points.empty()) throw std::invalid_argument("kwise_fooling_check: empty space");
  long double eu_x = 0.0L, el_x = 0.0L, eu_y = 0.0L, el_y = 0.0L;
  for_each_point(
      X,
      [&](const std::vector<double>& x, double p) {
        const bool fx = f(x);
        const long double u = p_u(x), l = p_l(x), fv = fx ? 1.0L : 0.0L;
        if (!(u >= fv) || !(l <= fv)) c.pointwise_ok = false;
        if (fx) c.ef_x += Rational(p);
        c.upper_gap += p * (u - fv);
        c.lower_gap += p * (fv - l);
        eu_x += p * u;
        el_x += p * l;
      },
      cap);
  std::uint64_t hits = 0;
  for (const auto& y : Y.points) {
    hits += f(y);
    eu_y += p_u(y);
    el_y += p_l(y);
  }
  const auto m = static_cast<long double>(Y.points.size());
  eu_y /= m;
  el_y /= m;
  c.ef_y = Rational(hits) / Rational(Y.points.size());
  c.fooling_gap = static_cast<long double>(abs(c.ef_x - c.ef_y));
  c.sandwich_gap = std::max(c.upper_gap, c.lower_gap);
  c.moment_mismatch = std::max(std::abs(eu_x - eu_y), std::abs(el_x - el_y));
  // The gaps are long double sums; allow their rounding only.
  c.holds = c.fooling_gap <= c.sandwich_gap + 1e-12L;
  return c;
}

/// eps0 budget sqrt(delta) + eps1 with unit constants.
inline double eps0_budget(double delta, double eps1) { return std::sqrt(delta) + eps1; }

}  // namespace hsprg
