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

// Systems of halfspaces sgn(W x - Theta) and the combiners applied to
// their sign vectors.
//
// sgn(v) = 1 iff v >= 0. A strict dimension uses v > 0 instead, which makes
// the negation of a halfspace exact on discrete supports.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsprg/distributions.hpp"

namespace hsprg {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kMaxHalfspaces = 64;

class HalfspaceSystem {
 public:
  HalfspaceSystem() = default;

  /// W has n rows of d weights; coordinate j contributes x_j W[j][i] to
  /// dimension i.
  HalfspaceSystem(std::vector<std::vector<double>> W, std::vector<double> theta,
                  std::vector<bool> strict = {})
      : W_(std::move(W)), theta_(std::move(theta)), strict_(std::move(strict)) {
    if (strict_.empty()) strict_.assign(theta_.size(), false);
    scale_.assign(theta_.size(), 1.0);
    validate();
  }

  static HalfspaceSystem single(const std::vector<double>& w, double theta, bool strict = false) {
    std::vector<std::vector<double>> W;
    for (double x : w) W.push_back({x});
    return HalfspaceSystem(std::move(W), {theta}, {strict});
  }

  /// Stacks single-dimension systems over the same n coordinates.
  static HalfspaceSystem stack(std::span<const HalfspaceSystem> parts) {
    if (parts.empty()) throw std::invalid_argument("HalfspaceSystem::stack: no parts");
    const std::size_t n = parts[0].n();
    HalfspaceSystem s;
    s.W_.assign(n, {});
    for (const auto& p : parts) {
      if (p.n() != n) throw std::invalid_argument("HalfspaceSystem::stack: coordinate count mismatch");
      for (std::size_t i = 0; i < p.d(); ++i) {
        for (std::size_t j = 0; j < n; ++j) s.W_[j].push_back(p.W_[j][i]);
        s.theta_.push_back(p.theta_[i]);
        s.strict_.push_back(p.strict_[i]);
        s.scale_.push_back(p.scale_[i]);
      }
    }
    s.validate();
    return s;
  }

  std::size_t n() const { return W_.size(); }
  std::size_t d() const { return theta_.size(); }

  /// Weights and thresholds after any normalization.
  double weight(std::size_t j, std::size_t i) const { return W_.at(j).at(i) * scale_.at(i); }
  double threshold(std::size_t i) const { return theta_.at(i) * scale_.at(i); }
  double scale(std::size_t i) const { return scale_.at(i); }
  bool strict(std::size_t i) const { return strict_.at(i); }
  std::vector<double> column(std::size_t i) const {
    std::vector<double> c(n());
    for (std::size_t j = 0; j < n(); ++j) c[j] = weight(j, i);
    return c;
  }

  /// Unscaled representation; signs are evaluated on these.
  const std::vector<std::vector<double>>& raw_weights() const { return W_; }
  const std::vector<double>& raw_thresholds() const { return theta_; }

  bool sign(std::size_t i, std::span<const double> x) const {
    check_point(x);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n(); ++j) acc += static_cast<long double>(W_[j][i]) * x[j];
    const long double v = acc - theta_[i];
    return strict_[i] ? v > 0 : v >= 0;
  }

  /// Sign computed in exact rational arithmetic.
  bool sign_exact(std::size_t i, std::span<const double> x) const {
    check_point(x);
    Rational acc = 0;
    for (std::size_t j = 0; j < n(); ++j) acc += Rational(W_[j][i]) * Rational(x[j]);
    acc -= Rational(theta_[i]);
    return strict_[i] ? acc > 0 : acc >= 0;
  }

  /// Bit i holds sgn of dimension i.
  std::uint64_t sign_vector(std::span<const double> x) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < d(); ++i) s |= std::uint64_t{sign(i, x)} << i;
    return s;
  }

  std::uint64_t sign_vector_exact(std::span<const double> x) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < d(); ++i) s |= std::uint64_t{sign_exact(i, x)} << i;
    return s;
  }

  /// Dimension i as a one-dimensional system.
  HalfspaceSystem halfspace(std::size_t i) const {
    HalfspaceSystem s;
    for (const auto& row : W_) s.W_.push_back({row.at(i)});
    s.theta_ = {theta_.at(i)};
    s.strict_ = {strict_.at(i)};
    s.scale_ = {scale_.at(i)};
    return s;
  }

  /// Complement of dimension i: not[w.x >= t] = [(-w).x > -t].
  HalfspaceSystem negated(std::size_t i) const {
    HalfspaceSystem s = *this;
    for (auto& row : s.W_) row.at(i) = -row.at(i);
    s.theta_.at(i) = -s.theta_.at(i);
    s.strict_.at(i) = !s.strict_.at(i);
    return s;
  }

  void set_scale(std::size_t i, double f) {
    if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("HalfspaceSystem: scale must be positive");
    scale_.at(i) = f;
  }

 private:
  void validate() const {
    if (strict_.size() != theta_.size()) throw std::invalid_argument("HalfspaceSystem: strict flags size mismatch");
    if (theta_.size() > kMaxHalfspaces) throw std::invalid_argument("HalfspaceSystem: at most 64 halfspaces");
    for (const auto& row : W_) {
      if (row.size() != theta_.size()) throw std::invalid_argument("HalfspaceSystem: ragged weight matrix");
      for (double v : row) {
        if (!std::isfinite(v)) throw std::invalid_argument("HalfspaceSystem: non-finite weight");
      }
    }
    for (double t : theta_) {
      if (!std::isfinite(t)) throw std::invalid_argument("HalfspaceSystem: non-finite threshold");
    }
  }

  void check_point(std::span<const double> x) const {
    if (x.size() != n()) {
      throw std::invalid_argument("HalfspaceSystem: point has " + std::to_string(x.size()) + " coordinates, expected " +
                                  std::to_string(n()));
    }
  }

  std::vector<std::vector<double>> W_;
  std::vector<double> theta_;
  std::vector<bool> strict_;
  std::vector<double> scale_;
};

/// Rescales every dimension so that sum_j E[(x_j W_j[i])^2] = 1. Signs are
/// unchanged since only the positive scale factor moves.
inline HalfspaceSystem normalize(const HalfspaceSystem& sys, std::span<const double> second_moments) {
  if (second_moments.size() != sys.n()) throw std::invalid_argument("normalize: moment count mismatch");
  HalfspaceSystem out = sys;
  for (std::size_t i = 0; i < sys.d(); ++i) {
    CompensatedSum s;
    for (std::size_t j = 0; j < sys.n(); ++j) {
      const double w = sys.raw_weights()[j][i];
      s.add(w * w * second_moments[j]);
    }
    if (!(s.value() > 0.0)) throw std::domain_error("normalize: dimension " + std::to_string(i) + " has zero variance");
    out.set_scale(i, 1.0 / std::sqrt(s.value()));
  }
  return out;
}

inline HalfspaceSystem normalize(const HalfspaceSystem& sys, const ProductDistribution& dist) {
  if (dist.n() != sys.n()) throw std::invalid_argument("normalize: distribution size mismatch");
  std::vector<double> m2;
  for (const auto& c : dist.coords()) m2.push_back(c.moments()[2]);
  return normalize(sys, m2);
}

enum class CombinerKind { kSingle, kIntersection, kTruthTable, kTree };

inline const char* to_string(CombinerKind k) {
  switch (k) {
    case CombinerKind::kSingle: return "single";
    case CombinerKind::kIntersection: return "intersection";
    case CombinerKind::kTruthTable: return "truth_table";
    case CombinerKind::kTree: return "tree";
  }
  return "?";
}

/// Internal nodes query halfspace `query` and go to child[sign]. Leaves have
/// query < 0 and output `value`.
struct TreeNode {
  int query = -1;
  int child[2] = {-1, -1};
  int value = 0;

  bool is_leaf() const { return query < 0; }
  static TreeNode leaf(int v) { return TreeNode{-1, {-1, -1}, v}; }
  static TreeNode internal(int q, int if0, int if1) { return TreeNode{q, {if0, if1}, 0}; }
};

/// One halfspace literal on a tree path: sgn_i == value.
struct Literal {
  std::size_t halfspace = 0;
  bool value = true;
};

class CombinerSpec {
 public:
  static CombinerSpec single() {
    CombinerSpec c;
    c.kind_ = CombinerKind::kSingle;
    c.d_ = 1;
    return c;
  }

  static CombinerSpec intersection(std::size_t d) {
    if (d == 0 || d > kMaxHalfspaces) throw std::invalid_argument("CombinerSpec: intersection arity out of range");
    CombinerSpec c;
    c.kind_ = CombinerKind::kIntersection;
    c.d_ = d;
    return c;
  }

  /// table[s] is the output on sign vector s. Monotonicity is checked when
  /// declared.
  static CombinerSpec truth_table(std::size_t d, std::vector<std::uint8_t> table, bool monotone = true) {
    if (d == 0 || d > 10) throw std::invalid_argument("CombinerSpec: truth table arity must be in [1, 10]");
    if (table.size() != (std::size_t{1} << d)) throw std::invalid_argument("CombinerSpec: truth table size != 2^d");
    for (auto v : table) {
      if (v > 1) throw std::invalid_argument("CombinerSpec: truth table entries must be 0/1");
    }
    CombinerSpec c;
    c.kind_ = CombinerKind::kTruthTable;
    c.d_ = d;
    c.table_ = std::move(table);
    c.monotone_ = monotone;
    if (monotone && !c.table_is_monotone()) throw std::invalid_argument("CombinerSpec: truth table is not monotone");
    return c;
  }

  /// Node 0 is the root. `d` is the number of halfspaces the tree may query.
  static CombinerSpec tree(std::size_t d, std::vector<TreeNode> nodes) {
    if (nodes.empty()) throw std::invalid_argument("CombinerSpec: empty tree");
    CombinerSpec c;
    c.kind_ = CombinerKind::kTree;
    c.d_ = d;
    c.nodes_ = std::move(nodes);
    c.validate_tree();
    return c;
  }

  CombinerKind kind() const { return kind_; }
  std::size_t d() const { return d_; }
  const std::vector<std::uint8_t>& table() const { return table_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  bool declared_monotone() const { return kind_ != CombinerKind::kTree && (kind_ != CombinerKind::kTruthTable || monotone_); }

  bool apply(std::uint64_t signs) const {
    switch (kind_) {
      case CombinerKind::kSingle: return signs & 1u;
      case CombinerKind::kIntersection: {
        const std::uint64_t all = d_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << d_) - 1;
        return (signs & all) == all;
      }
      case CombinerKind::kTruthTable: return table_[signs & ((std::uint64_t{1} << d_) - 1)];
      case CombinerKind::kTree: {
        int v = 0;
        while (!nodes_[v].is_leaf()) v = nodes_[v].child[(signs >> nodes_[v].query) & 1u];
        return nodes_[v].value;
      }
    }
    return false;
  }

  /// Leaf counts (zero-leaves, one-leaves) for trees.
  std::pair<std::size_t, std::size_t> leaf_counts() const {
    std::size_t z = 0, o = 0;
    for (const auto& nd : nodes_) {
      if (nd.is_leaf()) (nd.value ? o : z)++;
    }
    return {z, o};
  }

  std::size_t leaves() const {
    const auto [z, o] = leaf_counts();
    return z + o;
  }

  std::size_t depth() const { return nodes_.empty() ? 0 : depth_from(0); }

  /// Root-to-leaf literal lists for every 1-leaf.
  std::vector<std::vector<Literal>> accepting_paths() const {
    if (kind_ != CombinerKind::kTree) throw std::logic_error("CombinerSpec: accepting_paths needs a tree");
    std::vector<std::vector<Literal>> out;
    std::vector<Literal> path;
    collect(0, path, out);
    return out;
  }

 private:
  bool table_is_monotone() const {
    for (std::size_t s = 0; s < table_.size(); ++s) {
      for (std::size_t b = 0; b < d_; ++b) {
        if (!(s >> b & 1u) && table_[s] > table_[s | (std::size_t{1} << b)]) return false;
      }
    }
    return true;
  }

  void validate_tree() const {
    std::vector<int> indeg(nodes_.size(), 0);
    for (const auto& nd : nodes_) {
      if (nd.is_leaf()) {
        if (nd.value != 0 && nd.value != 1) throw std::invalid_argument("CombinerSpec: leaf value must be 0/1");
        continue;
      }
      if (static_cast<std::size_t>(nd.query) >= d_) throw std::invalid_argument("CombinerSpec: query out of range");
      for (int ch : nd.child) {
        if (ch <= 0 || static_cast<std::size_t>(ch) >= nodes_.size()) {
          throw std::invalid_argument("CombinerSpec: bad child index");
        }
        ++indeg[ch];
      }
    }
    for (std::size_t v = 1; v < nodes_.size(); ++v) {
      if (indeg[v] != 1) throw std::invalid_argument("CombinerSpec: nodes must form a tree rooted at 0");
    }
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<int> stack{0};
    std::size_t reached = 0;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = true;
      ++reached;
      if (!nodes_[v].is_leaf()) stack.insert(stack.end(), {nodes_[v].child[0], nodes_[v].child[1]});
    }
    if (reached != nodes_.size()) throw std::invalid_argument("CombinerSpec: unreachable or cyclic nodes");
  }

  std::size_t depth_from(int v) const {
    if (nodes_[v].is_leaf()) return 0;
    return 1 + std::max(depth_from(nodes_[v].child[0]), depth_from(nodes_[v].child[1]));
  }

  void collect(int v, std::vector<Literal>& path, std::vector<std::vector<Literal>>& out) const {
    const auto& nd = nodes_[v];
    if (nd.is_leaf()) {
      if (nd.value) out.push_back(path);
      return;
    }
    for (int b : {0, 1}) {
      path.push_back({static_cast<std::size_t>(nd.query), b == 1});
      collect(nd.child[b], path, out);
      path.pop_back();
    }
  }

  CombinerKind kind_ = CombinerKind::kSingle;
  std::size_t d_ = 1;
  std::vector<std::uint8_t> table_;
  bool monotone_ = true;
  std::vector<TreeNode> nodes_;
};

inline void check_compatible(const HalfspaceSystem& sys, const CombinerSpec& c) {
  if (c.d() > sys.d()) {
    throw std::invalid_argument("combiner reads " + std::to_string(c.d()) + " halfspaces but system has " +
                                std::to_string(sys.d()));
  }
}

inline bool evaluate(const HalfspaceSystem& sys, const CombinerSpec& c, std::span<const double> x) {
  check_compatible(sys, c);
  return c.apply(sys.sign_vector(x));
}

inline bool evaluate_exact(const HalfspaceSystem& sys, const CombinerSpec& c, std::span<const double> x) {
  check_compatible(sys, c);
  return c.apply(sys.sign_vector_exact(x));
}

/// Points of a finite product support lying on the boundary w.x = theta of
/// dimension i, found by exact enumeration.
inline std::vector<std::vector<double>> boundary_points(const HalfspaceSystem& sys, std::size_t i,
                                                        const std::vector<std::vector<double>>& supports,
                                                        std::uint64_t cap = std::uint64_t{1} << 22) {
  if (supports.size() != sys.n()) throw std::invalid_argument("boundary_points: support count mismatch");
  std::uint64_t total = 1;
  for (const auto& s : supports) {
    if (s.empty()) return {};
    if (total > cap / s.size()) throw ResourceError("boundary_points: product support exceeds cap");
    total *= s.size();
  }
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> idx(sys.n(), 0);
  std::vector<double> x(sys.n());
  for (std::uint64_t r = 0; r < total; ++r) {
    for (std::size_t j = 0; j < sys.n(); ++j) x[j] = supports[j][idx[j]];
    Rational acc = 0;
    for (std::size_t j = 0; j < sys.n(); ++j) acc += Rational(sys.raw_weights()[j][i]) * Rational(x[j]);
    if (acc == Rational(sys.raw_thresholds()[i])) out.push_back(x);
    for (std::size_t j = 0; j < sys.n() && ++idx[j] == supports[j].size(); ++j) idx[j] = 0;
  }
  return out;
}

}  // namespace hsprg
