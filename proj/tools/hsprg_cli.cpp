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


// Command-line front end: discretize, regularity, gen, robp, sandwich,
// estimate. JSON in, JSON or CSV out.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hsprg/hsprg.hpp"

namespace {

using namespace hsprg;

void write_json(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(out, j);
  }
}

Json moments_json(const RawMoments& m) { return Json::array({m[1], m[2], m[3], m[4]}); }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ProductDistribution load_dist_or(const std::string& path, std::size_t n) {
  if (!path.empty()) return distribution_from_json(load_json(path));
  return ProductDistribution::iid(CoordinateSpec::rademacher(), n);
}

CombinerSpec load_combiner_or(const std::string& path, std::size_t d) {
  if (!path.empty()) return combiner_from_json(load_json(path));
  return d == 1 ? CombinerSpec::single() : CombinerSpec::intersection(d);
}

// ---- discretize ----

struct DiscretizeArgs {
  std::string dist, out;
  double C = 3.0, eps = 0.1;
  std::optional<double> gamma;
  bool boundaries = true;
};

int run_discretize(const DiscretizeArgs& a) {
  const auto dist = distribution_from_json(load_json(a.dist));
  Json coords = Json::array();
  std::map<std::string, Json> cache;
  for (const auto& c : dist.coords()) {
    const auto key = to_json(c).dump();
    if (auto it = cache.find(key); it != cache.end()) {
      coords.push_back(it->second);
      continue;
    }
    const auto r = discretize(c, dist.n(), a.C, a.eps, a.gamma);
    Json j{{"coordinate", to_json(c)},
           {"B", r.truncation.B},
           {"B_std", r.truncation.B_std},
           {"tail_mass", r.truncation.tail_mass},
           {"tail_bound", r.truncation.tail_bound},
           {"gamma", r.sandwich.gamma},
           {"g", r.sandwich.g},
           {"sd_lower_upper", r.sd_lower_upper},
           {"moments", {{"continuous", moments_json(r.continuous)},
                        {"lower", moments_json(r.lower)},
                        {"upper", moments_json(r.upper)}}},
           {"drift", {{"mean", std::max(std::abs(r.lower[1]), std::abs(r.upper[1]))},
                      {"second", std::max(std::abs(r.lower[2] - 1.0), std::abs(r.upper[2] - 1.0))},
                      {"fourth_excess", std::max(r.lower[4], r.upper[4]) - a.C}}},
           {"budget", {{"mean", r.mean_budget}, {"second", r.second_budget}, {"fourth", r.fourth_budget}}}};
    if (a.boundaries) j["boundaries"] = r.sandwich.boundaries;
    cache.emplace(key, j);
    coords.push_back(std::move(j));
  }
  write_json({{"n", dist.n()}, {"C", a.C}, {"eps", a.eps}, {"coords", coords}}, a.out);
  return 0;
}

// ---- regularity ----

struct RegularityArgs {
  std::string weights, dist, out;
  double delta = 0.1;
  std::uint64_t L = 8;
};

/// Accepts a flat weight list, an n x d row list, or a system object.
std::vector<std::vector<double>> load_weight_rows(const Json& j) {
  if (j.is_object()) {
    const auto sys = system_from_json(j);
    std::vector<std::vector<double>> W(sys.n(), std::vector<double>(sys.d()));
    for (std::size_t j2 = 0; j2 < sys.n(); ++j2) {
      for (std::size_t i = 0; i < sys.d(); ++i) W[j2][i] = sys.weight(j2, i);
    }
    return W;
  }
  std::vector<std::vector<double>> W;
  for (const auto& e : j) W.push_back(e.is_array() ? e.get<std::vector<double>>() : std::vector<double>{e.get<double>()});
  return W;
}

int run_regularity(const RegularityArgs& a) {
  const auto W = load_weight_rows(load_json(a.weights));
  if (W.empty()) throw std::invalid_argument("regularity: no weights");
  const auto dist = load_dist_or(a.dist, W.size());
  if (dist.n() != W.size()) throw std::invalid_argument("regularity: distribution size mismatch");
  std::vector<MomentProfile> profiles;
  for (const auto& c : dist.coords()) profiles.push_back(moment_profile(c));
  const std::size_t d = W[0].size();
  Json dims = Json::array();
  for (std::size_t i = 0; i < d; ++i) {
    TermNorms t;
    for (std::size_t j = 0; j < W.size(); ++j) {
      const auto one = TermNorms::from_weights(std::vector<double>{W[j][i]}, profiles[j]);
      t.two_norm_sq.push_back(one.two_norm_sq[0]);
      t.four_norm_4.push_back(one.four_norm_4[0]);
    }
    const auto ci = critical_index(t, a.delta);
    dims.push_back({{"critical_index", ci.index ? Json(*ci.index) : Json(nullptr)},
                    {"head", ci.index ? Json(std::vector<std::size_t>(ci.permutation.begin(),
                                                                      ci.permutation.begin() + static_cast<std::ptrdiff_t>(*ci.index)))
                                      : Json(ci.permutation)}});
  }
  const auto hs = head_set_partition(W, profiles, a.delta, a.L);
  Json cls = Json::array();
  for (auto c : hs.classification) cls.push_back(c == DimClass::kReg ? "REG" : "JUNTA");
  write_json({{"delta", a.delta},
              {"L", a.L},
              {"dimensions", dims},
              {"H0", hs.H0},
              {"classification", cls},
              {"counters", hs.counters},
              {"steps", hs.steps}},
             a.out);
  return 0;
}

// ---- gen ----

struct GenArgs {
  std::string dist, params, out;
  std::uint64_t seeds = 1;
  std::uint64_t master_seed = default_master_seed();
};

/// Alphabets for the generator; continuous coordinates are discretized
/// first and indexed through the upper multiset.
std::vector<std::vector<double>> generator_alphabets(const ProductDistribution& dist, double C, double eps) {
  std::vector<std::vector<double>> out;
  for (const auto& c : dist.coords()) {
    if (c.is_discrete()) {
      out.push_back(uniform_alphabet(c));
    } else {
      out.push_back(discretize(c, dist.n(), C, eps).sandwich.upper_values());
    }
  }
  return out;
}

MZGenerator make_generator(const ProductDistribution& dist, const Json& p) {
  const double C = p.value("C", 3.0), eps = p.value("eps", 0.1);
  unsigned k = p.value("k", 5u);
  std::uint64_t t = p.value("t", std::uint64_t{16});
  if (!p.contains("t") && (p.contains("d") || p.contains("eta"))) {
    MZOverrides ov;
    if (p.contains("k")) ov.k = k;
    const auto mp = derive_params(p.value("d", std::size_t{1}), eps, p.value("eta", 0.5), ov);
    t = mp.t();
    k = mp.k;
  }
  const auto variant = p.value("variant", std::string("affine")) == "multiplicative" ? HashVariant::kMultiplicative
                                                                                       : HashVariant::kAffine;
  return MZGenerator(generator_alphabets(dist, C, eps), t, k, variant);
}

int run_gen(const GenArgs& a) {
  const auto dist = distribution_from_json(load_json(a.dist));
  const Json params = a.params.empty() ? Json::object() : load_json(a.params);
  const auto gen = make_generator(dist, params);
  CounterRng rng(a.master_seed, 1);
  const bool csv = ends_with(a.out, ".csv");
  std::ofstream os(a.out, csv ? std::ios::out : std::ios::binary);
  if (!os) throw std::runtime_error("gen: cannot open " + a.out);
  std::vector<double> x;
  for (std::uint64_t s = 0; s < a.seeds; ++s) {
    gen.generate_into(rng.bits(gen.seed_bits()), x);
    if (csv) {
      for (std::size_t j = 0; j < x.size(); ++j) os << (j ? "," : "") << format_double(x[j]);
      os << '\n';
    } else {
      for (double v : x) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) os.put(static_cast<char>(bits >> (8 * b) & 0xFFu));
      }
    }
  }
  std::cerr << "n=" << gen.n() << " t=" << gen.t() << " k=" << gen.k() << " seed_bits=" << gen.seed_bits() << '\n';
  return 0;
}

// ---- robp ----

struct RobpArgs {
  std::string f, combiner, dist, robp, out;
  double eps = 0.1;
  unsigned S = 8, D = 1;
  std::size_t T = 8;
  std::uint64_t seeds = 16;
  std::uint64_t master_seed = default_master_seed();
};

std::vector<std::vector<double>> padded_alphabets(const ProductDistribution& dist) {
  std::size_t L = 2;
  for (const auto& c : dist.coords()) L = std::max(L, uniform_alphabet(c).size());
  return uniform_alphabets(dist, L);
}

int run_robp_compile(const RobpArgs& a) {
  const auto sys = system_from_json(load_json(a.f));
  const auto dist = load_dist_or(a.dist, sys.n());
  const auto g = load_combiner_or(a.combiner, sys.d());
  const auto alph = padded_alphabets(dist);
  std::vector<ROBP> parts;
  for (std::size_t i = 0; i < sys.d(); ++i) {
    std::vector<double> w(sys.n());
    for (std::size_t j = 0; j < sys.n(); ++j) w[j] = sys.raw_weights()[j][i];
    parts.push_back(halfspace_to_robp(w, sys.raw_thresholds()[i], alph, sys.strict(i)).program);
  }
  const auto b = parts.size() == 1 ? parts[0] : minimize(product_program(parts, [&](std::uint64_t s) { return g.apply(s); }));
  write_json(to_json(b), a.out);
  return 0;
}

int run_robp_check(const RobpArgs& a) {
  const auto b = robp_from_json(load_json(a.robp));
  const auto res = check_monotone(b);
  Json j{{"T", b.T()}, {"D", b.D()}, {"max_width", *std::max_element(b.widths().begin(), b.widths().end())},
         {"acceptance_probability", acceptance_probability(b)}, {"monotone", std::holds_alternative<MonotoneCertificate>(res)}};
  if (const auto* c = std::get_if<MonotoneCertificate>(&res)) {
    j["order"] = c->order;
  } else {
    const auto& w = std::get<MonotoneWitness>(res);
    j["witness"] = {{"layer", w.layer}, {"v", w.v}, {"w", w.w}};
  }
  write_json(j, a.out);
  return std::holds_alternative<MonotoneCertificate>(res) ? 0 : 2;
}

int run_robp_sandwich(const RobpArgs& a) {
  const auto b = robp_from_json(load_json(a.robp));
  const auto res = check_monotone(b);
  if (!std::holds_alternative<MonotoneCertificate>(res)) throw std::invalid_argument("robp sandwich: program is not monotone");
  const auto sp = sandwich_monotone(b, std::get<MonotoneCertificate>(res), a.eps);
  write_json({{"eps", sp.eps}, {"gap", sp.gap}, {"down", to_json(sp.down)}, {"up", to_json(sp.up)}}, a.out);
  return 0;
}

int run_robp_nisan(const RobpArgs& a) {
  if (!a.robp.empty()) {
    const auto b = robp_from_json(load_json(a.robp));
    const NisanGenerator gen(a.S, b.D(), b.T());
    CounterRng rng(a.master_seed, 1);
    ProportionEstimate est;
    for (std::uint64_t s = 0; s < a.seeds; ++s) est.successes += b.eval(gen.generate(rng.bits(gen.seed_bits())));
    est.trials = a.seeds;
    const double truth = acceptance_probability(b);
    write_json({{"S", a.S},
                {"seed_bits", gen.seed_bits()},
                {"uniform", truth},
                {"nisan", est.mean()},
                {"ci95", est.half_width()},
                {"error", std::abs(est.mean() - truth)},
                {"seeds", a.seeds}},
               a.out);
    return 0;
  }
  const NisanGenerator gen(a.S, a.D, a.T);
  CounterRng rng(a.master_seed, 1);
  std::ofstream file;
  if (!a.out.empty() && a.out != "-") {
    file.open(a.out);
    if (!file) throw std::runtime_error("robp nisan: cannot open " + a.out);
  }
  std::ostream& os = file.is_open() ? file : std::cout;
  for (std::uint64_t s = 0; s < a.seeds; ++s) {
    const auto labels = gen.generate(rng.bits(gen.seed_bits()));
    for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << labels[i];
    os << '\n';
  }
  return 0;
}

// ---- sandwich ----

struct SandwichArgs {
  std::string f, combiner, dist, poly, out;
  double delta = 0.1, t = 4.0, T = 0.0;
  double a = 0.1, b = 1e-2;
  bool audit = false;
};

void collect_leaves(const GeneralizedPolynomial& p, std::vector<const HalfspaceUpper*>& out) {
  if (p.kind() == GeneralizedPolynomial::Kind::kLeaf) {
    out.push_back(&p.halfspace_upper());
    return;
  }
  for (const auto& c : p.children()) collect_leaves(c, out);
}

Json leaf_json(const HalfspaceUpper& u) {
  const auto& part = u.partition();
  return {{"theta", u.theta()},
          {"strict", u.strict()},
          {"head", part.head},
          {"tail_size", part.tail.size()},
          {"tail_norm", static_cast<double>(part.tail_norm)},
          {"tail_regular", part.tail_regular},
          {"far_exponent", u.far_exponent()},
          {"order", u.order()},
          {"near_poly", to_json(u.near_poly())}};
}

int run_sandwich_build(const SandwichArgs& a) {
  const auto sys = system_from_json(load_json(a.f));
  const auto dist = load_dist_or(a.dist, sys.n());
  const auto g = load_combiner_or(a.combiner, sys.d());
  UpperPolyParams prm;
  prm.delta = a.delta;
  prm.t = a.t;
  prm.d = sys.d();
  prm.T = a.T;
  if (!a.poly.empty()) prm.P = poly_from_json(load_json(a.poly));
  const auto s = build_sandwich(sys, g, dist, prm);
  Json j{{"order", s.order()}, {"upper_terms", s.upper_terms}, {"lower_terms", s.lower_terms}};
  for (const auto* side : {"upper", "lower"}) {
    std::vector<const HalfspaceUpper*> leaves;
    collect_leaves(side[0] == 'u' ? s.upper : s.lower, leaves);
    Json arr = Json::array();
    for (const auto* l : leaves) arr.push_back(leaf_json(*l));
    j[std::string(side) + "_factors"] = arr;
  }
  if (a.audit) {
    const auto r = audit_sandwich(system_function(sys, g, true), s, dist);
    j["audit"] = {{"pointwise_ok", r.pointwise_ok},
                  {"violations", r.violations},
                  {"points", r.points},
                  {"upper_gap", static_cast<double>(r.upper_gap)},
                  {"lower_gap", static_cast<double>(r.lower_gap)}};
  }
  write_json(j, a.out);
  return 0;
}

int run_sandwich_audit(const SandwichArgs& a) {
  const auto P = a.poly.empty() ? dgjsv_poly(a.a, a.b, false) : poly_from_json(load_json(a.poly));
  const auto r = audit_dgjsv(P, a.a, a.b);
  Json props = Json::array(), worst = Json::array();
  for (int i = 0; i < 6; ++i) {
    props.push_back(r.props[i]);
    worst.push_back(r.worst[i]);
  }
  Json j{{"a", r.a},        {"b", r.b},           {"degree", r.K},         {"degree_bound", r.degree_bound},
         {"c0", r.c0_measured}, {"even", r.even_degree}, {"properties", props}, {"worst", worst},
         {"grid_points", r.grid_points}, {"ok", r.ok()}};
  if (a.poly.empty()) j["poly"] = to_json(P);
  write_json(j, a.out);
  return r.ok() ? 0 : 2;
}

// ---- estimate ----

struct EstimateArgs {
  std::string f, combiner, dist, gen = "mz", mode = "mc", out, experiment = "estimate";
  std::uint64_t trials = 100000;
  std::uint64_t master_seed = default_master_seed();
  std::uint64_t t = 16;
  unsigned k = 5, S = 8;
  double eps = 0.1;
  std::uint64_t shards = 16;
  unsigned threads = 0;
};

SeededGenerator make_source(const std::string& spec, const ProductDistribution& dist, const EstimateArgs& a) {
  if (spec == "mz") return mz_source(dist, a.t, a.k);
  if (spec == "nisan") return nisan_source(dist, a.S);
  if (spec.rfind("kwise:", 0) == 0) return kwise_source(dist, static_cast<unsigned>(std::stoul(spec.substr(6))));
  if (spec == "full") return full_independence_source(dist);
  throw std::invalid_argument("estimate: unknown generator '" + spec + "'");
}

int run_estimate(const EstimateArgs& a) {
  const auto sys = system_from_json(load_json(a.f));
  const auto dist = load_dist_or(a.dist, sys.n());
  const auto g = load_combiner_or(a.combiner, sys.d());
  const auto src = make_source(a.gen, dist, a);
  EstimateOptions opt;
  opt.experiment = a.experiment;
  opt.d = sys.d();
  opt.eps = a.eps;
  opt.trials = a.trials;
  opt.master_seed = a.master_seed;
  opt.shards = a.shards;
  if (a.threads) opt.threads = a.threads;
  const auto method = method_from_string(a.mode);
  const auto r = estimate_fooling_error(system_function(sys, g), dist, src, method, opt);
  if (a.out.empty() || a.out == "-") {
    emit_report({r}, ReportFormat::kCsv, std::cout);
  } else {
    emit_report({r}, a.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudorandom generators for functions of halfspaces"};
  app.require_subcommand(1);
  int rc = 0;

  DiscretizeArgs da;
  auto* disc = app.add_subcommand("discretize", "Discretize a product distribution");
  disc->add_option("--dist", da.dist, "Distribution JSON")->required();
  disc->add_option("--C", da.C, "Fourth moment bound");
  disc->add_option("--eps", da.eps, "Target error");
  disc->add_option("--gamma", da.gamma, "Bucket mass (default from n, B, eps)");
  disc->add_flag("!--no-boundaries", da.boundaries, "Omit the boundary lists");
  disc->add_option("--out", da.out, "Output JSON (default stdout)");
  disc->callback([&] { rc = run_discretize(da); });

  RegularityArgs ra;
  auto* reg = app.add_subcommand("regularity", "Critical index and head set");
  reg->add_option("--weights", ra.weights, "Weights JSON")->required();
  reg->add_option("--delta", ra.delta, "Regularity parameter");
  reg->add_option("--dist", ra.dist, "Distribution JSON (default +-1)");
  reg->add_option("--L", ra.L, "Per-dimension step limit");
  reg->add_option("--out", ra.out, "Output JSON (default stdout)");
  reg->callback([&] { rc = run_regularity(ra); });

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Expand generator seeds into samples");
  gen->add_option("--dist", ga.dist, "Distribution JSON")->required();
  gen->add_option("--params", ga.params, "Generator parameters JSON");
  gen->add_option("--seeds", ga.seeds, "Number of seeds");
  gen->add_option("--master-seed", ga.master_seed, "Master seed (default HSPRG_SEED)");
  gen->add_option("--out", ga.out, "Output .bin or .csv")->required();
  gen->callback([&] { rc = run_gen(ga); });

  RobpArgs ba;
  auto* robp = app.add_subcommand("robp", "Read-once branching programs");
  robp->require_subcommand(1);
  auto* rc_compile = robp->add_subcommand("compile", "Compile halfspaces to a program");
  rc_compile->add_option("--f", ba.f, "System JSON")->required();
  rc_compile->add_option("--combiner", ba.combiner, "Combiner JSON");
  rc_compile->add_option("--dist", ba.dist, "Distribution JSON (default +-1)");
  rc_compile->add_option("--out", ba.out, "Output JSON (default stdout)");
  rc_compile->callback([&] { rc = run_robp_compile(ba); });
  auto* rc_check = robp->add_subcommand("check", "Check monotonicity");
  rc_check->add_option("--robp", ba.robp, "Program JSON")->required();
  rc_check->add_option("--out", ba.out, "Output JSON (default stdout)");
  rc_check->callback([&] { rc = run_robp_check(ba); });
  auto* rc_sand = robp->add_subcommand("sandwich", "Sandwich a monotone program");
  rc_sand->add_option("--robp", ba.robp, "Program JSON")->required();
  rc_sand->add_option("--eps", ba.eps, "Target gap");
  rc_sand->add_option("--out", ba.out, "Output JSON (default stdout)");
  rc_sand->callback([&] { rc = run_robp_sandwich(ba); });
  auto* rc_nisan = robp->add_subcommand("nisan", "Nisan generator outputs or fooling estimate");
  rc_nisan->add_option("--robp", ba.robp, "Program JSON to evaluate");
  rc_nisan->add_option("--S", ba.S, "Space parameter");
  rc_nisan->add_option("--D", ba.D, "Label bits");
  rc_nisan->add_option("--T", ba.T, "Length");
  rc_nisan->add_option("--seeds", ba.seeds, "Number of seeds");
  rc_nisan->add_option("--master-seed", ba.master_seed, "Master seed (default HSPRG_SEED)");
  rc_nisan->add_option("--out", ba.out, "Output file (default stdout)");
  rc_nisan->callback([&] { rc = run_robp_nisan(ba); });

  SandwichArgs sa;
  auto* sand = app.add_subcommand("sandwich", "Sandwiching polynomials");
  sand->require_subcommand(1);
  auto* sb = sand->add_subcommand("build", "Build sandwiching polynomials for g(h_1..h_d)");
  sb->add_option("--f", sa.f, "System JSON")->required();
  sb->add_option("--combiner", sa.combiner, "Combiner JSON");
  sb->add_option("--dist", sa.dist, "Distribution JSON (default +-1)");
  sb->add_option("--delta", sa.delta, "Regularity parameter");
  sb->add_option("--t", sa.t, "Tail scale");
  sb->add_option("--T", sa.T, "Hypercontractivity exponent");
  sb->add_option("--poly", sa.poly, "Near-case polynomial JSON");
  sb->add_flag("--audit", sa.audit, "Audit by enumeration");
  sb->add_option("--out", sa.out, "Output JSON (default stdout)");
  sb->callback([&] { rc = run_sandwich_build(sa); });
  auto* sau = sand->add_subcommand("audit", "Audit a step-approximating polynomial");
  sau->add_option("--a", sa.a, "Transition width");
  sau->add_option("--b", sa.b, "Error");
  sau->add_option("--poly", sa.poly, "Polynomial JSON (default: built from a, b)");
  sau->add_option("--out", sa.out, "Output JSON (default stdout)");
  sau->callback([&] { rc = run_sandwich_audit(sa); });

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Estimate the fooling error of a generator");
  est->add_option("--f", ea.f, "System JSON")->required();
  est->add_option("--combiner", ea.combiner, "Combiner JSON");
  est->add_option("--dist", ea.dist, "Distribution JSON (default +-1)");
  est->add_option("--gen", ea.gen, "mz | kwise:K | nisan | full");
  est->add_option("--mode", ea.mode, "exact | mc");
  est->add_option("--trials", ea.trials, "Monte Carlo trials");
  est->add_option("--master-seed", ea.master_seed, "Master seed (default HSPRG_SEED)");
  est->add_option("--t", ea.t, "MZ bucket count");
  est->add_option("--k", ea.k, "MZ independence");
  est->add_option("--S", ea.S, "Nisan space parameter");
  est->add_option("--eps", ea.eps, "Target error recorded in the report");
  est->add_option("--experiment", ea.experiment, "Experiment name");
  est->add_option("--shards", ea.shards, "Shard count");
  est->add_option("--threads", ea.threads, "Worker threads (default hardware)");
  est->add_option("--out", ea.out, "Output .csv or .json (default CSV on stdout)");
  est->callback([&] { rc = run_estimate(ea); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
