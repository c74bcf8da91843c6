// Copyright 2026 The AuctionLab Authors.
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

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "auctionlab/configlp.hpp"
#include "auctionlab/errors.hpp"
#include "auctionlab/generators.hpp"
#include "auctionlab/hardness.hpp"
#include "auctionlab/io.hpp"
#include "auctionlab/rounding.hpp"
#include "auctionlab/sets.hpp"
#include "auctionlab/valuations.hpp"
#include "auctionlab/welfare.hpp"

namespace auctionlab {

struct ExperimentConfig {
  std::string name;
  int m = 0;  // 0 picks the experiment default
  int k = 0;
  int l = 4;
  std::uint64_t seed = 1;
  int trials = 0;
  int jobs = 1;
  double tolerance = 1e-6;
  bool mph2 = false;         // gap: the fixed four-item instance
  std::int64_t mc_trials = 0;  // rounding-ratio: Monte Carlo instead of exact when > 0

  Json ToJson() const {
    return Json{{"experiment", name}, {"m", m}, {"k", k}, {"l", l}, {"seed", seed}, {"trials", trials},
                {"jobs", jobs}, {"tolerance", tolerance}, {"mph2", mph2}, {"mc_trials", mc_trials}};
  }
};

struct ExperimentResult {
  std::string header;
  std::vector<std::string> rows;
  bool all_pass = true;
  Json first_failure;  // null when everything passed
  Json inputs = Json::array();  // instance JSON per row, hashed into the manifest

  std::string Csv() const {
    std::string out = header + "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
  }
};

namespace detail {

inline std::string Bits(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline std::string Num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

class RowSink {
 public:
  explicit RowSink(ExperimentResult& r) : r_(r) {}

  void Add(const std::string& row, bool pass, const Json& instance, std::uint64_t seed) {
    const std::string hash = ContentHash(instance);
    r_.rows.push_back(row + "," + (pass ? "1" : "0") + "," + std::to_string(seed) + "," + hash);
    r_.inputs.push_back(hash);
    if (!pass && r_.all_pass) {
      r_.all_pass = false;
      r_.first_failure = Json{{"row", r_.rows.back()}, {"instance", instance}};
    }
  }

 private:
  ExperimentResult& r_;
};

inline int Default(int value, int fallback) { return value > 0 ? value : fallback; }

}  // namespace detail

// Exhaustive Equality-reduction check: optimum l when a = b, 2(l-1) otherwise.
inline ExperimentResult RunEquality(const ExperimentConfig& cfg) {
  const int m = detail::Default(cfg.m, 16), k = detail::Default(cfg.k, 4), trials = detail::Default(cfg.trials, 8);
  RequireExhaustive(m, std::min(Budget::Current().exhaustive_items, 16), "equality experiment");
  ExperimentResult res;
  res.header = "trial,a,b,opt,expected_opt,pass,seed,instance_hash";
  detail::RowSink sink(res);
  Rng base_rng = Rng::Derive(cfg.seed, 0);
  const auto base = SampleLIndependent(m, cfg.l, k, base_rng).value;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = Rng::DeriveSeed(cfg.seed, t + 1);
    Rng rng(seed);
    std::vector<int> a(k), b;
    for (auto& bit : a) bit = rng.Coin();
    b = a;
    if (t % 2 == 1) {
      const int flips = 1 + static_cast<int>(rng.UniformBelow(k));
      for (int f = 0; f < flips; ++f) b[rng.UniformBelow(k)] ^= 1;
    }
    const auto inst = BuildEqualityInstance(base, a, b, cfg.l);
    const Rational opt = MaxWelfare(inst.alice, inst.bob).optimum;
    const Rational expected(a == b ? cfg.l : 2 * (cfg.l - 1));
    const Json in{{"base", ToJson(base)}, {"a", detail::Bits(a)}, {"b", detail::Bits(b)}, {"l", cfg.l}};
    sink.Add(std::to_string(t) + "," + detail::Bits(a) + "," + detail::Bits(b) + "," + ToString(opt) + "," +
                 ToString(expected),
             opt == expected, in, seed);
  }
  return res;
}

// Exist-Far-Sets gap: odd trials carry one far index.
inline ExperimentResult RunEfs(const ExperimentConfig& cfg) {
  const int m = detail::Default(cfg.m, 14), k = detail::Default(cfg.k, 5), trials = detail::Default(cfg.trials, 20);
  ExperimentResult res;
  res.header = "trial,answer,max_welfare,witness_welfare,threshold_answer,pass,seed,instance_hash";
  detail::RowSink sink(res);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = Rng::DeriveSeed(cfg.seed, t);
    Rng rng(seed);
    std::set<int> far;
    if (t % 2 == 1) far.insert(static_cast<int>(rng.UniformBelow(k)));
    const auto inst = SampleEfsInstance(m, k, cfg.l, far, rng);
    const int answer = ExistFarSetsAnswer(inst);
    const auto rep = VerifyEfsGap(inst);
    std::string max_w = rep.max_welfare ? ToString(*rep.max_welfare) : "";
    int threshold = -1;
    if (rep.max_welfare) threshold = *rep.max_welfare >= Rational(2 * (cfg.l - 1)) ? 1 : 0;
    const bool pass = rep.pass && (threshold < 0 || threshold == answer);
    const Json in{{"x", ToJson(inst.x)}, {"y", ToJson(inst.y)}, {"l", cfg.l}};
    sink.Add(std::to_string(t) + "," + std::to_string(answer) + "," + max_w + "," +
                 (rep.witness ? ToString(rep.witness_welfare) : std::string()) + "," +
                 (threshold < 0 ? std::string() : std::to_string(threshold)),
             pass, in, seed);
  }
  return res;
}

// Integrality gap of the fixed MPH-2 instance or of the covering-design
// cover instance.
inline ExperimentResult RunGap(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.header = "family,l,m,C,OPT,gap,bound,pass,seed,instance_hash";
  detail::RowSink sink(res);
  if (cfg.mph2) {
    const auto g = BuildMph2GapInstance();
    const MphValuation a(g.alice), b(g.bob);
    const auto sol = SolveExact(a, b);
    const auto ig = IntegralityGap(a, b, sol);
    const bool pass = std::abs(sol.objective - 2) <= cfg.tolerance && ig.exact && *ig.exact == BigRational(1, 2);
    sink.Add("mph2,," + std::to_string(a.ground()) + "," + detail::Num(sol.objective) + "," +
                 ToString(ig.integral_optimum) + "," + (ig.exact ? ig.exact->str() : detail::Num(ig.gap)) + ",1/2",
             pass, InstanceToJson(a, b, {{"construction", "mph2-gap"}}, &g.fractional), 0);
    return res;
  }
  const std::uint64_t seed = Rng::DeriveSeed(cfg.seed, 0);
  Rng rng(seed);
  const auto g = BuildCoverGapInstance(cfg.l, rng, cfg.m);
  const int m = g.sets.ground();
  const Rational frac_value = g.fractional.Objective(g.alice, g.bob);
  const Rational opt = MaxWelfare(g.alice, g.bob).optimum;
  double c = ToDouble(frac_value);
  std::string c_str = ToString(frac_value);
  if (m <= Budget::Current().exhaustive_items) {
    const auto sol = SolveColumnGeneration(g.alice, g.bob);
    c = sol.objective;
    c_str = sol.exact.verified ? sol.exact.objective.str() : detail::Num(c);
  }
  const Rational bound(cfg.l, 2 * (cfg.l - 1));
  const double gap = ToDouble(opt) / c;
  const bool pass = g.fractional.IsFeasible() && frac_value == Rational(2 * (cfg.l - 1)) &&
                    opt == Rational(cfg.l) && gap <= ToDouble(bound) + cfg.tolerance;
  sink.Add("cover," + std::to_string(cfg.l) + "," + std::to_string(m) + "," + c_str + "," + ToString(opt) + "," +
               detail::Num(gap) + "," + ToString(bound),
           pass,
           InstanceToJson(g.alice, g.bob, {{"construction", "covering-design-gap"}, {"seed", seed}}, &g.fractional),
           seed);
  return res;
}

// Rounding guarantee on random subadditive MPH-k instances.
inline ExperimentResult RunRoundingRatio(const ExperimentConfig& cfg) {
  const int m = detail::Default(cfg.m, 6), k = detail::Default(cfg.k, 2), trials = detail::Default(cfg.trials, 20);
  ExperimentResult res;
  res.header = "instance_id,k,C,exact_or_mc,expected_welfare,ratio,bound,pass,seed,instance_hash";
  detail::RowSink sink(res);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = Rng::DeriveSeed(cfg.seed, t);
    Rng rng(seed);
    const MphValuation a(RandomSubadditiveMph(m, k, rng).value);
    const MphValuation b(RandomSubadditiveMph(m, k, rng).value);
    const auto sol = m <= Budget::Current().lp_exact_items ? SolveExact(a, b) : SolveColumnGeneration(a, b);
    auto rep = GuaranteeCheck(sol.primal, sol.objective, a, b, k, cfg.mc_trials == 0,
                              std::max<std::int64_t>(cfg.mc_trials, 1000), seed, cfg.jobs);
    rep.instance_id = std::to_string(t);
    std::string row = rep.CsvRow();
    row.erase(row.rfind(','));  // RowSink appends pass itself
    sink.Add(row, rep.pass, InstanceToJson(a, b, {{"construction", "random-subadditive-mph"}, {"seed", seed}}), seed);
  }
  return res;
}

inline ExperimentResult RunChains(const ExperimentConfig& cfg) {
  const int m = detail::Default(cfg.m, 6);
  ExperimentResult res;
  res.header = "m,chains,links,chains_per_link,enumerated,pass,seed,instance_hash";
  detail::RowSink sink(res);
  const auto c = CountChainsLinks(m);
  bool pass = true;
  if (c.enumerated) {
    pass = c.enumerated_chains == c.chains && c.enumerated_links == c.links &&
           c.min_chains_per_link == c.chains_per_link && c.max_chains_per_link == c.chains_per_link;
  }
  sink.Add(std::to_string(m) + "," + c.chains.str() + "," + c.links.str() + "," + c.chains_per_link.str() + "," +
               (c.enumerated ? "1" : "0"),
           pass, Json{{"m", m}}, cfg.seed);
  return res;
}

// Exact LP against column generation on random weighted-cover instances.
inline ExperimentResult RunLpCheck(const ExperimentConfig& cfg) {
  const int m = detail::Default(cfg.m, 8), trials = detail::Default(cfg.trials, 50);
  ExperimentResult res;
  res.header = "trial,m,exact_C,cg_C,diff,exact_verified,pass,seed,instance_hash";
  detail::RowSink sink(res);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = Rng::DeriveSeed(cfg.seed, t);
    Rng rng(seed);
    const auto a = RandomCoverCostValuation(m, rng);
    const auto b = RandomCoverCostValuation(m, rng);
    const auto ex = SolveExact(a, b);
    const auto cg = SolveColumnGeneration(a, b);
    const double diff = std::abs(ex.objective - cg.objective);
    sink.Add(std::to_string(t) + "," + std::to_string(m) + "," + detail::Num(ex.objective) + "," +
                 detail::Num(cg.objective) + "," + detail::Num(diff) + "," + (ex.exact.verified ? "1" : "0"),
             diff <= cfg.tolerance && ex.exact.verified,
             InstanceToJson(a, b, {{"construction", "random-cover-cost"}, {"seed", seed}}), seed);
  }
  return res;
}

inline ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  if (cfg.l < 4 || cfg.l % 2) throw ParameterError("l must be an even integer >= 4");
  if (cfg.name == "equality") return RunEquality(cfg);
  if (cfg.name == "efs") return RunEfs(cfg);
  if (cfg.name == "gap") return RunGap(cfg);
  if (cfg.name == "rounding-ratio") return RunRoundingRatio(cfg);
  if (cfg.name == "chains") return RunChains(cfg);
  if (cfg.name == "lp-check") return RunLpCheck(cfg);
  throw ParameterError("unknown experiment \"" + cfg.name + "\"");
}

}  // namespace auctionlab
