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

// auctionlab: experiment runner and JSON front end for the library.
//
// Exit codes: 0 success, 1 an embedded assertion failed, 2 invalid
// parameters, schema violations or budget limits.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "auctionlab/configlp.hpp"
#include "auctionlab/errors.hpp"
#include "auctionlab/experiments.hpp"
#include "auctionlab/generators.hpp"
#include "auctionlab/hardness.hpp"
#include "auctionlab/io.hpp"
#include "auctionlab/rounding.hpp"
#include "auctionlab/sets.hpp"
#include "auctionlab/valuations.hpp"

namespace {

using namespace auctionlab;

constexpr int kSchemaVersion = 1;

struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void Emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ParameterError("cannot write " + out);
  f << text;
}

std::string ManifestPath(const std::string& csv) {
  const auto dot = csv.rfind('.');
  const auto slash = csv.rfind('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? csv.substr(0, dot) : csv) + ".manifest.json";
}

int Run(ExperimentConfig cfg, std::string out) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult res = RunExperiment(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.empty()) out = cfg.name + ".csv";
  const std::string csv = res.Csv();
  Emit(csv, out);
  const Json manifest{{"schema_version", kSchemaVersion},
                      {"config", cfg.ToJson()},
                      {"seed", cfg.seed},
                      {"inputs_hash", ContentHash(res.inputs)},
                      {"csv_hash", GitBlobHash(csv)},
                      {"rows", res.rows.size()},
                      {"all_pass", res.all_pass},
                      {"wall_time_s", wall}};
  Emit(manifest.dump(2) + "\n", ManifestPath(out));
  if (!res.all_pass) {
    std::cerr << "assertion failed; first counterexample:\n" << res.first_failure.dump(2) << "\n";
    return 1;
  }
  return 0;
}

std::set<int> ParseIndexList(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.insert(std::stoi(tok));
  }
  return out;
}

struct GenOptions {
  std::string kind;
  int m = 0, k = 0, l = 4, rank = 2;
  std::uint64_t seed = 1;
  std::string far;
  std::string out;
};

int Gen(const GenOptions& o) {
  Rng rng(o.seed);
  const Json prov{{"construction", o.kind}, {"seed", o.seed}, {"m", o.m}, {"k", o.k}, {"l", o.l}};
  Json j;
  if (o.kind == "sparse") {
    j = ToJson(RandomSparseCollection(o.m ? o.m : 10, o.l, o.k ? o.k : 6, rng).value);
  } else if (o.kind == "independent") {
    j = ToJson(SampleLIndependent(o.m ? o.m : 16, o.l, o.k ? o.k : 4, rng).value);
  } else if (o.kind == "compatible") {
    const auto inst = SampleEfsInstance(o.m ? o.m : 14, o.k ? o.k : 5, o.l, ParseIndexList(o.far), rng);
    j = Json{{"x", ToJson(inst.x)}, {"y", ToJson(inst.y)}, {"l", o.l}};
  } else if (o.kind == "cover") {
    const int m = o.m ? o.m : 10;
    j = ToJson(CoverValuation(RandomSparseCollection(m, o.l, o.k ? o.k : 6, rng).value, o.l));
  } else if (o.kind == "mph") {
    j = ToJson(RandomSubadditiveMph(o.m ? o.m : 6, o.rank, rng).value);
  } else if (o.kind == "cover-cost") {
    j = ToJson(RandomCoverCostValuation(o.m ? o.m : 8, rng));
  } else if (o.kind == "instance") {
    const int m = o.m ? o.m : 6;
    const MphValuation a(RandomSubadditiveMph(m, o.rank, rng).value);
    const MphValuation b(RandomSubadditiveMph(m, o.rank, rng).value);
    j = InstanceToJson(a, b, prov);
  } else if (o.kind == "gap-mph2") {
    const auto g = BuildMph2GapInstance();
    j = InstanceToJson(MphValuation(g.alice), MphValuation(g.bob), prov, &g.fractional);
  } else if (o.kind == "gap-cover") {
    const auto g = BuildCoverGapInstance(o.l, rng, o.m);
    j = InstanceToJson(g.alice, g.bob, prov, &g.fractional);
  } else {
    throw ParameterError("unknown gen kind \"" + o.kind + "\"");
  }
  if (!j.contains("provenance") && o.kind != "instance") j["provenance"] = prov;
  Emit(j.dump(2) + "\n", o.out);
  return 0;
}

// Runs every invariant that applies to the valuation's kind.
int Check(const std::string& path) {
  const Json j = ReadJson(path);
  ValuationPtr v;
  try {
    v = ValuationFromJson(j);
  } catch (const ConstructionError& e) {
    std::cout << Json{{"ok", false}, {"error", e.what()}}.dump(2) << "\n";
    return 1;
  }
  Json report{{"kind", v->kind()}, {"m", v->ground()}};
  bool ok = true;
  const auto verdict = CheckMonotoneSubadditive(*v);
  report["monotone"] = verdict.monotone;
  report["subadditive"] = verdict.subadditive;
  report["empty_value_zero"] = (*v)(ItemSet(v->ground())) == Rational(0);
  ok = ok && verdict.monotone && report["empty_value_zero"].get<bool>();
  if (const auto* c = dynamic_cast<const CoverValuation*>(v.get())) {
    const bool comp = ComplementIdentityCheck(*c), le = FLeSigmaCheck(*c);
    const Rational level = MphLevelLowerBound(*c);
    const bool level_ok = level >= Rational(c->ground(), c->l());
    report["complement_identity"] = comp;
    report["f_le_sigma"] = le;
    report["mph_level_lower_bound"] = io::RationalToJson(level);
    report["level_at_least_m_over_l"] = level_ok;
    ok = ok && verdict.subadditive && comp && le && level_ok;
  } else if (const auto* p = dynamic_cast<const MphValuation*>(v.get())) {
    report["used_rank"] = p->representation().UsedRank();
  }
  if (verdict.monotone_counterexample) {
    report["monotone_counterexample"] = {verdict.monotone_counterexample->first.items(),
                                         verdict.monotone_counterexample->second.items()};
  }
  if (verdict.subadditive_counterexample) {
    report["subadditive_counterexample"] = {verdict.subadditive_counterexample->first.items(),
                                            verdict.subadditive_counterexample->second.items()};
  }
  report["ok"] = ok;
  std::cout << report.dump(2) << "\n";
  return ok ? 0 : 1;
}

int SolveLp(const std::string& path, double tol, const std::string& out) {
  const Instance inst = InstanceFromJson(ReadJson(path));
  const int m = inst.alice->ground();
  Json j;
  bool ok = true;
  if (m <= Budget::Current().lp_exact_items) {
    const auto ex = SolveExact(*inst.alice, *inst.bob);
    const auto cg = SolveColumnGeneration(*inst.alice, *inst.bob);
    j = ToJson(ex);
    j["column_generation"] = {{"objective", cg.objective}, {"rounds", cg.iterations}};
    j["agreement"] = std::abs(ex.objective - cg.objective) <= tol;
    ok = j["agreement"].get<bool>();
  } else {
    j = ToJson(SolveColumnGeneration(*inst.alice, *inst.bob));
  }
  Emit(j.dump(2) + "\n", out);
  return ok ? 0 : 1;
}

int Round(const std::string& path, int k, std::int64_t trials, std::uint64_t seed, int jobs,
          const std::string& out) {
  const Instance inst = InstanceFromJson(ReadJson(path));
  const RoundingPlan plan = RoundingPlan::ForRank(k);
  Json j{{"k", k}, {"r", plan.r}, {"guarantee_constant", io::RationalToJson(plan.GuaranteeConstant())}};
  auto report = [&](const auto& frac, double c) {
    j["C"] = c;
    if (frac.m <= 12) j["exact_expected_welfare"] = ExactExpectedWelfare(plan, frac, *inst.alice, *inst.bob).str();
    if (trials > 0) {
      const auto mc = McExpectedWelfare(plan, frac, *inst.alice, *inst.bob, trials, seed, jobs);
      j["mc"] = {{"mean", mc.mean}, {"stderr", mc.stderr_}, {"trials", mc.trials}, {"seed", seed}};
    }
  };
  if (inst.fractional) {
    report(*inst.fractional, ToDouble(inst.fractional->Objective(*inst.alice, *inst.bob)));
  } else {
    const auto sol = inst.alice->ground() <= Budget::Current().lp_exact_items
                         ? SolveExact(*inst.alice, *inst.bob)
                         : SolveColumnGeneration(*inst.alice, *inst.bob);
    report(sol.primal, sol.objective);
  }
  Emit(j.dump(2) + "\n", out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-bidder combinatorial auction laboratory"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV plus a JSON manifest");
  run->add_option("experiment", cfg.name, "equality | efs | gap | rounding-ratio | chains | lp-check")->required();
  run->add_option("--m", cfg.m, "number of items");
  run->add_option("--k", cfg.k, "collection size or MPH rank");
  run->add_option("--l", cfg.l, "sparsity parameter (even, >= 4)");
  run->add_option("--seed", cfg.seed, "master seed");
  run->add_option("--trials", cfg.trials, "number of instances");
  run->add_option("--jobs", cfg.jobs, "worker threads for Monte Carlo");
  run->add_option("--out", run_out, "CSV output path");
  run->add_option("--tolerance", cfg.tolerance, "objective tolerance");
  run->add_flag("--mph2", cfg.mph2, "gap: the four-item MPH-2 instance");
  run->add_option("--mc-trials", cfg.mc_trials, "rounding-ratio: Monte Carlo trials instead of exact");

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate an instance as JSON");
  gen->add_option("kind", gen_opts.kind,
                  "sparse | independent | compatible | cover | mph | cover-cost | instance | gap-mph2 | gap-cover")
      ->required();
  gen->add_option("--m", gen_opts.m);
  gen->add_option("--k", gen_opts.k);
  gen->add_option("--l", gen_opts.l);
  gen->add_option("--rank", gen_opts.rank);
  gen->add_option("--seed", gen_opts.seed);
  gen->add_option("--far", gen_opts.far, "comma-separated far indices (compatible)");
  gen->add_option("--out", gen_opts.out);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Run the invariant suite on a valuation");
  check->add_option("--valuation", check_path)->required();

  std::string lp_path, lp_out;
  double lp_tol = 1e-6;
  auto* solve = app.add_subcommand("solve-lp", "Solve the configuration LP of an instance");
  solve->add_option("--instance", lp_path)->required();
  solve->add_option("--tolerance", lp_tol);
  solve->add_option("--out", lp_out);

  std::string round_path, round_out;
  int round_k = 2, round_jobs = 1;
  std::int64_t round_trials = 0;
  std::uint64_t round_seed = 1;
  auto* round = app.add_subcommand("round", "Expected welfare of the oblivious rounding");
  round->add_option("--instance", round_path)->required();
  round->add_option("--k", round_k);
  round->add_option("--trials", round_trials, "Monte Carlo trials (0 skips)");
  round->add_option("--seed", round_seed);
  round->add_option("--jobs", round_jobs);
  round->add_option("--out", round_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return Run(cfg, run_out);
    if (*gen) return Gen(gen_opts);
    if (*check) return Check(check_path);
    if (*solve) return SolveLp(lp_path, lp_tol, lp_out);
    if (*round) return Round(round_path, round_k, round_trials, round_seed, round_jobs, round_out);
  } catch (const ParameterError& e) {
    std::cerr << Json{{"error", "parameter"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << Json{{"error", "budget"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << Json{{"error", "schema"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "failure"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
