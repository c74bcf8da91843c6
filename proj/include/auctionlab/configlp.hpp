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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rational.hpp"
#include "auctionlab/simplex.hpp"
#include "auctionlab/valuations.hpp"
#include "auctionlab/welfare.hpp"

namespace auctionlab {

inline constexpr int kAlice = 0;
inline constexpr int kBob = 1;

template <class P>
struct Column {
  ItemSet set;
  P prob;
};

// x_i(S) for the two players. Mass not listed explicitly sits on the empty
// bundle, so each player's listed probabilities sum to at most 1.
template <class P>
struct BasicFractionalAllocation {
  int m = 0;
  std::array<std::vector<Column<P>>, 2> columns;

  P TotalMass(int player) const {
    P total(0);
    for (const auto& c : columns[player]) total += c.prob;
    return total;
  }

  // Marginal probability that player receives item j.
  P ItemMass(int player, int j) const {
    P total(0);
    for (const auto& c : columns[player]) {
      if (c.set.contains(j)) total += c.prob;
    }
    return total;
  }

  P ItemLoad(int j) const { return ItemMass(kAlice, j) + ItemMass(kBob, j); }

  P Objective(const Valuation& a, const Valuation& b) const {
    P total(0);
    for (const auto& c : columns[kAlice]) total += c.prob * FromRational<P>(a(c.set));
    for (const auto& c : columns[kBob]) total += c.prob * FromRational<P>(b(c.set));
    return total;
  }

  // Probabilities >= 0, per-player mass <= 1, item loads <= 1, within tol.
  bool IsFeasible(const P& tol = P(0)) const {
    for (int i = 0; i < 2; ++i) {
      for (const auto& c : columns[i]) {
        if (c.set.ground() != m || c.prob < -tol) return false;
      }
      if (TotalMass(i) > P(1) + tol) return false;
    }
    for (int j = 0; j < m; ++j) {
      if (ItemLoad(j) > P(1) + tol) return false;
    }
    return true;
  }
};

using FractionalAllocation = BasicFractionalAllocation<double>;
using ExactFractionalAllocation = BasicFractionalAllocation<Rational>;

template <class Out, class In>
BasicFractionalAllocation<Out> ConvertAllocation(const BasicFractionalAllocation<In>& in) {
  BasicFractionalAllocation<Out> out;
  out.m = in.m;
  for (int i = 0; i < 2; ++i) {
    for (const auto& c : in.columns[i]) {
      if constexpr (std::is_same_v<In, Rational>) {
        out.columns[i].push_back({c.set, FromRational<Out>(c.prob)});
      } else {
        out.columns[i].push_back({c.set, static_cast<Out>(c.prob)});
      }
    }
  }
  return out;
}

// Result of an exact re-check of a floating-point LP solution: the primal and
// dual are snapped to nearby rationals and checked for exact feasibility and
// equal objectives, which certifies optimality.
struct ExactCertificate {
  bool verified = false;
  BigRational objective;
  std::string failure;
};

struct LpSolution {
  FractionalAllocation primal;
  double objective = 0.0;       // primal objective C
  double dual_objective = 0.0;  // sum_j p_j + sum_i u_i with the tightest u_i
  std::array<double, 2> u{0.0, 0.0};
  std::vector<double> p;
  int iterations = 0;           // simplex pivots, or master solves for column generation
  int columns_generated = 0;
  ExactCertificate exact;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double pricing_tol = 1e-9;
  int max_rounds = 0;  // column generation rounds; 0 means 1000 * m
  bool verify_exact = true;
};

namespace detail {

struct LpTables {
  int m;
  std::array<std::vector<double>, 2> value;
  std::array<std::vector<Rational>, 2> exact;
};

inline LpTables MakeTables(const Valuation& a, const Valuation& b) {
  CheckSameGround(a, b);
  LpTables t;
  t.m = a.ground();
  t.exact[0] = Tabulate(a);
  t.exact[1] = Tabulate(b);
  for (int i = 0; i < 2; ++i) {
    t.value[i].reserve(t.exact[i].size());
    for (const auto& r : t.exact[i]) t.value[i].push_back(ToDouble(r));
  }
  return t;
}

struct MasterColumn {
  int player;
  std::uint64_t mask;
};

// Rows: 0,1 player masses; 2+j item loads.
inline LpSolution SolveMaster(const LpTables& t, const std::vector<MasterColumn>& cols,
                              const LpOptions& opt) {
  DenseLp lp;
  lp.rows = 2 + t.m;
  lp.cols = static_cast<int>(cols.size());
  lp.a.assign(static_cast<std::size_t>(lp.rows) * lp.cols, 0.0);
  lp.b.assign(lp.rows, 1.0);
  lp.c.resize(lp.cols);
  for (int k = 0; k < lp.cols; ++k) {
    const auto& col = cols[k];
    lp.at(col.player, k) = 1.0;
    for (std::uint64_t w = col.mask; w; w &= w - 1) lp.at(2 + std::countr_zero(w), k) = 1.0;
    lp.c[k] = t.value[col.player][col.mask];
  }
  SimplexOptions sopt;
  sopt.optimality_tol = opt.feasibility_tol;
  const SimplexResult res = SolveDenseLp(lp, sopt);
  if (res.status != SimplexResult::Status::kOptimal) {
    throw NumericalError("configuration LP master did not reach optimality");
  }
  LpSolution sol;
  sol.primal.m = t.m;
  for (int k = 0; k < lp.cols; ++k) {
    if (res.x[k] > opt.feasibility_tol) {
      sol.primal.columns[cols[k].player].push_back({ItemSet::FromMask(t.m, cols[k].mask), res.x[k]});
    }
  }
  sol.objective = res.objective;
  sol.u = {res.duals[0], res.duals[1]};
  sol.p.assign(res.duals.begin() + 2, res.duals.end());
  sol.iterations = res.iterations;
  return sol;
}

// Best utility max_S v_i(S) - p(S) for each player, and the maximizing bundle.
inline std::pair<double, std::uint64_t> BestUtility(const LpTables& t, int player,
                                                   const std::vector<double>& p) {
  const ItemSet s = DemandQuery<double>(t.value[player], t.m, std::span<const double>(p));
  double price = 0.0;
  for (int j : s.items()) price += p[j];
  return {t.value[player][s.mask()] - price, s.mask()};
}

inline void FinishDual(const LpTables& t, LpSolution& sol) {
  double dual = 0.0;
  for (double pj : sol.p) dual += pj;
  for (int i = 0; i < 2; ++i) dual += std::max(0.0, BestUtility(t, i, sol.p).first);
  sol.dual_objective = dual;
}

inline ExactCertificate VerifyExact(const LpTables& t, const LpSolution& sol) {
  ExactCertificate cert;
  const int m = t.m;
  const BigRational one(1), zero(0);
  // Primal.
  BigRational primal(0);
  std::vector<BigRational> load(m, zero);
  for (int i = 0; i < 2; ++i) {
    BigRational mass(0);
    for (const auto& c : sol.primal.columns[i]) {
      const BigRational x = Rationalize(c.prob);
      if (x < 0) {
        cert.failure = "negative primal probability";
        return cert;
      }
      mass += x;
      primal += x * ToBig(t.exact[i][c.set.mask()]);
      for (int j : c.set.items()) load[j] += x;
    }
    if (mass > one) {
      cert.failure = "player mass exceeds 1 after rationalization";
      return cert;
    }
  }
  for (int j = 0; j < m; ++j) {
    if (load[j] > one) {
      cert.failure = "item load exceeds 1 after rationalization";
      return cert;
    }
  }
  // Dual: snap prices, then take the tightest u_i.
  std::vector<BigRational> p(m);
  BigRational dual(0);
  for (int j = 0; j < m; ++j) {
    p[j] = Rationalize(sol.p[j]);
    if (p[j] < 0) {
      cert.failure = "negative price";
      return cert;
    }
    dual += p[j];
  }
  const std::size_t n = std::size_t{1} << m;
  std::vector<BigRational> cost(n);
  cost[0] = 0;
  for (std::size_t s = 1; s < n; ++s) cost[s] = cost[s & (s - 1)] + p[std::countr_zero(s)];
  for (int i = 0; i < 2; ++i) {
    BigRational best(0);
    for (std::size_t s = 0; s < n; ++s) {
      const BigRational u = ToBig(t.exact[i][s]) - cost[s];
      if (u > best) best = u;
    }
    dual += best;
  }
  if (primal != dual) {
    cert.failure = "rationalized primal " + primal.str() + " != dual " + dual.str();
    return cert;
  }
  cert.verified = true;
  cert.objective = primal;
  return cert;
}

inline void AttachEmptyMass(LpSolution& sol) {
  // Explicit empty-bundle columns keep each player's mass at exactly 1.
  for (int i = 0; i < 2; ++i) {
    const double rest = 1.0 - sol.primal.TotalMass(i);
    if (rest > 1e-12) sol.primal.columns[i].push_back({ItemSet(sol.primal.m), rest});
  }
}

}  // namespace detail

// Full column enumeration: one column per player and non-empty bundle.
inline LpSolution SolveExact(const Valuation& a, const Valuation& b, const LpOptions& opt = {}) {
  RequireExhaustive(a.ground(), Budget::Current().lp_exact_items, "exact configuration LP");
  const auto t = detail::MakeTables(a, b);
  std::vector<detail::MasterColumn> cols;
  for (int i = 0; i < 2; ++i) {
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << t.m); ++s) cols.push_back({i, s});
  }
  LpSolution sol = detail::SolveMaster(t, cols, opt);
  detail::FinishDual(t, sol);
  if (opt.verify_exact) sol.exact = detail::VerifyExact(t, sol);
  detail::AttachEmptyMass(sol);
  return sol;
}

// Column generation: the restricted primal is re-solved, and its dual prices
// are handed to each player's demand oracle; a bundle with utility above u_i
// is a violated dual constraint and enters as a new column. Stops when no
// player has a violated constraint.
inline LpSolution SolveColumnGeneration(const Valuation& a, const Valuation& b,
                                        const LpOptions& opt = {}) {
  RequireExhaustive(a.ground(), Budget::Current().exhaustive_items, "demand-query column generation");
  const auto t = detail::MakeTables(a, b);
  const std::uint64_t full = (std::uint64_t{1} << t.m) - 1;
  std::vector<detail::MasterColumn> cols;
  std::set<std::pair<int, std::uint64_t>> present;
  for (int i = 0; i < 2; ++i) {
    if (full != 0) {
      cols.push_back({i, full});
      present.insert({i, full});
    }
  }
  const int max_rounds = opt.max_rounds > 0 ? opt.max_rounds : 1000 * std::max(1, t.m);
  LpSolution sol;
  int pivots = 0;
  for (int round = 1;; ++round) {
    sol = detail::SolveMaster(t, cols, opt);
    pivots += sol.iterations;
    bool added = false;
    for (int i = 0; i < 2; ++i) {
      const auto [utility, mask] = detail::BestUtility(t, i, sol.p);
      if (utility > sol.u[i] + opt.pricing_tol && !present.count({i, mask})) {
        cols.push_back({i, mask});
        present.insert({i, mask});
        added = true;
      }
    }
    if (!added) {
      sol.iterations = round;
      break;
    }
    if (round >= max_rounds) {
      detail::FinishDual(t, sol);
      throw ConvergenceError("column generation hit its round cap", sol.dual_objective - sol.objective);
    }
  }
  sol.columns_generated = static_cast<int>(cols.size());
  detail::FinishDual(t, sol);
  if (opt.verify_exact) sol.exact = detail::VerifyExact(t, sol);
  detail::AttachEmptyMass(sol);
  return sol;
}

struct IntegralityGapReport {
  Rational integral_optimum;
  double lp_objective = 0.0;
  double gap = 0.0;                  // integral optimum / C
  std::optional<BigRational> exact;  // when the LP optimum was certified exactly
};

inline IntegralityGapReport IntegralityGap(const Valuation& a, const Valuation& b,
                                           const LpSolution& sol) {
  IntegralityGapReport out;
  out.integral_optimum = MaxWelfare(a, b).optimum;
  out.lp_objective = sol.objective;
  out.gap = sol.objective > 0 ? ToDouble(out.integral_optimum) / sol.objective : 1.0;
  if (sol.exact.verified) {
    out.exact = sol.exact.objective == 0 ? BigRational(1)
                                         : BigRational(ToBig(out.integral_optimum) / sol.exact.objective);
  }
  return out;
}

inline IntegralityGapReport IntegralityGap(const Valuation& a, const Valuation& b) {
  const LpSolution sol = a.ground() <= Budget::Current().lp_exact_items ? SolveExact(a, b)
                                                                         : SolveColumnGeneration(a, b);
  return IntegralityGap(a, b, sol);
}

}  // namespace auctionlab
