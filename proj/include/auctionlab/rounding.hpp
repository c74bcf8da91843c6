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
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "auctionlab/configlp.hpp"
#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rational.hpp"
#include "auctionlab/rng.hpp"
#include "auctionlab/valuations.hpp"
#include "auctionlab/welfare.hpp"

namespace auctionlab {

// Smallest r >= 0 with 2^(2^r) >= k, i.e. ceil(log2(log2(k))).
inline int RoundingDepth(int k) {
  if (k < 2) throw ParameterError("rounding needs k >= 2, got " + std::to_string(k));
  int r = 0;
  // 2^(2^r) >= k  <=>  2^r >= log2(k); compare in integers via bit widths.
  while (r < 6 && (std::uint64_t{1} << (std::uint64_t{1} << r)) < static_cast<std::uint64_t>(k)) ++r;
  return r;
}

struct RoundingBranch {
  enum class Kind { kSplit, kIntersect };
  Kind kind;
  int q = -1;      // intersection level, -1 for the split branch
  int draws = 0;   // draws per player
  Rational probability;
};

// Branch structure: with probability 1/2 the winner takes one draw of its own
// distribution (split); for 0 <= q < r with probability 1/2^(q+2) the winner
// takes the intersection of 2^q draws per player; the remaining 1/2^(r+1)
// goes to the intersection of 2^r draws per player.
struct RoundingPlan {
  int k = 2;
  int r = 0;
  Rational lambda{1, 2};
  std::vector<Rational> lambda_q;
  Rational lambda_r{1, 2};

  static RoundingPlan ForRank(int k) {
    RoundingPlan plan;
    if (k > 65536) throw ParameterError("rounding plans are supported for k <= 65536");
    plan.k = k;
    plan.r = RoundingDepth(k);
    for (int q = 0; q < plan.r; ++q) plan.lambda_q.emplace_back(1, std::int64_t{1} << (q + 2));
    plan.lambda_r = Rational(1, std::int64_t{1} << (plan.r + 1));
    return plan;
  }

  std::vector<RoundingBranch> Branches() const {
    std::vector<RoundingBranch> out;
    out.push_back({RoundingBranch::Kind::kSplit, -1, 1, lambda});
    for (int q = 0; q < r; ++q) out.push_back({RoundingBranch::Kind::kIntersect, q, 1 << q, lambda_q[q]});
    out.push_back({RoundingBranch::Kind::kIntersect, r, 1 << r, lambda_r});
    return out;
  }

  Rational TotalProbability() const {
    Rational total = lambda + lambda_r;
    for (const auto& l : lambda_q) total += l;
    return total;
  }

  // 1/2 + (1/2^(r+2)) * (1 - k / 4^(2^r)).
  Rational GuaranteeConstant() const {
    const std::int64_t four_pow = std::int64_t{1} << (2 * (std::int64_t{1} << r));
    return Rational(1, 2) + Rational(1, std::int64_t{1} << (r + 2)) * (Rational(1) - Rational(k, four_pow));
  }
};

struct RoundingOutcome {
  Allocation allocation;
  int branch = 0;  // index into RoundingPlan::Branches()
  int q = -1;      // -1 for the split branch
  int winner = kAlice;

  std::string tag() const { return q < 0 ? "case-1" : "case-q" + std::to_string(q); }
};

namespace detail {

template <class P>
void CheckRoundable(const BasicFractionalAllocation<P>& frac) {
  if (frac.columns[0].empty() && frac.columns[1].empty()) {
    throw ParameterError("fractional allocation has empty support");
  }
  P tol(0);
  if constexpr (std::is_floating_point_v<P>) tol = 1e-9;
  if (!frac.IsFeasible(tol)) throw ParameterError("fractional allocation is not LP-feasible");
}

template <class P>
ItemSet Draw(const BasicFractionalAllocation<P>& frac, int player, Rng& rng) {
  double u = rng.Uniform01();
  for (const auto& c : frac.columns[player]) {
    u -= ToDouble(c.prob);
    if (u < 0) return c.set;
  }
  return ItemSet(frac.m);  // leftover mass sits on the empty bundle
}

}  // namespace detail

// One run of the scheme. The winner bit is drawn first, then the branch,
// then the draws.
template <class P>
RoundingOutcome RoundMphk(const BasicFractionalAllocation<P>& frac, const RoundingPlan& plan, Rng& rng) {
  detail::CheckRoundable(frac);
  RoundingOutcome out;
  out.winner = rng.Coin() ? kBob : kAlice;
  const auto branches = plan.Branches();
  double u = rng.Uniform01();
  std::size_t b = 0;
  for (; b + 1 < branches.size(); ++b) {
    u -= ToDouble(branches[b].probability);
    if (u < 0) break;
  }
  out.branch = static_cast<int>(b);
  out.q = branches[b].q;
  ItemSet won(frac.m);
  if (branches[b].kind == RoundingBranch::Kind::kSplit) {
    won = detail::Draw(frac, out.winner, rng);
  } else {
    won = ItemSet::Full(frac.m);
    for (int player = 0; player < 2; ++player) {
      for (int d = 0; d < branches[b].draws; ++d) won &= detail::Draw(frac, player, rng);
    }
  }
  out.allocation.to_alice = out.winner == kAlice ? won : won.complement();
  return out;
}

template <class P>
RoundingOutcome RoundMph2(const BasicFractionalAllocation<P>& frac, Rng& rng) {
  return RoundMphk(frac, RoundingPlan::ForRank(2), rng);
}

namespace detail {

template <class Scalar, class P>
Scalar ToScalar(const P& p) {
  if constexpr (std::is_same_v<Scalar, P>) {
    return p;
  } else if constexpr (std::is_same_v<P, double>) {
    if constexpr (std::is_same_v<Scalar, double>) {
      return p;
    } else {
      return Scalar(Rationalize(p));
    }
  } else if constexpr (std::is_same_v<Scalar, double>) {
    return ToDouble(p);
  } else {
    return Scalar(ToBig(p));
  }
}

// Per-player distribution over masks, with the leftover mass on the empty
// bundle. Rationalized masses exceeding 1 by rounding are renormalized.
template <class Scalar, class P>
std::map<std::uint64_t, Scalar> Distribution(const BasicFractionalAllocation<P>& frac, int player) {
  std::map<std::uint64_t, Scalar> dist;
  Scalar total(0);
  for (const auto& c : frac.columns[player]) {
    const Scalar x = ToScalar<Scalar>(c.prob);
    if (x == Scalar(0)) continue;
    dist[c.set.mask()] += x;
    total += x;
  }
  if (total > Scalar(1)) {
    for (auto& [mask, x] : dist) x /= total;
  } else if (total < Scalar(1)) {
    dist[0] += Scalar(1) - total;
  }
  return dist;
}

template <class Scalar>
std::map<std::uint64_t, Scalar> IntersectWith(const std::map<std::uint64_t, Scalar>& acc,
                                              const std::map<std::uint64_t, Scalar>& draw) {
  std::map<std::uint64_t, Scalar> out;
  for (const auto& [s, ps] : acc) {
    for (const auto& [t, pt] : draw) out[s & t] += ps * pt;
  }
  return out;
}

}  // namespace detail

// Exact expectation of the scheme. Draw tuples are not enumerated one by one:
// the law of an intersection of independent draws is built by convolving
// distributions over masks, which gives the same value with cost bounded by
// 2^m times the support size per draw.
template <class Scalar = BigRational, class P>
Scalar ExactExpectedWelfare(const RoundingPlan& plan, const BasicFractionalAllocation<P>& frac,
                            const Valuation& a, const Valuation& b) {
  CheckSameGround(a, b);
  detail::CheckRoundable(frac);
  const int m = frac.m;
  RequireExhaustive(m, Budget::Current().exhaustive_items, "exact rounding expectation");
  const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  auto val = [&](const Valuation& v, std::uint64_t mask) {
    return detail::ToScalar<Scalar>(v(ItemSet::FromMask(m, mask)));
  };
  const std::array<const Valuation*, 2> v{&a, &b};
  const std::array<std::map<std::uint64_t, Scalar>, 2> dist{detail::Distribution<Scalar>(frac, 0),
                                                            detail::Distribution<Scalar>(frac, 1)};
  Scalar total(0);
  for (const auto& branch : plan.Branches()) {
    Scalar value(0);
    if (branch.kind == RoundingBranch::Kind::kSplit) {
      for (int x = 0; x < 2; ++x) {
        for (const auto& [s, p] : dist[x]) value += p * (val(*v[x], s) + val(*v[1 - x], full & ~s));
      }
    } else {
      std::map<std::uint64_t, Scalar> acc{{full, Scalar(1)}};
      for (int player = 0; player < 2; ++player) {
        for (int d = 0; d < branch.draws; ++d) acc = detail::IntersectWith(acc, dist[player]);
      }
      for (const auto& [s, p] : acc) {
        value += p * (val(a, s) + val(b, full & ~s) + val(b, s) + val(a, full & ~s));
      }
    }
    total += detail::ToScalar<Scalar>(branch.probability) * value / Scalar(2);
  }
  return total;
}

// Exact marginal Pr[i in S^q] of the level-q intersection for each item.
template <class Scalar = BigRational, class P>
std::vector<Scalar> IntersectionMarginals(const BasicFractionalAllocation<P>& frac, int q) {
  const int m = frac.m;
  std::vector<Scalar> out(m, Scalar(0));
  for (int j = 0; j < m; ++j) {
    Scalar prob(1);
    for (int player = 0; player < 2; ++player) {
      Scalar pj(0);
      for (const auto& c : frac.columns[player]) {
        if (c.set.contains(j)) pj += detail::ToScalar<Scalar>(c.prob);
      }
      for (int d = 0; d < (1 << q); ++d) prob *= pj;
    }
    out[j] = prob;
  }
  return out;
}

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t trials = 0;
};

// Trial t uses Rng::Derive(seed, t), so the estimate does not depend on
// the number of threads.
template <class P>
McEstimate McExpectedWelfare(const RoundingPlan& plan, const BasicFractionalAllocation<P>& frac,
                             const Valuation& a, const Valuation& b, std::int64_t trials,
                             std::uint64_t seed, int jobs = 1) {
  CheckSameGround(a, b);
  detail::CheckRoundable(frac);
  if (trials < 1) throw ParameterError("Monte Carlo needs at least one trial");
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::min<std::int64_t>(trials, 64))));
  std::vector<double> ta, tb;
  if (frac.m <= 20) {
    for (const auto& r : Tabulate(a)) ta.push_back(ToDouble(r));
    for (const auto& r : Tabulate(b)) tb.push_back(ToDouble(r));
  }
  std::vector<double> values(static_cast<std::size_t>(trials));
  auto work = [&](int job) {
    for (std::int64_t t = job; t < trials; t += jobs) {
      Rng rng = Rng::Derive(seed, static_cast<std::uint64_t>(t));
      const auto outcome = RoundMphk(frac, plan, rng);
      double w;
      if (!ta.empty()) {
        w = ta[outcome.allocation.to_alice.mask()] + tb[outcome.allocation.to_bob().mask()];
      } else {
        w = ToDouble(Welfare(a, b, outcome.allocation));
      }
      values[static_cast<std::size_t>(t)] = w;
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& th : pool) th.join();
  }
  McEstimate est;
  est.trials = trials;
  double sum = 0.0;
  for (double w : values) sum += w;
  est.mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double w : values) ss += (w - est.mean) * (w - est.mean);
  est.stderr_ = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
  return est;
}

struct GuaranteeReport {
  std::string instance_id;
  int k = 2;
  double c = 0.0;
  bool exact = true;
  double expected_welfare = 0.0;
  double stderr_ = 0.0;
  double ratio = 0.0;
  Rational constant;
  double bound = 0.0;
  bool pass = false;
  double margin = 0.0;  // expected - bound (plus 3 stderr in MC mode)

  static std::string CsvHeader() { return "instance_id,k,C,exact_or_mc,expected_welfare,ratio,bound,pass"; }
  std::string CsvRow() const {
    std::ostringstream os;
    os.precision(12);
    os << instance_id << ',' << k << ',' << c << ',' << (exact ? "exact" : "mc") << ','
       << expected_welfare << ',' << ratio << ',' << bound << ',' << (pass ? 1 : 0);
    return os.str();
  }
};

// Compares the scheme's expected welfare with constant * C, where the
// constant is RoundingPlan::GuaranteeConstant() (0.625 for k = 2). Exact
// mode allows 1e-9 slack; Monte-Carlo mode allows 3 standard errors.
template <class P>
GuaranteeReport GuaranteeCheck(const BasicFractionalAllocation<P>& frac, double c, const Valuation& a,
                               const Valuation& b, int k, bool exact = true,
                               std::int64_t trials = 100000, std::uint64_t seed = 1, int jobs = 1) {
  const RoundingPlan plan = RoundingPlan::ForRank(k);
  GuaranteeReport rep;
  rep.k = k;
  rep.c = c;
  rep.exact = exact;
  rep.constant = plan.GuaranteeConstant();
  rep.bound = ToDouble(rep.constant) * c;
  if (exact) {
    rep.expected_welfare = ToDouble(ExactExpectedWelfare<BigRational>(plan, frac, a, b));
    rep.margin = rep.expected_welfare - rep.bound;
    rep.pass = rep.margin >= -1e-9;
  } else {
    const auto est = McExpectedWelfare(plan, frac, a, b, trials, seed, jobs);
    rep.expected_welfare = est.mean;
    rep.stderr_ = est.stderr_;
    rep.margin = est.mean + 3 * est.stderr_ - rep.bound;
    rep.pass = rep.margin >= 0;
  }
  rep.ratio = c > 0 ? rep.expected_welfare / c : 1.0;
  return rep;
}

}  // namespace auctionlab
