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
#include <optional>
#include <string>
#include <vector>

#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rational.hpp"
#include "auctionlab/rng.hpp"
#include "auctionlab/valuations.hpp"

namespace auctionlab {

// Alice receives to_alice, Bob the complement.
struct Allocation {
  ItemSet to_alice;
  ItemSet to_bob() const { return to_alice.complement(); }
};

inline Rational Welfare(const Valuation& a, const Valuation& b, const Allocation& alloc) {
  return a(alloc.to_alice) + b(alloc.to_bob());
}

struct WelfareResult {
  Rational optimum;
  Allocation witness;
};

inline void CheckSameGround(const Valuation& a, const Valuation& b) {
  if (a.ground() != b.ground()) {
    throw ParameterError("valuations over different ground sets: " + std::to_string(a.ground()) +
                         " vs " + std::to_string(b.ground()));
  }
}

// Exhaustive two-bidder welfare maximization over precomputed tables; the
// witness is the smallest bit pattern attaining the optimum.
inline WelfareResult MaxWelfare(const std::vector<Rational>& a, const std::vector<Rational>& b,
                                int m) {
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  std::uint64_t best = 0;
  Rational best_value = a[0] + b[full];
  for (std::uint64_t s = 1; s <= full; ++s) {
    const Rational w = a[s] + b[full ^ s];
    if (w > best_value) {
      best_value = w;
      best = s;
    }
  }
  return {best_value, {ItemSet::FromMask(m, best)}};
}

inline WelfareResult MaxWelfare(const Valuation& a, const Valuation& b) {
  CheckSameGround(a, b);
  RequireExhaustive(a.ground(), Budget::Current().exhaustive_items, "max welfare");
  return MaxWelfare(Tabulate(a), Tabulate(b), a.ground());
}

enum class Decision { kNo = 0, kYes = 1, kPromiseViolated = 2 };

inline std::string ToString(Decision d) {
  switch (d) {
    case Decision::kNo: return "0";
    case Decision::kYes: return "1";
    case Decision::kPromiseViolated: return "promise-violated";
  }
  return "?";
}

// 1 if some partition reaches C, 0 if every partition is below alpha * C,
// promise-violated otherwise.
inline Decision DecideWelfare(const Rational& optimum, const Rational& c, const Rational& alpha) {
  if (alpha <= 0 || alpha > 1) throw ParameterError("alpha must lie in (0, 1]");
  if (optimum >= c) return Decision::kYes;
  if (optimum < alpha * c) return Decision::kNo;
  return Decision::kPromiseViolated;
}

inline Decision DecideWelfare(const Valuation& a, const Valuation& b, const Rational& c,
                              const Rational& alpha) {
  return DecideWelfare(MaxWelfare(a, b).optimum, c, alpha);
}

// Expected welfare of the communication-free baselines.
struct TrivialProtocolReport {
  Rational grand_bundle_to_random;        // (a) M to a uniformly random player
  std::optional<Rational> random_items_exact;  // (b) each item to a fair-coin player
  double random_items_mc = 0.0;
  double random_items_mc_stderr = 0.0;
  Rational grand_bundle_second_price;     // (c) M to the higher bidder on M
};

inline TrivialProtocolReport TrivialProtocols(const Valuation& a, const Valuation& b, Rng& rng,
                                              int mc_samples = 10000) {
  CheckSameGround(a, b);
  const int m = a.ground();
  const ItemSet all = ItemSet::Full(m);
  TrivialProtocolReport out;
  const Rational am = a(all), bm = b(all);
  out.grand_bundle_to_random = (am + bm) / 2;
  out.grand_bundle_second_price = std::max(am, bm);
  if (m <= 12) {
    Rational total = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
      const ItemSet x = ItemSet::FromMask(m, s);
      total += a(x) + b(x.complement());
    }
    out.random_items_exact = total / static_cast<std::int64_t>(std::uint64_t{1} << m);
  }
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < mc_samples; ++t) {
    ItemSet x(m);
    for (int j = 0; j < m; ++j) {
      if (rng.Coin()) x.insert(j);
    }
    const double w = ToDouble(a(x) + b(x.complement()));
    sum += w;
    sum_sq += w * w;
  }
  if (mc_samples > 0) {
    const double mean = sum / mc_samples;
    out.random_items_mc = mean;
    const double var = mc_samples > 1 ? std::max(0.0, (sum_sq - mc_samples * mean * mean) /
                                                          (mc_samples - 1))
                                      : 0.0;
    out.random_items_mc_stderr = std::sqrt(var / mc_samples);
  }
  return out;
}

struct WeightedAllocation {
  Allocation allocation;
  Rational probability;
};

// Deterministic protocol built from a near-additivity gap of one bidder.
// Player "first" is Alice unless Alice has v(M) = 0, in which case roles swap.
struct NearAdditiveResult {
  enum class Branch { kSplitOnT, kGrandBundleToSecond, kGrandBundleToLarger };
  Branch branch;
  bool roles_swapped = false;
  Rational epsilon;              // (max_T v1(T) + v1(~T) - v1(M)) / (4 v1(M))
  ItemSet split;                 // the maximizing T
  std::vector<WeightedAllocation> distribution;
  Rational optimum;              // exact OPT used for the case analysis
  Rational certified_welfare;    // lower bound implied by the case analysis
  Rational expected_welfare;     // exact expectation of the distribution
};

inline std::string ToString(NearAdditiveResult::Branch b) {
  switch (b) {
    case NearAdditiveResult::Branch::kSplitOnT: return "split-on-T";
    case NearAdditiveResult::Branch::kGrandBundleToSecond: return "grand-bundle-to-second";
    case NearAdditiveResult::Branch::kGrandBundleToLarger: return "grand-bundle-to-larger";
  }
  return "?";
}

// Case analysis: when v1(M) < OPT/4 the second player has v2(M) > 3 OPT/4 and
// receives everything. Otherwise, if v1(T) + v1(~T) = (1 + 4 eps) v1(M) with
// eps > 0, giving the first player T or ~T with probability 1/2 each yields at
// least OPT/2 + 2 eps v1(M) by subadditivity of the second player. With
// eps = 0 the grand bundle goes to whoever values it more, certifying OPT/2.
inline NearAdditiveResult NearAdditiveProtocol(const Valuation& a, const Valuation& b) {
  CheckSameGround(a, b);
  const int m = a.ground();
  RequireExhaustive(m, Budget::Current().exhaustive_items, "near-additive protocol");
  const auto ta = Tabulate(a);
  const auto tb = Tabulate(b);
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;

  NearAdditiveResult out;
  out.optimum = MaxWelfare(ta, tb, m).optimum;
  out.roles_swapped = ta[full] == Rational(0);
  const auto& t1 = out.roles_swapped ? tb : ta;
  const auto& t2 = out.roles_swapped ? ta : tb;
  auto to_alice = [&](std::uint64_t first_gets) {
    const std::uint64_t s = out.roles_swapped ? (full ^ first_gets) : first_gets;
    return Allocation{ItemSet::FromMask(m, s)};
  };
  auto welfare_first_gets = [&](std::uint64_t s) { return t1[s] + t2[full ^ s]; };

  const Rational v1m = t1[full];
  std::uint64_t best_t = 0;
  Rational best_pair = t1[0] + t1[full];
  for (std::uint64_t s = 1; s <= full; ++s) {
    const Rational pair = t1[s] + t1[full ^ s];
    if (pair > best_pair) {
      best_pair = pair;
      best_t = s;
    }
  }
  out.split = ItemSet::FromMask(m, best_t);
  out.epsilon = v1m == Rational(0) ? Rational(0) : (best_pair - v1m) / (4 * v1m);

  if (4 * v1m < out.optimum) {
    // v2(M) >= OPT - v1(M) > 3 OPT / 4.
    out.branch = NearAdditiveResult::Branch::kGrandBundleToSecond;
    out.distribution = {{to_alice(0), Rational(1)}};
    out.certified_welfare = 3 * out.optimum / 4;
    out.expected_welfare = welfare_first_gets(0);
  } else if (out.epsilon > 0) {
    out.branch = NearAdditiveResult::Branch::kSplitOnT;
    out.distribution = {{to_alice(best_t), Rational(1, 2)},
                        {to_alice(full ^ best_t), Rational(1, 2)}};
    out.certified_welfare = out.optimum / 2 + 2 * out.epsilon * v1m;
    out.expected_welfare = (welfare_first_gets(best_t) + welfare_first_gets(full ^ best_t)) / 2;
  } else {
    out.branch = NearAdditiveResult::Branch::kGrandBundleToLarger;
    const std::uint64_t first_gets = t1[full] >= t2[full] ? full : 0;
    out.distribution = {{to_alice(first_gets), Rational(1)}};
    out.certified_welfare = out.optimum / 2;
    out.expected_welfare = welfare_first_gets(first_gets);
  }
  return out;
}

}  // namespace auctionlab
