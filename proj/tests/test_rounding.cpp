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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "auctionlab/configlp.hpp"
#include "auctionlab/generators.hpp"
#include "auctionlab/hardness.hpp"
#include "auctionlab/rounding.hpp"

namespace auctionlab {
namespace {

// Enumerates winner, branch and every tuple of draws from the rounding
// description directly, with each player's unlisted mass on the empty bundle.
BigRational TupleOracle(int k, const ExactFractionalAllocation& frac, const Valuation& a,
                        const Valuation& b) {
  const int m = frac.m;
  int r = 0;
  while (std::pow(2.0, std::pow(2.0, r)) < k) ++r;
  std::array<std::vector<std::pair<ItemSet, BigRational>>, 2> support;
  for (int i = 0; i < 2; ++i) {
    BigRational rest(1);
    for (const auto& c : frac.columns[i]) {
      support[i].push_back({c.set, ToBig(c.prob)});
      rest -= ToBig(c.prob);
    }
    support[i].push_back({ItemSet(m), rest});
  }
  auto give = [&](int winner, const ItemSet& s) {
    return winner == kAlice ? ToBig(a(s) + b(s.complement())) : ToBig(b(s) + a(s.complement()));
  };
  BigRational total(0);
  for (int winner = 0; winner < 2; ++winner) {
    for (const auto& [s, p] : support[winner]) total += BigRational(1, 2) * BigRational(1, 2) * p * give(winner, s);
    for (int q = 0; q <= r; ++q) {
      const BigRational branch_p = q < r ? BigRational(1, 1 << (q + 2)) : BigRational(1, 1 << (r + 1));
      const int draws = 1 << q;
      std::function<void(int, ItemSet, BigRational)> rec = [&](int d, ItemSet acc, BigRational p) {
        if (d == 2 * draws) {
          total += BigRational(1, 2) * branch_p * p * give(winner, acc);
          return;
        }
        for (const auto& [s, ps] : support[d < draws ? kAlice : kBob]) rec(d + 1, acc & s, p * ps);
      };
      rec(0, ItemSet::Full(m), BigRational(1));
    }
  }
  return total;
}

ExactFractionalAllocation RandomFeasible(int m, Rng& rng) {
  ExactFractionalAllocation f;
  f.m = m;
  // Scale random columns so every item load and player mass is at most 1.
  std::vector<std::pair<int, ItemSet>> cols;
  const int n = 1 + static_cast<int>(rng.UniformBelow(3));
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < 2; ++i) {
      ItemSet s(m);
      for (int j = 0; j < m; ++j) {
        if (rng.Coin()) s.insert(j);
      }
      cols.push_back({i, s});
    }
  }
  const Rational share(1, static_cast<std::int64_t>(cols.size()));
  for (const auto& [i, s] : cols) {
    f.columns[i].push_back({s, share * Rational(1 + static_cast<std::int64_t>(rng.UniformBelow(3)), 3)});
  }
  return f;
}

TEST(RoundingPlan, DepthAgainstDirectPowerSearch) {
  for (int k : {2, 3, 4, 5, 15, 16, 17, 255, 256, 257, 1000, 65535, 65536}) {
    int r = 0;
    while (std::pow(2.0, std::pow(2.0, r)) < k) ++r;
    EXPECT_EQ(RoundingDepth(k), r) << k;
  }
  EXPECT_THROW(RoundingDepth(1), ParameterError);
  EXPECT_THROW(RoundingPlan::ForRank(65537), ParameterError);
}

TEST(RoundingPlan, ProbabilitiesSumToOneAndConstantMatchesFormula) {
  for (int k : {2, 3, 4, 8, 16, 100, 256, 4096, 65536}) {
    const auto plan = RoundingPlan::ForRank(k);
    EXPECT_EQ(plan.TotalProbability(), Rational(1)) << k;
    Rational sum = 0;
    for (const auto& br : plan.Branches()) sum += br.probability;
    EXPECT_EQ(sum, Rational(1));
    const double r = plan.r;
    const double expected = 0.5 + std::pow(2.0, -(r + 2)) * (1 - k / std::pow(4.0, std::pow(2.0, r)));
    EXPECT_NEAR(ToDouble(plan.GuaranteeConstant()), expected, 1e-15) << k;
    EXPECT_GT(plan.GuaranteeConstant(), Rational(1, 2));
  }
  EXPECT_EQ(RoundingPlan::ForRank(2).GuaranteeConstant(), Rational(5, 8));
}

TEST(ExactExpectation, MatchesTupleEnumeration) {
  Rng rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 4;
    const int k = trial % 3 == 0 ? 5 : (trial % 3 == 1 ? 4 : 2);
    const auto a = RandomCoverCostValuation(m, rng);
    const auto b = RandomCoverCostValuation(m, rng);
    const auto frac = RandomFeasible(m, rng);
    ASSERT_TRUE(frac.IsFeasible());
    const auto plan = RoundingPlan::ForRank(k);
    EXPECT_EQ(ExactExpectedWelfare(plan, frac, a, b), TupleOracle(k, frac, a, b)) << trial;
    EXPECT_LE(ExactExpectedWelfare(plan, frac, a, b), ToBig(MaxWelfare(a, b).optimum));
  }
}

TEST(ExactExpectation, PointMassClosedForm) {
  Rng rng(52);
  for (int k : {2, 4, 16}) {
    const int m = 4;
    const auto a = RandomCoverCostValuation(m, rng);
    const auto b = RandomCoverCostValuation(m, rng);
    ExactFractionalAllocation f;
    f.m = m;
    f.columns[kAlice] = {{ItemSet::Full(m), Rational(1)}};
    const Rational am = a(ItemSet::Full(m)), bm = b(ItemSet::Full(m));
    EXPECT_EQ(ExactExpectedWelfare(RoundingPlan::ForRank(k), f, a, b),
              ToBig(Rational(3, 4) * am + Rational(1, 4) * bm));
  }
}

TEST(ExactExpectation, ZeroValuationsAndEmptySupport) {
  const FunctionValuation zero(3, [](const ItemSet&) { return Rational(0); });
  Rng rng(53);
  const auto frac = RandomFeasible(3, rng);
  EXPECT_EQ(ExactExpectedWelfare(RoundingPlan::ForRank(2), frac, zero, zero), BigRational(0));
  ExactFractionalAllocation empty;
  empty.m = 3;
  EXPECT_THROW(ExactExpectedWelfare(RoundingPlan::ForRank(2), empty, zero, zero), ParameterError);
  EXPECT_THROW(RoundMph2(empty, rng), ParameterError);
  ExactFractionalAllocation over;
  over.m = 3;
  over.columns[kAlice] = {{ItemSet(3, {0}), Rational(1)}};
  over.columns[kBob] = {{ItemSet(3, {0}), Rational(1, 2)}};
  EXPECT_THROW(RoundMph2(over, rng), ParameterError);
}

TEST(Intersections, MarginalsRespectTheLoadBound) {
  Rng rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const auto frac = RandomFeasible(5, rng);
    for (int q = 0; q <= 2; ++q) {
      const auto marg = IntersectionMarginals(frac, q);
      for (int j = 0; j < 5; ++j) {
        const BigRational pa = ToBig(frac.ItemMass(kAlice, j)), pb = ToBig(frac.ItemMass(kBob, j));
        BigRational expected = 1;
        for (int d = 0; d < (1 << q); ++d) expected *= pa * pb;
        EXPECT_EQ(marg[j], expected);
        EXPECT_LE(ToDouble(marg[j]), std::pow(0.25, 1 << q) + 1e-15);
      }
    }
  }
}

TEST(Intersections, SampledFrequenciesMatchMarginals) {
  // Every item carries load exactly 1, split 1/2 : 1/2, so level-q marginals
  // equal (1/4)^(2^q).
  ExactFractionalAllocation f;
  f.m = 4;
  f.columns[kAlice] = {{ItemSet(4, {0, 1}), Rational(1, 2)}, {ItemSet(4, {2, 3}), Rational(1, 2)}};
  f.columns[kBob] = {{ItemSet(4, {0, 2}), Rational(1, 2)}, {ItemSet(4, {1, 3}), Rational(1, 2)}};
  const auto plan = RoundingPlan::ForRank(4);
  std::map<int, std::pair<int, int>> hits;  // q -> (item-0 hits, trials)
  for (std::uint64_t t = 0; t < 100000; ++t) {
    Rng rng = Rng::Derive(9, t);
    const auto out = RoundMphk(f, plan, rng);
    if (out.q < 0) continue;
    const ItemSet won = out.winner == kAlice ? out.allocation.to_alice : out.allocation.to_bob();
    hits[out.q].first += won.contains(0);
    hits[out.q].second += 1;
  }
  for (const auto& [q, h] : hits) {
    const double p = ToDouble(IntersectionMarginals(f, q)[0]);
    EXPECT_DOUBLE_EQ(p, std::pow(0.25, 1 << q));
    const double freq = static_cast<double>(h.first) / h.second;
    EXPECT_NEAR(freq, p, 4 * std::sqrt(p * (1 - p) / h.second) + 1e-12) << q;
  }
}

TEST(MonteCarlo, AgreesWithExactAndIsThreadCountInvariant) {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 3 + trial % 3;
    const auto a = RandomCoverCostValuation(m, rng);
    const auto b = RandomCoverCostValuation(m, rng);
    const auto frac = RandomFeasible(m, rng);
    const auto plan = RoundingPlan::ForRank(trial % 2 ? 4 : 2);
    const double exact = ToDouble(ExactExpectedWelfare(plan, frac, a, b));
    const auto one = McExpectedWelfare(plan, frac, a, b, 20000, 77, 1);
    const auto three = McExpectedWelfare(plan, frac, a, b, 20000, 77, 3);
    EXPECT_DOUBLE_EQ(one.mean, three.mean);
    EXPECT_NEAR(one.mean, exact, 4 * one.stderr_ + 1e-12);
  }
}

TEST(Rounding, DeterministicUnderSeed) {
  const auto g = BuildMph2GapInstance();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng x(seed), y(seed);
    const auto ox = RoundMph2(g.fractional, x);
    const auto oy = RoundMph2(g.fractional, y);
    EXPECT_EQ(ox.allocation.to_alice, oy.allocation.to_alice);
    EXPECT_EQ(ox.tag(), oy.tag());
  }
}

TEST(Guarantee, SubadditiveMph2InstancesClearFiveEighths) {
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + trial % 4;
    const MphValuation a(RandomSubadditiveMph(m, 2, rng).value);
    const MphValuation b(RandomSubadditiveMph(m, 2, rng).value);
    const auto sol = SolveExact(a, b);
    const auto rep = GuaranteeCheck(sol.primal, sol.objective, a, b, 2);
    EXPECT_TRUE(rep.pass) << rep.CsvRow();
    EXPECT_GE(rep.ratio, 0.625 - 1e-9);
    EXPECT_EQ(rep.constant, Rational(5, 8));
  }
}

TEST(Guarantee, GapInstanceRoundsToExactlyHalf) {
  const auto g = BuildMph2GapInstance();
  const MphValuation a(g.alice), b(g.bob);
  EXPECT_EQ(ExactExpectedWelfare(RoundingPlan::ForRank(2), g.fractional, a, b), BigRational(1));
  const auto rep = GuaranteeCheck(g.fractional, 2.0, a, b, 2);
  EXPECT_DOUBLE_EQ(rep.ratio, 0.5);
  EXPECT_FALSE(rep.pass);
}

TEST(Guarantee, MonteCarloModeOnRankFour) {
  Rng rng(57);
  const MphValuation a(RandomSubadditiveMph(6, 4, rng).value);
  const MphValuation b(RandomSubadditiveMph(6, 4, rng).value);
  const auto sol = SolveExact(a, b);
  const auto mc = GuaranteeCheck(sol.primal, sol.objective, a, b, 4, false, 50000, 3, 2);
  const auto ex = GuaranteeCheck(sol.primal, sol.objective, a, b, 4, true);
  EXPECT_TRUE(ex.pass);
  EXPECT_TRUE(mc.pass);
  EXPECT_NEAR(mc.expected_welfare, ex.expected_welfare, 4 * mc.stderr_ + 1e-12);
  EXPECT_EQ(ex.constant, Rational(19, 32));
}

}  // namespace
}  // namespace auctionlab
