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

#include <functional>
#include <memory>

#include "auctionlab/generators.hpp"
#include "auctionlab/welfare.hpp"

namespace auctionlab {
namespace {

// Assigns items one at a time to either bidder and evaluates leaves through
// the value-query interface only.
Rational RecursiveOptimum(const Valuation& a, const Valuation& b) {
  const int m = a.ground();
  std::function<Rational(int, ItemSet)> go = [&](int j, ItemSet alice) -> Rational {
    if (j == m) return a(alice) + b(alice.complement());
    ItemSet with = alice;
    with.insert(j);
    return std::max(go(j + 1, alice), go(j + 1, with));
  };
  return go(0, ItemSet(m));
}

std::unique_ptr<Valuation> RandomSubadditive(int m, Rng& rng) {
  if (rng.Coin()) return std::make_unique<ExplicitValuation>(RandomCoverCostValuation(m, rng));
  return std::make_unique<MphValuation>(RandomSubadditiveMph(m, 2, rng).value);
}

TEST(MaxWelfare, MatchesItemRecursionOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + trial % 8;
    const auto a = RandomSubadditive(m, rng);
    const auto b = RandomSubadditive(m, rng);
    const auto r = MaxWelfare(*a, *b);
    EXPECT_EQ(r.optimum, RecursiveOptimum(*a, *b));
    EXPECT_EQ(Welfare(*a, *b, r.witness), r.optimum);
  }
}

TEST(MaxWelfare, CoverValuationsAndGroundMismatch) {
  Rng rng(32);
  const CoverValuation f(RandomSparseCollection(8, 4, 3, rng).value, 4);
  const CoverValuation g(RandomSparseCollection(8, 4, 3, rng).value, 4);
  const auto r = MaxWelfare(f, g);
  EXPECT_EQ(r.optimum, RecursiveOptimum(f, g));
  EXPECT_GE(r.optimum, Rational(4));  // f(M) + g(empty)
  const AdditiveValuation small({Rational(1)});
  EXPECT_THROW(MaxWelfare(f, small), ParameterError);
}

TEST(DecideWelfare, ThresholdsAndPromise) {
  EXPECT_EQ(DecideWelfare(Rational(6), Rational(6), Rational(3, 4)), Decision::kYes);
  EXPECT_EQ(DecideWelfare(Rational(4), Rational(6), Rational(3, 4)), Decision::kNo);
  EXPECT_EQ(DecideWelfare(Rational(5), Rational(6), Rational(3, 4)), Decision::kPromiseViolated);
  EXPECT_EQ(DecideWelfare(Rational(9, 2), Rational(6), Rational(3, 4)), Decision::kPromiseViolated);
  EXPECT_THROW(DecideWelfare(Rational(1), Rational(1), Rational(0)), ParameterError);
  EXPECT_EQ(ToString(Decision::kPromiseViolated), "promise-violated");
}

TEST(TrivialProtocols, HalfGuaranteeAndExactRandomSplit) {
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + trial % 7;
    const auto a = RandomSubadditive(m, rng);
    const auto b = RandomSubadditive(m, rng);
    const Rational opt = MaxWelfare(*a, *b).optimum;
    const auto rep = TrivialProtocols(*a, *b, rng, 20000);
    EXPECT_GE(rep.grand_bundle_to_random, opt / 2);
    EXPECT_GE(rep.grand_bundle_second_price, opt / 2);
    EXPECT_LE(rep.grand_bundle_second_price, opt);
    Rational total = 0;
    for (std::uint64_t s = 0; s < (1ULL << m); ++s) {
      const ItemSet x = ItemSet::FromMask(m, s);
      total += (*a)(x) + (*b)(x.complement());
    }
    const Rational mean = total / static_cast<std::int64_t>(1ULL << m);
    ASSERT_TRUE(rep.random_items_exact.has_value());
    EXPECT_EQ(*rep.random_items_exact, mean);
    EXPECT_GE(mean, opt / 2);
    EXPECT_NEAR(rep.random_items_mc, ToDouble(mean), 5 * rep.random_items_mc_stderr + 1e-12);
  }
}

TEST(NearAdditive, CertifiesHalfAndReportsConsistentExpectation) {
  Rng rng(34);
  int branches[3] = {0, 0, 0};
  for (int trial = 0; trial < 80; ++trial) {
    const int m = 2 + trial % 6;
    const auto a = RandomSubadditive(m, rng);
    const auto b = RandomSubadditive(m, rng);
    const auto r = NearAdditiveProtocol(*a, *b);
    EXPECT_EQ(r.optimum, MaxWelfare(*a, *b).optimum);
    Rational prob = 0, expected = 0;
    for (const auto& w : r.distribution) {
      prob += w.probability;
      expected += w.probability * Welfare(*a, *b, w.allocation);
    }
    EXPECT_EQ(prob, Rational(1));
    EXPECT_EQ(expected, r.expected_welfare);
    EXPECT_GE(r.expected_welfare, r.certified_welfare);
    EXPECT_GE(r.certified_welfare, r.optimum / 2);
    EXPECT_GE(r.epsilon, Rational(0));
    ++branches[static_cast<int>(r.branch)];
  }
  EXPECT_GT(branches[0], 0);
}

TEST(NearAdditive, AdditiveFirstBidderUsesTheGrandBundleBranch) {
  const AdditiveValuation a({Rational(1), Rational(1)});
  const AdditiveValuation b({Rational(2), Rational(0)});
  const auto r = NearAdditiveProtocol(a, b);
  EXPECT_EQ(r.epsilon, Rational(0));
  EXPECT_EQ(r.branch, NearAdditiveResult::Branch::kGrandBundleToLarger);
  EXPECT_EQ(r.expected_welfare, Rational(2));
  EXPECT_EQ(r.optimum, Rational(3));
}

TEST(NearAdditive, SwapsRolesWhenAliceValuesNothing) {
  const FunctionValuation zero(2, [](const ItemSet&) { return Rational(0); });
  const FunctionValuation unit(2, [](const ItemSet& x) { return Rational(x.empty() ? 0 : 1); });
  const auto r = NearAdditiveProtocol(zero, unit);
  EXPECT_TRUE(r.roles_swapped);
  EXPECT_EQ(r.expected_welfare, Rational(1));
  EXPECT_EQ(r.optimum, Rational(1));
}

}  // namespace
}  // namespace auctionlab
