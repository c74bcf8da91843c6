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

#include "auctionlab/hardness.hpp"

namespace auctionlab {
namespace {

std::vector<int> Bits(int value, int k) {
  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = value >> i & 1;
  return out;
}

TEST(Equality, EqualStringsFlattenEveryPartitionToL) {
  Rng rng(61);
  const auto base = SampleLIndependent(12, 4, 4, rng).value;
  for (int a = 0; a < 16; ++a) {
    const auto inst = BuildEqualityInstance(base, Bits(a, 4), Bits(a, 4), 4);
    for (std::uint64_t s = 0; s < (1ULL << 12); ++s) {
      ASSERT_EQ(Welfare(inst.alice, inst.bob, {ItemSet::FromMask(12, s)}), Rational(4));
    }
    EXPECT_FALSE(inst.Witness().has_value());
  }
}

TEST(Equality, DifferentStringsReachTwiceLMinusOne) {
  Rng rng(62);
  const auto base = SampleLIndependent(12, 4, 4, rng).value;
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      if (a == b) continue;
      const auto inst = BuildEqualityInstance(base, Bits(a, 4), Bits(b, 4), 4);
      const auto w = inst.Witness();
      ASSERT_TRUE(w.has_value());
      EXPECT_EQ(Welfare(inst.alice, inst.bob, *w), Rational(6));
      EXPECT_GE(MaxWelfare(inst.alice, inst.bob).optimum, Rational(6));
    }
  }
}

TEST(Equality, RejectsDependentBasesAndBadLengths) {
  const SetCollection nested(8, {ItemSet(8, {0, 1}), ItemSet(8, {0, 1, 2})});
  EXPECT_THROW(BuildEqualityInstance(nested, {0, 0}, {0, 0}, 4), ConstructionError);
  Rng rng(63);
  const auto base = SampleLIndependent(12, 4, 4, rng).value;
  EXPECT_THROW(BuildEqualityInstance(base, {0}, {0, 0, 0, 0}, 4), ParameterError);
}

TEST(FarSets, Answers) {
  const ItemSet x(6, {0, 1, 2, 3});
  EXPECT_EQ(FarSetsAnswer(x, ItemSet(6, {0, 1, 2, 4})), FarSets::kNear);
  EXPECT_EQ(FarSetsAnswer(x, ItemSet(6, {0, 1, 4, 5})), FarSets::kFar);
  EXPECT_EQ(FarSetsAnswer(x, ItemSet(6, {0, 4, 5, 1})), FarSets::kFar);
  EXPECT_EQ(FarSetsAnswer(x, x), FarSets::kPromiseViolated);
  EXPECT_EQ(ToString(FarSets::kFar), "1");
  EXPECT_THROW(FarSetsAnswer(x, ItemSet(7)), ParameterError);
}

TEST(FarSets, PartnersHaveTheRightShape) {
  Rng rng(64);
  for (int i = 0; i < 200; ++i) {
    const ItemSet x = SampleHalfset(10, rng);
    const ItemSet far = FarPartner(x, rng), near = NearPartner(x, rng);
    EXPECT_EQ(far.size(), 6);
    EXPECT_EQ(near.size(), 6);
    EXPECT_EQ(FarSetsAnswer(x, far), FarSets::kFar);
    EXPECT_EQ(FarSetsAnswer(x, near), FarSets::kNear);
    EXPECT_TRUE(x.complement().is_subset_of(far));
  }
}

TEST(ExistFarSets, GapBetweenNearAndFarInstances) {
  Rng rng(65);
  for (int trial = 0; trial < 8; ++trial) {
    std::set<int> far;
    if (trial % 2) far.insert(static_cast<int>(rng.UniformBelow(5)));
    const auto inst = SampleEfsInstance(14, 5, 4, far, rng);
    EXPECT_EQ(ExistFarSetsAnswer(inst), far.empty() ? 0 : 1);
    EXPECT_EQ(inst.FarIndices(), std::vector<int>(far.begin(), far.end()));
    const auto rep = VerifyEfsGap(inst);
    EXPECT_TRUE(rep.pass);
    ASSERT_TRUE(rep.exhaustive);
    const CoverValuation fx(inst.x, 4), fy(inst.y, 4);
    const Rational opt = MaxWelfare(fx, fy).optimum;
    EXPECT_EQ(*rep.max_welfare, opt);
    if (far.empty()) {
      EXPECT_LE(opt, Rational(5));
      EXPECT_TRUE(rep.sigma_bound_holds);
      EXPECT_GT(rep.sigma_checked, 0);
    } else {
      EXPECT_GE(opt, Rational(6));
      EXPECT_EQ(rep.witness_welfare, Rational(6));
    }
  }
}

TEST(ExistFarSets, PromiseViolationIsAnError) {
  Rng rng(66);
  auto inst = SampleEfsInstance(14, 5, 4, {}, rng);
  inst.y = inst.x;
  EXPECT_THROW(ExistFarSetsAnswer(inst), ParameterError);
  EXPECT_THROW(VerifyEfsGap(inst), ParameterError);
}

TEST(CoverGap, SparseWithUnitLoadsAndFlatWelfare) {
  Rng rng(67);
  const auto g = BuildCoverGapInstance(4, rng);
  ASSERT_EQ(g.t, 6);
  ASSERT_EQ(g.sets.ground(), 20);
  // No three members cover the ground set.
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      for (int k = j; k < 6; ++k) EXPECT_FALSE((g.sets[i] | g.sets[j] | g.sets[k]).full());
    }
  }
  for (int item = 0; item < 20; ++item) {
    int outside = 0;
    for (int j = 0; j < 6; ++j) outside += !g.sets[j].contains(item);
    EXPECT_EQ(outside, 3);
    EXPECT_EQ(g.fractional.ItemLoad(item), Rational(1));
  }
  EXPECT_EQ(g.fractional.Objective(g.alice, g.bob), Rational(6));
  EXPECT_EQ(MaxWelfare(g.alice, g.bob).optimum, Rational(4));
  EXPECT_TRUE(ComplementIdentityCheck(g.alice));
}

TEST(CoverGap, PaddedGroundSetAndTooSmall) {
  Rng rng(68);
  const auto g = BuildCoverGapInstance(4, rng, 24);
  EXPECT_TRUE(IsLSparse(g.sets, 4));
  EXPECT_TRUE(g.fractional.IsFeasible());
  EXPECT_THROW(BuildCoverGapInstance(4, rng, 10), ParameterError);
}

TEST(Mph2Gap, OptimumOneAgainstFractionalTwo) {
  const auto g = BuildMph2GapInstance();
  const MphValuation a(g.alice), b(g.bob);
  Rational best = 0;
  for (std::uint64_t s = 0; s < 16; ++s) best = std::max(best, Welfare(a, b, {ItemSet::FromMask(4, s)}));
  EXPECT_EQ(best, Rational(1));
  EXPECT_EQ(g.fractional.Objective(a, b), Rational(2));
  EXPECT_TRUE(g.fractional.IsFeasible());
}

}  // namespace
}  // namespace auctionlab
