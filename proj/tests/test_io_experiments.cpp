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

#include "auctionlab/experiments.hpp"
#include "auctionlab/generators.hpp"
#include "auctionlab/hardness.hpp"
#include "auctionlab/io.hpp"

namespace auctionlab {
namespace {

void ExpectSameValues(const Valuation& a, const Valuation& b) {
  ASSERT_EQ(a.ground(), b.ground());
  for (std::uint64_t s = 0; s < (1ULL << a.ground()); ++s) {
    const ItemSet x = ItemSet::FromMask(a.ground(), s);
    ASSERT_EQ(a(x), b(x)) << x.str();
  }
}

TEST(Json, ValuationRoundTrips) {
  Rng rng(71);
  const CoverValuation cover(RandomSparseCollection(9, 4, 4, rng).value, 4);
  const ExplicitValuation expl = RandomCoverCostValuation(5, rng);
  const MphValuation mph(RandomSubadditiveMph(5, 2, rng).value);
  const AdditiveValuation add({Rational(1, 3), Rational(2), Rational(0)});
  for (const Valuation* v : std::initializer_list<const Valuation*>{&cover, &expl, &mph, &add}) {
    const Json j = ToJson(*v);
    const auto back = ValuationFromJson(Json::parse(j.dump()));
    EXPECT_EQ(back->kind(), v->kind());
    ExpectSameValues(*v, *back);
    EXPECT_EQ(ToJson(*back), j);
  }
  EXPECT_EQ(ToJson(mph)["kind"], "mph");
  EXPECT_EQ(ToJson(mph)["k"], 2);
}

TEST(Json, InstanceWithFractionalRoundTrips) {
  const auto g = BuildMph2GapInstance();
  const MphValuation a(g.alice), b(g.bob);
  const Json j = InstanceToJson(a, b, Json{{"family", "mph2-gap"}}, &g.fractional);
  const auto inst = InstanceFromJson(Json::parse(j.dump()));
  ExpectSameValues(a, *inst.alice);
  ExpectSameValues(b, *inst.bob);
  ASSERT_TRUE(inst.fractional.has_value());
  for (int i = 0; i < 2; ++i) {
    ASSERT_EQ(inst.fractional->columns[i].size(), g.fractional.columns[i].size());
    for (std::size_t c = 0; c < g.fractional.columns[i].size(); ++c) {
      EXPECT_EQ(inst.fractional->columns[i][c].set, g.fractional.columns[i][c].set);
      EXPECT_EQ(inst.fractional->columns[i][c].prob, g.fractional.columns[i][c].prob);
    }
  }
  EXPECT_EQ(inst.provenance["family"], "mph2-gap");
}

TEST(Json, RationalsAndSets) {
  EXPECT_EQ(io::RationalToJson(Rational(3)), Json(3));
  EXPECT_EQ(io::RationalToJson(Rational(-3, 6)), Json("-1/2"));
  EXPECT_EQ(io::RationalFromJson(Json("7/14")), Rational(1, 2));
  EXPECT_EQ(io::RationalFromJson(Json(0.25)), Rational(1, 4));
  EXPECT_EQ(io::SetFromJson(8, Json::array({1, 3})), ItemSet(8, {1, 3}));
  EXPECT_EQ(io::SetFromJson(8, Json(ItemSet(8, {1, 3}).hex())), ItemSet(8, {1, 3}));
}

TEST(Json, SchemaViolationsRaiseSchemaError) {
  EXPECT_THROW(ValuationFromJson(Json{{"kind", "nope"}}), SchemaError);
  EXPECT_THROW(ValuationFromJson(Json{{"m", 3}}), SchemaError);
  EXPECT_THROW(ValuationFromJson(Json{{"kind", "explicit"}, {"m", "3"}, {"values", Json::array()}}), SchemaError);
  EXPECT_THROW(io::RationalFromJson(Json("1/0")), SchemaError);
  EXPECT_THROW(io::RationalFromJson(Json("x")), SchemaError);
  EXPECT_THROW(io::SetFromJson(4, Json::array({4})), SchemaError);
  EXPECT_THROW(FractionalFromJson(Json{{"m", 2}, {"columns", Json::array({Json{{"player", 2}}})}}), SchemaError);
  // Schema errors are parameter errors.
  EXPECT_THROW(InstanceFromJson(Json::object()), ParameterError);
}

TEST(Json, NonSparseCoverIsAConstructionError) {
  const Json j{{"kind", "cover"}, {"l", 4},
               {"collection", {{"m", 3}, {"sets", Json::array({Json::array({0, 1}), Json::array({1, 2})})}}}};
  EXPECT_THROW(ValuationFromJson(j), ConstructionError);
}

TEST(Hash, GitBlobVectors) {
  EXPECT_EQ(GitBlobHash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(GitBlobHash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(ContentHash(Json{{"a", 1}}), GitBlobHash("{\"a\":1}"));
}

TEST(Experiments, DeterministicUnderSeed) {
  for (const char* name : {"equality", "efs", "lp-check", "rounding-ratio"}) {
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.trials = 3;
    cfg.m = std::string(name) == "equality" ? 12 : 0;
    const auto x = RunExperiment(cfg);
    const auto y = RunExperiment(cfg);
    EXPECT_EQ(x.Csv(), y.Csv()) << name;
    EXPECT_TRUE(x.all_pass) << name << "\n" << x.first_failure.dump();
    EXPECT_EQ(x.rows.size(), 3u);
    cfg.seed = 2;
    EXPECT_NE(RunExperiment(cfg).Csv(), x.Csv()) << name;
  }
}

TEST(Experiments, ChainsAndMph2GapRows) {
  ExperimentConfig chains;
  chains.name = "chains";
  const auto c = RunExperiment(chains);
  ASSERT_EQ(c.rows.size(), 1u);
  EXPECT_EQ(c.rows[0].rfind("6,360,120,6,1,1,", 0), 0u) << c.rows[0];
  ExperimentConfig gap;
  gap.name = "gap";
  gap.mph2 = true;
  const auto g = RunExperiment(gap);
  ASSERT_EQ(g.rows.size(), 1u);
  EXPECT_TRUE(g.all_pass);
  EXPECT_EQ(g.rows[0].rfind("mph2,,4,2,1,1/2,", 0), 0u) << g.rows[0];
}

TEST(Experiments, UnknownNameAndBadL) {
  ExperimentConfig cfg;
  cfg.name = "nothing";
  EXPECT_THROW(RunExperiment(cfg), ParameterError);
  cfg.name = "chains";
  cfg.l = 5;
  EXPECT_THROW(RunExperiment(cfg), ParameterError);
}

}  // namespace
}  // namespace auctionlab
