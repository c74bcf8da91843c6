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
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "auctionlab/configlp.hpp"
#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rational.hpp"
#include "auctionlab/rng.hpp"
#include "auctionlab/sets.hpp"
#include "auctionlab/valuations.hpp"
#include "auctionlab/welfare.hpp"

namespace auctionlab {

// ---------------------------------------------------------------------------
// Equality reduction

struct EqualityInstance {
  SetCollection base;
  std::vector<int> a, b;
  int l = 4;
  CoverValuation alice;  // f over {S_i^{a_i}}
  CoverValuation bob;    // f over {S_i^{b_i}}

  // When a_i != b_i: the member oriented as a set for Bob (complemented for
  // Alice) goes to Bob and the rest to Alice, worth 2(l - 1).
  std::optional<Allocation> Witness() const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return Allocation{alice.collection()[static_cast<int>(i)].complement()};
    }
    return std::nullopt;
  }
};

inline EqualityInstance BuildEqualityInstance(const SetCollection& base, const std::vector<int>& a,
                                              const std::vector<int>& b, int l) {
  CheckSparsityParameter(l);
  if (static_cast<int>(a.size()) != base.size() || static_cast<int>(b.size()) != base.size()) {
    throw ParameterError("bit strings must have one bit per base member");
  }
  if (!IsLIndependent(base, l)) {
    throw ConstructionError("base collection is not " + std::to_string(l) + "-independent");
  }
  return EqualityInstance{base, a, b, l, CoverValuation(base.Oriented(a), l),
                          CoverValuation(base.Oriented(b), l)};
}

// ---------------------------------------------------------------------------
// Far-Sets and Exist-Far-Sets

enum class FarSets { kNear = 0, kFar = 1, kPromiseViolated = 2 };

inline std::string ToString(FarSets f) {
  switch (f) {
    case FarSets::kNear: return "0";
    case FarSets::kFar: return "1";
    case FarSets::kPromiseViolated: return "promise-violated";
  }
  return "?";
}

// 0 when |X ^ Y| = 2, 1 when |X & Y| = 2.
inline FarSets FarSetsAnswer(const ItemSet& x, const ItemSet& y) {
  if (x.ground() != y.ground()) throw ParameterError("sets over different ground sets");
  if ((x ^ y).size() == 2) return FarSets::kNear;
  if ((x & y).size() == 2) return FarSets::kFar;
  return FarSets::kPromiseViolated;
}

struct EfsInstance {
  SetCollection x, y;
  int l = 4;

  int k() const { return x.size(); }
  std::vector<int> FarIndices() const {
    std::vector<int> out;
    for (int i = 0; i < x.size(); ++i) {
      if (FarSetsAnswer(x[i], y[i]) == FarSets::kFar) out.push_back(i);
    }
    return out;
  }
};

inline EfsInstance SampleEfsInstance(int m, int k, int l, const std::set<int>& far_indices, Rng& rng,
                                     std::int64_t max_attempts = 0) {
  auto sampled = SampleCompatiblePair(m, k, l, far_indices, rng, max_attempts);
  return EfsInstance{std::move(sampled.value.first), std::move(sampled.value.second), l};
}

inline void RequireCompatible(const EfsInstance& inst) {
  const auto report = CheckLCompatible(inst.x, inst.y, inst.l);
  if (!report.ok()) {
    throw ParameterError(std::string("instance violates the compatibility promise:") +
                         (report.sizes ? "" : " sizes") + (report.near_or_far ? "" : " near/far") +
                         (report.sparse ? "" : " sparsity") +
                         (report.small_sets_contained ? "" : " small-set containment"));
  }
}

inline int ExistFarSetsAnswer(const EfsInstance& inst) {
  RequireCompatible(inst);
  return inst.FarIndices().empty() ? 0 : 1;
}

struct EfsGapReport {
  int answer = 0;
  int l = 4;
  bool exhaustive = false;
  std::optional<Rational> max_welfare;   // exhaustive mode
  std::optional<Allocation> witness;     // far case
  Rational witness_welfare{0};
  bool sigma_bound_holds = true;         // near case: sigma_X(S) <= sigma_Y(S) + 1
  std::int64_t sigma_checked = 0;
  std::optional<ItemSet> sigma_counterexample;
  bool pass = false;
};

// Far case: Y_i to Alice and its complement to Bob is worth at least 2(l-1).
// Near case: the exhaustive optimum is at most l+1. With m above the
// exhaustive cap only the far-case witness is checked.
inline EfsGapReport VerifyEfsGap(const EfsInstance& inst) {
  RequireCompatible(inst);
  EfsGapReport rep;
  rep.l = inst.l;
  const int m = inst.x.ground();
  const CoverValuation fx(inst.x, inst.l), fy(inst.y, inst.l);
  const auto far = inst.FarIndices();
  rep.answer = far.empty() ? 0 : 1;
  rep.exhaustive = m <= Budget::Current().exhaustive_items && m <= 16;
  if (rep.exhaustive) rep.max_welfare = MaxWelfare(fx, fy).optimum;
  const Rational high(2 * (inst.l - 1)), low(inst.l + 1);
  if (rep.answer == 1) {
    rep.witness = Allocation{inst.y[far.front()]};
    rep.witness_welfare = Welfare(fx, fy, *rep.witness);
    rep.pass = rep.witness_welfare >= high && (!rep.max_welfare || *rep.max_welfare >= high);
  } else {
    if (rep.exhaustive) {
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
        const ItemSet set = ItemSet::FromMask(m, s);
        if (2 * fy.Sigma(set) >= inst.l) continue;
        ++rep.sigma_checked;
        if (fx.Sigma(set) > fy.Sigma(set) + 1) {
          rep.sigma_bound_holds = false;
          rep.sigma_counterexample = set;
          break;
        }
      }
    }
    rep.pass = rep.exhaustive && *rep.max_welfare <= low && rep.sigma_bound_holds;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Integrality-gap families

struct CoverGapInstance {
  int l = 4;
  int t = 0;
  SetCollection sets;
  CoverValuation alice, bob;            // identical valuations
  ExactFractionalAllocation fractional;  // x_i(complement of S_j) = 1/t
};

// Symmetric instance built from a covering design. With t = 2(l-1) members,
// item i is assigned an (l-1)-subset A_i of [t] (every subset appears for the
// first C(t, l-1) items, in shuffled order; later items get random subsets)
// and S_j = {i : j not in A_i}. Any l-1 members miss the item whose A_i
// contains their indices, so the collection is l-sparse; every item lies in
// exactly l-1 complements, so x_i(complement S_j) = 1/t gives item load 1.
// The fractional value is 2(l-1) while every allocation earns exactly l.
inline CoverGapInstance BuildCoverGapInstance(int l, Rng& rng, int m = 0) {
  CheckSparsityParameter(l);
  const int t = 2 * (l - 1);
  std::vector<std::vector<int>> subsets;
  detail::ForEachCombination(t, l - 1, [&](const std::vector<int>& idx) {
    subsets.push_back(idx);
    return true;
  });
  const int base = static_cast<int>(subsets.size());
  if (m == 0) m = base;
  if (m < base) {
    throw ParameterError("gap instance for l=" + std::to_string(l) + " needs m >= " + std::to_string(base));
  }
  if (m > kMaxItems) throw ParameterError("m exceeds the item limit");
  std::shuffle(subsets.begin(), subsets.end(), rng);
  while (static_cast<int>(subsets.size()) < m) subsets.push_back(subsets[rng.UniformBelow(base)]);
  std::vector<ItemSet> members(t, ItemSet(m));
  for (int i = 0; i < m; ++i) {
    std::vector<bool> in_a(t, false);
    for (int j : subsets[i]) in_a[j] = true;
    for (int j = 0; j < t; ++j) {
      if (!in_a[j]) members[j].insert(i);
    }
  }
  SetCollection sets(m, members);
  if (!IsLSparse(sets, l)) throw ConstructionError("covering-design collection is not sparse");
  CoverValuation f(sets, l);
  ExactFractionalAllocation frac;
  frac.m = m;
  for (int player = 0; player < 2; ++player) {
    for (int j = 0; j < t; ++j) frac.columns[player].push_back({sets[j].complement(), Rational(1, t)});
  }
  return CoverGapInstance{l, t, sets, f, f, std::move(frac)};
}

struct Mph2GapInstance {
  MphRepresentation alice, bob;
  ExactFractionalAllocation fractional;
};

// Items a, b, c, d are 0..3. Alice wants {a,b} or {c,d}, Bob wants {a,c} or
// {b,d}; each pair is worth 1 through its own clause.
inline Mph2GapInstance BuildMph2GapInstance() {
  const int m = 4;
  auto pair = [&](int i, int j) { return ItemSet(m, {i, j}); };
  Mph2GapInstance g;
  g.alice = MphRepresentation{m, 2, {{{pair(0, 1), Rational(1)}}, {{pair(2, 3), Rational(1)}}}};
  g.bob = MphRepresentation{m, 2, {{{pair(0, 2), Rational(1)}}, {{pair(1, 3), Rational(1)}}}};
  g.fractional.m = m;
  g.fractional.columns[kAlice] = {{pair(0, 1), Rational(1, 2)}, {pair(2, 3), Rational(1, 2)}};
  g.fractional.columns[kBob] = {{pair(0, 2), Rational(1, 2)}, {pair(1, 3), Rational(1, 2)}};
  return g;
}

}  // namespace auctionlab
