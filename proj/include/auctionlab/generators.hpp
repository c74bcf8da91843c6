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
#include <limits>
#include <string>
#include <vector>

#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rational.hpp"
#include "auctionlab/rng.hpp"
#include "auctionlab/sets.hpp"
#include "auctionlab/valuations.hpp"

namespace auctionlab {

// k random sets whose members are included with a per-set density drawn from
// [0.15, 0.5], resampled until the collection is l-sparse.
inline Sampled<SetCollection> RandomSparseCollection(int m, int l, int k, Rng& rng,
                                                     std::int64_t max_attempts = 0) {
  CheckSparsityParameter(l);
  if (m < 1 || k < 1) throw ParameterError("need m >= 1 and k >= 1");
  if (max_attempts <= 0) max_attempts = Budget::Current().sampler_attempts;
  for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    SetCollection s(m);
    for (int i = 0; i < k; ++i) {
      const double density = 0.15 + 0.35 * rng.Uniform01();
      ItemSet x(m);
      for (int j = 0; j < m; ++j) {
        if (rng.Uniform01() < density) x.insert(j);
      }
      s.push_back(x);
    }
    if (IsLSparse(s, l)) return {std::move(s), attempt};
  }
  throw SamplingFailure("no " + std::to_string(l) + "-sparse collection found", max_attempts);
}

// Weighted set cover: v(S) is the cheapest total cost of family members
// covering S. Every singleton is in the family, so v is finite, monotone and
// subadditive. Costs are integers in [1, 6].
inline ExplicitValuation RandomCoverCostValuation(int m, Rng& rng, int extra_sets = 0) {
  if (m < 1 || m > 16) throw ParameterError("cover-cost valuations need 1 <= m <= 16");
  if (extra_sets <= 0) extra_sets = m;
  if (m < 2) extra_sets = 0;
  struct Member {
    std::uint64_t mask;
    std::int64_t cost;
  };
  std::vector<Member> family;
  for (int j = 0; j < m; ++j) family.push_back({std::uint64_t{1} << j, 1 + static_cast<std::int64_t>(rng.UniformBelow(4))});
  for (int i = 0; i < extra_sets; ++i) {
    std::uint64_t mask = 0;
    while (std::popcount(mask) < 2) mask = rng() & ((std::uint64_t{1} << m) - 1);
    family.push_back({mask, 2 + static_cast<std::int64_t>(rng.UniformBelow(5))});
  }
  const std::size_t n = std::size_t{1} << m;
  std::vector<std::int64_t> best(n, std::numeric_limits<std::int64_t>::max());
  best[0] = 0;
  for (std::uint64_t s = 1; s < n; ++s) {
    const std::uint64_t low = s & (~s + 1);
    for (const auto& f : family) {
      if (f.mask & low) best[s] = std::min(best[s], f.cost + best[s & ~f.mask]);
    }
  }
  std::vector<Rational> values(n);
  for (std::size_t s = 0; s < n; ++s) values[s] = Rational(best[s]);
  return ExplicitValuation(m, std::move(values), true);
}

// Random family of PH clauses with edges of size at most min(rank, m):
// each clause carries singleton weights in [1, 4] on a random subset of
// items and a few higher edges of weight 1 or 2. A floor clause {j}: W per
// item, with W a random fraction in [0.3, 0.5] of the largest clause total,
// lifts every non-empty bundle. Families that are not subadditive are
// rejected.
inline Sampled<MphRepresentation> RandomSubadditiveMph(int m, int rank, Rng& rng,
                                                       std::int64_t max_attempts = 0) {
  if (m < 2 || m > 16) throw ParameterError("MPH sampling needs 2 <= m <= 16");
  if (rank < 1) throw ParameterError("rank must be >= 1");
  if (max_attempts <= 0) max_attempts = Budget::Current().sampler_attempts;
  const int top = std::min(rank, m);
  for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    MphRepresentation rep;
    rep.m = m;
    rep.rank = rank;
    const int clauses = 2 + static_cast<int>(rng.UniformBelow(3));
    for (int c = 0; c < clauses; ++c) {
      PhClause clause;
      for (int j = 0; j < m; ++j) {
        if (rng.Uniform01() < 0.6) {
          clause.push_back({ItemSet(m, {j}), Rational(1 + static_cast<std::int64_t>(rng.UniformBelow(4)))});
        }
      }
      if (top >= 2) {
        const int edges = 1 + static_cast<int>(rng.UniformBelow(2));
        for (int e = 0; e < edges; ++e) {
          const int size = 2 + static_cast<int>(rng.UniformBelow(top - 1));
          clause.push_back({SampleSubset(m, size, rng), Rational(1 + static_cast<std::int64_t>(rng.UniformBelow(2)))});
        }
      }
      if (!clause.empty()) rep.clauses.push_back(std::move(clause));
    }
    if (rep.clauses.empty()) continue;
    Rational largest = 0;
    for (const auto& clause : rep.clauses) {
      Rational total = 0;
      for (const auto& e : clause) total += e.weight;
      largest = std::max(largest, total);
    }
    const auto floor_num = static_cast<std::int64_t>(std::ceil(ToDouble(largest) * (0.3 + 0.2 * rng.Uniform01())));
    for (int j = 0; j < m; ++j) rep.clauses.push_back({{ItemSet(m, {j}), Rational(floor_num)}});
    const MphValuation v(rep);
    if (CheckMonotoneSubadditive(v).ok()) return {std::move(rep), attempt};
  }
  throw SamplingFailure("no subadditive MPH-" + std::to_string(rank) + " family found", max_attempts);
}

}  // namespace auctionlab
