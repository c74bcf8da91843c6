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
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rational.hpp"
#include "auctionlab/rng.hpp"
#include "auctionlab/sets.hpp"

namespace auctionlab {

// Value-query interface shared by every valuation form.
class Valuation {
 public:
  virtual ~Valuation() = default;
  virtual int ground() const = 0;
  virtual Rational Value(const ItemSet& x) const = 0;
  virtual std::string kind() const = 0;

  Rational operator()(const ItemSet& x) const {
    if (x.ground() != ground()) {
      throw ParameterError("value query over " + std::to_string(x.ground()) +
                           " items on a valuation over " + std::to_string(ground()));
    }
    return Value(x);
  }
};

using ValuationPtr = std::shared_ptr<const Valuation>;

// sigma_S(X): the fewest members of S whose union contains X, or max{l, k} when
// X is not covered by the union of all members.
inline int CoverNumber(const SetCollection& s, int l, const ItemSet& x) {
  const CoverSearch search(s);
  if (!search.Coverable(x)) return std::max(l, s.size());
  return *search.MinCoverAtMost(x, s.size());
}

// f^l_S: sigma(X) when sigma(X) < l/2, l - sigma(complement) when the
// complement has sigma < l/2, and l/2 otherwise. Requires S to be l-sparse;
// values lie in [0, l].
class CoverValuation final : public Valuation {
 public:
  static constexpr std::size_t kCacheLimit = std::size_t{1} << 20;

  CoverValuation(SetCollection sets, int l) : sets_(std::move(sets)), l_(l), search_(sets_) {
    CheckSparsityParameter(l);
    if (sets_.empty()) throw ConstructionError("cover valuation needs k >= 1 sets");
    if (!IsLSparse(sets_, l_)) {
      throw ConstructionError("collection is not " + std::to_string(l_) +
                              "-sparse; f would be doubly defined");
    }
  }

  CoverValuation(const CoverValuation& o) : CoverValuation(o.sets_, o.l_) {}

  int ground() const override { return sets_.ground(); }
  std::string kind() const override { return "cover"; }
  int l() const { return l_; }
  const SetCollection& collection() const { return sets_; }

  int Sigma(const ItemSet& x) const {
    if (!search_.Coverable(x)) return std::max(l_, sets_.size());
    return *search_.MinCoverAtMost(x, sets_.size());
  }

  int F(const ItemSet& x) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = cache_.find(x); it != cache_.end()) return it->second;
    }
    const int half = l_ / 2;
    const auto direct = search_.MinCoverAtMost(x, half - 1);
    const auto dual = search_.MinCoverAtMost(x.complement(), half - 1);
    if (direct && dual) {
      // Impossible for an l-sparse collection: X and its complement together
      // would be covered by fewer than l members.
      throw ConstructionError("f doubly defined at " + x.str());
    }
    const int value = direct ? *direct : dual ? l_ - *dual : half;
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_.size() >= kCacheLimit) cache_.clear();
    cache_.emplace(x, value);
    return value;
  }

  Rational Value(const ItemSet& x) const override { return Rational(F(x)); }

 private:
  SetCollection sets_;
  int l_;
  CoverSearch search_;
  mutable std::mutex mu_;
  mutable std::unordered_map<ItemSet, int, ItemSetHash> cache_;
};

// A full table of 2^m values indexed by the item mask.
class ExplicitValuation final : public Valuation {
 public:
  ExplicitValuation(int m, std::vector<Rational> values, bool require_monotone = false)
      : m_(m), values_(std::move(values)) {
    RequireExhaustive(m, Budget::Current().exhaustive_items, "explicit valuation");
    if (values_.size() != (std::size_t{1} << m)) {
      throw ParameterError("explicit valuation over " + std::to_string(m) + " items needs " +
                           std::to_string(std::size_t{1} << m) + " values");
    }
    if (values_[0] != Rational(0)) throw ConstructionError("explicit valuation must have v(empty) = 0");
    for (const auto& v : values_) {
      if (v < 0) throw ConstructionError("explicit valuation values must be non-negative");
    }
    if (require_monotone) {
      for (std::uint64_t s = 0; s < values_.size(); ++s) {
        for (int j = 0; j < m; ++j) {
          if (!(s >> j & 1) && values_[s | (1ULL << j)] < values_[s]) {
            throw ConstructionError("explicit valuation is not monotone");
          }
        }
      }
    }
  }

  int ground() const override { return m_; }
  std::string kind() const override { return "explicit"; }
  Rational Value(const ItemSet& x) const override { return values_[x.mask()]; }
  const std::vector<Rational>& values() const { return values_; }

 private:
  int m_;
  std::vector<Rational> values_;
};

class AdditiveValuation final : public Valuation {
 public:
  explicit AdditiveValuation(std::vector<Rational> weights) : weights_(std::move(weights)) {
    for (const auto& w : weights_) {
      if (w < 0) throw ConstructionError("additive weights must be non-negative");
    }
  }
  int ground() const override { return static_cast<int>(weights_.size()); }
  std::string kind() const override { return "additive"; }
  Rational Value(const ItemSet& x) const override {
    Rational total = 0;
    for (int j : x.items()) total += weights_[j];
    return total;
  }
  const std::vector<Rational>& weights() const { return weights_; }

 private:
  std::vector<Rational> weights_;
};

// One positive-hypergraph function: non-negative weights on hyperedges.
struct HyperEdge {
  ItemSet edge;
  Rational weight;
};
using PhClause = std::vector<HyperEdge>;

// A maximum over PH-k clauses. Every edge has at most `rank` items.
struct MphRepresentation {
  int m = 0;
  int rank = 0;
  std::vector<PhClause> clauses;

  Rational Evaluate(const ItemSet& x) const {
    Rational best = 0;
    for (const auto& clause : clauses) {
      Rational total = 0;
      for (const auto& e : clause) {
        if (e.edge.is_subset_of(x)) total += e.weight;
      }
      best = std::max(best, total);
    }
    return best;
  }

  // Largest edge size actually used.
  int UsedRank() const {
    int r = 0;
    for (const auto& c : clauses) {
      for (const auto& e : c) r = std::max(r, e.edge.size());
    }
    return r;
  }

  void Validate() const {
    for (const auto& c : clauses) {
      for (const auto& e : c) {
        if (e.edge.ground() != m) throw ParameterError("hyperedge ground mismatch");
        if (e.edge.size() > rank) {
          throw ConstructionError("hyperedge " + e.edge.str() + " exceeds rank " +
                                  std::to_string(rank));
        }
        if (e.weight < 0) throw ConstructionError("negative hyperedge weight");
      }
    }
  }
};

class MphValuation final : public Valuation {
 public:
  explicit MphValuation(MphRepresentation rep) : rep_(std::move(rep)) { rep_.Validate(); }
  int ground() const override { return rep_.m; }
  std::string kind() const override { return "mph"; }
  Rational Value(const ItemSet& x) const override { return rep_.Evaluate(x); }
  const MphRepresentation& representation() const { return rep_; }

 private:
  MphRepresentation rep_;
};

// Wraps a callable; used for ad-hoc valuations in experiments and tests.
class FunctionValuation final : public Valuation {
 public:
  using Fn = std::function<Rational(const ItemSet&)>;
  FunctionValuation(int m, Fn fn, std::string name = "function")
      : m_(m), fn_(std::move(fn)), name_(std::move(name)) {}
  int ground() const override { return m_; }
  std::string kind() const override { return name_; }
  Rational Value(const ItemSet& x) const override { return fn_(x); }

 private:
  int m_;
  Fn fn_;
  std::string name_;
};

// All 2^m values, indexed by mask.
inline std::vector<Rational> Tabulate(const Valuation& v) {
  const int m = v.ground();
  RequireExhaustive(m, Budget::Current().exhaustive_items, "tabulation");
  std::vector<Rational> out(std::size_t{1} << m);
  for (std::uint64_t s = 0; s < out.size(); ++s) out[s] = v.Value(ItemSet::FromMask(m, s));
  return out;
}

// The table scaled by the lcm of all denominators, so that comparisons of
// sums are exact integer arithmetic.
struct IntegerTable {
  std::vector<std::int64_t> values;
  std::int64_t scale = 1;
};

inline IntegerTable ToIntegerTable(const std::vector<Rational>& table) {
  IntegerTable out;
  for (const auto& r : table) out.scale = std::lcm(out.scale, r.denominator());
  out.values.reserve(table.size());
  for (const auto& r : table) out.values.push_back(r.numerator() * (out.scale / r.denominator()));
  return out;
}

// Utility-maximizing bundle at the given item prices; ties go to the smallest
// bit pattern. Exhaustive over 2^m bundles.
template <class Scalar>
ItemSet DemandQuery(const std::vector<Scalar>& table, int m, std::span<const Scalar> prices) {
  if (static_cast<int>(prices.size()) != m) throw ParameterError("price vector length != m");
  const std::size_t n = std::size_t{1} << m;
  std::vector<Scalar> cost(n);
  cost[0] = Scalar(0);
  std::uint64_t best = 0;
  Scalar best_utility = table[0];
  for (std::uint64_t s = 1; s < n; ++s) {
    cost[s] = cost[s & (s - 1)] + prices[std::countr_zero(s)];
    const Scalar u = table[s] - cost[s];
    if (u > best_utility) {
      best_utility = u;
      best = s;
    }
  }
  return ItemSet::FromMask(m, best);
}

template <class Scalar>
std::vector<Scalar> TabulateAs(const Valuation& v) {
  const auto table = Tabulate(v);
  std::vector<Scalar> out;
  out.reserve(table.size());
  for (const auto& r : table) out.push_back(FromRational<Scalar>(r));
  return out;
}

inline ItemSet DemandQuery(const Valuation& v, std::span<const Rational> prices) {
  for (const auto& p : prices) {
    if (p < 0) throw ParameterError("prices must be non-negative");
  }
  return DemandQuery<Rational>(Tabulate(v), v.ground(), prices);
}

struct PropertyVerdict {
  bool monotone = true;
  bool subadditive = true;
  // First counterexample found for each property: the pair (X, Y) with
  // v(X|Y) < v(X) or v(X|Y) > v(X) + v(Y).
  std::optional<std::pair<ItemSet, ItemSet>> monotone_counterexample;
  std::optional<std::pair<ItemSet, ItemSet>> subadditive_counterexample;
  bool ok() const { return monotone && subadditive; }
};

// Exhaustive pair check of v(X|Y) >= v(X) and v(X|Y) <= v(X) + v(Y).
inline PropertyVerdict CheckMonotoneSubadditive(const std::vector<Rational>& table, int m) {
  RequireExhaustive(m, Budget::Current().pair_check_items, "monotone/subadditive check");
  const IntegerTable t = ToIntegerTable(table);
  const std::uint64_t n = std::uint64_t{1} << m;
  PropertyVerdict out;
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t y = 0; y < n; ++y) {
      const std::int64_t joint = t.values[x | y];
      if (out.monotone && joint < t.values[x]) {
        out.monotone = false;
        out.monotone_counterexample = {ItemSet::FromMask(m, x), ItemSet::FromMask(m, y)};
      }
      if (out.subadditive && joint > t.values[x] + t.values[y]) {
        out.subadditive = false;
        out.subadditive_counterexample = {ItemSet::FromMask(m, x), ItemSet::FromMask(m, y)};
      }
    }
    if (!out.monotone && !out.subadditive) break;
  }
  return out;
}

inline PropertyVerdict CheckMonotoneSubadditive(const Valuation& v) {
  RequireExhaustive(v.ground(), Budget::Current().pair_check_items, "monotone/subadditive check");
  return CheckMonotoneSubadditive(Tabulate(v), v.ground());
}

namespace detail {

// Runs fn on every subset when m <= exhaustive limit, otherwise on `samples`
// uniform random subsets drawn from a fixed seed.
template <class Fn>
bool ForAllOrSampled(int m, Fn&& fn, int samples = 10000, std::uint64_t seed = 0x5eed) {
  if (m <= Budget::Current().exhaustive_items) {
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
      if (!fn(ItemSet::FromMask(m, s))) return false;
    }
    return true;
  }
  Rng rng(seed);
  for (int t = 0; t < samples; ++t) {
    ItemSet x(m);
    for (int j = 0; j < m; ++j) {
      if (rng.Coin()) x.insert(j);
    }
    if (!fn(x)) return false;
  }
  return true;
}

}  // namespace detail

// f(X) + f(complement of X) = l on every checked X.
inline bool ComplementIdentityCheck(const CoverValuation& v, int samples = 10000,
                                    std::uint64_t seed = 0x5eed) {
  return detail::ForAllOrSampled(
      v.ground(), [&](const ItemSet& x) { return v.F(x) + v.F(x.complement()) == v.l(); },
      samples, seed);
}

// f(X) <= sigma(X) on every checked X.
inline bool FLeSigmaCheck(const CoverValuation& v, int samples = 10000,
                          std::uint64_t seed = 0x5eed) {
  return detail::ForAllOrSampled(
      v.ground(), [&](const ItemSet& x) { return v.F(x) <= v.Sigma(x); }, samples, seed);
}

// (sum_j v(M) - v(M \ {j})) / v(M). v is not MPH-k for any k strictly below
// this value.
inline Rational MphLevelLowerBound(const Valuation& v) {
  const int m = v.ground();
  const ItemSet all = ItemSet::Full(m);
  const Rational top = v.Value(all);
  if (top == Rational(0)) throw ParameterError("MPH level bound undefined when v(M) = 0");
  Rational marginals = 0;
  for (int j = 0; j < m; ++j) {
    ItemSet rest = all;
    rest.erase(j);
    marginals += top - v.Value(rest);
  }
  return marginals / top;
}

// Rank ceil(m/2) representation of a monotone subadditive function: for each
// bundle S one clause with edge S' (the ceil(m/2) lowest items of S, or S
// itself when smaller) weighted v(S') and edge S \ S' weighted v(S) - v(S').
inline MphRepresentation BuildMphHalfM(const Valuation& v) {
  const int m = v.ground();
  RequireExhaustive(m, Budget::Current().mph_build_items, "half-m MPH construction");
  const auto table = Tabulate(v);
  const auto verdict = CheckMonotoneSubadditive(table, m);
  if (!verdict.ok()) {
    throw ConstructionError(verdict.monotone ? "valuation is not subadditive"
                                             : "valuation is not monotone");
  }
  const int half = (m + 1) / 2;
  MphRepresentation rep;
  rep.m = m;
  rep.rank = half;
  rep.clauses.reserve(table.size());
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    const ItemSet bundle = ItemSet::FromMask(m, s);
    ItemSet head(m);
    int taken = 0;
    for (int j : bundle.items()) {
      if (taken == half) break;
      head.insert(j);
      ++taken;
    }
    const ItemSet tail = bundle - head;
    PhClause clause;
    if (!head.empty()) clause.push_back({head, table[head.mask()]});
    if (!tail.empty()) clause.push_back({tail, table[s] - table[head.mask()]});
    rep.clauses.push_back(std::move(clause));
  }
  rep.Validate();
  return rep;
}

// w(S) <= v(S) and beta * w(S) >= v(S) for every S.
inline bool PointwiseBetaCheck(const Valuation& v, const Valuation& w, const Rational& beta) {
  if (v.ground() != w.ground()) throw ParameterError("ground set mismatch");
  RequireExhaustive(v.ground(), 16, "pointwise approximation check");
  const int m = v.ground();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
    const ItemSet x = ItemSet::FromMask(m, s);
    const Rational vs = v.Value(x);
    const Rational ws = w.Value(x);
    if (ws > vs || beta * ws < vs) return false;
  }
  return true;
}

}  // namespace auctionlab
