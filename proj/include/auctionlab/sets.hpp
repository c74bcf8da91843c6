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
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rng.hpp"

namespace auctionlab {

using BigInt = boost::multiprecision::cpp_int;

// Ordered collection S_1..S_k of subsets of a common ground set.
class SetCollection {
 public:
  SetCollection() = default;
  explicit SetCollection(int m) : m_(m) {}
  SetCollection(int m, std::vector<ItemSet> sets) : m_(m), sets_(std::move(sets)) {
    for (const auto& s : sets_) CheckGround(s);
  }

  int ground() const { return m_; }
  int size() const { return static_cast<int>(sets_.size()); }
  bool empty() const { return sets_.empty(); }
  const ItemSet& operator[](int i) const { return sets_[i]; }
  const std::vector<ItemSet>& sets() const { return sets_; }

  void push_back(const ItemSet& s) {
    CheckGround(s);
    sets_.push_back(s);
  }

  ItemSet Union() const {
    ItemSet u(m_);
    for (const auto& s : sets_) u |= s;
    return u;
  }

  // Replaces member i by its complement when orientation bit i is 0
  // (S^1 = S, S^0 = complement), the convention of the Equality reduction.
  SetCollection Oriented(const std::vector<int>& bits) const {
    if (static_cast<int>(bits.size()) != size()) {
      throw ParameterError("orientation length does not match collection size");
    }
    SetCollection out(m_);
    for (int i = 0; i < size(); ++i) {
      out.push_back(bits[i] ? sets_[i] : sets_[i].complement());
    }
    return out;
  }

  friend bool operator==(const SetCollection& a, const SetCollection& b) {
    return a.m_ == b.m_ && a.sets_ == b.sets_;
  }

 private:
  void CheckGround(const ItemSet& s) const {
    if (s.ground() != m_) {
      throw ParameterError("collection member over " + std::to_string(s.ground()) +
                           " items, collection ground is " + std::to_string(m_));
    }
  }

  int m_ = 0;
  std::vector<ItemSet> sets_;
};

inline void CheckSparsityParameter(int l) {
  if (l < 4 || l % 2 != 0) {
    throw ParameterError("l must be an even integer >= 4, got " + std::to_string(l));
  }
}

inline double Binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

// Exact minimum set cover by branching on the uncovered item with the fewest
// candidate members, iterative deepening on the cover size.
class CoverSearch {
 public:
  explicit CoverSearch(const SetCollection& sets) : sets_(sets), m_(sets.ground()) {
    containing_.resize(m_);
    for (int i = 0; i < sets_.size(); ++i) {
      for (int j : sets_[i].items()) containing_[j].push_back(i);
    }
    union_ = sets_.Union();
  }

  bool Coverable(const ItemSet& target) const { return target.is_subset_of(union_); }

  // Size of a minimum cover of target if it is at most limit.
  std::optional<int> MinCoverAtMost(const ItemSet& target, int limit) const {
    if (target.empty()) return 0;
    if (!Coverable(target)) return std::nullopt;
    for (int depth = 1; depth <= std::min(limit, sets_.size()); ++depth) {
      if (Search(target, depth)) return depth;
    }
    return std::nullopt;
  }

 private:
  bool Search(const ItemSet& uncovered, int depth) const {
    if (uncovered.empty()) return true;
    if (depth == 0) return false;
    int best_item = -1;
    std::size_t best_count = SIZE_MAX;
    int max_gain = 0;
    for (int j : uncovered.items()) {
      const auto& cands = containing_[j];
      if (cands.size() < best_count) {
        best_count = cands.size();
        best_item = j;
      }
    }
    for (int i = 0; i < sets_.size(); ++i) {
      max_gain = std::max(max_gain, (sets_[i] & uncovered).size());
    }
    if (max_gain * depth < uncovered.size()) return false;
    for (int i : containing_[best_item]) {
      if (Search(uncovered - sets_[i], depth - 1)) return true;
    }
    return false;
  }

  const SetCollection& sets_;
  int m_;
  std::vector<std::vector<int>> containing_;
  ItemSet union_;
};

// True iff no union of at most l-1 members equals the ground set. Unions are
// idempotent, so repeated members never help and index subsets suffice.
inline bool IsLSparse(const SetCollection& s, int l) {
  CheckSparsityParameter(l);
  const ItemSet all = ItemSet::Full(s.ground());
  return !CoverSearch(s).MinCoverAtMost(all, l - 1).has_value();
}

namespace detail {

// Calls fn(indices) for every size-r subset of {0..n-1} in lexicographic
// order; stops early when fn returns false. Returns false if stopped.
template <class Fn>
bool ForEachCombination(int n, int r, Fn&& fn) {
  if (r > n || r < 0) return true;
  std::vector<int> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return false;
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// True iff every orientation (each member replaced by itself or its
// complement) is l-sparse. Because unions only grow when indices are added,
// checking index subsets of size exactly min(k, l-1) covers all smaller ones.
inline bool IsLIndependent(const SetCollection& s, int l) {
  CheckSparsityParameter(l);
  const int k = s.size();
  const int r = std::min(k, l - 1);
  const double work = Binomial(k, r) * static_cast<double>(1ULL << r);
  if (work > Budget::Current().combinations) {
    throw BudgetError("independence check needs " + std::to_string(work) +
                      " orientation unions");
  }
  const ItemSet all = ItemSet::Full(s.ground());
  return detail::ForEachCombination(k, r, [&](const std::vector<int>& idx) {
    for (std::uint32_t orient = 0; orient < (1u << r); ++orient) {
      ItemSet u(s.ground());
      for (int b = 0; b < r; ++b) {
        u |= ((orient >> b) & 1) ? s[idx[b]] : s[idx[b]].complement();
      }
      if (u == all) return false;
    }
    return true;
  });
}

template <class T>
struct Sampled {
  T value;
  std::int64_t attempts;
};

// Each item joins each member independently by a fair coin.
inline SetCollection SampleFairCoinCollection(int m, int k, Rng& rng) {
  SetCollection out(m);
  for (int i = 0; i < k; ++i) {
    ItemSet s(m);
    for (int j = 0; j < m; ++j) {
      if (rng.Coin()) s.insert(j);
    }
    out.push_back(s);
  }
  return out;
}

// Rejection-samples fair-coin collections until one is l-independent.
inline Sampled<SetCollection> SampleLIndependent(int m, int l, int k, Rng& rng,
                                                 std::int64_t max_attempts = 0) {
  CheckSparsityParameter(l);
  if (k < 1) throw ParameterError("k must be >= 1");
  if (max_attempts <= 0) max_attempts = Budget::Current().sampler_attempts;
  for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    SetCollection s = SampleFairCoinCollection(m, k, rng);
    if (IsLIndependent(s, l)) return {std::move(s), attempt};
  }
  throw SamplingFailure("no " + std::to_string(l) + "-independent collection of " +
                            std::to_string(k) + " sets over " + std::to_string(m) +
                            " items found",
                        max_attempts);
}

// Sizes for which random independent families exist: l = log2(m) - log2(x), k = floor(e^{x/l}).
struct IndependenceParameters {
  double l;
  double k;
};

inline IndependenceParameters ExistenceParameters(double m, double x) {
  if (x <= 1.0 || m <= x) throw ParameterError("need m > x > 1");
  const double l = std::log2(m) - std::log2(x);
  return {l, std::floor(std::exp(x / l))};
}

// Uniform random subset of the given size (Fisher-Yates prefix).
inline ItemSet SampleSubset(int m, int size, Rng& rng) {
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  ItemSet out(m);
  for (int i = 0; i < size; ++i) {
    const int j = i + static_cast<int>(rng.UniformBelow(m - i));
    std::swap(perm[i], perm[j]);
    out.insert(perm[i]);
  }
  return out;
}

inline void CheckEvenGround(int m) {
  if (m < 2 || m % 2 != 0) {
    throw ParameterError("m must be a positive even integer, got " + std::to_string(m));
  }
}

// Uniform subset of size m/2 + 1.
inline ItemSet SampleHalfset(int m, Rng& rng) {
  CheckEvenGround(m);
  return SampleSubset(m, m / 2 + 1, rng);
}

// A uniform draw from all pairs (X, Y) of (m/2+1)-sets with |X ^ Y| = 2: X is
// uniform, then one uniform element of X is swapped for one uniform element
// outside X.
inline std::pair<ItemSet, ItemSet> SampleMuLink(int m, Rng& rng) {
  const ItemSet x = SampleHalfset(m, rng);
  const auto inside = x.items();
  const auto outside = x.complement().items();
  ItemSet y = x;
  y.erase(inside[rng.UniformBelow(inside.size())]);
  y.insert(outside[rng.UniformBelow(outside.size())]);
  return {x, y};
}

struct CompatibilityReport {
  bool sizes = false;           // every |X_i| = |Y_i| = m/2 + 1
  bool near_or_far = false;     // |X_i ^ Y_i| = 2 or |X_i & Y_i| = 2 for all i
  bool sparse = false;          // both collections l-sparse
  bool small_sets_contained = false;  // every set of size < l/2 lies in some X_i and some Y_j
  bool ok() const { return sizes && near_or_far && sparse && small_sets_contained; }
};

namespace detail {

// Every subset of size l/2 - 1 (hence every smaller one) is contained in a
// member of the collection.
inline bool ContainsAllSmallSets(const SetCollection& c, int l) {
  const int m = c.ground();
  const int r = std::min(l / 2 - 1, m);
  if (c.empty()) return false;
  if (Binomial(m, r) > Budget::Current().combinations) {
    throw BudgetError("small-set containment check needs C(" + std::to_string(m) + "," +
                      std::to_string(r) + ") subsets");
  }
  return ForEachCombination(m, r, [&](const std::vector<int>& idx) {
    const ItemSet t = ItemSet::FromItems(m, idx);
    return std::any_of(c.sets().begin(), c.sets().end(),
                       [&](const ItemSet& s) { return t.is_subset_of(s); });
  });
}

}  // namespace detail

inline CompatibilityReport CheckLCompatible(const SetCollection& x, const SetCollection& y,
                                            int l) {
  CheckSparsityParameter(l);
  if (x.size() != y.size()) throw ParameterError("collections differ in length");
  if (x.ground() != y.ground()) throw ParameterError("collections differ in ground set");
  const int m = x.ground();
  CompatibilityReport r;
  r.sizes = m % 2 == 0;
  r.near_or_far = true;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i].size() != m / 2 + 1 || y[i].size() != m / 2 + 1) r.sizes = false;
    const int sym = (x[i] ^ y[i]).size();
    const int common = (x[i] & y[i]).size();
    if (sym != 2 && common != 2) r.near_or_far = false;
  }
  r.sparse = IsLSparse(x, l) && IsLSparse(y, l);
  r.small_sets_contained = detail::ContainsAllSmallSets(x, l) && detail::ContainsAllSmallSets(y, l);
  return r;
}

// Y with |X & Y| = 2: the complement of X plus two elements of X.
inline ItemSet FarPartner(const ItemSet& x, Rng& rng) {
  auto inside = x.items();
  if (inside.size() < 2) throw ParameterError("far partner needs |X| >= 2");
  ItemSet y = x.complement();
  const auto a = rng.UniformBelow(inside.size());
  auto b = rng.UniformBelow(inside.size() - 1);
  if (b >= a) ++b;
  y.insert(inside[a]);
  y.insert(inside[b]);
  return y;
}

// Y with |X ^ Y| = 2: swap one element of X for one outside.
inline ItemSet NearPartner(const ItemSet& x, Rng& rng) {
  const auto inside = x.items();
  const auto outside = x.complement().items();
  ItemSet y = x;
  y.erase(inside[rng.UniformBelow(inside.size())]);
  y.insert(outside[rng.UniformBelow(outside.size())]);
  return y;
}

// Draws X_i i.i.d. uniform (m/2+1)-sets; Y_i is a near partner for indices
// outside far_indices and a far partner inside it. Retries until the pair is
// l-compatible.
inline Sampled<std::pair<SetCollection, SetCollection>> SampleCompatiblePair(
    int m, int k, int l, const std::set<int>& far_indices, Rng& rng,
    std::int64_t max_attempts = 0) {
  CheckEvenGround(m);
  CheckSparsityParameter(l);
  if (k < 1) throw ParameterError("k must be >= 1");
  for (int i : far_indices) {
    if (i < 0 || i >= k) throw ParameterError("far index " + std::to_string(i) + " outside [k]");
  }
  if (max_attempts <= 0) max_attempts = Budget::Current().sampler_attempts;
  for (std::int64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    SetCollection xs(m), ys(m);
    for (int i = 0; i < k; ++i) {
      const ItemSet x = SampleHalfset(m, rng);
      xs.push_back(x);
      ys.push_back(far_indices.count(i) ? FarPartner(x, rng) : NearPartner(x, rng));
    }
    if (CheckLCompatible(xs, ys, l).ok()) {
      return {{std::move(xs), std::move(ys)}, attempt};
    }
  }
  throw SamplingFailure("no " + std::to_string(l) + "-compatible pair found for m=" +
                            std::to_string(m) + ", k=" + std::to_string(k),
                        max_attempts);
}

// (X, Y) is a link if both have size m/2 + 1 and |X ^ Y| = 2.
inline bool IsLink(const ItemSet& x, const ItemSet& y) {
  const int m = x.ground();
  if (y.ground() != m || m % 2 != 0) return false;
  return x.size() == m / 2 + 1 && y.size() == m / 2 + 1 && (x ^ y).size() == 2;
}

// A chain is T_1..T_n (n = m/2) with consecutive links and |T_1 & T_n| = 2.
inline bool IsChain(const std::vector<ItemSet>& t) {
  if (t.empty()) return false;
  const int m = t.front().ground();
  if (m < 4 || m % 2 != 0 || static_cast<int>(t.size()) != m / 2) return false;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!IsLink(t[i], t[i + 1])) return false;
  }
  return (t.front() & t.back()).size() == 2;
}

struct ChainLinkCounts {
  int m = 0;
  BigInt chains;           // m!/2
  BigInt links;            // C(m, n+1) (n-1) (n+1)
  BigInt chains_per_link;  // m! / (2 C(m, n+1) (n+1))
  // Populated when the explicit enumeration ran (m <= 8).
  bool enumerated = false;
  BigInt enumerated_chains;
  BigInt enumerated_links;
  BigInt min_chains_per_link;  // over all links, counting structural links
  BigInt max_chains_per_link;
};

namespace detail {

inline BigInt Factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt BigBinomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  return Factorial(n) / (Factorial(r) * Factorial(n - r));
}

}  // namespace detail

// Counts chains and links for ground size m. Formulas are evaluated for any
// even m >= 4; for m <= 8 chains and links are also enumerated explicitly as
// set sequences, and the number of chains using each link as a structural link
// ((T_i, T_{i+1}) or (T_i, T_{i-1}) for odd i, 1-based) is tallied.
inline ChainLinkCounts CountChainsLinks(int m) {
  if (m < 4 || m % 2 != 0) throw ParameterError("m must be even and >= 4");
  const int n = m / 2;
  ChainLinkCounts out;
  out.m = m;
  out.chains = detail::Factorial(m) / 2;
  out.links = detail::BigBinomial(m, n + 1) * (n - 1) * (n + 1);
  out.chains_per_link = detail::Factorial(m) / (2 * detail::BigBinomial(m, n + 1) * (n + 1));
  if (m > 8) return out;

  std::vector<std::uint64_t> halfsets;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    if (std::popcount(mask) == n + 1) halfsets.push_back(mask);
  }
  std::map<std::uint64_t, std::vector<std::uint64_t>> successors;
  std::int64_t links = 0;
  for (auto x : halfsets) {
    for (auto y : halfsets) {
      if (std::popcount(x ^ y) == 2) {
        successors[x].push_back(y);
        ++links;
      }
    }
  }
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::int64_t> structural;
  for (auto x : halfsets) {
    for (auto y : successors[x]) structural[{x, y}] = 0;
  }
  std::int64_t chains = 0;
  std::vector<std::uint64_t> seq;
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(seq.size()) == n) {
      if (std::popcount(seq.front() & seq.back()) != 2) return;
      ++chains;
      for (int i = 1; i <= n; i += 2) {  // odd positions, 1-based
        if (i < n) ++structural[{seq[i - 1], seq[i]}];
        if (i > 1) ++structural[{seq[i - 1], seq[i - 2]}];
      }
      return;
    }
    for (auto y : successors[seq.back()]) {
      seq.push_back(y);
      self(self);
      seq.pop_back();
    }
  };
  for (auto x : halfsets) {
    seq.assign(1, x);
    dfs(dfs);
  }
  out.enumerated = true;
  out.enumerated_chains = chains;
  out.enumerated_links = links;
  std::int64_t lo = INT64_MAX, hi = 0;
  for (const auto& [link, count] : structural) {
    lo = std::min(lo, count);
    hi = std::max(hi, count);
  }
  out.min_chains_per_link = lo;
  out.max_chains_per_link = hi;
  return out;
}

}  // namespace auctionlab
