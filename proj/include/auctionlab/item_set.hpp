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

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "auctionlab/errors.hpp"

namespace auctionlab {

inline constexpr int kMaxItems = 128;

// A subset of the ground set {0, ..., m-1}, stored as a fixed 128-bit vector.
// Bits at positions >= m are always zero.
class ItemSet {
 public:
  ItemSet() = default;

  // The empty set over m items.
  explicit ItemSet(int m) : m_(CheckedGround(m)) {}

  ItemSet(int m, std::initializer_list<int> items) : ItemSet(m) {
    for (int i : items) insert(i);
  }

  static ItemSet FromItems(int m, const std::vector<int>& items) {
    ItemSet s(m);
    for (int i : items) s.insert(i);
    return s;
  }

  static ItemSet Full(int m) { return ItemSet(m).complement(); }

  // Low 64 bits given as a mask; requires m <= 64.
  static ItemSet FromMask(int m, std::uint64_t mask) {
    ItemSet s(m);
    if (m > 64) throw ParameterError("FromMask requires m <= 64");
    s.lo_ = mask & LowMask(m);
    return s;
  }

  // Parses a hex string with the most significant digit first (the format
  // produced by hex()).
  static ItemSet FromHex(int m, const std::string& hex) {
    ItemSet s(m);
    int bit = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
      const char c = *it;
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw ParameterError(std::string("bad hex digit '") + c + "'");
      for (int b = 0; b < 4; ++b, ++bit) {
        if ((v >> b) & 1) {
          if (bit >= m) throw ParameterError("hex set has bits beyond m");
          s.insert(bit);
        }
      }
    }
    return s;
  }

  int ground() const { return m_; }

  bool contains(int i) const {
    return i < 64 ? ((lo_ >> i) & 1) : ((hi_ >> (i - 64)) & 1);
  }

  void insert(int i) {
    CheckItem(i);
    if (i < 64) lo_ |= std::uint64_t{1} << i;
    else hi_ |= std::uint64_t{1} << (i - 64);
  }

  void erase(int i) {
    CheckItem(i);
    if (i < 64) lo_ &= ~(std::uint64_t{1} << i);
    else hi_ &= ~(std::uint64_t{1} << (i - 64));
  }

  int size() const { return std::popcount(lo_) + std::popcount(hi_); }
  bool empty() const { return lo_ == 0 && hi_ == 0; }
  bool full() const { return *this == Full(m_); }

  ItemSet complement() const {
    ItemSet r(m_);
    r.lo_ = ~lo_ & LowMask(m_);
    r.hi_ = ~hi_ & HighMask(m_);
    return r;
  }

  ItemSet operator|(const ItemSet& o) const { return Combine(o, lo_ | o.lo_, hi_ | o.hi_); }
  ItemSet operator&(const ItemSet& o) const { return Combine(o, lo_ & o.lo_, hi_ & o.hi_); }
  ItemSet operator^(const ItemSet& o) const { return Combine(o, lo_ ^ o.lo_, hi_ ^ o.hi_); }
  // Set difference.
  ItemSet operator-(const ItemSet& o) const { return Combine(o, lo_ & ~o.lo_, hi_ & ~o.hi_); }

  ItemSet& operator|=(const ItemSet& o) { return *this = *this | o; }
  ItemSet& operator&=(const ItemSet& o) { return *this = *this & o; }

  bool is_subset_of(const ItemSet& o) const {
    return (lo_ & ~o.lo_) == 0 && (hi_ & ~o.hi_) == 0;
  }
  bool intersects(const ItemSet& o) const { return (lo_ & o.lo_) || (hi_ & o.hi_); }

  // Smallest item, or -1 when empty.
  int first() const {
    if (lo_) return std::countr_zero(lo_);
    if (hi_) return 64 + std::countr_zero(hi_);
    return -1;
  }

  std::vector<int> items() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint64_t w = lo_; w; w &= w - 1) out.push_back(std::countr_zero(w));
    for (std::uint64_t w = hi_; w; w &= w - 1) out.push_back(64 + std::countr_zero(w));
    return out;
  }

  std::uint64_t low_word() const { return lo_; }
  std::uint64_t high_word() const { return hi_; }

  // Low 64 bits; only meaningful for m <= 64.
  std::uint64_t mask() const { return lo_; }

  // Hex digits, most significant first, ceil(m/4) digits.
  std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const int digits = m_ == 0 ? 1 : (m_ + 3) / 4;
    std::string out(digits, '0');
    for (int d = 0; d < digits; ++d) {
      int v = 0;
      for (int b = 0; b < 4; ++b) {
        const int i = 4 * d + b;
        if (i < m_ && contains(i)) v |= 1 << b;
      }
      out[digits - 1 - d] = kDigits[v];
    }
    return out;
  }

  // "{0,3,5}"
  std::string str() const {
    std::string out = "{";
    bool first_item = true;
    for (int i : items()) {
      if (!first_item) out += ',';
      out += std::to_string(i);
      first_item = false;
    }
    return out + "}";
  }

  friend bool operator==(const ItemSet& a, const ItemSet& b) {
    return a.m_ == b.m_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  // Orders by the bit pattern read as an unsigned 128-bit integer.
  friend bool operator<(const ItemSet& a, const ItemSet& b) {
    if (a.hi_ != b.hi_) return a.hi_ < b.hi_;
    return a.lo_ < b.lo_;
  }

  std::size_t hash() const {
    std::uint64_t h = lo_ * 0x9e3779b97f4a7c15ULL;
    h ^= (hi_ + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h ^ static_cast<std::uint64_t>(m_));
  }

 private:
  static int CheckedGround(int m) {
    if (m < 0 || m > kMaxItems) {
      throw ParameterError("ground set size must be in [0, 128], got " + std::to_string(m));
    }
    return m;
  }

  static std::uint64_t LowMask(int m) {
    return m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1);
  }
  static std::uint64_t HighMask(int m) {
    if (m <= 64) return 0;
    return m >= 128 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (m - 64)) - 1);
  }

  void CheckItem(int i) const {
    if (i < 0 || i >= m_) {
      throw ParameterError("item " + std::to_string(i) + " outside ground set of size " +
                           std::to_string(m_));
    }
  }

  ItemSet Combine(const ItemSet& o, std::uint64_t lo, std::uint64_t hi) const {
    if (o.m_ != m_) {
      throw ParameterError("ground set mismatch: " + std::to_string(m_) + " vs " +
                           std::to_string(o.m_));
    }
    ItemSet r(m_);
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  int m_ = 0;
};

struct ItemSetHash {
  std::size_t operator()(const ItemSet& s) const { return s.hash(); }
};

}  // namespace auctionlab
