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

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

// Under C++20 rewritten comparisons, boost::rational's equality against a
// bare integer recurses without end. These deleted overloads turn every such
// comparison into a compile error; compare against Rational(n) instead.
namespace boost {
template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
bool operator==(const rational<std::int64_t>&, const I&) = delete;
template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
bool operator==(const I&, const rational<std::int64_t>&) = delete;
}  // namespace boost

namespace auctionlab {

// Valuation values and exact weights. Instances in this library use small
// integers and small denominators, so 64-bit numerators suffice.
using Rational = boost::rational<std::int64_t>;

// Unbounded rationals for certificate checks (LP verification, exact
// expectations with non-dyadic probabilities).
using BigRational = boost::multiprecision::cpp_rational;

inline double ToDouble(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline BigRational ToBig(const Rational& r) {
  return BigRational(r.numerator()) / BigRational(r.denominator());
}

inline std::string ToString(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::string ToString(const BigRational& r) {
  return r.str();
}

// Conversion used by code templated on the probability/value scalar.
template <class Scalar>
Scalar FromRational(const Rational& r);

template <>
inline double FromRational<double>(const Rational& r) {
  return ToDouble(r);
}

template <>
inline BigRational FromRational<BigRational>(const Rational& r) {
  return ToBig(r);
}

template <>
inline Rational FromRational<Rational>(const Rational& r) {
  return r;
}

inline double ToDouble(double x) { return x; }
inline double ToDouble(const BigRational& r) { return r.convert_to<double>(); }

// Best rational approximation of x with denominator at most max_den
// (continued fractions). Used to snap solver output onto exact values.
inline BigRational Rationalize(double x, std::int64_t max_den = 1000000) {
  const bool neg = x < 0;
  double v = neg ? -x : x;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(rest);
    if (a_d > 9e15) break;
    const auto a = static_cast<std::int64_t>(a_d);
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    const std::int64_t p2 = a * p1 + p0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = rest - a_d;
    if (frac < 1e-15) break;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - v) < 1e-15) break;
    rest = 1.0 / frac;
  }
  if (q1 == 0) return BigRational(0);
  BigRational r = BigRational(p1) / BigRational(q1);
  return neg ? BigRational(-r) : r;
}

}  // namespace auctionlab
