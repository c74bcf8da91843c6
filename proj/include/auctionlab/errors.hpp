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

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

namespace auctionlab {

// Invalid arguments: odd l, mismatched ground sets, malformed input files.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// An exhaustive computation was refused because it exceeds the enumeration
// budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A rejection sampler hit its attempt cap.
class SamplingFailure : public std::runtime_error {
 public:
  SamplingFailure(const std::string& what, std::int64_t attempts)
      : std::runtime_error(what + " (attempts: " + std::to_string(attempts) + ")"),
        attempts_(attempts) {}
  std::int64_t attempts() const { return attempts_; }

 private:
  std::int64_t attempts_;
};

// An object violates a precondition of its own construction, e.g. a cover
// valuation over a collection that is not l-sparse.
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double gap)
      : std::runtime_error(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

// Enumeration caps. Defaults can be overridden through the AUCTIONLAB_BUDGET
// environment variable, a comma separated list of key=value pairs, e.g.
// "exhaustive_items=22,pair_check_items=11".
struct Budget {
  int exhaustive_items = 20;    // 2^m scans (welfare, demand queries)
  int pair_check_items = 10;    // 4^m pair checks (monotone/subadditive)
  int lp_exact_items = 12;      // full column enumeration of the LP
  int mph_build_items = 10;     // half-m MPH representation
  double combinations = 1e7;    // independence / compatibility enumerations
  std::int64_t sampler_attempts = 10000;

  static Budget FromString(const std::string& text) {
    Budget b;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ParameterError("budget entry without '=': " + item);
      }
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      try {
        if (key == "exhaustive_items") b.exhaustive_items = std::stoi(val);
        else if (key == "pair_check_items") b.pair_check_items = std::stoi(val);
        else if (key == "lp_exact_items") b.lp_exact_items = std::stoi(val);
        else if (key == "mph_build_items") b.mph_build_items = std::stoi(val);
        else if (key == "combinations") b.combinations = std::stod(val);
        else if (key == "sampler_attempts") b.sampler_attempts = std::stoll(val);
        else throw ParameterError("unknown budget key: " + key);
      } catch (const std::logic_error& e) {
        if (dynamic_cast<const ParameterError*>(&e)) throw;
        throw ParameterError("bad budget value for " + key + ": " + val);
      }
    }
    return b;
  }

  static const Budget& Current() {
    static const Budget budget = [] {
      const char* env = std::getenv("AUCTIONLAB_BUDGET");
      return env ? FromString(env) : Budget{};
    }();
    return budget;
  }
};

inline void RequireExhaustive(int m, int cap, const char* what) {
  if (m > cap) {
    throw BudgetError(std::string(what) + ": m=" + std::to_string(m) +
                      " exceeds the exhaustive limit of " + std::to_string(cap) +
                      " items");
  }
}

}  // namespace auctionlab
