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

#include <openssl/evp.h>

#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "auctionlab/configlp.hpp"
#include "auctionlab/errors.hpp"
#include "auctionlab/item_set.hpp"
#include "auctionlab/rational.hpp"
#include "auctionlab/sets.hpp"
#include "auctionlab/valuations.hpp"
#include "auctionlab/welfare.hpp"

namespace auctionlab {

using Json = nlohmann::json;

// Malformed or unexpected JSON input.
class SchemaError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

namespace io {

inline const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline int IntField(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

// Integers stay integers; other values are written as "p/q".
inline Json RationalToJson(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational SmallRational(const BigRational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const auto n = numerator(r), d = denominator(r);
  if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) throw SchemaError("rational out of 64-bit range");
  return Rational(n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>());
}

inline Rational RationalFromJson(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) return SmallRational(Rationalize(j.get<double>()));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      const auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(std::stoll(s));
      const std::int64_t den = std::stoll(s.substr(slash + 1));
      if (den == 0) throw SchemaError("zero denominator in \"" + s + "\"");
      return Rational(std::stoll(s.substr(0, slash)), den);
    } catch (const std::logic_error&) {
      throw SchemaError("not a rational: \"" + s + "\"");
    }
  }
  throw SchemaError("expected an integer, a number or a \"p/q\" string");
}

inline ItemSet SetFromJson(int m, const Json& j) {
  if (j.is_string()) return ItemSet::FromHex(m, j.get<std::string>());
  if (!j.is_array()) throw SchemaError("a set is an array of item indices or a hex string");
  ItemSet s(m);
  for (const auto& item : j) {
    if (!item.is_number_integer()) throw SchemaError("item indices must be integers");
    const int i = item.get<int>();
    if (i < 0 || i >= m) throw SchemaError("item " + std::to_string(i) + " outside ground set");
    s.insert(i);
  }
  return s;
}

inline Json SetToJson(const ItemSet& s) { return s.items(); }

}  // namespace io

inline Json ToJson(const SetCollection& c) {
  Json sets = Json::array();
  for (const auto& s : c.sets()) sets.push_back(io::SetToJson(s));
  return Json{{"m", c.ground()}, {"sets", sets}};
}

inline SetCollection SetCollectionFromJson(const Json& j) {
  const int m = io::IntField(j, "m");
  if (m < 0 || m > kMaxItems) throw SchemaError("m out of range");
  const Json& sets = io::Field(j, "sets");
  if (!sets.is_array()) throw SchemaError("\"sets\" must be an array");
  SetCollection out(m);
  for (const auto& s : sets) out.push_back(io::SetFromJson(m, s));
  return out;
}

// {"kind": "mph", "m", "k", "clauses": [{"edges": [[[items], weight], ...]}, ...]}
inline Json ToJson(const MphRepresentation& rep) {
  Json clauses = Json::array();
  for (const auto& clause : rep.clauses) {
    Json edges = Json::array();
    for (const auto& e : clause) edges.push_back(Json::array({io::SetToJson(e.edge), io::RationalToJson(e.weight)}));
    clauses.push_back({{"edges", edges}});
  }
  return Json{{"kind", "mph"}, {"m", rep.m}, {"k", rep.rank}, {"clauses", clauses}};
}

inline MphRepresentation MphFromJson(const Json& j) {
  MphRepresentation rep;
  rep.m = io::IntField(j, "m");
  rep.rank = io::IntField(j, "k");
  for (const auto& c : io::Field(j, "clauses")) {
    PhClause clause;
    for (const auto& e : io::Field(c, "edges")) {
      if (!e.is_array() || e.size() != 2) throw SchemaError("an edge is [[items], weight]");
      clause.push_back({io::SetFromJson(rep.m, e[0]), io::RationalFromJson(e[1])});
    }
    rep.clauses.push_back(std::move(clause));
  }
  return rep;
}

// Valuations: {"kind": "cover", "l", "collection"}, {"kind": "explicit", "m",
// "values"}, the MPH form above, {"kind": "additive", "weights"}.
inline Json ToJson(const Valuation& v) {
  if (const auto* c = dynamic_cast<const CoverValuation*>(&v)) {
    return Json{{"kind", "cover"}, {"l", c->l()}, {"collection", ToJson(c->collection())}};
  }
  if (const auto* e = dynamic_cast<const ExplicitValuation*>(&v)) {
    Json values = Json::array();
    for (const auto& r : e->values()) values.push_back(io::RationalToJson(r));
    return Json{{"kind", "explicit"}, {"m", e->ground()}, {"values", values}};
  }
  if (const auto* p = dynamic_cast<const MphValuation*>(&v)) return ToJson(p->representation());
  if (const auto* a = dynamic_cast<const AdditiveValuation*>(&v)) {
    Json w = Json::array();
    for (const auto& r : a->weights()) w.push_back(io::RationalToJson(r));
    return Json{{"kind", "additive"}, {"weights", w}};
  }
  throw ParameterError("valuation kind \"" + v.kind() + "\" has no JSON form");
}

inline ValuationPtr ValuationFromJson(const Json& j) {
  const Json& kind = io::Field(j, "kind");
  if (!kind.is_string()) throw SchemaError("\"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "cover") {
    return std::make_shared<CoverValuation>(SetCollectionFromJson(io::Field(j, "collection")), io::IntField(j, "l"));
  }
  if (k == "explicit") {
    const int m = io::IntField(j, "m");
    std::vector<Rational> values;
    for (const auto& x : io::Field(j, "values")) values.push_back(io::RationalFromJson(x));
    return std::make_shared<ExplicitValuation>(m, std::move(values), false);
  }
  if (k == "mph") return std::make_shared<MphValuation>(MphFromJson(j));
  if (k == "additive") {
    std::vector<Rational> w;
    for (const auto& x : io::Field(j, "weights")) w.push_back(io::RationalFromJson(x));
    return std::make_shared<AdditiveValuation>(std::move(w));
  }
  throw SchemaError("unknown valuation kind \"" + k + "\"");
}

template <class P>
Json ToJson(const BasicFractionalAllocation<P>& frac) {
  Json cols = Json::array();
  for (int i = 0; i < 2; ++i) {
    for (const auto& c : frac.columns[i]) {
      Json prob;
      if constexpr (std::is_same_v<P, Rational>) {
        prob = io::RationalToJson(c.prob);
      } else {
        prob = c.prob;
      }
      cols.push_back({{"player", i}, {"set_hex", c.set.hex()}, {"prob", prob}});
    }
  }
  return Json{{"m", frac.m}, {"columns", cols}};
}

inline ExactFractionalAllocation FractionalFromJson(const Json& j) {
  ExactFractionalAllocation frac;
  frac.m = io::IntField(j, "m");
  for (const auto& c : io::Field(j, "columns")) {
    const int player = io::IntField(c, "player");
    if (player != 0 && player != 1) throw SchemaError("player must be 0 or 1");
    const Json& set = io::Field(c, "set_hex");
    if (!set.is_string()) throw SchemaError("\"set_hex\" must be a string");
    frac.columns[player].push_back({ItemSet::FromHex(frac.m, set.get<std::string>()),
                                    io::RationalFromJson(io::Field(c, "prob"))});
  }
  return frac;
}

inline Json ToJson(const LpSolution& sol) {
  Json j = ToJson(sol.primal);
  j.erase("m");
  j["objective"] = sol.objective;
  j["dual"] = {{"u", {sol.u[0], sol.u[1]}}, {"p", sol.p}};
  j["dual_objective"] = sol.dual_objective;
  j["exact_verified"] = sol.exact.verified;
  if (sol.exact.verified) j["exact_objective"] = sol.exact.objective.str();
  return j;
}

inline Json ToJson(const WelfareResult& w) {
  return Json{{"optimum", io::RationalToJson(w.optimum)}, {"witness_hex", w.witness.to_alice.hex()}};
}

inline Json ToJson(const WelfareResult& w, const TrivialProtocolReport& t) {
  Json j = ToJson(w);
  Json p{{"grand_bundle_to_random", io::RationalToJson(t.grand_bundle_to_random)},
         {"random_items_mc", t.random_items_mc},
         {"random_items_mc_stderr", t.random_items_mc_stderr},
         {"grand_bundle_second_price", io::RationalToJson(t.grand_bundle_second_price)}};
  if (t.random_items_exact) p["random_items_exact"] = io::RationalToJson(*t.random_items_exact);
  j["protocol_expectations"] = p;
  return j;
}

// A two-bidder instance: {"alice", "bob", optional "fractional", "provenance"}.
struct Instance {
  ValuationPtr alice, bob;
  std::optional<ExactFractionalAllocation> fractional;
  Json provenance;
};

inline Json InstanceToJson(const Valuation& alice, const Valuation& bob, const Json& provenance,
                           const ExactFractionalAllocation* frac = nullptr) {
  Json j{{"alice", ToJson(alice)}, {"bob", ToJson(bob)}, {"provenance", provenance}};
  if (frac) j["fractional"] = ToJson(*frac);
  return j;
}

inline Instance InstanceFromJson(const Json& j) {
  Instance inst;
  inst.alice = ValuationFromJson(io::Field(j, "alice"));
  inst.bob = ValuationFromJson(io::Field(j, "bob"));
  if (j.contains("fractional")) inst.fractional = FractionalFromJson(j.at("fractional"));
  if (j.contains("provenance")) inst.provenance = j.at("provenance");
  return inst;
}

// SHA-1 of "blob <size>\0<content>", the object id git assigns to a file.
inline std::string GitBlobHash(const std::string& content) {
  std::string data = "blob " + std::to_string(content.size());
  data.push_back('\0');
  data += content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw NumericalError("SHA-1 digest failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

inline std::string ContentHash(const Json& j) { return GitBlobHash(j.dump()); }

}  // namespace auctionlab
