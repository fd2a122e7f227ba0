#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hypergame/closed_set.hpp"
#include "hypergame/distance.hpp"
#include "hypergame/rational.hpp"
#include "hypergame/tail_seq.hpp"

namespace hypergame {

using Json = nlohmann::json;

// Rationals travel as exact "p/q" strings, integers as decimal strings.
inline Json to_json(const Rat& r) { return format_rational(r); }

inline Rat rat_from_json(const Json& j) {
  if (!j.is_string()) throw parse_error("expected rational string");
  return parse_rational(j.get<std::string>());
}

inline Json to_json(const Int& v) { return v.str(); }

inline Int int_from_json(const Json& j) {
  if (j.is_number_unsigned())
    return Int(j.get<std::uint64_t>());
  if (j.is_number_integer())
    return Int(j.get<std::int64_t>());
  if (!j.is_string()) throw parse_error("expected integer");
  std::string s = j.get<std::string>();
  if (s.empty()) throw parse_error("empty integer");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i == 0 && (s[i] == '-' || s[i] == '+')) continue;
    if (s[i] < '0' || s[i] > '9') throw parse_error("malformed integer: " + s);
  }
  return Int(s);
}

inline Json to_json(const TailSeq& s) {
  Json j;
  Json prefix = Json::array();
  for (const Rat& v : s.explicit_prefix()) prefix.push_back(to_json(v));
  j["prefix"] = std::move(prefix);
  j["tail"] = to_json(s.tail());
  return j;
}

inline TailSeq tailseq_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("prefix") || !j.contains("tail"))
    throw parse_error("malformed sequence record");
  std::vector<Rat> prefix;
  for (const Json& v : j.at("prefix")) prefix.push_back(rat_from_json(v));
  return TailSeq::from_prefix(prefix, rat_from_json(j.at("tail")));
}

// Tagged record for closed-set representations. `depth` is attached at the
// top level by callers that persist sets to standalone files.
inline Json to_json(const ClosedSetRep& rep) {
  const auto& n = rep.node();
  Json j;
  if (auto* fp = std::get_if<repr::FinitePoints>(&n)) {
    j["kind"] = "finite";
    Json pts = Json::array();
    for (const auto& p : fp->points) pts.push_back(to_json(p));
    j["points"] = std::move(pts);
  } else if (auto* fam = std::get_if<repr::ParamFamily>(&n)) {
    j["kind"] = "family";
    j["base_rule"] = to_json(fam->base_rule);
    Json stages = Json::array();
    for (const auto& st : fam->stages) {
      Json s;
      s["refined_index"] = st.refined_index;
      s["rule_base"] = to_json(st.rule_base);
      stages.push_back(std::move(s));
    }
    j["stages"] = std::move(stages);
  } else if (auto* g = std::get_if<repr::Graft>(&n)) {
    j["kind"] = "graft";
    j["inner"] = to_json(*g->inner);
    j["cut"] = g->cut;
    j["tail"] = to_json(g->tail);
  } else {
    auto* u = std::get_if<repr::Union>(&n);
    j["kind"] = "union";
    Json parts = Json::array();
    for (const auto& p : u->parts) parts.push_back(to_json(p));
    j["parts"] = std::move(parts);
  }
  if (rep.closure_marker()) j["closed"] = true;
  return j;
}

inline ClosedSetRep rep_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw parse_error("malformed set record");
  std::string kind = j.at("kind").get<std::string>();
  ClosedSetRep rep = [&]() -> ClosedSetRep {
    if (kind == "finite") {
      std::vector<TailSeq> pts;
      for (const Json& p : j.at("points")) pts.push_back(tailseq_from_json(p));
      return ClosedSetRep::finite_points(std::move(pts));
    }
    if (kind == "family") {
      ClosedSetRep r = ClosedSetRep::base_family(int_from_json(j.at("base_rule")));
      for (const Json& s : j.at("stages"))
        r = r.refine(s.at("refined_index").get<std::uint64_t>(),
                     int_from_json(s.at("rule_base")));
      return r;
    }
    if (kind == "graft") {
      return ClosedSetRep::graft_of(rep_from_json(j.at("inner")),
                                    j.at("cut").get<std::uint64_t>(),
                                    rat_from_json(j.at("tail")));
    }
    if (kind == "union") {
      std::vector<ClosedSetRep> parts;
      for (const Json& p : j.at("parts")) parts.push_back(rep_from_json(p));
      return ClosedSetRep::union_of(std::move(parts));
    }
    throw parse_error("unknown set kind: " + kind);
  }();
  if (j.contains("closed") && j.at("closed").get<bool>())
    rep = rep.with_closure_marker();
  return rep;
}

inline Json to_json(const HyperBall& b) {
  Json j;
  j["center"] = to_json(b.center);
  j["radius_den"] = to_json(b.radius_den);
  return j;
}

inline HyperBall ball_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("radius_den"))
    throw parse_error("malformed ball record");
  HyperBall b{rep_from_json(j.at("center")), int_from_json(j.at("radius_den"))};
  if (b.radius_den < 1) throw parse_error("ball radius must be 1/k, k >= 1");
  return b;
}

// Standalone set file: representation plus its resolution depth.
inline Json set_file_json(const ClosedSetRep& rep, const Int& depth) {
  Json j = to_json(rep);
  j["depth"] = to_json(depth);
  return j;
}

inline std::pair<ClosedSetRep, Int> set_file_from_json(const Json& j) {
  Int depth = j.contains("depth") ? int_from_json(j.at("depth")) : Int(64);
  return {rep_from_json(j), depth};
}

// Canonical dump: nlohmann sorts object keys, so equal values give equal
// bytes; all numbers that matter are exact strings.
inline std::string canonical_dump(const Json& j) { return j.dump(2); }

}  // namespace hypergame
