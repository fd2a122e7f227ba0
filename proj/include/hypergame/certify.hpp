#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypergame/game.hpp"
#include "hypergame/strategies.hpp"

namespace hypergame {

// Outcome of an independent certificate check: the verified facts, the
// first failing steps, and non-fatal flags (e.g. weaker-than-derivable
// claims).
struct Verdict {
  bool valid = true;
  std::vector<std::string> facts;
  std::vector<std::string> failures;
  std::vector<std::string> flags;

  void fact(std::string s) { facts.push_back(std::move(s)); }
  void fail(std::string s) {
    valid = false;
    failures.push_back(std::move(s));
  }
  void flag(std::string s) { flags.push_back(std::move(s)); }
};

inline Json to_json(const Verdict& v) {
  Json j;
  j["valid"] = v.valid;
  j["facts"] = v.facts;
  j["failures"] = v.failures;
  j["flags"] = v.flags;
  return j;
}

// ---------------------------------------------------------------------------
// emptiness evidence (the interval-refinement strategy wins for beta)
//
// The evidence pins a parameter t_hat in the deepest refined interval and,
// per round, the prefix (t_hat, 0, ..., 0) that membership in that round's
// beta ball forces into every member set. The prefixes approximate the
// excluded point (t_hat, 0, 0, ...) to strictly growing depth, which is the
// finite content of the emptiness argument.
struct EmptinessEvidence {
  std::string trace_hash;
  Rat t_hat{0};
  std::vector<std::uint64_t> chain;  // refined member index per stage
  // forbidden prefix per round, run-length encoded: [(count, value), ...]
  struct Prefix {
    std::vector<std::pair<Int, Rat>> runs;
    Int length() const {
      Int n(0);
      for (const auto& r : runs) n += r.first;
      return n;
    }
  };
  std::vector<Prefix> prefixes;
};

inline Json to_json(const EmptinessEvidence& e) {
  Json j;
  j["type"] = "emptiness";
  j["trace"] = e.trace_hash;
  j["t_hat"] = to_json(e.t_hat);
  j["chain"] = e.chain;
  Json rounds = Json::array();
  for (const auto& p : e.prefixes) {
    Json runs = Json::array();
    for (const auto& r : p.runs)
      runs.push_back(Json::array({to_json(r.first), to_json(r.second)}));
    Json rec;
    rec["prefix_runs"] = std::move(runs);
    rounds.push_back(std::move(rec));
  }
  j["rounds"] = std::move(rounds);
  return j;
}

inline EmptinessEvidence emptiness_from_json(const Json& j) {
  if (!j.is_object() || j.value("type", "") != "emptiness")
    throw parse_error("not an emptiness certificate");
  EmptinessEvidence e;
  e.trace_hash = j.at("trace").get<std::string>();
  e.t_hat = rat_from_json(j.at("t_hat"));
  for (const Json& c : j.at("chain")) e.chain.push_back(c.get<std::uint64_t>());
  for (const Json& r : j.at("rounds")) {
    EmptinessEvidence::Prefix p;
    for (const Json& run : r.at("prefix_runs"))
      p.runs.push_back({int_from_json(run.at(0)), rat_from_json(run.at(1))});
    e.prefixes.push_back(std::move(p));
  }
  return e;
}

namespace detail {

// Alpha radius denominators k_m of a Choquet trace (raw balls; normalization
// preserves the radius).
inline std::vector<Int> alpha_denominators(const GameTrace& t) {
  std::vector<Int> ks;
  for (const auto& r : t.moves) {
    if (!r.alpha_ball) break;
    ks.push_back(r.alpha_ball->radius_den);
  }
  return ks;
}

// The frontier scheme of a family representation: the children of the most
// recently refined interval, or the base scheme.
inline Scheme frontier_scheme(const ClosedSetRep& rep) {
  auto* fam = std::get_if<repr::ParamFamily>(&rep.node());
  if (!fam)
    throw ill_formed_error("expected a family representation");
  if (fam->stages.empty()) return Scheme{};
  return fam->stages.back().child_scheme;
}

}  // namespace detail

inline EmptinessEvidence build_emptiness_certificate(const GameTrace& t) {
  if (t.kind != GameKind::Choquet)
    throw config_error("emptiness evidence applies to Choquet traces");
  if (t.beta_id != "sigma-ch")
    throw config_error("emptiness evidence requires the sigma-ch beta");
  if (t.fault) throw config_error("trace ends in a fault");
  if (t.moves.empty() || !t.moves.back().alpha_ball)
    throw config_error("trace has no completed round");
  EmptinessEvidence e;
  e.trace_hash = trace_content_hash(t);
  std::vector<Int> ks = detail::alpha_denominators(t);
  // refinement chain: member n_m + 1 of round m's frontier
  Int k_prev(0);
  std::optional<Interval> node;
  for (std::size_t m = 0; m < ks.size(); ++m) {
    Int n = ks[m] - k_prev;
    k_prev = ks[m];
    if (n < 1) throw ill_formed_error("alpha denominators not increasing");
    auto idx = static_cast<std::uint64_t>(n + 1);
    e.chain.push_back(idx);
    Scheme frontier = detail::frontier_scheme(t.beta_center(m));
    node = frontier.interval(idx);
  }
  e.t_hat = node->midpoint();
  // forbidden prefixes: (t_hat, 0 x (L_m - 1)) with L_m = 1 + k_m
  for (const Int& k : ks) {
    EmptinessEvidence::Prefix p;
    p.runs.push_back({Int(1), e.t_hat});
    p.runs.push_back({k, Rat(0)});
    e.prefixes.push_back(std::move(p));
  }
  return e;
}

// Independent check of the emptiness evidence against a trace: uses only
// the serialized moves and the set operations, never strategy internals.
inline Verdict check_emptiness_certificate(const EmptinessEvidence& e,
                                           const GameTrace& t) {
  Verdict v;
  if (e.trace_hash != trace_content_hash(t)) {
    v.fail("trace hash mismatch");
    return v;
  }
  if (t.kind != GameKind::Choquet) {
    v.fail("certificate kind mismatch: trace is not a Choquet run");
    return v;
  }
  if (t.fault) {
    v.fail("trace ends in a fault");
    return v;
  }
  LegalityReport legal = validate_trace(t);
  if (!legal.all_pass) {
    v.fail("trace legality re-check failed");
    return v;
  }
  v.fact("trace legality and ball nesting verified");

  std::vector<Int> ks = detail::alpha_denominators(t);
  if (e.prefixes.size() != ks.size() || e.chain.size() != ks.size()) {
    v.fail("round count mismatch");
    return v;
  }
  // ball schedule: V_0 has radius 1, V_m radius 1/(1+k_{m-1})
  for (std::size_t m = 0; m < t.moves.size() && m < ks.size(); ++m) {
    Int expect = m == 0 ? Int(1) : 1 + ks[m - 1];
    if (t.beta_radius_den(m) != expect) {
      v.fail("beta ball schedule mismatch at round " + std::to_string(m));
      return v;
    }
  }
  v.fact("beta ball radius schedule matches the refinement strategy");

  // chain indices and membership of t_hat
  Int k_prev(0);
  for (std::size_t m = 0; m < ks.size(); ++m) {
    Int n = ks[m] - k_prev;
    k_prev = ks[m];
    if (Int(e.chain[m]) != n + 1) {
      v.fail("chain index at stage " + std::to_string(m) +
             " does not match the alpha denominators");
      return v;
    }
    Scheme frontier = detail::frontier_scheme(t.beta_center(m));
    Interval node = frontier.interval(e.chain[m]);
    if (!node.contains(e.t_hat)) {
      v.fail("t_hat outside refinement chain interval at stage " +
             std::to_string(m));
      return v;
    }
  }
  v.fact("t_hat lies in every interval of the refinement chain");

  // per-round forced prefixes
  Int prev_len(0);
  TailSeq f_point = TailSeq::from_runs({{1, e.t_hat}}, Rat(0));
  for (std::size_t m = 0; m < ks.size(); ++m) {
    const auto& p = e.prefixes[m];
    Int len = p.length();
    Int maximal = 1 + ks[m];
    if (len > maximal) {
      v.fail("round " + std::to_string(m) +
             ": claimed prefix is deeper than derivable (" + len.str() +
             " > " + maximal.str() + ")");
      return v;
    }
    if (len <= prev_len) {
      v.fail("round " + std::to_string(m) +
             ": forced-prefix lengths must increase strictly");
      return v;
    }
    prev_len = len;
    if (len < maximal)
      v.flag("round " + std::to_string(m) +
             ": prefix weaker than derivable (" + len.str() + " < " +
             maximal.str() + ")");
    // the prefix must be (t_hat, 0, ..., 0)
    bool shape = !p.runs.empty() && p.runs[0].first >= 1 &&
                 p.runs[0].second == e.t_hat;
    if (shape && p.runs[0].first > 1 && e.t_hat != 0) shape = false;
    for (std::size_t i = 1; i < p.runs.size() && shape; ++i)
      shape = p.runs[i].second == 0 && p.runs[i].first >= 1;
    if (!shape) {
      v.fail("round " + std::to_string(m) +
             ": forbidden prefix is not of the form (t_hat, 0, ..., 0)");
      return v;
    }
    // the represented point at parameter t_hat carries that prefix
    std::optional<TailSeq> x;
    for (const auto& c : classes_of(t.beta_center(m))) {
      if (auto mm = c.member_with_param(e.t_hat)) {
        x = mm;
        break;
      }
    }
    if (!x) {
      v.fail("round " + std::to_string(m) +
             ": no represented point with parameter t_hat");
      return v;
    }
    if (!(point_set_dist(*x, t.beta_center(m), t.depth) ==
          MetricValue::zero())) {
      v.fail("round " + std::to_string(m) +
             ": located point is not a member of the offered set");
      return v;
    }
    // agreement with the excluded point (t_hat, 0, 0, ...) below len:
    // d(x, f_point) <= 1/(len+1)
    MetricValue d = baire_dist(*x, f_point);
    bool agree = d.is_zero() || d.denom() > len;
    if (d.is_zero()) {
      v.fail("round " + std::to_string(m) +
             ": located point equals the excluded point of F");
      return v;
    }
    if (!agree) {
      v.fail("round " + std::to_string(m) +
             ": offered set does not carry the forbidden prefix");
      return v;
    }
    // hull forcing: membership in V_m = B(A_m, 1/l) puts a point of the
    // member set within 1/l of x, i.e. agreeing with x below l; combined
    // with x's certified prefix this forces the F-prefix to depth min(l,len)
    Int l = t.beta_radius_den(m);
    Int forced = l < len ? l : len;
    v.fact("round " + std::to_string(m) + ": every member of the beta ball " +
           "contains a point agreeing with (t_hat, 0, ...) below " +
           forced.str() + " (ball radius 1/" + l.str() +
           ", certified prefix depth " + len.str() + ")");
  }
  v.fact(
      "conclusion: any set in every beta ball up to the horizon contains "
      "points agreeing with the excluded point (t_hat, 0, 0, ...) of F to "
      "depth " + prev_len.str() +
      "; the depths grow without bound as rounds extend");
  return v;
}

// ---------------------------------------------------------------------------
// nonempty witness (the grafting strategy wins for alpha)

struct NonemptyWitness {
  std::string trace_hash;
  ClosedSetRep s_set;
  // class-level chain selections: for each class of the final beta set, the
  // matching class id per earlier round
  struct Chain {
    std::string final_class;
    std::vector<std::string> selects;  // round R-1 down to 0
  };
  std::vector<Chain> chains;
  std::vector<std::string> h_values;  // recorded H(A_m, S) per round

  NonemptyWitness() : s_set(ClosedSetRep::finite_points({TailSeq::constant(Rat(0))})) {}
};

inline Json to_json(const NonemptyWitness& w) {
  Json j;
  j["type"] = "nonempty";
  j["trace"] = w.trace_hash;
  j["s_set"] = to_json(w.s_set);
  Json chains = Json::array();
  for (const auto& c : w.chains) {
    Json cj;
    cj["final_class"] = c.final_class;
    cj["selects"] = c.selects;
    chains.push_back(std::move(cj));
  }
  j["chains"] = std::move(chains);
  j["h_values"] = w.h_values;
  return j;
}

inline NonemptyWitness witness_from_json(const Json& j) {
  if (!j.is_object() || j.value("type", "") != "nonempty")
    throw parse_error("not a nonempty-witness certificate");
  NonemptyWitness w;
  w.trace_hash = j.at("trace").get<std::string>();
  w.s_set = rep_from_json(j.at("s_set"));
  for (const Json& c : j.at("chains")) {
    NonemptyWitness::Chain ch;
    ch.final_class = c.at("final_class").get<std::string>();
    for (const Json& s : c.at("selects"))
      ch.selects.push_back(s.get<std::string>());
    w.chains.push_back(std::move(ch));
  }
  for (const Json& h : j.at("h_values"))
    w.h_values.push_back(h.get<std::string>());
  return w;
}

// S at finite horizon: every point of the final beta set, kept below index
// 2 n_R - 1 and completed by the constant 1 + sum n_i (the canonical
// completion the strategy itself would play next). Chains record, per class
// of A_R, the class of each earlier A_m it extends.
inline NonemptyWitness build_S_witness(const GameTrace& t, const Int& depth) {
  if (t.kind != GameKind::BanachMazur)
    throw config_error("nonempty witness applies to Banach-Mazur traces");
  if (t.alpha_id != "sigma-bm")
    throw config_error("nonempty witness requires the sigma-bm alpha");
  if (t.fault) throw config_error("trace ends in a fault");
  if (t.moves.empty()) throw config_error("empty trace");
  std::vector<Int> ns;
  Int sum(0);
  for (const auto& r : t.moves) {
    if (!r.beta_ball) break;
    ns.push_back(r.beta_ball->radius_den);
    sum += ns.back();
  }
  const Int& n_last = ns.back();
  if (depth < 2 * n_last)
    throw config_error("witness depth must be at least 2 n_R");
  NonemptyWitness w;
  w.trace_hash = trace_content_hash(t);
  const ClosedSetRep& a_last = t.beta_center(ns.size() - 1);
  w.s_set = graft(a_last, static_cast<std::uint64_t>(2 * n_last - 1),
                  Rat(1 + sum));
  // class-level chains, selected by prefix agreement below 2 n_m - 1
  auto final_classes = classes_of(a_last);
  for (const auto& fc : final_classes) {
    NonemptyWitness::Chain ch;
    ch.final_class = fc.id;
    TailSeq y = fc.representative();
    for (std::size_t m = ns.size() - 1; m-- > 0;) {
      const ClosedSetRep& am = t.beta_center(m);
      std::optional<std::string> pick;
      for (const auto& c : classes_of(am)) {
        MetricValue d = dist_point_to_class(y, c, Metric::BaireD);
        auto ok = d.leq(Rat(1, 2 * ns[m]));
        if (ok && *ok) {
          pick = c.id;
          break;
        }
      }
      if (!pick)
        throw internal_error("witness chain selection failed at round " +
                             std::to_string(m));
      ch.selects.push_back(*pick);
    }
    w.chains.push_back(std::move(ch));
  }
  for (std::size_t m = 0; m < ns.size(); ++m) {
    MetricValue h = hausdorff_dist(t.beta_center(m), w.s_set, depth);
    w.h_values.push_back(h.str());
  }
  return w;
}

inline Verdict check_nonempty_witness(const NonemptyWitness& w,
                                      const GameTrace& t) {
  Verdict v;
  if (w.trace_hash != trace_content_hash(t)) {
    v.fail("trace hash mismatch");
    return v;
  }
  if (t.kind != GameKind::BanachMazur) {
    v.fail("certificate kind mismatch: trace is not a Banach-Mazur run");
    return v;
  }
  if (t.fault) {
    v.fail("trace ends in a fault");
    return v;
  }
  LegalityReport legal = validate_trace(t);
  if (!legal.all_pass) {
    v.fail("trace legality re-check failed");
    return v;
  }
  v.fact("trace legality and ball nesting verified");
  // every represented point lies in X
  try {
    validate_rep(w.s_set);
  } catch (const error& e) {
    v.fail(std::string("witness set ill-formed: ") + e.what());
    return v;
  }
  v.fact("every completed point of S lies in X");
  if (!is_closed_check(w.s_set, t.depth)) {
    v.fail("witness set fails the closedness audit");
    return v;
  }
  v.fact("S is uniformly discrete at the working resolution (closed)");
  std::vector<Int> ns;
  for (const auto& r : t.moves) {
    if (!r.beta_ball) break;
    ns.push_back(r.beta_ball->radius_den);
  }
  if (w.h_values.size() != ns.size()) {
    v.fail("round count mismatch");
    return v;
  }
  for (std::size_t m = 0; m < ns.size(); ++m) {
    MetricValue h = hausdorff_dist(t.beta_center(m), w.s_set, t.depth);
    if (h.str() != w.h_values[m]) {
      v.fail("recorded H(A_" + std::to_string(m) +
             ", S) does not match recomputation: " + w.h_values[m] + " vs " +
             h.str());
      return v;
    }
    auto ok = h.less_than(Rat(1, ns[m]));
    if (!ok || !*ok) {
      v.fail("H(A_" + std::to_string(m) + ", S) = " + h.str() +
             " is not below 1/" + ns[m].str());
      return v;
    }
    v.fact("round " + std::to_string(m) + ": H(A_m, S) = " + h.str() +
           " < 1/" + ns[m].str() + ", so S lies in beta's ball");
  }
  // chain data: every class of the final set extends backward through
  // classes of the earlier sets by forced-prefix agreement
  auto final_classes = classes_of(t.beta_center(ns.size() - 1));
  if (w.chains.size() != final_classes.size()) {
    v.fail("chain count does not match the final set's classes");
    return v;
  }
  for (std::size_t i = 0; i < final_classes.size(); ++i) {
    const auto& fc = final_classes[i];
    const auto& ch = w.chains[i];
    if (ch.final_class != fc.id) {
      v.fail("chain " + std::to_string(i) + " names an unknown final class");
      return v;
    }
    if (ch.selects.size() + 1 != ns.size()) {
      v.fail("chain " + std::to_string(i) + " has the wrong length");
      return v;
    }
    TailSeq y = fc.representative();
    for (std::size_t s = 0; s < ch.selects.size(); ++s) {
      std::size_t m = ns.size() - 2 - s;
      bool found = false;
      for (const auto& c : classes_of(t.beta_center(m))) {
        if (c.id != ch.selects[s]) continue;
        found = true;
        MetricValue d = dist_point_to_class(y, c, Metric::BaireD);
        auto agree = d.leq(Rat(1, 2 * ns[m]));
        if (!agree || !*agree) {
          v.fail("chain " + std::to_string(i) + ": selected class at round " +
                 std::to_string(m) + " does not agree below 2n-1");
          return v;
        }
      }
      if (!found) {
        v.fail("chain " + std::to_string(i) + ": unknown class id at round " +
               std::to_string(m));
        return v;
      }
    }
  }
  v.fact("chain selections verified: every final class extends backward "
         "through the recorded classes");
  v.fact("S lies in every ball of the run: the intersection is nonempty at "
         "the horizon");
  return v;
}

}  // namespace hypergame
