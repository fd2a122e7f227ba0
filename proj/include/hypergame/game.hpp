#pragma once

#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypergame/distance.hpp"
#include "hypergame/hash.hpp"
#include "hypergame/serial.hpp"

namespace hypergame {

enum class GameKind { Choquet, BanachMazur };

inline std::string kind_str(GameKind k) {
  return k == GameKind::Choquet ? "ch" : "bm";
}

inline std::string metric_str(Metric m) {
  return m == Metric::BaireD ? "d" : "dprime";
}

// Beta's move in the strong Choquet game: a designated member and a ball
// around it.
struct ChBetaMove {
  ClosedSetRep atom;
  HyperBall ball;
};

struct LegalityCheck {
  std::string name;
  std::string value;  // exact rendering of the quantities compared
  bool pass = true;
};

struct RoundRecord {
  std::uint64_t round = 0;
  std::optional<ChBetaMove> beta_ch;       // Choquet
  std::optional<HyperBall> beta_ball;      // Banach-Mazur
  std::optional<HyperBall> alpha_ball;     // as played
  std::optional<HyperBall> alpha_normal;   // engine-normalized (Choquet)
  std::vector<LegalityCheck> checks;
  Json derived = Json::object();  // strategy-side annotations, erasable
};

struct Fault {
  std::string offender;  // "alpha" | "beta" | "config"
  std::uint64_t round = 0;
  std::string constraint;
};

struct GameTrace {
  GameKind kind = GameKind::Choquet;
  std::uint64_t rounds = 0;  // rounds indexed 0..rounds
  Int depth{0};
  std::uint64_t seed = 0;
  std::string alpha_id, beta_id;
  std::uint64_t cap = 1;
  Metric metric = Metric::BaireD;
  std::vector<RoundRecord> moves;
  std::optional<Fault> fault;

  const ClosedSetRep& beta_center(std::uint64_t m) const {
    return kind == GameKind::Choquet ? moves.at(m).beta_ch->ball.center
                                     : moves.at(m).beta_ball->center;
  }
  const Int& beta_radius_den(std::uint64_t m) const {
    return kind == GameKind::Choquet ? moves.at(m).beta_ch->ball.radius_den
                                     : moves.at(m).beta_ball->radius_den;
  }
};

// ---------------------------------------------------------------------------
// serialization

inline Json header_json(const GameTrace& t) {
  Json h;
  h["version"] = 1;
  h["kind"] = kind_str(t.kind);
  h["rounds"] = t.rounds;
  h["depth"] = to_json(t.depth);
  h["seed"] = t.seed;
  h["alpha"] = t.alpha_id;
  h["beta"] = t.beta_id;
  h["cap"] = t.cap;
  h["metric"] = metric_str(t.metric);
  return h;
}

inline Json move_core_json(const GameTrace& t, const RoundRecord& r) {
  Json m;
  m["round"] = r.round;
  if (t.kind == GameKind::Choquet) {
    Json b;
    b["atom"] = to_json(r.beta_ch->atom);
    b["ball"] = to_json(r.beta_ch->ball);
    m["beta"] = std::move(b);
  } else {
    Json b;
    b["ball"] = to_json(*r.beta_ball);
    m["beta"] = std::move(b);
  }
  if (r.alpha_ball) {
    Json a;
    a["ball"] = to_json(*r.alpha_ball);
    m["alpha"] = std::move(a);
  }
  return m;
}

// The content hash covers the header and raw moves only, so erasing derived
// annotations or re-deriving legality does not reidentify the trace.
inline std::string trace_content_hash(const GameTrace& t) {
  Json j;
  j["header"] = header_json(t);
  Json moves = Json::array();
  for (const auto& r : t.moves) moves.push_back(move_core_json(t, r));
  j["moves"] = std::move(moves);
  return fnv1a_hex(canonical_dump(j));
}

inline Json to_json(const GameTrace& t) {
  Json j;
  j["header"] = header_json(t);
  Json moves = Json::array();
  for (const auto& r : t.moves) {
    Json m = move_core_json(t, r);
    if (r.alpha_normal) m["alpha"]["normalized"] = to_json(*r.alpha_normal);
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      Json cj;
      cj["name"] = c.name;
      cj["value"] = c.value;
      cj["pass"] = c.pass;
      checks.push_back(std::move(cj));
    }
    m["checks"] = std::move(checks);
    m["derived"] = r.derived;
    moves.push_back(std::move(m));
  }
  j["moves"] = std::move(moves);
  if (t.fault) {
    Json f;
    f["offender"] = t.fault->offender;
    f["round"] = t.fault->round;
    f["constraint"] = t.fault->constraint;
    j["fault"] = std::move(f);
  }
  j["content_hash"] = trace_content_hash(t);
  return j;
}

inline GameTrace trace_from_json(const Json& j) {
  GameTrace t;
  const Json& h = j.at("header");
  std::string k = h.at("kind").get<std::string>();
  if (k != "ch" && k != "bm") throw parse_error("unknown game kind: " + k);
  t.kind = k == "ch" ? GameKind::Choquet : GameKind::BanachMazur;
  t.rounds = h.at("rounds").get<std::uint64_t>();
  t.depth = int_from_json(h.at("depth"));
  t.seed = h.at("seed").get<std::uint64_t>();
  t.alpha_id = h.at("alpha").get<std::string>();
  t.beta_id = h.at("beta").get<std::string>();
  t.cap = h.at("cap").get<std::uint64_t>();
  std::string ms = h.at("metric").get<std::string>();
  if (ms != "d" && ms != "dprime") throw parse_error("unknown metric: " + ms);
  t.metric = ms == "d" ? Metric::BaireD : Metric::DPrime;
  for (const Json& m : j.at("moves")) {
    RoundRecord r;
    r.round = m.at("round").get<std::uint64_t>();
    const Json& b = m.at("beta");
    if (t.kind == GameKind::Choquet)
      r.beta_ch = ChBetaMove{rep_from_json(b.at("atom")),
                             ball_from_json(b.at("ball"))};
    else
      r.beta_ball = ball_from_json(b.at("ball"));
    if (m.contains("alpha")) {
      r.alpha_ball = ball_from_json(m.at("alpha").at("ball"));
      if (m.at("alpha").contains("normalized"))
        r.alpha_normal = ball_from_json(m.at("alpha").at("normalized"));
    }
    if (m.contains("checks")) {
      for (const Json& c : m.at("checks"))
        r.checks.push_back(LegalityCheck{c.at("name").get<std::string>(),
                                         c.at("value").get<std::string>(),
                                         c.at("pass").get<bool>()});
    }
    if (m.contains("derived")) r.derived = m.at("derived");
    t.moves.push_back(std::move(r));
  }
  if (j.contains("fault")) {
    const Json& f = j.at("fault");
    t.fault = Fault{f.at("offender").get<std::string>(),
                    f.at("round").get<std::uint64_t>(),
                    f.at("constraint").get<std::string>()};
  }
  if (j.contains("content_hash") &&
      j.at("content_hash").get<std::string>() != trace_content_hash(t))
    throw parse_error("trace content hash mismatch");
  return t;
}

// ---------------------------------------------------------------------------
// strategies

class ChAlphaStrategy {
 public:
  virtual ~ChAlphaStrategy() = default;
  virtual std::string id() const = 0;
  // Respond to beta's move with a ball containing the atom inside the ball.
  virtual HyperBall respond(const ChBetaMove& beta, std::uint64_t round) = 0;
  // Worst-case outgoing radius denominator given the incoming bound.
  virtual Int denom_bound(const Int& incoming, std::uint64_t round) const = 0;
};

class ChBetaStrategy {
 public:
  virtual ~ChBetaStrategy() = default;
  virtual std::string id() const = 0;
  virtual ChBetaMove open() = 0;
  // Respond to the engine-normalized alpha ball.
  virtual ChBetaMove respond(const HyperBall& alpha_normal,
                             std::uint64_t round) = 0;
  virtual Int denom_bound(const Int& incoming, std::uint64_t round) const = 0;
};

class BMStrategy {
 public:
  virtual ~BMStrategy() = default;
  virtual std::string id() const = 0;
  virtual HyperBall open() = 0;  // beta role, round 0
  virtual HyperBall respond(const HyperBall& opponent, std::uint64_t round) = 0;
  virtual Int denom_bound(const Int& incoming, std::uint64_t round) const = 0;
};

// ---------------------------------------------------------------------------
// engine

// The engine's canonical form for alpha moves in Ch: the largest ball
// centered at beta's atom inside U. Balls centered at the atom form a local
// base (ultrametric recentering), so normalization preserves who wins; the
// outer radius always works.
inline HyperBall normalize_alpha_move(const HyperBall& u,
                                      const ClosedSetRep& atom,
                                      const Int& depth,
                                      Metric metric = Metric::BaireD) {
  if (!hull_member(atom, u, depth, metric))
    throw ill_formed_error("normalize_alpha_move: atom outside the ball");
  HyperBall b{atom, u.radius_den};
  if (!ball_subset(b, u, depth, metric))
    throw internal_error("normalize_alpha_move: recentring failed");
  return b;
}

struct RunSettings {
  std::uint64_t rounds = 1;
  std::optional<Int> depth;  // nullopt: computed from the round budget
  std::uint64_t seed = 0;
  std::uint64_t cap = 1;
  Metric metric = Metric::BaireD;
};

namespace detail {

inline std::string check_val(const MetricValue& h, const Rat& threshold) {
  return "H=" + h.str() + " vs 1/" +
         denominator(threshold).str();
}

}  // namespace detail

// Worst-case radius-denominator bound after playing rounds 0..R.
template <typename BetaT, typename AlphaT>
Int fold_denominator_bound(const BetaT& beta, const AlphaT& alpha,
                           std::uint64_t rounds) {
  Int bound(0);
  for (std::uint64_t m = 0; m <= rounds; ++m) {
    bound = beta.denom_bound(bound, m);
    bound = alpha.denom_bound(bound, m);
  }
  return bound;
}

inline void enforce_depth_cap(const Int& depth);

// Plays rounds 0..R of the strong Choquet game, validating every move.
inline GameTrace run_choquet(ChBetaStrategy& beta, ChAlphaStrategy& alpha,
                             const RunSettings& s) {
  GameTrace t;
  t.kind = GameKind::Choquet;
  t.rounds = s.rounds;
  t.seed = s.seed;
  t.cap = s.cap;
  t.metric = s.metric;
  t.alpha_id = alpha.id();
  t.beta_id = beta.id();
  Int bound = fold_denominator_bound(beta, alpha, s.rounds);
  Int auto_depth = bound + 2;
  if (s.depth) {
    if (*s.depth < auto_depth)
      throw config_error("depth " + s.depth->str() +
                         " below the worst-case radius denominator bound " +
                         auto_depth.str());
    t.depth = *s.depth;
  } else {
    t.depth = auto_depth;
  }
  enforce_depth_cap(t.depth);

  std::optional<HyperBall> prev_alpha_raw;
  std::optional<HyperBall> prev_alpha_norm;
  for (std::uint64_t m = 0; m <= s.rounds; ++m) {
    RoundRecord rec;
    rec.round = m;
    ChBetaMove bm = m == 0 ? beta.open() : beta.respond(*prev_alpha_norm, m);
    // beta legality: the pair is from the admissible set (atom in ball) and
    // the ball nests inside alpha's previous ball
    try {
      validate_rep(bm.atom);
      MetricValue h =
          hausdorff_dist(bm.atom, bm.ball.center, t.depth, s.metric);
      bool in = hull_member(bm.atom, bm.ball, t.depth, s.metric);
      rec.checks.push_back({"beta: atom in ball",
                            detail::check_val(h, bm.ball.radius()), in});
      bool nest = true;
      if (m > 0) {
        MetricValue hc = hausdorff_dist(bm.ball.center, prev_alpha_raw->center,
                                        t.depth, s.metric);
        nest = ball_subset(bm.ball, *prev_alpha_raw, t.depth, s.metric);
        rec.checks.push_back({"beta: ball nesting",
                              detail::check_val(hc, prev_alpha_raw->radius()),
                              nest});
      }
      if (!in || !nest) {
        rec.beta_ch = std::move(bm);
        t.moves.push_back(std::move(rec));
        t.fault = Fault{"beta", m,
                        !in ? "atom not inside the offered ball"
                            : "ball nesting violated"};
        return t;
      }
    } catch (const error& e) {
      rec.beta_ch = std::move(bm);
      t.moves.push_back(std::move(rec));
      t.fault = Fault{"beta", m, e.what()};
      return t;
    }
    rec.beta_ch = bm;

    HyperBall u = alpha.respond(bm, m);
    try {
      MetricValue ha =
          hausdorff_dist(bm.atom, u.center, t.depth, s.metric);
      bool in = hull_member(bm.atom, u, t.depth, s.metric);
      rec.checks.push_back(
          {"alpha: atom in ball", detail::check_val(ha, u.radius()), in});
      MetricValue hc =
          hausdorff_dist(u.center, bm.ball.center, t.depth, s.metric);
      bool nest = ball_subset(u, bm.ball, t.depth, s.metric);
      rec.checks.push_back(
          {"alpha: ball nesting", detail::check_val(hc, bm.ball.radius()),
           nest});
      if (!in || !nest) {
        rec.alpha_ball = std::move(u);
        t.moves.push_back(std::move(rec));
        t.fault = Fault{"alpha", m,
                        !in ? "ball misses the designated atom"
                            : "ball nesting violated"};
        return t;
      }
      rec.alpha_ball = u;
      rec.alpha_normal = normalize_alpha_move(u, bm.atom, t.depth, s.metric);
    } catch (const error& e) {
      rec.alpha_ball = std::move(u);
      t.moves.push_back(std::move(rec));
      t.fault = Fault{"alpha", m, e.what()};
      return t;
    }
    prev_alpha_raw = rec.alpha_ball;
    prev_alpha_norm = rec.alpha_normal;
    t.moves.push_back(std::move(rec));
  }
  return t;
}

// Plays rounds 0..R of the Banach-Mazur game: beta opens, both play balls,
// each ball nests inside the opponent's previous ball.
inline GameTrace run_banach_mazur(BMStrategy& beta, BMStrategy& alpha,
                                  const RunSettings& s) {
  GameTrace t;
  t.kind = GameKind::BanachMazur;
  t.rounds = s.rounds;
  t.seed = s.seed;
  t.cap = s.cap;
  t.metric = s.metric;
  t.alpha_id = alpha.id();
  t.beta_id = beta.id();
  Int bound = fold_denominator_bound(beta, alpha, s.rounds);
  Int auto_depth = bound + 1;
  if (s.depth) {
    if (*s.depth < auto_depth)
      throw config_error("depth " + s.depth->str() +
                         " below the worst-case radius denominator bound " +
                         auto_depth.str());
    t.depth = *s.depth;
  } else {
    t.depth = auto_depth;
  }
  enforce_depth_cap(t.depth);

  std::optional<HyperBall> prev_alpha;
  for (std::uint64_t m = 0; m <= s.rounds; ++m) {
    RoundRecord rec;
    rec.round = m;
    HyperBall vb = m == 0 ? beta.open() : beta.respond(*prev_alpha, m);
    try {
      validate_rep(vb.center);
      if (m > 0) {
        MetricValue hc = hausdorff_dist(vb.center, prev_alpha->center, t.depth,
                                        s.metric);
        bool nest = ball_subset(vb, *prev_alpha, t.depth, s.metric);
        rec.checks.push_back({"beta: ball nesting",
                              detail::check_val(hc, prev_alpha->radius()),
                              nest});
        if (!nest) {
          rec.beta_ball = std::move(vb);
          t.moves.push_back(std::move(rec));
          t.fault = Fault{"beta", m, "ball nesting violated"};
          return t;
        }
      }
    } catch (const error& e) {
      rec.beta_ball = std::move(vb);
      t.moves.push_back(std::move(rec));
      t.fault = Fault{"beta", m, e.what()};
      return t;
    }
    rec.beta_ball = vb;

    HyperBall u = alpha.respond(vb, m);
    try {
      MetricValue hc =
          hausdorff_dist(u.center, vb.center, t.depth, s.metric);
      bool nest = ball_subset(u, vb, t.depth, s.metric);
      rec.checks.push_back(
          {"alpha: ball nesting", detail::check_val(hc, vb.radius()), nest});
      if (!nest) {
        rec.alpha_ball = std::move(u);
        t.moves.push_back(std::move(rec));
        t.fault = Fault{"alpha", m, "ball nesting violated"};
        return t;
      }
    } catch (const error& e) {
      rec.alpha_ball = std::move(u);
      t.moves.push_back(std::move(rec));
      t.fault = Fault{"alpha", m, e.what()};
      return t;
    }
    rec.alpha_ball = u;
    prev_alpha = u;
    t.moves.push_back(std::move(rec));
  }
  return t;
}

// ---------------------------------------------------------------------------
// re-validation

struct LegalityReport {
  struct Round {
    std::uint64_t round = 0;
    std::vector<LegalityCheck> checks;
  };
  std::vector<Round> rounds;
  std::vector<std::string> notes;
  bool all_pass = true;

  void add(std::uint64_t round, LegalityCheck c) {
    while (rounds.size() <= round) rounds.push_back({rounds.size(), {}});
    all_pass = all_pass && c.pass;
    rounds[round].checks.push_back(std::move(c));
  }
};

inline Json to_json(const LegalityReport& r) {
  Json j;
  j["all_pass"] = r.all_pass;
  Json rounds = Json::array();
  for (const auto& rd : r.rounds) {
    Json x;
    x["round"] = rd.round;
    Json checks = Json::array();
    for (const auto& c : rd.checks) {
      Json cj;
      cj["name"] = c.name;
      cj["value"] = c.value;
      cj["pass"] = c.pass;
      checks.push_back(std::move(cj));
    }
    x["checks"] = std::move(checks);
    rounds.push_back(std::move(x));
  }
  j["rounds"] = std::move(rounds);
  j["notes"] = r.notes;
  return j;
}

// Recomputes every nesting and membership constraint from the raw moves.
// For Banach-Mazur traces where alpha follows the grafting strategy, also
// re-derives the per-round facts the strategy's argument rests on: the
// doubling bound on the radius denominators, the graft distance bound, and
// the forced-prefix class agreement between consecutive beta sets.
inline LegalityReport validate_trace(const GameTrace& t) {
  LegalityReport rep;
  std::optional<HyperBall> prev_alpha;
  for (const auto& r : t.moves) {
    std::uint64_t m = r.round;
    const HyperBall& vball =
        t.kind == GameKind::Choquet ? r.beta_ch->ball : *r.beta_ball;
    try {
      if (t.kind == GameKind::Choquet) {
        MetricValue h = hausdorff_dist(r.beta_ch->atom, vball.center, t.depth,
                                       t.metric);
        rep.add(m, {"beta: atom in ball", detail::check_val(h, vball.radius()),
                    hull_member(r.beta_ch->atom, vball, t.depth, t.metric)});
      }
      if (m > 0 && prev_alpha) {
        MetricValue hc = hausdorff_dist(vball.center, prev_alpha->center,
                                        t.depth, t.metric);
        rep.add(m, {"beta: ball nesting",
                    detail::check_val(hc, prev_alpha->radius()),
                    ball_subset(vball, *prev_alpha, t.depth, t.metric)});
      }
      if (r.alpha_ball) {
        if (t.kind == GameKind::Choquet) {
          MetricValue ha = hausdorff_dist(r.beta_ch->atom, r.alpha_ball->center,
                                          t.depth, t.metric);
          rep.add(m, {"alpha: atom in ball",
                      detail::check_val(ha, r.alpha_ball->radius()),
                      hull_member(r.beta_ch->atom, *r.alpha_ball, t.depth,
                                  t.metric)});
        }
        MetricValue hc = hausdorff_dist(r.alpha_ball->center, vball.center,
                                        t.depth, t.metric);
        rep.add(m, {"alpha: ball nesting",
                    detail::check_val(hc, vball.radius()),
                    ball_subset(*r.alpha_ball, vball, t.depth, t.metric)});
        // radii never grow along a legal run
        if (prev_alpha)
          rep.add(m, {"alpha: radius monotone",
                      prev_alpha->radius_den.str() + " -> " +
                          r.alpha_ball->radius_den.str(),
                      r.alpha_ball->radius_den >= prev_alpha->radius_den});
        prev_alpha = r.alpha_ball;
      }
    } catch (const error& e) {
      rep.add(m, {"validation error", e.what(), false});
    }
  }

  if (t.kind == GameKind::BanachMazur && t.alpha_id == "sigma-bm" &&
      !t.fault) {
    // facts forced by the strategy's construction
    Int sum(0);
    std::optional<Int> prev_n;
    for (const auto& r : t.moves) {
      if (!r.beta_ball || !r.alpha_ball) break;
      std::uint64_t m = r.round;
      Int n = r.beta_ball->radius_den;
      sum += n;
      try {
        if (prev_n) {
          rep.add(m, {"sigma-bm: denominator doubling",
                      "n=" + n.str() + " prev=" + prev_n->str(),
                      n >= 2 * *prev_n});
        }
        rep.add(m, {"sigma-bm: response radius",
                    r.alpha_ball->radius_den.str() + " vs 2n=" + Int(2 * n).str(),
                    r.alpha_ball->radius_den == 2 * n});
        // the grafted center re-derived from beta's set alone
        if (n * 2 - 1 >= 1) {
          ClosedSetRep c = graft(r.beta_ball->center,
                                 static_cast<std::uint64_t>(2 * n - 1),
                                 Rat(1 + sum));
          MetricValue hg =
              hausdorff_dist(r.beta_ball->center, c, t.depth, t.metric);
          auto ok = hg.leq(Rat(1, 2 * n));
          rep.add(m, {"sigma-bm: graft distance bound",
                      detail::check_val(hg, Rat(1, 2 * n)), ok && *ok});
          MetricValue hcc =
              hausdorff_dist(c, r.alpha_ball->center, t.depth, t.metric);
          rep.add(m, {"sigma-bm: center matches graft", hcc.str(),
                      hcc.is_zero()});
        }
      } catch (const error& e) {
        rep.add(m, {"sigma-bm fact error", e.what(), false});
      }
    }
    // forced-prefix class agreement between consecutive beta sets:
    // every point of the graft of A_m appears in A_{m+1} to depth 2n_m
    sum = 0;
    for (std::size_t i = 0; i + 1 < t.moves.size(); ++i) {
      const auto& cur = t.moves[i];
      const auto& nxt = t.moves[i + 1];
      if (!cur.beta_ball || !nxt.beta_ball) break;
      Int n = cur.beta_ball->radius_den;
      sum += n;
      try {
        ClosedSetRep c = graft(cur.beta_ball->center,
                               static_cast<std::uint64_t>(2 * n - 1),
                               Rat(1 + sum));
        MetricValue dh = directed_hausdorff(c, nxt.beta_ball->center, t.depth,
                                            t.metric);
        auto ok = dh.less_than(Rat(1, 2 * n));
        rep.add(cur.round, {"sigma-bm: forced prefix agreement",
                            detail::check_val(dh, Rat(1, 2 * n)), ok && *ok});
      } catch (const error& e) {
        rep.add(cur.round, {"sigma-bm fact error", e.what(), false});
      }
    }
    if (!rep.all_pass)
      rep.notes.push_back(
          "sigma-bm round facts failed: the strategy proof forces them, so "
          "this indicates an engine inconsistency, not an illegal move");
  }
  if (t.fault)
    rep.notes.push_back("trace ends in a fault at round " +
                        std::to_string(t.fault->round) + " (" +
                        t.fault->offender + "): " + t.fault->constraint);
  return rep;
}

inline void enforce_depth_cap(const Int& depth) {
  const char* cap = std::getenv("HYPERGAME_DEPTH_CAP");
  if (!cap) return;
  Int c(cap);
  if (depth > c)
    throw config_error("resolution depth " + depth.str() +
                       " exceeds HYPERGAME_DEPTH_CAP=" + c.str());
}

}  // namespace hypergame
