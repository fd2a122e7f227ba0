#include <catch2/catch_amalgamated.hpp>

#include "hypergame/commands.hpp"
#include "hypergame/strategies.hpp"

using namespace hypergame;

namespace {

// beta that ignores the rules and replays its opening ball forever
class StubbornChBeta : public ChBetaStrategy {
 public:
  std::string id() const override { return "scripted:stubborn"; }
  ChBetaMove open() override {
    ClosedSetRep a = ClosedSetRep::base_family(Int(1));
    return ChBetaMove{a, HyperBall{a, Int(1)}};
  }
  ChBetaMove respond(const HyperBall&, std::uint64_t) override {
    return open();  // V_1 = V_0 is not inside alpha's strictly smaller ball
  }
  Int denom_bound(const Int& incoming, std::uint64_t) const override {
    return incoming + 1;
  }
};

class DoublingChAlpha : public ChAlphaStrategy {
 public:
  std::string id() const override { return "scripted:doubling"; }
  HyperBall respond(const ChBetaMove& beta, std::uint64_t) override {
    return HyperBall{beta.atom, beta.ball.radius_den * 2};
  }
  Int denom_bound(const Int& incoming, std::uint64_t) const override {
    return incoming * 2;
  }
};

}  // namespace

TEST_CASE("echoing the opening ball is legal", "[games]") {
  // cap 1 makes random-alpha echo the minimal legal ball every round
  RunConfig cfg;
  cfg.kind = GameKind::Choquet;
  cfg.rounds = 1;
  cfg.cap = 1;
  cfg.alpha_id = "random-alpha";
  cfg.beta_id = "sigma-ch";
  GameTrace t = execute_run(cfg);
  REQUIRE_FALSE(t.fault.has_value());
  // round 0: alpha echoes B(A_0, 1)
  CHECK(t.moves[0].alpha_ball->radius_den == 1);
  CHECK(validate_trace(t).all_pass);
}

TEST_CASE("beta ball nesting violations fault the offender", "[games]") {
  StubbornChBeta beta;
  DoublingChAlpha alpha;
  RunSettings s;
  s.rounds = 2;
  GameTrace t = run_choquet(beta, alpha, s);
  REQUIRE(t.fault.has_value());
  CHECK(t.fault->offender == "beta");
  CHECK(t.fault->round == 1);
  CHECK(t.fault->constraint == "ball nesting violated");
  // the fault is visible to the re-validator as a failing check
  LegalityReport rep = validate_trace(t);
  CHECK_FALSE(rep.all_pass);
}

TEST_CASE("normalize_alpha_move recenters at the atom", "[games]") {
  Int depth(64);
  ClosedSetRep a0 = ClosedSetRep::base_family(Int(1));
  ClosedSetRep a1 = a0.refine(2, Int(2));  // H(A_0, A_1) = 1/4
  // already centered: unchanged
  HyperBall u{a0, Int(3)};
  HyperBall n = normalize_alpha_move(u, a0, depth);
  CHECK(n.center == a0);
  CHECK(n.radius_den == 3);
  // foreign center within reach: recentered at the atom, same radius
  HyperBall v{a1, Int(3)};
  HyperBall m = normalize_alpha_move(v, a0, depth);
  CHECK(m.center == a0);
  CHECK(m.radius_den == 3);
  // the radius denominator is minimal: any coarser ball escapes U
  CHECK_FALSE(ball_subset(HyperBall{a0, Int(2)}, v, depth));
  CHECK(ball_subset(m, v, depth));
  CHECK(hull_member(a0, m, depth));
  // atom outside the ball is rejected
  CHECK_THROWS_AS(normalize_alpha_move(HyperBall{a1, Int(5)}, a0, depth),
                  ill_formed_error);
}

TEST_CASE("hand-built nesting violation shows up in validate_trace",
          "[games]") {
  RunConfig cfg;
  cfg.kind = GameKind::Choquet;
  cfg.rounds = 2;
  cfg.seed = 5;
  cfg.cap = 2;
  GameTrace t = execute_run(cfg);
  REQUIRE_FALSE(t.fault.has_value());
  REQUIRE(validate_trace(t).all_pass);
  // widen V_2 beyond U_1
  GameTrace bad = t;
  bad.moves[2].beta_ch->ball.radius_den = 1;
  LegalityReport rep = validate_trace(bad);
  CHECK_FALSE(rep.all_pass);
  bool found = false;
  for (const auto& c : rep.rounds[2].checks)
    if (c.name == "beta: ball nesting" && !c.pass) found = true;
  CHECK(found);
}

TEST_CASE("manual depth below the round budget is refused", "[games]") {
  RunConfig cfg;
  cfg.kind = GameKind::Choquet;
  cfg.rounds = 6;
  cfg.cap = 5;
  cfg.depth = Int(3);
  CmdResult r = cmd_run(cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("config error") != std::string::npos);
}

TEST_CASE("banach-mazur runs are legal and radii monotone", "[games]") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    RunConfig cfg;
    cfg.kind = GameKind::BanachMazur;
    cfg.rounds = 4;
    cfg.seed = seed;
    cfg.cap = 3;
    cfg.alpha_id = "sigma-bm";
    cfg.beta_id = "random-beta";
    GameTrace t = execute_run(cfg);
    REQUIRE_FALSE(t.fault.has_value());
    REQUIRE(validate_trace(t).all_pass);
    Int prev(0);
    for (const auto& m : t.moves) {
      REQUIRE(m.alpha_ball->radius_den >= prev);
      prev = m.alpha_ball->radius_den;
    }
  }
}

TEST_CASE("replay determinism from header configuration", "[games]") {
  for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
    RunConfig cfg;
    cfg.kind = seed % 2 ? GameKind::Choquet : GameKind::BanachMazur;
    cfg.rounds = 3;
    cfg.seed = seed;
    cfg.cap = 3;
    if (cfg.kind == GameKind::BanachMazur) {
      cfg.alpha_id = "sigma-bm";
      cfg.beta_id = "random-beta";
    }
    GameTrace t = execute_run(cfg);
    GameTrace again = replay_from_header(t);
    REQUIRE(canonical_dump(to_json(again)) == canonical_dump(to_json(t)));
  }
}

TEST_CASE("legality closure under seeded fuzzing", "[games][property]") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RunConfig cfg;
    cfg.kind = GameKind::Choquet;
    cfg.rounds = 3;
    cfg.seed = seed;
    cfg.cap = 4;
    GameTrace t = execute_run(cfg);
    REQUIRE_FALSE(t.fault.has_value());
    REQUIRE(validate_trace(t).all_pass);
    cfg.kind = GameKind::BanachMazur;
    cfg.alpha_id = "sigma-bm";
    cfg.beta_id = "random-beta";
    cfg.cap = 3;
    GameTrace b = execute_run(cfg);
    REQUIRE_FALSE(b.fault.has_value());
    REQUIRE(validate_trace(b).all_pass);
  }
}

TEST_CASE("scripted strategies replay recorded moves", "[games]") {
  RunConfig cfg;
  cfg.kind = GameKind::Choquet;
  cfg.rounds = 2;
  cfg.seed = 13;
  cfg.cap = 3;
  GameTrace t = execute_run(cfg);
  std::string path = "scripted_replay.trace";
  detail::write_text_file(path, canonical_dump(to_json(t)) + "\n");
  // replay alpha from the file against the live sigma-ch beta
  RunConfig cfg2 = cfg;
  cfg2.alpha_id = "scripted:" + path;
  GameTrace t2 = execute_run(cfg2);
  REQUIRE_FALSE(t2.fault.has_value());
  for (std::size_t m = 0; m < t.moves.size(); ++m) {
    REQUIRE(t2.moves[m].alpha_ball->radius_den ==
            t.moves[m].alpha_ball->radius_den);
  }
}

TEST_CASE("hyperball radii below resolution are refused by the runner",
          "[games]") {
  // the depth rule keeps every compared radius above 1/D, so the engine
  // never calls ball_subset outside its precondition
  RunConfig cfg;
  cfg.kind = GameKind::Choquet;
  cfg.rounds = 2;
  cfg.cap = 2;
  cfg.seed = 3;
  GameTrace t = execute_run(cfg);
  for (const auto& m : t.moves) {
    REQUIRE(m.alpha_ball->radius_den < t.depth);
    REQUIRE(t.beta_radius_den(m.round) < t.depth);
  }
}
