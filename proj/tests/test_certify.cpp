#include <catch2/catch_amalgamated.hpp>

#include "hypergame/commands.hpp"
#include "hypergame/rng.hpp"

using namespace hypergame;

namespace {

TailSeq iseq(std::vector<int> prefix, int tail) {
  std::vector<Rat> p;
  for (int v : prefix) p.emplace_back(v);
  return TailSeq::from_prefix(p, Rat(tail));
}

GameTrace ch_trace(std::uint64_t seed, std::uint64_t rounds = 3,
                   std::uint64_t cap = 3) {
  RunConfig cfg;
  cfg.kind = GameKind::Choquet;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.cap = cap;
  cfg.alpha_id = "random-alpha";
  cfg.beta_id = "sigma-ch";
  return execute_run(cfg);
}

GameTrace bm_trace(std::uint64_t seed, std::uint64_t rounds = 3,
                   std::uint64_t cap = 3) {
  RunConfig cfg;
  cfg.kind = GameKind::BanachMazur;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.cap = cap;
  cfg.alpha_id = "sigma-bm";
  cfg.beta_id = "random-beta";
  return execute_run(cfg);
}

class WorkedBMBeta : public BMStrategy {
 public:
  std::string id() const override { return "scripted:worked"; }
  HyperBall open() override {
    return HyperBall{ClosedSetRep::finite_points({iseq({5, 1}, 0)}), Int(2)};
  }
  HyperBall respond(const HyperBall& opponent, std::uint64_t) override {
    return HyperBall{opponent.center, opponent.radius_den * 2};
  }
  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    return round == 0 ? Int(2) : incoming * 2;
  }
};

}  // namespace

TEST_CASE("emptiness evidence builds and validates", "[certify]") {
  GameTrace t = ch_trace(21);
  EmptinessEvidence e = build_emptiness_certificate(t);
  CHECK(e.prefixes.size() == t.moves.size());
  Verdict v = check_emptiness_certificate(e, t);
  CHECK(v.valid);
  CHECK(v.flags.empty());  // builder emits maximal depths
  // L values strictly increase
  Int prev(0);
  for (const auto& p : e.prefixes) {
    CHECK(p.length() > prev);
    prev = p.length();
  }
  // evidence survives serialization
  EmptinessEvidence back = emptiness_from_json(to_json(e));
  CHECK(check_emptiness_certificate(back, t).valid);
}

TEST_CASE("emptiness evidence tampers are rejected", "[certify]") {
  GameTrace t = ch_trace(22);
  Json cert = to_json(build_emptiness_certificate(t));

  SECTION("forbidden prefix entry made nonzero") {
    Json bad = cert;
    bad.at("rounds").at(1).at("prefix_runs").at(1).at(1) = "7/1";
    Verdict v = check_emptiness_certificate(emptiness_from_json(bad), t);
    CHECK_FALSE(v.valid);
  }
  SECTION("claimed depth beyond derivable") {
    Json bad = cert;
    auto& run = bad.at("rounds").at(1).at("prefix_runs").at(1);
    run.at(0) = Int(int_from_json(run.at(0)) + 1).str();
    Verdict v = check_emptiness_certificate(emptiness_from_json(bad), t);
    CHECK_FALSE(v.valid);
  }
  SECTION("weaker claim accepted but flagged") {
    // shrink a zeros run by one at a round where lengths stay strictly
    // increasing afterwards
    EmptinessEvidence e = build_emptiness_certificate(t);
    std::size_t target = e.prefixes.size();
    for (std::size_t m = 0; m + 1 < e.prefixes.size(); ++m) {
      if (e.prefixes[m].length() - 1 >
          (m == 0 ? Int(0) : e.prefixes[m - 1].length())) {
        target = m;
        break;
      }
    }
    REQUIRE(target < e.prefixes.size());
    Json weak = cert;
    auto& run = weak.at("rounds").at(target).at("prefix_runs").at(1);
    run.at(0) = Int(int_from_json(run.at(0)) - 1).str();
    Verdict v = check_emptiness_certificate(emptiness_from_json(weak), t);
    CHECK(v.valid);
    CHECK_FALSE(v.flags.empty());
  }
  SECTION("t_hat pushed outside the chain") {
    Json bad = cert;
    Rat th = parse_rational(bad.at("t_hat").get<std::string>());
    bad["t_hat"] = format_rational(th + 1);
    Verdict v = check_emptiness_certificate(emptiness_from_json(bad), t);
    CHECK_FALSE(v.valid);
  }
  SECTION("chain index shifted") {
    Json bad = cert;
    bad.at("chain").at(0) = bad.at("chain").at(0).get<std::uint64_t>() + 1;
    Verdict v = check_emptiness_certificate(emptiness_from_json(bad), t);
    CHECK_FALSE(v.valid);
  }
  SECTION("checked against a different trace") {
    GameTrace other = ch_trace(23);
    Verdict v = check_emptiness_certificate(emptiness_from_json(cert), other);
    CHECK_FALSE(v.valid);
    CHECK(v.failures.at(0).find("hash mismatch") != std::string::npos);
  }
}

TEST_CASE("hull-forcing rule soundness by brute force", "[certify][property]") {
  // if H(A, B) < 1/L then every point of B has a point of A agreeing with
  // it on indices 0..L-1
  Rng rng(909090);
  auto rand_pt = [&](Rng& r) {
    for (;;) {
      std::vector<Rat> p;
      std::uint64_t len = r.range(0, 6);
      for (std::uint64_t i = 0; i < len; ++i) p.emplace_back(r.range(0, 3));
      TailSeq s = TailSeq::from_prefix(p, Rat(r.range(0, 3)));
      if (in_space_X(s)) return s;
    }
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TailSeq> pa, pb;
    for (std::uint64_t i = 0, n = rng.range(1, 6); i < n; ++i)
      pa.push_back(rand_pt(rng));
    for (std::uint64_t i = 0, n = rng.range(1, 6); i < n; ++i)
      pb.push_back(rand_pt(rng));
    ClosedSetRep a = ClosedSetRep::finite_points(pa);
    ClosedSetRep b = ClosedSetRep::finite_points(pb);
    MetricValue h = hausdorff_dist(a, b, Int(1 << 12));
    for (Int L(1); L <= 10; ++L) {
      auto lt = h.less_than(Rat(1, L));
      REQUIRE(lt.has_value());
      if (!*lt) continue;
      for (const auto& y : pb) {
        bool witness = false;
        for (const auto& x : pa) {
          bool agree = true;
          for (Int k(0); k < L; ++k)
            agree = agree &&
                    x.at(static_cast<std::uint64_t>(k)) ==
                        y.at(static_cast<std::uint64_t>(k));
          witness = witness || agree;
        }
        REQUIRE(witness);
      }
    }
  }
}

TEST_CASE("nonempty witness builds and validates", "[certify]") {
  GameTrace t = bm_trace(31);
  NonemptyWitness w = build_S_witness(t, t.depth);
  Verdict v = check_nonempty_witness(w, t);
  CHECK(v.valid);
  NonemptyWitness back = witness_from_json(to_json(w));
  CHECK(check_nonempty_witness(back, t).valid);
}

TEST_CASE("nonempty witness on the worked run", "[certify]") {
  WorkedBMBeta beta;
  SigmaBMAlpha alpha;
  RunSettings s;
  s.rounds = 1;
  GameTrace t = run_banach_mazur(beta, alpha, s);
  // reconstruct the header id so the builder recognizes the strategy
  t.alpha_id = "sigma-bm";
  REQUIRE_FALSE(t.fault.has_value());
  // n_0 = 2, n_1 = 4: S = graft(A_1, 7, 7) and A_1 = C_0 = {(5,1,0 | 3)}
  NonemptyWitness w = build_S_witness(t, t.depth);
  TailSeq expect = TailSeq::from_prefix(
      {Rat(5), Rat(1), Rat(0), Rat(3), Rat(3), Rat(3), Rat(3)}, Rat(7));
  CHECK(point_set_dist(expect, w.s_set, t.depth) == MetricValue::zero());
  // depth-8 prefix of the unique point of S begins (5, 1, 0, 3, ...)
  auto cls = classes_of(w.s_set);
  REQUIRE(cls.size() == 1);
  TailSeq sp = cls[0].representative();
  CHECK(sp.at(0) == 5);
  CHECK(sp.at(1) == 1);
  CHECK(sp.at(2) == 0);
  CHECK(sp.at(3) == 3);
  // H(A_1, S) < 1/4
  MetricValue h1 = hausdorff_dist(t.beta_center(1), w.s_set, t.depth);
  auto lt = h1.less_than(Rat(1, 4));
  CHECK((lt && *lt));
  Verdict v = check_nonempty_witness(w, t);
  CHECK(v.valid);
}

TEST_CASE("nonempty witness tampers are rejected", "[certify]") {
  GameTrace t = bm_trace(32);
  NonemptyWitness w = build_S_witness(t, t.depth);
  Json cert = to_json(w);

  SECTION("set perturbed: one graft tail changed") {
    Json bad = cert;
    // flip the outermost graft tail of the witness set
    REQUIRE(bad.at("s_set").at("kind") == "graft");
    Rat tail = parse_rational(bad.at("s_set").at("tail").get<std::string>());
    bad.at("s_set")["tail"] = format_rational(tail + 1);
    Verdict v = check_nonempty_witness(witness_from_json(bad), t);
    CHECK_FALSE(v.valid);
  }
  SECTION("recorded distance tampered") {
    Json bad = cert;
    bad.at("h_values").at(0) = "1/99999";
    Verdict v = check_nonempty_witness(witness_from_json(bad), t);
    CHECK_FALSE(v.valid);
  }
  SECTION("chain selection corrupted") {
    Json bad = cert;
    bad.at("chains").at(0).at("selects").at(0) = "no-such-class";
    Verdict v = check_nonempty_witness(witness_from_json(bad), t);
    CHECK_FALSE(v.valid);
  }
  SECTION("checked against a different trace") {
    GameTrace other = bm_trace(33);
    Verdict v = check_nonempty_witness(witness_from_json(cert), other);
    CHECK_FALSE(v.valid);
  }
}

TEST_CASE("certificates are bound to their game kind", "[certify]") {
  GameTrace ch = ch_trace(41);
  GameTrace bm = bm_trace(41);
  // an emptiness certificate can never validate against a BM trace and a
  // witness never against a Choquet trace (hash and kind are both checked)
  EmptinessEvidence e = build_emptiness_certificate(ch);
  NonemptyWitness w = build_S_witness(bm, bm.depth);
  CHECK_FALSE(check_emptiness_certificate(e, bm).valid);
  CHECK_FALSE(check_nonempty_witness(w, ch).valid);
  CHECK_THROWS_AS(build_emptiness_certificate(bm), config_error);
  CHECK_THROWS_AS(build_S_witness(ch, ch.depth), config_error);
}

TEST_CASE("checkers ignore strategy annotations", "[certify]") {
  GameTrace t = ch_trace(51);
  EmptinessEvidence e = build_emptiness_certificate(t);
  Json j = to_json(t);
  for (auto& m : j.at("moves")) {
    m["derived"] = Json::object();
    m["checks"] = Json::array();
  }
  GameTrace erased = trace_from_json(j);
  CHECK(check_emptiness_certificate(e, erased).valid ==
        check_emptiness_certificate(e, t).valid);

  GameTrace b = bm_trace(52);
  NonemptyWitness w = build_S_witness(b, b.depth);
  Json jb = to_json(b);
  for (auto& m : jb.at("moves")) {
    m["derived"] = Json::object();
    m["checks"] = Json::array();
  }
  GameTrace berased = trace_from_json(jb);
  CHECK(check_nonempty_witness(w, berased).valid ==
        check_nonempty_witness(w, b).valid);
}
