#include <catch2/catch_amalgamated.hpp>

#include "hypergame/commands.hpp"
#include "hypergame/rng.hpp"
#include "hypergame/serial.hpp"

using namespace hypergame;

TEST_CASE("rational strings are exact and strict", "[serial]") {
  CHECK(format_rational(Rat(1, 3)) == "1/3");
  CHECK(format_rational(Rat(-10, 4)) == "-5/2");
  CHECK(parse_rational("1/3") == Rat(1, 3));
  CHECK(parse_rational("-5/2") == Rat(-5, 2));
  CHECK(parse_rational("7") == Rat(7));
  CHECK(parse_rational("3/-2") == Rat(-3, 2));
  CHECK_THROWS_AS(parse_rational("1.5"), parse_error);
  CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
  CHECK_THROWS_AS(parse_rational(""), parse_error);
  CHECK_THROWS_AS(parse_rational("a/b"), parse_error);
}

TEST_CASE("sequence serialization round-trips", "[serial][property]") {
  Rng rng(3131);
  for (int i = 0; i < 500; ++i) {
    std::vector<Rat> prefix;
    std::uint64_t len = rng.range(0, 6);
    for (std::uint64_t k = 0; k < len; ++k)
      prefix.emplace_back(Int(rng.range(0, 12)) - 3, Int(rng.range(1, 4)));
    TailSeq s =
        TailSeq::from_prefix(prefix, Rat(Int(rng.range(0, 9)), Int(1)));
    TailSeq back = tailseq_from_json(to_json(s));
    REQUIRE(back == s);
  }
}

TEST_CASE("set representations round-trip to identity", "[serial]") {
  std::vector<ClosedSetRep> reps;
  reps.push_back(ClosedSetRep::finite_points(
      {TailSeq::from_prefix({Rat(5), Rat(1)}, Rat(0)),
       TailSeq::from_prefix({Rat(0), Rat(2)}, Rat(7))}));
  reps.push_back(ClosedSetRep::base_family(Int(1)));
  reps.push_back(ClosedSetRep::base_family(Int(1)).refine(2, Int(2)));
  reps.push_back(
      ClosedSetRep::base_family(Int(1)).refine(2, Int(2)).refine(3, Int(5)));
  reps.push_back(graft(reps[2], 7, Rat(4)));
  reps.push_back(ClosedSetRep::union_of({reps[0], reps[4]}));
  reps.push_back(reps[0].with_closure_marker());
  for (const auto& r : reps) {
    ClosedSetRep back = rep_from_json(to_json(r));
    REQUIRE(back == r);
    REQUIRE(back.closure_marker() == r.closure_marker());
    // byte-stable serialization
    REQUIRE(canonical_dump(to_json(back)) == canonical_dump(to_json(r)));
  }
  HyperBall b{reps[2], Int(5)};
  HyperBall bb = ball_from_json(to_json(b));
  REQUIRE(bb.center == b.center);
  REQUIRE(bb.radius_den == b.radius_den);
}

TEST_CASE("set files carry their depth", "[serial]") {
  Json j = set_file_json(ClosedSetRep::base_family(Int(1)), Int(32));
  auto [rep, depth] = set_file_from_json(j);
  CHECK(depth == 32);
  CHECK(rep == ClosedSetRep::base_family(Int(1)));
}

TEST_CASE("trace serialization round-trips with identical legality report",
          "[serial]") {
  RunConfig cfg;
  cfg.kind = GameKind::Choquet;
  cfg.rounds = 3;
  cfg.seed = 11;
  cfg.cap = 3;
  cfg.alpha_id = "random-alpha";
  cfg.beta_id = "sigma-ch";
  GameTrace t = execute_run(cfg);
  REQUIRE_FALSE(t.fault.has_value());
  std::string text = canonical_dump(to_json(t));
  GameTrace back = trace_from_json(Json::parse(text));
  REQUIRE(canonical_dump(to_json(back)) == text);
  REQUIRE(trace_content_hash(back) == trace_content_hash(t));
  REQUIRE(canonical_dump(to_json(validate_trace(back))) ==
          canonical_dump(to_json(validate_trace(t))));
  // hash covers raw content only: erasing derived annotations is harmless
  Json j = Json::parse(text);
  for (auto& m : j.at("moves")) m["derived"] = Json::object();
  GameTrace erased = trace_from_json(j);
  REQUIRE(trace_content_hash(erased) == trace_content_hash(t));
  // tampering a move changes the hash and is rejected on parse
  Json bad = Json::parse(text);
  bad.at("moves").at(1).at("alpha").at("ball")["radius_den"] = "9999";
  REQUIRE_THROWS_AS(trace_from_json(bad), parse_error);
}
