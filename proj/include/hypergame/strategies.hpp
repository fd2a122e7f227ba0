#pragma once

#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hypergame/game.hpp"
#include "hypergame/rng.hpp"

namespace hypergame {

// y agreeing with `a` below n_next and constant 2 + sum_prev from there on.
// Used to re-derive the denominator-doubling argument: were the opponent's
// radius too coarse, this probe point would sit in the new ball yet miss
// the grafted set at index 2n-1.
inline TailSeq probe_tail_point(const TailSeq& a, std::uint64_t n_next,
                                const Int& sum_prev) {
  return graft_point(a, n_next, Rat(2 + sum_prev));
}

// ---------------------------------------------------------------------------
// beta in the strong Choquet game: the interval-refinement strategy.
//
// Round 0 offers the base family (t, 0^{n+1}, t, ...) over I_n = [3n+1,3n+2]
// with the unit ball. After alpha answers with radius 1/k_m (normalized to
// the offered set), the interval indexed n_m + 1 of the current frontier is
// subdivided; the children get zero-runs 1 + n + k_m, and the new ball has
// radius 1/(1 + k_m). The returned ball always nests inside alpha's ball
// with room to spare, while every parameter in the refinement chain has its
// zeros pushed past 1 + k_m.
class SigmaChBeta : public ChBetaStrategy {
 public:
  std::string id() const override { return "sigma-ch"; }

  ChBetaMove open() override {
    family_ = ClosedSetRep::base_family(Int(1));
    k_prev_ = 0;
    ChBetaMove m{*family_, HyperBall{*family_, Int(1)}};
    return m;
  }

  ChBetaMove respond(const HyperBall& alpha_normal,
                     std::uint64_t round) override {
    if (!family_) throw ill_formed_error("sigma-ch: respond before open");
    if (!(alpha_normal.center == *family_))
      throw ill_formed_error(
          "sigma-ch: alpha ball not centered at the offered set");
    Int k = alpha_normal.radius_den;
    Int n = k - k_prev_;
    if (n < 1)
      throw ill_formed_error("sigma-ch: alpha denominator did not grow");
    if (n + 1 > Int(UINT64_MAX >> 1))
      throw config_error("sigma-ch: refinement index out of range");
    auto refined_index = static_cast<std::uint64_t>(n + 1);
    family_ = family_->refine(refined_index, 1 + k);
    k_prev_ = k;
    last_n_ = n;
    (void)round;
    return ChBetaMove{*family_, HyperBall{*family_, 1 + k}};
  }

  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    return round == 0 ? Int(1) : incoming + 1;
  }

  const Int& last_n() const { return last_n_; }

 private:
  std::optional<ClosedSetRep> family_;
  Int k_prev_{0};
  Int last_n_{0};
};

// ---------------------------------------------------------------------------
// alpha in the Banach-Mazur game: the grafting strategy.
//
// Beta's ball B(A_m, 1/n_m) is answered with B(C_m, 1/(2 n_m)) where C_m
// keeps every point of A_m below index 2 n_m - 1 and then holds the constant
// 1 + sum of all n_i so far. The graft distance is at most 1/(2 n_m), so the
// response nests inside beta's ball by the triangle inequality.
class SigmaBMAlpha : public BMStrategy {
 public:
  std::string id() const override { return "sigma-bm"; }

  HyperBall open() override {
    throw ill_formed_error("sigma-bm plays alpha; beta opens");
  }

  HyperBall respond(const HyperBall& opponent, std::uint64_t round) override {
    Int n = opponent.radius_den;
    if (round == 0) {
      sum_ = 0;
      prev_n_ = 0;
    } else if (n < 2 * prev_n_) {
      // the opponent's move was validated as nested, which forces doubling;
      // reaching this line means the engine itself is inconsistent
      throw internal_error(
          "sigma-bm: nested ball without denominator doubling");
    }
    sum_ += n;
    if (2 * n - 1 > Int(UINT64_MAX >> 1))
      throw config_error("sigma-bm: graft cut out of range");
    ClosedSetRep c = graft(opponent.center,
                           static_cast<std::uint64_t>(2 * n - 1), Rat(1 + sum_));
    MetricValue h = hausdorff_dist(opponent.center, c, 4 * n, Metric::BaireD);
    auto ok = h.leq(Rat(1, 2 * n));
    if (!ok || !*ok)
      throw internal_error("sigma-bm: graft distance bound failed");
    prev_n_ = n;
    return HyperBall{std::move(c), 2 * n};
  }

  Int denom_bound(const Int& incoming, std::uint64_t) const override {
    return 2 * incoming;
  }

 private:
  Int sum_{0};
  Int prev_n_{0};
};

// ---------------------------------------------------------------------------
// alpha in the strong Choquet game under a complete metric: shrink fast.
//
// Responds to (A_m, B(., 1/k)) with B(A_m, 1/k'), k' = max(2k, 2^{m+2}), so
// the round-m radius is at most 2^{-(m+2)} and the atom chain is Cauchy
// with modulus 2^{-(m+1)}.
class GenericCompleteAlpha : public ChAlphaStrategy {
 public:
  std::string id() const override { return "generic-complete"; }

  HyperBall respond(const ChBetaMove& beta, std::uint64_t round) override {
    Int k = beta.ball.radius_den;
    Int k2 = 2 * k;
    Int pow = Int(1) << (round + 2);
    return HyperBall{beta.atom, k2 > pow ? k2 : pow};
  }

  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    Int k2 = 2 * incoming;
    Int pow = Int(1) << (round + 2);
    return k2 > pow ? k2 : pow;
  }
};

// ---------------------------------------------------------------------------
// seeded adversaries

class RandomChAlpha : public ChAlphaStrategy {
 public:
  RandomChAlpha(std::uint64_t seed, std::uint64_t cap)
      : rng_(Rng(seed).fork(0xa1)), cap_(cap < 1 ? 1 : cap) {}

  std::string id() const override { return "random-alpha"; }

  HyperBall respond(const ChBetaMove& beta, std::uint64_t) override {
    Int k = beta.ball.radius_den;
    std::uint64_t factor = rng_.range(1, cap_);
    return HyperBall{beta.atom, k * factor};
  }

  Int denom_bound(const Int& incoming, std::uint64_t) const override {
    return incoming * cap_;
  }

 private:
  Rng rng_;
  std::uint64_t cap_;
};

namespace detail {

inline TailSeq random_point(Rng& rng) {
  for (;;) {
    std::uint64_t len = rng.range(0, 4);
    std::vector<Rat> prefix;
    for (std::uint64_t i = 0; i < len; ++i)
      prefix.emplace_back(rng.range(0, 9));
    TailSeq p = TailSeq::from_prefix(prefix, Rat(rng.range(1, 9)));
    if (in_space_X(p)) return p;
  }
}

inline ClosedSetRep random_finite_set(Rng& rng) {
  std::vector<TailSeq> pts;
  std::uint64_t n = rng.range(1, 3);
  for (std::uint64_t i = 0; i < n; ++i) pts.push_back(random_point(rng));
  return ClosedSetRep::finite_points(std::move(pts));
}

// Deepest index at which any represented point first differs from the
// excluded set F; grafting beyond it preserves every dist_to_F value.
inline std::uint64_t max_f_depth(const ClosedSetRep& rep) {
  std::uint64_t best = 1;
  for (const auto& c : classes_of(rep)) {
    if (c.is_point()) {
      MetricValue d = dist_to_F(*c.point);
      if (d.is_zero()) throw ill_formed_error("point of F in a set");
      if (d.denom() > Int(best))
        best = static_cast<std::uint64_t>(d.denom());
      continue;
    }
    IndexRange nr = c.dom->kind == Dom::Kind::SchemeSlice ? c.dom->range
                                                          : IndexRange{0, 0};
    for (const auto& p : hypergame::detail::dist_to_f_profile(c.tmpl, nr)) {
      if (p.pos.s > 0 && !p.nr.hi)
        throw ill_formed_error(
            "set has unbounded distance-to-F depth; perturbation would not "
            "stay close under the remetrized distance");
      Int pos = p.pos.s > 0 ? p.pos.eval(*p.nr.hi) : p.pos.eval(p.nr.lo);
      if (pos + 1 > Int(best)) best = static_cast<std::uint64_t>(pos + 1);
    }
  }
  return best;
}

}  // namespace detail

// Beta adversary for the strong Choquet game: perturbs alpha's center by a
// deep graft (so the move provably nests under d and d') and shrinks the
// radius by a seeded factor.
class RandomChBeta : public ChBetaStrategy {
 public:
  RandomChBeta(std::uint64_t seed, std::uint64_t cap)
      : rng_(Rng(seed).fork(0xb2)), cap_(cap < 1 ? 1 : cap) {}

  std::string id() const override { return "random-beta"; }

  ChBetaMove open() override {
    ClosedSetRep a = detail::random_finite_set(rng_);
    Int n(rng_.range(1, cap_));
    return ChBetaMove{a, HyperBall{a, n}};
  }

  ChBetaMove respond(const HyperBall& alpha_normal, std::uint64_t) override {
    Int k = alpha_normal.radius_den;
    std::uint64_t fdepth = detail::max_f_depth(alpha_normal.center);
    Int cut_i = k + 1;
    if (Int(fdepth) + 1 > cut_i) cut_i = Int(fdepth) + 1;
    cut_i += Int(rng_.range(0, 2));
    if (cut_i > Int(UINT64_MAX >> 1))
      throw config_error("random-beta: cut out of range");
    auto cut = static_cast<std::uint64_t>(cut_i);
    ClosedSetRep a =
        graft(alpha_normal.center, cut, Rat(rng_.range(1, 9)));
    Int n = k * Int(rng_.range(1, cap_));
    return ChBetaMove{a, HyperBall{a, n}};
  }

  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    if (round == 0) return Int(cap_);
    return incoming * cap_;
  }

 private:
  Rng rng_;
  std::uint64_t cap_;
};

// Beta adversary for the Banach-Mazur game: perturbs alpha's grafted center
// beyond the forced-agreement depth, sometimes splitting into two branches,
// and at least doubles the denominator.
class RandomBMBeta : public BMStrategy {
 public:
  RandomBMBeta(std::uint64_t seed, std::uint64_t cap)
      : rng_(Rng(seed).fork(0xc3)), cap_(cap < 1 ? 1 : cap) {}

  std::string id() const override { return "random-beta"; }

  HyperBall open() override {
    ClosedSetRep a = rng_.coin() ? detail::random_finite_set(rng_)
                                 : ClosedSetRep::base_family(Int(1));
    Int n(rng_.range(1, cap_));
    return HyperBall{std::move(a), n};
  }

  HyperBall respond(const HyperBall& opponent, std::uint64_t) override {
    // opponent plays B(C, 1/(2n)); members must agree with C below 2n
    Int two_n = opponent.radius_den;
    Int cut_i = two_n + Int(rng_.range(0, 2));
    if (cut_i > Int(UINT64_MAX >> 1))
      throw config_error("random-beta: cut out of range");
    auto cut = static_cast<std::uint64_t>(cut_i);
    ClosedSetRep a = graft(opponent.center, cut, Rat(rng_.range(1, 9)));
    if (rng_.coin()) {
      ClosedSetRep b =
          graft(opponent.center, cut + 1 + rng_.range(0, 2), Rat(rng_.range(1, 9)));
      a = ClosedSetRep::union_of({std::move(a), std::move(b)});
    }
    Int n = two_n * Int(rng_.range(1, cap_));
    return HyperBall{std::move(a), n};
  }

  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    if (round == 0) return Int(cap_);
    return incoming * cap_;
  }

 private:
  Rng rng_;
  std::uint64_t cap_;
};

// ---------------------------------------------------------------------------
// scripted replays: play the recorded raw moves of a trace file

namespace detail {

inline GameTrace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open trace file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error("trace parse error in " + path + ": " + e.what());
  }
  return trace_from_json(j);
}

}  // namespace detail

class ScriptedChAlpha : public ChAlphaStrategy {
 public:
  explicit ScriptedChAlpha(std::string path)
      : path_(std::move(path)), trace_(detail::load_trace_file(path_)) {
    if (trace_.kind != GameKind::Choquet)
      throw config_error("scripted alpha: trace is not a Choquet run");
  }

  std::string id() const override { return "scripted:" + path_; }

  HyperBall respond(const ChBetaMove&, std::uint64_t round) override {
    if (round >= trace_.moves.size() || !trace_.moves[round].alpha_ball)
      throw ill_formed_error("scripted alpha: no recorded move for round " +
                             std::to_string(round));
    return *trace_.moves[round].alpha_ball;
  }

  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    Int best = incoming;
    if (round < trace_.moves.size() && trace_.moves[round].alpha_ball) {
      const Int& k = trace_.moves[round].alpha_ball->radius_den;
      if (k > best) best = k;
    }
    return best;
  }

 private:
  std::string path_;
  GameTrace trace_;
};

class ScriptedChBeta : public ChBetaStrategy {
 public:
  explicit ScriptedChBeta(std::string path)
      : path_(std::move(path)), trace_(detail::load_trace_file(path_)) {
    if (trace_.kind != GameKind::Choquet)
      throw config_error("scripted beta: trace is not a Choquet run");
  }

  std::string id() const override { return "scripted:" + path_; }

  ChBetaMove open() override { return move_at(0); }
  ChBetaMove respond(const HyperBall&, std::uint64_t round) override {
    return move_at(round);
  }

  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    Int best = incoming;
    if (round < trace_.moves.size() && trace_.moves[round].beta_ch) {
      const Int& k = trace_.moves[round].beta_ch->ball.radius_den;
      if (k > best) best = k;
    }
    return best;
  }

 private:
  ChBetaMove move_at(std::uint64_t round) {
    if (round >= trace_.moves.size())
      throw ill_formed_error("scripted beta: no recorded move for round " +
                             std::to_string(round));
    return *trace_.moves[round].beta_ch;
  }
  std::string path_;
  GameTrace trace_;
};

class ScriptedBM : public BMStrategy {
 public:
  ScriptedBM(std::string path, bool alpha_role)
      : path_(std::move(path)),
        alpha_role_(alpha_role),
        trace_(detail::load_trace_file(path_)) {
    if (trace_.kind != GameKind::BanachMazur)
      throw config_error("scripted player: trace is not a Banach-Mazur run");
  }

  std::string id() const override { return "scripted:" + path_; }

  HyperBall open() override { return ball_at(0); }
  HyperBall respond(const HyperBall&, std::uint64_t round) override {
    return ball_at(round);
  }

  Int denom_bound(const Int& incoming, std::uint64_t round) const override {
    Int best = incoming;
    if (round < trace_.moves.size()) {
      const auto& r = trace_.moves[round];
      const auto& b = alpha_role_ ? r.alpha_ball : r.beta_ball;
      if (b && b->radius_den > best) best = b->radius_den;
    }
    return best;
  }

 private:
  HyperBall ball_at(std::uint64_t round) {
    if (round >= trace_.moves.size())
      throw ill_formed_error("scripted player: no recorded move for round " +
                             std::to_string(round));
    const auto& r = trace_.moves[round];
    const auto& b = alpha_role_ ? r.alpha_ball : r.beta_ball;
    if (!b)
      throw ill_formed_error("scripted player: move missing in trace");
    return *b;
  }
  std::string path_;
  bool alpha_role_;
  GameTrace trace_;
};

// ---------------------------------------------------------------------------
// factories keyed by the strategy ids that appear in trace headers

inline std::unique_ptr<ChAlphaStrategy> make_ch_alpha(const std::string& id,
                                                      std::uint64_t seed,
                                                      std::uint64_t cap) {
  if (id == "random-alpha") return std::make_unique<RandomChAlpha>(seed, cap);
  if (id == "generic-complete") return std::make_unique<GenericCompleteAlpha>();
  if (id.rfind("scripted:", 0) == 0)
    return std::make_unique<ScriptedChAlpha>(id.substr(9));
  throw config_error("unknown Choquet alpha strategy: " + id);
}

inline std::unique_ptr<ChBetaStrategy> make_ch_beta(const std::string& id,
                                                    std::uint64_t seed,
                                                    std::uint64_t cap) {
  if (id == "sigma-ch") return std::make_unique<SigmaChBeta>();
  if (id == "random-beta") return std::make_unique<RandomChBeta>(seed, cap);
  if (id.rfind("scripted:", 0) == 0)
    return std::make_unique<ScriptedChBeta>(id.substr(9));
  throw config_error("unknown Choquet beta strategy: " + id);
}

inline std::unique_ptr<BMStrategy> make_bm_player(const std::string& id,
                                                  bool alpha_role,
                                                  std::uint64_t seed,
                                                  std::uint64_t cap) {
  if (id == "sigma-bm") {
    if (!alpha_role) throw config_error("sigma-bm plays the alpha role");
    return std::make_unique<SigmaBMAlpha>();
  }
  if (id == "random-beta") {
    if (alpha_role) throw config_error("random-beta plays the beta role");
    return std::make_unique<RandomBMBeta>(seed, cap);
  }
  if (id.rfind("scripted:", 0) == 0)
    return std::make_unique<ScriptedBM>(id.substr(9), alpha_role);
  throw config_error("unknown Banach-Mazur strategy: " + id);
}

}  // namespace hypergame
