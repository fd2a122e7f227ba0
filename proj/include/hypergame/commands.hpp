#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "hypergame/certify.hpp"
#include "hypergame/game.hpp"
#include "hypergame/strategies.hpp"

namespace hypergame {

struct CmdResult {
  int exit_code = 0;
  std::string output;
};

namespace detail {

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file: " + path);
  out << text;
}

}  // namespace detail

struct RunConfig {
  GameKind kind = GameKind::Choquet;
  std::uint64_t rounds = 1;
  std::optional<Int> depth;  // nullopt: auto from the round budget
  std::uint64_t seed = 0;
  std::string alpha_id = "random-alpha";
  std::string beta_id = "sigma-ch";
  std::uint64_t cap = 1;
  Metric metric = Metric::BaireD;
  std::string out_path;  // empty: do not write
};

inline GameTrace execute_run(const RunConfig& cfg) {
  RunSettings s;
  s.rounds = cfg.rounds;
  s.depth = cfg.depth;
  s.seed = cfg.seed;
  s.cap = cfg.cap;
  s.metric = cfg.metric;
  if (cfg.kind == GameKind::Choquet) {
    auto beta = make_ch_beta(cfg.beta_id, cfg.seed, cfg.cap);
    auto alpha = make_ch_alpha(cfg.alpha_id, cfg.seed, cfg.cap);
    return run_choquet(*beta, *alpha, s);
  }
  auto beta = make_bm_player(cfg.beta_id, false, cfg.seed, cfg.cap);
  auto alpha = make_bm_player(cfg.alpha_id, true, cfg.seed, cfg.cap);
  return run_banach_mazur(*beta, *alpha, s);
}

// Re-runs a trace from its header configuration alone.
inline GameTrace replay_from_header(const GameTrace& t) {
  RunConfig cfg;
  cfg.kind = t.kind;
  cfg.rounds = t.rounds;
  cfg.depth = t.depth;
  cfg.seed = t.seed;
  cfg.alpha_id = t.alpha_id;
  cfg.beta_id = t.beta_id;
  cfg.cap = t.cap;
  cfg.metric = t.metric;
  return execute_run(cfg);
}

inline CmdResult cmd_run(const RunConfig& cfg) {
  try {
    GameTrace t = execute_run(cfg);
    std::string text = canonical_dump(to_json(t)) + "\n";
    if (!cfg.out_path.empty()) detail::write_text_file(cfg.out_path, text);
    std::ostringstream os;
    os << "game=" << kind_str(t.kind) << " rounds=" << t.rounds
       << " depth=" << t.depth.str() << " seed=" << t.seed
       << " alpha=" << t.alpha_id << " beta=" << t.beta_id;
    if (t.fault) {
      os << " fault[round " << t.fault->round << ", " << t.fault->offender
         << ": " << t.fault->constraint << "]";
    } else {
      const auto& last = t.moves.back();
      const Int& k = t.kind == GameKind::Choquet
                         ? last.alpha_normal->radius_den
                         : last.alpha_ball->radius_den;
      os << " legal final_radius=1/" << k.str();
    }
    os << " hash=" << trace_content_hash(t) << "\n";
    return {t.fault ? 1 : 0, os.str()};
  } catch (const config_error& e) {
    return {2, std::string("config error: ") + e.what() + "\n"};
  } catch (const parse_error& e) {
    return {2, std::string("parse error: ") + e.what() + "\n"};
  } catch (const error& e) {
    return {1, std::string("error: ") + e.what() + "\n"};
  }
}

inline CmdResult cmd_certify(const std::string& mode,
                             const std::string& trace_path,
                             const std::string& cert_path) {
  try {
    GameTrace t = trace_from_json(detail::read_json_file(trace_path));
    if (mode == "build") {
      Json cert;
      if (t.kind == GameKind::Choquet && t.beta_id == "sigma-ch") {
        cert = to_json(build_emptiness_certificate(t));
      } else if (t.kind == GameKind::BanachMazur && t.alpha_id == "sigma-bm") {
        cert = to_json(build_S_witness(t, t.depth));
      } else {
        throw config_error(
            "trace strategies admit no certificate (need sigma-ch beta or "
            "sigma-bm alpha)");
      }
      detail::write_text_file(cert_path, canonical_dump(cert) + "\n");
      return {0, "certificate type=" + cert.at("type").get<std::string>() +
                     " trace=" + trace_content_hash(t) + " written to " +
                     cert_path + "\n"};
    }
    if (mode == "check") {
      Json cj = detail::read_json_file(cert_path);
      std::string type = cj.value("type", "");
      Verdict v;
      if (type == "emptiness") {
        v = check_emptiness_certificate(emptiness_from_json(cj), t);
      } else if (type == "nonempty") {
        v = check_nonempty_witness(witness_from_json(cj), t);
      } else {
        throw parse_error("unknown certificate type: " + type);
      }
      std::string verdict = v.valid ? "Valid" : "Invalid";
      return {v.valid ? 0 : 1,
              verdict + "\n" + canonical_dump(to_json(v)) + "\n"};
    }
    throw config_error("certify mode must be build or check");
  } catch (const config_error& e) {
    return {2, std::string("config error: ") + e.what() + "\n"};
  } catch (const parse_error& e) {
    return {2, std::string("parse error: ") + e.what() + "\n"};
  } catch (const error& e) {
    return {1, std::string("error: ") + e.what() + "\n"};
  }
}

inline CmdResult cmd_hausdorff(const std::string& a_path,
                               const std::string& b_path, const Int& depth,
                               Metric metric = Metric::BaireD) {
  try {
    auto [a, da] = set_file_from_json(detail::read_json_file(a_path));
    auto [b, db] = set_file_from_json(detail::read_json_file(b_path));
    (void)da;
    (void)db;
    MetricValue h = hausdorff_dist(a, b, depth, metric);
    std::string s;
    switch (h.kind()) {
      case MetricValue::Kind::Zero:
        s = "0";
        break;
      case MetricValue::Kind::Exact:
        s = "1/" + h.denom().str();
        break;
      case MetricValue::Kind::Below:
        s = "≤ 1/" + h.denom().str();
        break;
    }
    return {0, s + "\n"};
  } catch (const parse_error& e) {
    return {2, std::string("parse error: ") + e.what() + "\n"};
  } catch (const config_error& e) {
    return {2, std::string("config error: ") + e.what() + "\n"};
  } catch (const error& e) {
    return {1, std::string("error: ") + e.what() + "\n"};
  }
}

// The two favorability witnesses over the same space, side by side:
//   (i) under the Baire metric, the interval-refinement beta wins the
//       strong Choquet game; verified through an emptiness certificate.
//  (ii) under the complete remetrization, the halving alpha produces a
//       Cauchy chain of centers with modulus 2^-m.
inline CmdResult cmd_demo_corollary(std::uint64_t rounds, std::uint64_t seed) {
  if (rounds < 3)
    return {2, "config error: the demo needs at least 3 rounds\n"};
  std::ostringstream os;
  bool ok = true;
  try {
    // (i) beta-favorability under d
    RunConfig ci;
    ci.kind = GameKind::Choquet;
    ci.rounds = rounds;
    ci.seed = seed;
    ci.cap = 3;
    ci.alpha_id = "random-alpha";
    ci.beta_id = "sigma-ch";
    ci.metric = Metric::BaireD;
    GameTrace ti = execute_run(ci);
    os << "[d] sigma-ch vs random-alpha: rounds=" << rounds
       << " depth=" << ti.depth.str() << " hash=" << trace_content_hash(ti);
    if (ti.fault) {
      os << " FAULT\n";
      ok = false;
    } else {
      EmptinessEvidence e = build_emptiness_certificate(ti);
      Verdict v = check_emptiness_certificate(e, ti);
      os << " evidence=" << (v.valid ? "Valid" : "Invalid") << " t_hat="
         << format_rational(e.t_hat) << " final_prefix_depth="
         << e.prefixes.back().length().str() << "\n";
      ok = ok && v.valid;
      for (const auto& f : v.facts) os << "  [d] " << f << "\n";
    }

    // (ii) alpha-favorability under d'
    RunConfig cii;
    cii.kind = GameKind::Choquet;
    cii.rounds = rounds;
    cii.seed = seed;
    cii.cap = 2;
    cii.alpha_id = "generic-complete";
    cii.beta_id = "random-beta";
    cii.metric = Metric::DPrime;
    GameTrace tii = execute_run(cii);
    os << "[d'] generic-complete vs random-beta: rounds=" << rounds
       << " depth=" << tii.depth.str() << " hash=" << trace_content_hash(tii);
    if (tii.fault) {
      os << " FAULT\n";
      ok = false;
    } else {
      os << " legal\n";
      // radii <= 2^-m and H-Cauchy centers with modulus 2^-(m+1)
      for (std::uint64_t m = 0; m < tii.moves.size(); ++m) {
        const auto& r = tii.moves[m];
        Rat bound = Rat(1, Int(1) << m);
        bool small = r.alpha_ball->radius() <= bound;
        os << "  [d'] round " << m << ": alpha radius 1/"
           << r.alpha_ball->radius_den.str() << " <= 2^-" << m
           << (small ? "" : " VIOLATED");
        ok = ok && small;
        if (m + 1 < tii.moves.size()) {
          MetricValue h = hausdorff_dist(tii.moves[m].beta_ch->atom,
                                         tii.moves[m + 1].beta_ch->atom,
                                         tii.depth, Metric::DPrime);
          Rat modulus = Rat(1, Int(1) << (m + 1));
          auto cauchy = h.less_than(modulus);
          bool pass = cauchy && *cauchy;
          os << "; H'(A_m, A_{m+1}) = " << h.str() << " < 2^-" << (m + 1)
             << (pass ? "" : " VIOLATED");
          ok = ok && pass;
        }
        os << "\n";
      }
      os << "  [d'] center chain is Cauchy under the remetrized distance\n";
    }
  } catch (const error& e) {
    return {1, os.str() + "error: " + e.what() + "\n"};
  }
  os << (ok ? "corollary demo: both favorability witnesses verified\n"
            : "corollary demo: FAILED\n");
  return {ok ? 0 : 1, os.str()};
}

}  // namespace hypergame
