#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hypergame/intervals.hpp"
#include "hypergame/rational.hpp"
#include "hypergame/tail_seq.hpp"

namespace hypergame {

// Coordinate symbol of a class template: a fixed rational, or the class
// parameter t (the value at index 0 of every represented point of the class,
// by the Param-at-zero invariant).
struct Sym {
  bool is_param = false;
  Rat value{0};

  static Sym param() { return Sym{true, Rat(0)}; }
  static Sym constant(Rat v) { return Sym{false, std::move(v)}; }
  bool operator==(const Sym&) const = default;
};

// c + s*n over the class index n of a rule class.
struct AffExpr {
  Int c{0};
  Int s{0};

  static AffExpr constant(Int v) { return AffExpr{std::move(v), Int(0)}; }
  Int eval(std::uint64_t n) const { return c + s * Int(n); }
  AffExpr operator+(const AffExpr& o) const { return AffExpr{c + o.c, s + o.s}; }
  AffExpr operator-(const AffExpr& o) const { return AffExpr{c - o.c, s - o.s}; }
  bool operator==(const AffExpr&) const = default;
  bool is_constant() const { return s == 0; }
  std::string str() const {
    if (s == 0) return c.str();
    return c.str() + (s > 0 ? "+" : "") + s.str() + "n";
  }
};

// Run-length coordinate template: finitely many runs, then an infinite tail
// symbol. Run lengths may depend affinely on the class index n; every length
// must be nonnegative over the class's declared index range.
struct SymSeq {
  struct Run {
    AffExpr len;
    Sym sym;
    bool operator==(const Run&) const = default;
  };
  std::vector<Run> runs;
  Sym tail;

  bool operator==(const SymSeq&) const = default;

  bool has_param() const {
    for (const auto& r : runs)
      if (r.sym.is_param) return true;
    return tail.is_param;
  }

  bool depends_on_n() const {
    for (const auto& r : runs)
      if (!r.len.is_constant()) return true;
    return false;
  }

  static SymSeq from_point(const TailSeq& p) {
    SymSeq s;
    for (const auto& r : p.runs())
      s.runs.push_back({AffExpr::constant(Int(r.count)), Sym::constant(r.value)});
    s.tail = Sym::constant(p.tail());
    return s;
  }

  // Zero-run family template: (t, 0^{base + n}, t, t, ...).
  static SymSeq zero_run_family(Int base) {
    SymSeq s;
    s.runs.push_back({AffExpr::constant(Int(1)), Sym::param()});
    s.runs.push_back({AffExpr{std::move(base), Int(1)}, Sym::constant(Rat(0))});
    s.tail = Sym::param();
    return s;
  }

  static SymSeq zero_run_fixed(Int len) {
    SymSeq s;
    s.runs.push_back({AffExpr::constant(Int(1)), Sym::param()});
    s.runs.push_back({AffExpr::constant(std::move(len)), Sym::constant(Rat(0))});
    s.tail = Sym::param();
    return s;
  }

  // Substitute the parameter and a concrete index; yields the point.
  TailSeq substitute(const Rat& t, std::uint64_t n) const {
    std::vector<TailSeq::Run> rs;
    for (const auto& r : runs) {
      Int len = r.len.eval(n);
      if (len < 0)
        throw internal_error("negative run length after substitution");
      if (len == 0) continue;
      rs.push_back({static_cast<std::uint64_t>(len),
                    r.sym.is_param ? t : r.sym.value});
    }
    return TailSeq::from_runs(std::move(rs), tail.is_param ? t : tail.value);
  }
};

// A piece of a piecewise-affine answer over the class index n.
struct ScanPiece {
  IndexRange nr;
  // First index at which the two templates disagree for a generic parameter
  // value; nullopt means they agree everywhere on this piece.
  std::optional<AffExpr> mismatch;
};

namespace detail {

// Sign of an affine expression over an index range, split into maximal
// constant-sign subranges. Emits (subrange, sign in {-1,0,+1}).
inline void affine_sign_split(const AffExpr& e, const IndexRange& nr,
                              std::vector<std::pair<IndexRange, int>>& out) {
  auto sign_of = [](const Int& v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); };
  if (e.s == 0) {
    out.push_back({nr, sign_of(e.c)});
    return;
  }
  // root at n* = -c/s (denominator kept positive)
  Rat root = e.s > 0 ? Rat(-e.c, e.s) : Rat(e.c, -e.s);
  bool increasing = e.s > 0;
  // collect boundaries: n < root, n == root (integer), n > root
  Int floor_root = numerator(root) / denominator(root);
  if (root < 0 && floor_root * denominator(root) != numerator(root))
    --floor_root;  // true floor for negatives
  bool exact_root = Rat(floor_root) == root && floor_root >= 0;
  auto emit = [&](std::optional<Int> lo, std::optional<Int> hi, int sgn) {
    // clip [lo,hi] (Int domain) against nr
    Int clo = lo ? *lo : Int(0);
    if (clo < Int(nr.lo)) clo = Int(nr.lo);
    if (clo < 0) clo = 0;
    std::optional<Int> chi;
    if (hi) {
      if (*hi < 0) return;
      chi = *hi;
    }
    if (nr.hi && (!chi || *chi > Int(*nr.hi))) chi = Int(*nr.hi);
    if (chi && *chi < clo) return;
    IndexRange r;
    r.lo = static_cast<std::uint64_t>(clo);
    if (chi) r.hi = static_cast<std::uint64_t>(*chi);
    out.push_back({r, sgn});
  };
  if (increasing) {
    emit(std::nullopt, exact_root ? floor_root - 1 : floor_root, -1);
    if (exact_root) emit(floor_root, floor_root, 0);
    emit(exact_root ? floor_root + 1 : floor_root + 1, std::nullopt, 1);
  } else {
    emit(std::nullopt, exact_root ? floor_root - 1 : floor_root, 1);
    if (exact_root) emit(floor_root, floor_root, 0);
    emit(floor_root + 1, std::nullopt, -1);
  }
}

struct ScanState {
  std::size_t ia = 0, ib = 0;
  AffExpr offa = AffExpr::constant(Int(0));  // consumed inside current run
  AffExpr offb = AffExpr::constant(Int(0));
  AffExpr pos = AffExpr::constant(Int(0));
  IndexRange nr;
};

}  // namespace detail

// First generic-parameter mismatch of two templates compared at the SAME
// parameter value, piecewise over a shared index range. Param-vs-Const(c)
// positions mismatch generically; every such c is reported through
// `specials` so callers can re-evaluate those finitely many parameter
// values concretely.
inline std::vector<ScanPiece> first_mismatch_same_t(
    const SymSeq& a, const SymSeq& b, const IndexRange& range,
    std::vector<Rat>* specials) {
  std::vector<ScanPiece> out;
  std::vector<detail::ScanState> stack;
  detail::ScanState init;
  init.nr = range;
  stack.push_back(init);
  auto sym_at = [](const SymSeq& s, std::size_t i) -> const Sym& {
    return i < s.runs.size() ? s.runs[i].sym : s.tail;
  };
  while (!stack.empty()) {
    detail::ScanState st = stack.back();
    stack.pop_back();
    if (st.nr.empty()) continue;
    bool ta = st.ia >= a.runs.size();
    bool tb = st.ib >= b.runs.size();
    const Sym& sa = sym_at(a, st.ia);
    const Sym& sb = sym_at(b, st.ib);
    bool equal_generic;
    if (sa.is_param && sb.is_param) {
      equal_generic = true;
    } else if (!sa.is_param && !sb.is_param) {
      equal_generic = sa.value == sb.value;
    } else {
      equal_generic = false;
      if (specials) specials->push_back(sa.is_param ? sb.value : sa.value);
    }
    if (!equal_generic) {
      out.push_back({st.nr, st.pos});
      continue;
    }
    if (ta && tb) {
      out.push_back({st.nr, std::nullopt});
      continue;
    }
    // advance past the shorter of the two current runs
    if (ta || tb) {
      // one side is in its tail: consume the other side's whole run
      detail::ScanState nx = st;
      if (ta) {
        AffExpr rem = b.runs[st.ib].len - st.offb;
        nx.pos = st.pos + rem;
        nx.ib++;
        nx.offb = AffExpr::constant(Int(0));
      } else {
        AffExpr rem = a.runs[st.ia].len - st.offa;
        nx.pos = st.pos + rem;
        nx.ia++;
        nx.offa = AffExpr::constant(Int(0));
      }
      stack.push_back(nx);
      continue;
    }
    AffExpr rema = a.runs[st.ia].len - st.offa;
    AffExpr remb = b.runs[st.ib].len - st.offb;
    std::vector<std::pair<IndexRange, int>> zones;
    detail::affine_sign_split(rema - remb, st.nr, zones);
    for (auto& [zr, sgn] : zones) {
      detail::ScanState nx = st;
      nx.nr = zr;
      if (sgn < 0) {  // rema < remb: consume run a fully
        nx.pos = st.pos + rema;
        nx.ia++;
        nx.offa = AffExpr::constant(Int(0));
        nx.offb = st.offb + rema;
      } else if (sgn > 0) {
        nx.pos = st.pos + remb;
        nx.ib++;
        nx.offb = AffExpr::constant(Int(0));
        nx.offa = st.offa + remb;
      } else {  // equal remainders: both runs end together
        nx.pos = st.pos + rema;
        nx.ia++;
        nx.ib++;
        nx.offa = AffExpr::constant(Int(0));
        nx.offb = AffExpr::constant(Int(0));
      }
      stack.push_back(nx);
    }
  }
  return out;
}

// First index >= 1 where the template differs from 0, i.e. the denominator
// of dist_to_F minus one for the represented points (their index-0 value is
// the nonzero parameter t, or a nonzero constant). Piecewise over n.
// Returns pieces with nullopt mismatch when the template is zero from index
// 1 onward (represented points would lie in F; callers reject that shape).
inline std::vector<ScanPiece> first_nonzero_after_zero(
    const SymSeq& a, const IndexRange& range, std::vector<Rat>* specials) {
  SymSeq zero_from_1;
  zero_from_1.runs.push_back(
      {AffExpr::constant(Int(1)),
       a.runs.empty() ? a.tail : a.runs.front().sym});
  zero_from_1.tail = Sym::constant(Rat(0));
  return first_mismatch_same_t(a, zero_from_1, range, specials);
}

// Graft a template: keep indices < cut, then the constant c. Splits the
// index range wherever the cut crosses run boundaries.
inline std::vector<std::pair<IndexRange, SymSeq>> graft_template(
    const SymSeq& a, const IndexRange& range, std::uint64_t cut, const Rat& c) {
  // Compare against a synthetic template that differs from `a` nowhere so
  // positions accumulate; simpler: walk runs directly with sign splits.
  std::vector<std::pair<IndexRange, SymSeq>> out;
  struct State {
    std::size_t i;
    AffExpr pos;
    IndexRange nr;
    SymSeq acc;
  };
  std::vector<State> stack;
  stack.push_back({0, AffExpr::constant(Int(0)), range, SymSeq{}});
  AffExpr cut_e = AffExpr::constant(Int(cut));
  while (!stack.empty()) {
    State st = stack.back();
    stack.pop_back();
    if (st.nr.empty()) continue;
    if (st.i >= a.runs.size()) {
      // tail from st.pos onward; remaining kept part = cut - pos of tail sym
      SymSeq r = st.acc;
      AffExpr rem = cut_e - st.pos;
      r.runs.push_back({rem, a.tail});
      r.tail = Sym::constant(c);
      out.push_back({st.nr, std::move(r)});
      continue;
    }
    AffExpr end = st.pos + a.runs[st.i].len;
    std::vector<std::pair<IndexRange, int>> zones;
    detail::affine_sign_split(end - cut_e, st.nr, zones);
    for (auto& [zr, sgn] : zones) {
      if (sgn < 0) {  // run ends before cut: keep whole run
        State nx{st.i + 1, end, zr, st.acc};
        nx.acc.runs.push_back(a.runs[st.i]);
        stack.push_back(nx);
      } else {  // cut lands in (or at end of) this run: truncate here
        SymSeq r = st.acc;
        r.runs.push_back({cut_e - st.pos, a.runs[st.i].sym});
        r.tail = Sym::constant(c);
        out.push_back({zr, std::move(r)});
      }
    }
  }
  return out;
}

// Normalize: drop zero-length runs (over the whole declared range), merge
// adjacent equal symbols, drop trailing runs equal to the tail symbol.
// Lengths that are zero only for part of the range require a prior split;
// this helper requires sign-constant lengths.
inline SymSeq normalize_symseq(const SymSeq& s, const IndexRange& nr) {
  SymSeq r;
  r.tail = s.tail;
  for (const auto& run : s.runs) {
    // check nonnegativity over nr, and whether identically zero
    Int at_lo = run.len.eval(nr.lo);
    Int at_hi = nr.hi ? run.len.eval(*nr.hi) : at_lo;
    bool maybe_positive = at_lo > 0 || at_hi > 0 || !nr.hi;
    if (at_lo < 0 || at_hi < 0)
      throw internal_error("normalize_symseq: negative run length in range");
    if (!run.len.is_constant() && !nr.hi && run.len.s < 0)
      throw internal_error("normalize_symseq: length unbounded below");
    if (run.len.is_constant() && run.len.c == 0) continue;
    if (!maybe_positive) continue;
    if (!r.runs.empty() && r.runs.back().sym == run.sym)
      r.runs.back().len = r.runs.back().len + run.len;
    else
      r.runs.push_back(run);
  }
  while (!r.runs.empty() && r.runs.back().sym == r.tail) {
    // only drop if the length is across-the-board irrelevant (same symbol)
    r.runs.pop_back();
  }
  return r;
}

}  // namespace hypergame
