#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "hypergame/closed_set.hpp"
#include "hypergame/intervals.hpp"
#include "hypergame/rational.hpp"
#include "hypergame/sym_seq.hpp"
#include "hypergame/tail_seq.hpp"

namespace hypergame {

namespace detail {

// Piecewise distance value over a class index range: the compared templates
// agree (distance 0), are forced one apart (d' with differing distance-to-F
// profiles, or parameter mismatch), or first disagree at an affine index.
struct ValPiece {
  IndexRange nr;
  enum class Kind { Agree, One, At } kind = Kind::Agree;
  AffExpr pos = AffExpr::constant(Int(0));  // for At: distance 1/(pos+1)
};

using ValPieces = std::vector<ValPiece>;

inline ValPieces restrict_pieces(const ValPieces& ps, const IndexRange& nr) {
  ValPieces out;
  for (const auto& p : ps) {
    auto r = p.nr.intersect(nr);
    if (!r) continue;
    ValPiece q = p;
    q.nr = *r;
    out.push_back(q);
  }
  return out;
}

// Pointwise minimum of two piecewise distance functions.
inline ValPieces combine_min(const ValPieces& a, const ValPieces& b) {
  ValPieces out;
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      auto r = pa.nr.intersect(pb.nr);
      if (!r) continue;
      if (pa.kind == ValPiece::Kind::Agree || pb.kind == ValPiece::Kind::Agree) {
        out.push_back({*r, ValPiece::Kind::Agree, AffExpr::constant(Int(0))});
        continue;
      }
      if (pa.kind == ValPiece::Kind::One) {
        ValPiece q = pb;
        q.nr = *r;
        out.push_back(q);  // any At value is <= 1
        continue;
      }
      if (pb.kind == ValPiece::Kind::One) {
        ValPiece q = pa;
        q.nr = *r;
        out.push_back(q);
        continue;
      }
      // both At: smaller distance = later mismatch position
      std::vector<std::pair<IndexRange, int>> zones;
      affine_sign_split(pa.pos - pb.pos, *r, zones);
      for (auto& [zr, sgn] : zones) {
        ValPiece q;
        q.nr = zr;
        q.kind = ValPiece::Kind::At;
        q.pos = sgn >= 0 ? pa.pos : pb.pos;
        out.push_back(q);
      }
    }
  }
  return out;
}

// Exact maximum of a piecewise distance function over its ranges.
inline MetricValue maximize_pieces(const ValPieces& ps) {
  MetricValue best = MetricValue::zero();
  for (const auto& p : ps) {
    if (p.nr.empty()) continue;
    switch (p.kind) {
      case ValPiece::Kind::Agree:
        break;
      case ValPiece::Kind::One:
        best = MetricValue::max(best, MetricValue::exact(Int(1)));
        break;
      case ValPiece::Kind::At: {
        Int pos;
        if (p.pos.s >= 0) {
          pos = p.pos.eval(p.nr.lo);
        } else {
          if (!p.nr.hi)
            throw internal_error(
                "maximize_pieces: decreasing position on unbounded range");
          pos = p.pos.eval(*p.nr.hi);
        }
        if (pos < 0) throw internal_error("maximize_pieces: negative index");
        best = MetricValue::max(best, MetricValue::exact(pos + 1));
        break;
      }
    }
  }
  return best;
}

// Exact minimum over the ranges; nullopt when the infimum is 0 but not
// attained (mismatch positions grow without bound).
inline std::optional<MetricValue> minimize_pieces(const ValPieces& ps) {
  std::optional<MetricValue> best;
  auto consider = [&](MetricValue v) {
    best = best ? MetricValue::min(*best, v) : v;
  };
  for (const auto& p : ps) {
    if (p.nr.empty()) continue;
    switch (p.kind) {
      case ValPiece::Kind::Agree:
        consider(MetricValue::zero());
        break;
      case ValPiece::Kind::One:
        consider(MetricValue::exact(Int(1)));
        break;
      case ValPiece::Kind::At: {
        if (p.pos.s > 0 && !p.nr.hi) return std::nullopt;  // inf 0 unattained
        if (p.pos.s < 0 && !p.nr.hi)
          throw internal_error(
              "minimize_pieces: decreasing position on unbounded range");
        Int pos = p.pos.s > 0 ? p.pos.eval(*p.nr.hi) : p.pos.eval(p.nr.lo);
        if (pos < 0) throw internal_error("minimize_pieces: negative index");
        consider(MetricValue::exact(pos + 1));
        break;
      }
    }
  }
  return best;
}

// Distance-to-F profile of a template: mismatch position = first nonzero
// index after 0; the dist_to_F denominator of represented points is that
// position plus one. Throws if some piece would put points into F.
inline ValPieces dist_to_f_profile(const SymSeq& t, const IndexRange& nr) {
  std::vector<Rat> ignored;
  auto pieces = first_nonzero_after_zero(t, nr, &ignored);
  ValPieces out;
  for (const auto& p : pieces) {
    if (!p.mismatch)
      throw ill_formed_error(
          "template represents points of F (zero beyond index 0)");
    out.push_back({p.nr, ValPiece::Kind::At, *p.mismatch});
  }
  return out;
}

// Same-parameter distance pieces between two templates over a shared index
// range, under the chosen metric. Parameter-vs-constant collisions are
// reported through `specials` for concrete re-evaluation.
inline ValPieces same_t_value_pieces(const SymSeq& a, const SymSeq& b,
                                     const IndexRange& nr, Metric metric,
                                     std::vector<Rat>* specials) {
  ValPieces base;
  for (const auto& p : first_mismatch_same_t(a, b, nr, specials)) {
    if (p.mismatch)
      base.push_back({p.nr, ValPiece::Kind::At, *p.mismatch});
    else
      base.push_back({p.nr, ValPiece::Kind::Agree, AffExpr::constant(Int(0))});
  }
  if (metric == Metric::BaireD) return base;
  ValPieces fa = dist_to_f_profile(a, nr);
  ValPieces fb = dist_to_f_profile(b, nr);
  ValPieces out;
  for (const auto& pd : base) {
    if (pd.kind == ValPiece::Kind::Agree) {
      out.push_back(pd);  // identical points share dist_to_F
      continue;
    }
    for (const auto& pa : fa) {
      auto r1 = pd.nr.intersect(pa.nr);
      if (!r1) continue;
      for (const auto& pb : fb) {
        auto r2 = r1->intersect(pb.nr);
        if (!r2) continue;
        std::vector<std::pair<IndexRange, int>> zones;
        affine_sign_split(pa.pos - pb.pos, *r2, zones);
        for (auto& [zr, sgn] : zones) {
          ValPiece q = pd;
          q.nr = zr;
          if (sgn != 0) {
            q.kind = ValPiece::Kind::One;
            q.pos = AffExpr::constant(Int(0));
          }
          out.push_back(q);
        }
      }
    }
  }
  return out;
}

// Pin the index variable of a template to a concrete value.
inline SymSeq pin_symseq(const SymSeq& s, std::uint64_t n) {
  SymSeq r;
  r.tail = s.tail;
  for (const auto& run : s.runs) {
    Int len = run.len.eval(n);
    if (len < 0) throw internal_error("pin_symseq: negative length");
    if (len == 0) continue;
    if (!r.runs.empty() && r.runs.back().sym == run.sym)
      r.runs.back().len = r.runs.back().len + AffExpr::constant(len);
    else
      r.runs.push_back({AffExpr::constant(len), run.sym});
  }
  while (!r.runs.empty() && r.runs.back().sym == r.tail) r.runs.pop_back();
  return r;
}

// How two class parameter domains meet for same-parameter matching. The
// artifact's domains all come from one nested interval tree (base scheme
// plus quarter subdivisions of tree intervals), so overlaps are equality,
// shared-scheme index alignment, or containment in a single member.
// Anything else is rejected as an unsupported representation.
struct DomRelation {
  enum class Kind {
    Disjoint,
    Equal,           // identical parameter sets
    SharedScheme,    // slices of one scheme; shared index range `shared`
    BInsideAMember,  // b's whole domain sits inside member `a_pin` of a
    AInsideBMember,  // a's whole domain sits inside member `b_pin` of b
  };
  Kind kind = Kind::Disjoint;
  IndexRange shared;
  std::uint64_t a_pin = 0, b_pin = 0;
  bool b_pin_in_range = false;  // for AInsideBMember: b_pin within b's range
};

inline bool interval_inside(const Interval& inner, const Interval& outer) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

inline DomRelation relate_doms(const Dom& a, const Dom& b) {
  using K = DomRelation::Kind;
  DomRelation r;
  if (a == b) {
    r.kind = K::Equal;
    return r;
  }
  auto contained_member = [](const Scheme& s, const Interval& iv)
      -> std::optional<std::uint64_t> {
    auto m = s.locate(iv.midpoint());
    if (m && interval_inside(iv, s.interval(*m))) return m;
    return std::nullopt;
  };
  if (a.kind == Dom::Kind::SchemeSlice && b.kind == Dom::Kind::SchemeSlice) {
    if (a.scheme == b.scheme) {
      auto shared = a.range.intersect(b.range);
      if (!shared) {
        r.kind = K::Disjoint;
        return r;
      }
      r.kind = K::SharedScheme;
      r.shared = *shared;
      return r;
    }
    if (b.scheme.kind == Scheme::Kind::Quarter) {
      if (auto m = contained_member(a.scheme, b.scheme.parent)) {
        if (!a.range.contains(*m)) {
          r.kind = K::Disjoint;
          return r;
        }
        r.kind = K::BInsideAMember;
        r.a_pin = *m;
        return r;
      }
    }
    if (a.scheme.kind == Scheme::Kind::Quarter) {
      if (auto m = contained_member(b.scheme, a.scheme.parent)) {
        r.kind = K::AInsideBMember;
        r.b_pin = *m;
        r.b_pin_in_range = b.range.contains(*m);
        return r;
      }
    }
    if (a.scheme.kind == Scheme::Kind::Quarter &&
        b.scheme.kind == Scheme::Kind::Quarter) {
      const Interval& pa = a.scheme.parent;
      const Interval& pb = b.scheme.parent;
      if (pa.hi <= pb.lo || pb.hi <= pa.lo) {
        r.kind = K::Disjoint;
        return r;
      }
      throw ill_formed_error("unsupported overlap of unrelated interval trees");
    }
    // base vs quarter whose parent is not inside a single base member
    const Scheme& quarter =
        a.scheme.kind == Scheme::Kind::Quarter ? a.scheme : b.scheme;
    const Scheme& base =
        a.scheme.kind == Scheme::Kind::Quarter ? b.scheme : a.scheme;
    auto hit = base.indices_intersecting(quarter.parent.lo, quarter.parent.hi);
    if (!hit.second) {
      r.kind = K::Disjoint;
      return r;
    }
    throw ill_formed_error("unsupported overlap of unrelated interval trees");
  }
  if (a.kind == Dom::Kind::Gap && b.kind == Dom::Kind::Gap) {
    const Interval& pa = a.scheme.parent;
    const Interval& pb = b.scheme.parent;
    if (pa.hi <= pb.lo || pb.hi <= pa.lo) {
      r.kind = K::Disjoint;
      return r;
    }
    // nested tree intervals: the inner gap lies inside one child of the
    // outer scheme, hence misses the outer gap entirely
    if (interval_inside(pa, pb) || interval_inside(pb, pa)) {
      r.kind = K::Disjoint;
      return r;
    }
    throw ill_formed_error("unsupported overlap of unrelated interval trees");
  }
  // gap vs slice (either order)
  const bool a_is_gap = a.kind == Dom::Kind::Gap;
  const Dom& g = a_is_gap ? a : b;
  const Dom& s = a_is_gap ? b : a;
  if (s.kind != Dom::Kind::SchemeSlice || g.kind != Dom::Kind::Gap)
    throw ill_formed_error("unsupported domain pairing");
  if (s.scheme == g.scheme) {
    r.kind = K::Disjoint;  // children vs their own gap
    return r;
  }
  const Interval& gp = g.scheme.parent;
  if (s.scheme.kind == Scheme::Kind::Quarter) {
    const Interval& sp = s.scheme.parent;
    if (sp.hi <= gp.lo || gp.hi <= sp.lo) {
      r.kind = K::Disjoint;
      return r;
    }
    if (interval_inside(sp, gp)) {
      // the slice's tree interval is inside the gap's parent; in a nested
      // tree it then sits inside one child, away from the gap
      if (g.scheme.locate(sp.midpoint()).has_value() || sp == gp) {
        r.kind = K::Disjoint;
        return r;
      }
      throw ill_formed_error("unsupported overlap of unrelated interval trees");
    }
  }
  if (auto m = contained_member(s.scheme, gp)) {
    if (a_is_gap) {
      r.kind = K::AInsideBMember;
      r.b_pin = *m;
      r.b_pin_in_range = s.range.contains(*m);
    } else {
      if (!s.range.contains(*m)) {
        r.kind = K::Disjoint;
        return r;
      }
      r.kind = K::BInsideAMember;
      r.a_pin = *m;
    }
    return r;
  }
  if (s.scheme.kind == Scheme::Kind::Base) {
    auto hit = s.scheme.indices_intersecting(gp.lo, gp.hi);
    if (!hit.second) {
      r.kind = K::Disjoint;
      return r;
    }
    throw ill_formed_error("unsupported overlap of unrelated interval trees");
  }
  r.kind = K::Disjoint;
  return r;
}

inline void collect_template_consts(const SymSeq& s, std::vector<Rat>& out) {
  for (const auto& run : s.runs)
    if (!run.sym.is_param) out.push_back(run.sym.value);
  if (!s.tail.is_param) out.push_back(s.tail.value);
}

inline void collect_point_values(const TailSeq& p, std::vector<Rat>& out) {
  for (const auto& run : p.runs()) out.push_back(run.value);
  out.push_back(p.tail());
}

// inf over a whole representation, concrete point path.
inline MetricValue dist_point_to_classes(const TailSeq& x,
                                         const std::vector<ClassDesc>& cls,
                                         Metric metric);

// Joint coverage of one tree interval by gap + slice classes of its
// subdivision (recursively through deeper subdivisions). This is how a
// refined family still covers every parameter of the interval it refined.
struct SubdivisionCover {
  Scheme scheme;
  bool gap_present = false;
  std::vector<IndexRange> slice_ranges;
};

inline bool covers_interval(const std::vector<SubdivisionCover>& subs,
                            const Interval& target) {
  for (const auto& s : subs) {
    if (!(s.scheme.parent == target)) continue;
    if (!s.gap_present) continue;
    // slice ranges must cover [0, inf) except finitely many indices, each of
    // which must be covered by a deeper subdivision
    std::vector<IndexRange> sorted = s.slice_ranges;
    std::sort(sorted.begin(), sorted.end(),
              [](const IndexRange& x, const IndexRange& y) { return x.lo < y.lo; });
    std::uint64_t next = 0;
    bool tail_covered = false;
    std::vector<std::uint64_t> missing;
    for (const auto& r : sorted) {
      if (r.empty()) continue;
      if (r.lo > next) {
        for (std::uint64_t m = next; m < r.lo; ++m) {
          missing.push_back(m);
          if (missing.size() > 64) return false;
        }
      }
      if (!r.hi) {
        tail_covered = true;
        next = UINT64_MAX;
        break;
      }
      if (*r.hi + 1 > next) next = *r.hi + 1;
    }
    if (!tail_covered) return false;
    bool all = true;
    for (std::uint64_t m : missing)
      all = all && covers_interval(subs, s.scheme.interval(m));
    if (all) return true;
  }
  return false;
}

// sup_{a in cA} inf_{b in B} d(a, b), exact.
inline MetricValue directed_sup_class(const ClassDesc& ca,
                                      const std::vector<ClassDesc>& bcls,
                                      Metric metric) {
  if (ca.is_point()) return dist_point_to_classes(*ca.point, bcls, metric);

  const bool a_is_slice = ca.dom->kind == Dom::Kind::SchemeSlice;
  const IndexRange arange = a_is_slice ? ca.dom->range : IndexRange{0, 0};

  // Special parameter values: any constant appearing on either side can
  // change a comparison when t hits it.
  std::vector<Rat> specials;
  collect_template_consts(ca.tmpl, specials);
  bool b_has_param_class = false;
  for (const auto& cb : bcls) {
    if (cb.is_point())
      collect_point_values(*cb.point, specials);
    else {
      b_has_param_class = true;
      collect_template_consts(cb.tmpl, specials);
    }
  }

  // Generic-parameter distance to B's point classes, piecewise over ca's n.
  std::optional<ValPieces> h_gen;
  for (const auto& cb : bcls) {
    if (!cb.is_point()) continue;
    ValPieces p = same_t_value_pieces(ca.tmpl, SymSeq::from_point(*cb.point),
                                      arange, metric, &specials);
    h_gen = h_gen ? combine_min(*h_gen, p) : p;
  }
  auto h_gen_at = [&](std::uint64_t n) -> std::optional<MetricValue> {
    if (!h_gen) return std::nullopt;
    return maximize_pieces(restrict_pieces(*h_gen, IndexRange{n, n}));
  };

  // Same-parameter matches against B's parametrized classes. Atoms over
  // ca's own index are refined to a common partition so that members
  // matched by several B classes take the pointwise minimum.
  struct AVarAtom {
    IndexRange span;  // ca indices on which the whole member is matched
    ValPieces value;
  };
  struct ForeignAtom {
    std::uint64_t a_pin;  // ca member hosting the match
    ValPieces value;      // over the B-side index
  };
  std::vector<AVarAtom> a_atoms;
  std::vector<ForeignAtom> f_atoms;
  bool fixed_dom_covered = false;
  std::vector<SubdivisionCover> subs;  // joint-coverage bookkeeping

  auto note_sub = [&](const Dom& bd) {
    if (bd.kind == Dom::Kind::Gap) {
      for (auto& s : subs)
        if (s.scheme == bd.scheme) {
          s.gap_present = true;
          return;
        }
      subs.push_back({bd.scheme, true, {}});
    } else if (bd.kind == Dom::Kind::SchemeSlice &&
               bd.scheme.kind == Scheme::Kind::Quarter) {
      for (auto& s : subs)
        if (s.scheme == bd.scheme) {
          s.slice_ranges.push_back(bd.range);
          return;
        }
      subs.push_back({bd.scheme, false, {bd.range}});
    }
  };

  for (const auto& cb : bcls) {
    if (cb.is_point()) continue;
    DomRelation rel = relate_doms(*ca.dom, *cb.dom);
    using K = DomRelation::Kind;
    if (rel.kind == K::Disjoint) continue;
    if (rel.kind == K::Equal || rel.kind == K::SharedScheme) {
      IndexRange shared = rel.kind == K::Equal ? arange : rel.shared;
      a_atoms.push_back({shared, same_t_value_pieces(ca.tmpl, cb.tmpl, shared,
                                                     metric, &specials)});
      if (!a_is_slice) fixed_dom_covered = true;
      continue;
    }
    if (rel.kind == K::BInsideAMember) {
      // b's parameters all live inside ca's member a_pin; never a full cover
      // by itself, but gap+slices of one subdivision jointly cover it.
      SymSeq a_pinned = pin_symseq(ca.tmpl, rel.a_pin);
      IndexRange brange = cb.dom->kind == Dom::Kind::SchemeSlice
                              ? cb.dom->range
                              : IndexRange{0, 0};
      f_atoms.push_back({rel.a_pin, same_t_value_pieces(a_pinned, cb.tmpl,
                                                        brange, metric,
                                                        &specials)});
      note_sub(*cb.dom);
      continue;
    }
    // AInsideBMember: all of ca's parameters live inside one member of b.
    if (!rel.b_pin_in_range) continue;
    SymSeq b_pinned = pin_symseq(cb.tmpl, rel.b_pin);
    a_atoms.push_back({arange, same_t_value_pieces(ca.tmpl, b_pinned, arange,
                                                   metric, &specials)});
    if (!a_is_slice) fixed_dom_covered = true;
  }

  MetricValue sup = MetricValue::zero();

  // Foreign-index cells: generic t inside a pinned member, matched by the
  // classes of a subdivision living there.
  std::vector<std::uint64_t> joint_covered;
  {
    std::vector<std::uint64_t> done;
    for (const auto& fa : f_atoms) {
      ValPieces v = fa.value;
      if (auto hv = h_gen_at(fa.a_pin)) {
        ValPiece cap;
        cap.nr = IndexRange{0, std::nullopt};
        if (hv->is_zero()) {
          cap.kind = ValPiece::Kind::Agree;
        } else {
          cap.kind = ValPiece::Kind::At;
          cap.pos = AffExpr::constant(hv->denom() - 1);
        }
        v = combine_min(v, ValPieces{cap});
      }
      sup = MetricValue::max(sup, maximize_pieces(v));
      bool seen = false;
      for (auto d : done) seen = seen || d == fa.a_pin;
      if (seen) continue;
      done.push_back(fa.a_pin);
      if (a_is_slice &&
          covers_interval(subs, ca.dom->scheme.interval(fa.a_pin)))
        joint_covered.push_back(fa.a_pin);
    }
  }

  // Common refinement of the a-indexed atoms; members matched by several B
  // classes take the pointwise minimum of their comparisons.
  {
    std::vector<std::uint64_t> cuts;  // starts of atomic subranges
    cuts.push_back(arange.lo);
    auto note_cut = [&](std::uint64_t c) {
      if (c >= arange.lo && (!arange.hi || c <= *arange.hi))
        cuts.push_back(c);
    };
    for (const auto& at : a_atoms) {
      note_cut(at.span.lo);
      if (at.span.hi && *at.span.hi != UINT64_MAX) note_cut(*at.span.hi + 1);
    }
    for (std::uint64_t m : joint_covered) {
      note_cut(m);
      if (m != UINT64_MAX) note_cut(m + 1);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      IndexRange cell;
      cell.lo = cuts[i];
      if (i + 1 < cuts.size())
        cell.hi = cuts[i + 1] - 1;
      else
        cell.hi = arange.hi;
      if (auto clipped = cell.intersect(arange))
        cell = *clipped;
      else
        continue;
      std::optional<ValPieces> v;
      for (const auto& at : a_atoms) {
        if (!at.span.intersect(cell)) continue;
        ValPieces part = restrict_pieces(at.value, cell);
        v = v ? combine_min(*v, part) : part;
      }
      bool jointly = false;
      for (std::uint64_t m : joint_covered)
        jointly = jointly || (cell.lo == m && cell.hi && *cell.hi == m);
      if (v && jointly)
        throw ill_formed_error(
            "unsupported: member matched both directly and via subdivision");
      if (!v && jointly) continue;  // handled through foreign atoms
      if (!v) {
        // uncovered cell: no same-parameter match anywhere in B
        if (!a_is_slice && fixed_dom_covered) continue;
        if (h_gen) {
          sup = MetricValue::max(sup,
                                 maximize_pieces(restrict_pieces(*h_gen, cell)));
        } else if (b_has_param_class) {
          sup = MetricValue::max(sup, MetricValue::exact(Int(1)));
        } else {
          throw ill_formed_error("opposing representation denotes no points");
        }
        continue;
      }
      if (h_gen) *v = combine_min(*v, restrict_pieces(*h_gen, cell));
      sup = MetricValue::max(sup, maximize_pieces(*v));
    }
  }

  // Special parameter values, evaluated concretely.
  std::vector<Rat> done;
  for (const Rat& s : specials) {
    bool seen = false;
    for (const Rat& d : done) seen = seen || d == s;
    if (seen) continue;
    done.push_back(s);
    auto member = ca.member_with_param(s);
    if (!member) continue;
    sup = MetricValue::max(sup, dist_point_to_classes(*member, bcls, metric));
  }
  return sup;
}

inline MetricValue directed_sup(const std::vector<ClassDesc>& acls,
                                const std::vector<ClassDesc>& bcls,
                                Metric metric) {
  MetricValue sup = MetricValue::zero();
  for (const auto& ca : acls) {
    // identical class on the B side contributes zero
    bool identical = false;
    for (const auto& cb : bcls) {
      if (ca.is_point() != cb.is_point()) continue;
      if (ca.is_point() ? (*ca.point == *cb.point)
                        : (ca.dom == cb.dom && ca.tmpl == cb.tmpl)) {
        identical = true;
        break;
      }
    }
    if (identical) continue;
    sup = MetricValue::max(sup, directed_sup_class(ca, bcls, metric));
  }
  return sup;
}

inline MetricValue clamp_to_depth(MetricValue v, const Int& depth) {
  if (v.is_exact() && v.denom() >= depth) return MetricValue::below(depth);
  return v;
}

}  // namespace detail

// Exact infimum of the point-to-class distance. By the Param-at-zero
// invariant, parameters different from x(0) put class points at distance
// exactly 1, so only the parameter x(0) needs a template comparison.
inline MetricValue dist_point_to_class(const TailSeq& x, const ClassDesc& c,
                                       Metric metric) {
  if (c.is_point()) return point_dist(x, *c.point, metric);
  auto [n, ok] = c.dom->member_index(x.at(0));
  if (!ok) return MetricValue::exact(Int(1));
  TailSeq y = c.tmpl.substitute(x.at(0), n);
  return MetricValue::min(point_dist(x, y, metric), MetricValue::exact(Int(1)));
}

namespace detail {
inline MetricValue dist_point_to_classes(const TailSeq& x,
                                         const std::vector<ClassDesc>& cls,
                                         Metric metric) {
  MetricValue best = MetricValue::exact(Int(1));
  for (const auto& c : cls) {
    best = MetricValue::min(best, dist_point_to_class(x, c, metric));
    if (best.is_zero()) break;
  }
  return best;
}
}  // namespace detail

// Well-formedness audit shared by the public operations.
inline void validate_rep(const ClosedSetRep& rep) {
  auto cls = classes_of(rep);
  if (cls.empty()) throw ill_formed_error("representation denotes no points");
  for (const auto& c : cls) {
    if (c.is_point()) {
      if (!in_space_X(*c.point))
        throw ill_formed_error("represented point lies in F");
      continue;
    }
    if (c.tmpl.runs.empty() || !c.tmpl.runs.front().sym.is_param)
      throw ill_formed_error(
          "class template must carry the parameter at index 0");
    if (c.dom->member(Rat(0)))
      throw ill_formed_error("parameter domain may not contain 0");
    IndexRange nr = c.dom->kind == Dom::Kind::SchemeSlice ? c.dom->range
                                                          : IndexRange{0, 0};
    // represented points must lie in X (throws otherwise)
    detail::dist_to_f_profile(c.tmpl, nr);
  }
}

// d(x, A) at resolution depth D: exact when the value exceeds 1/D.
inline MetricValue point_set_dist(const TailSeq& x, const ClosedSetRep& a,
                                  const Int& depth,
                                  Metric metric = Metric::BaireD) {
  if (depth < 1) throw ill_formed_error("depth must be >= 1");
  validate_rep(a);
  MetricValue v = detail::dist_point_to_classes(x, classes_of(a), metric);
  return detail::clamp_to_depth(v, depth);
}

// One-sided Hausdorff distance sup_{a in A} d(a, B) at resolution depth D.
inline MetricValue directed_hausdorff(const ClosedSetRep& a,
                                      const ClosedSetRep& b, const Int& depth,
                                      Metric metric = Metric::BaireD) {
  if (depth < 1) throw ill_formed_error("depth must be >= 1");
  validate_rep(a);
  validate_rep(b);
  return detail::clamp_to_depth(
      detail::directed_sup(classes_of(a), classes_of(b), metric), depth);
}

// Hausdorff distance at resolution depth D: exact when above 1/D.
inline MetricValue hausdorff_dist(const ClosedSetRep& a, const ClosedSetRep& b,
                                  const Int& depth,
                                  Metric metric = Metric::BaireD) {
  if (depth < 1) throw ill_formed_error("depth must be >= 1");
  validate_rep(a);
  validate_rep(b);
  auto acls = classes_of(a);
  auto bcls = classes_of(b);
  MetricValue ab = detail::directed_sup(acls, bcls, metric);
  MetricValue ba = detail::directed_sup(bcls, acls, metric);
  return detail::clamp_to_depth(MetricValue::max(ab, ba), depth);
}

// Open ball in the hyperspace: { A : H(A, center) < 1/radius_den }.
struct HyperBall {
  ClosedSetRep center;
  Int radius_den;  // radius 1/k, k >= 1
  Rat radius() const { return Rat(1, radius_den); }
};

// A in B(center, 1/k)? Decides whenever the computed distance settles the
// strict comparison at depth D; callers keep radii above resolution.
inline bool hull_member(const ClosedSetRep& a, const HyperBall& ball,
                        const Int& depth, Metric metric = Metric::BaireD) {
  if (ball.radius_den < 1) throw ill_formed_error("ball radius must be 1/k");
  MetricValue h = hausdorff_dist(a, ball.center, depth, metric);
  auto dec = h.less_than(ball.radius());
  if (!dec)
    throw resolution_error("hull membership undecidable at depth " +
                           depth.str());
  return *dec;
}

// Sufficient ball-inclusion test: nominal radii ordered and the inner
// center inside the outer ball. Sound because H inherits the ultrametric
// law from d (balls recenter at any member).
inline bool ball_subset(const HyperBall& inner, const HyperBall& outer,
                        const Int& depth, Metric metric = Metric::BaireD) {
  if (inner.radius_den >= depth || outer.radius_den >= depth)
    throw resolution_error("ball radii must exceed 1/depth");
  if (inner.radius_den < outer.radius_den) return false;  // radius grew
  MetricValue h = hausdorff_dist(inner.center, outer.center, depth, metric);
  auto dec = h.less_than(outer.radius());
  if (!dec)
    throw resolution_error("ball inclusion undecidable at depth " +
                           depth.str());
  return *dec;
}

// Uniform 1/D-discreteness across classes (sufficient for closedness), or
// an explicit closure marker from a witness builder.
inline bool is_closed_check(const ClosedSetRep& a, const Int& depth,
                            Metric metric = Metric::BaireD) {
  if (a.closure_marker()) return true;
  validate_rep(a);
  if (std::holds_alternative<repr::FinitePoints>(a.node())) return true;
  auto cls = classes_of(a);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    for (std::size_t j = i + 1; j < cls.size(); ++j) {
      const ClassDesc& c1 = cls[i];
      const ClassDesc& c2 = cls[j];
      std::optional<MetricValue> mn;
      bool inf_zero = false;
      auto consider = [&](const std::optional<MetricValue>& v) {
        if (!v) {
          inf_zero = true;
          return;
        }
        if (v->is_zero()) return;  // same point, not a distinct pair
        mn = mn ? MetricValue::min(*mn, *v) : *v;
      };
      std::vector<Rat> specials;
      if (c1.is_point() && c2.is_point()) {
        consider(point_dist(*c1.point, *c2.point, metric));
      } else if (c1.is_point() || c2.is_point()) {
        const TailSeq& x = c1.is_point() ? *c1.point : *c2.point;
        const ClassDesc& pc = c1.is_point() ? c2 : c1;
        consider(dist_point_to_class(x, pc, metric));
      } else {
        detail::DomRelation rel = detail::relate_doms(*c1.dom, *c2.dom);
        using K = detail::DomRelation::Kind;
        if (rel.kind == K::Disjoint) continue;  // params differ: distance 1
        IndexRange nr{0, 0};
        SymSeq t1 = c1.tmpl, t2 = c2.tmpl;
        if (rel.kind == K::Equal) {
          nr = c1.dom->kind == Dom::Kind::SchemeSlice ? c1.dom->range
                                                      : IndexRange{0, 0};
        } else if (rel.kind == K::SharedScheme) {
          nr = rel.shared;
        } else if (rel.kind == K::BInsideAMember) {
          t1 = detail::pin_symseq(t1, rel.a_pin);
          nr = c2.dom->kind == Dom::Kind::SchemeSlice ? c2.dom->range
                                                      : IndexRange{0, 0};
        } else {
          if (!rel.b_pin_in_range) continue;
          t2 = detail::pin_symseq(t2, rel.b_pin);
          nr = c1.dom->kind == Dom::Kind::SchemeSlice ? c1.dom->range
                                                      : IndexRange{0, 0};
        }
        auto pieces =
            detail::same_t_value_pieces(t1, t2, nr, metric, &specials);
        detail::ValPieces strict;
        for (auto& p : pieces)
          if (p.kind != detail::ValPiece::Kind::Agree) strict.push_back(p);
        if (!strict.empty()) consider(detail::minimize_pieces(strict));
        for (const Rat& s : specials) {
          auto m1 = c1.member_with_param(s);
          auto m2 = c2.member_with_param(s);
          if (m1 && m2 && !(*m1 == *m2))
            consider(point_dist(*m1, *m2, metric));
        }
      }
      if (inf_zero) return false;  // distances between distinct points -> 0
      if (mn && mn->is_exact() && mn->denom() > depth) return false;
      if (mn && mn->is_below()) return false;
    }
  }
  return true;
}

}  // namespace hypergame
