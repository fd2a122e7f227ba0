#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hypergame/intervals.hpp"
#include "hypergame/rational.hpp"
#include "hypergame/sym_seq.hpp"
#include "hypergame/tail_seq.hpp"

namespace hypergame {

// Keep coordinates below `cut`, then the constant c.
inline TailSeq graft_point(const TailSeq& p, std::uint64_t cut, const Rat& c) {
  std::vector<TailSeq::Run> rs;
  std::uint64_t pos = 0;
  for (const auto& r : p.runs()) {
    if (pos >= cut) break;
    std::uint64_t take = std::min<std::uint64_t>(r.count, cut - pos);
    rs.push_back({take, r.value});
    pos += take;
  }
  if (pos < cut) rs.push_back({cut - pos, p.tail()});
  return TailSeq::from_runs(std::move(rs), c);
}

// One class of a set representation: either a single concrete point, or a
// parametrized family { template(t) : t in dom }, where the template has the
// parameter at index 0. Rule classes additionally range over the scheme
// index n of their domain, with run lengths affine in n.
struct ClassDesc {
  std::string id;
  std::optional<TailSeq> point;
  std::optional<Dom> dom;
  SymSeq tmpl;

  bool is_point() const { return point.has_value(); }

  IndexRange nrange() const {
    if (dom && dom->kind == Dom::Kind::SchemeSlice) return dom->range;
    return IndexRange{0, 0};
  }

  // A concrete member of the class (canonical representative).
  TailSeq representative() const {
    if (point) return *point;
    switch (dom->kind) {
      case Dom::Kind::Whole:
        return tmpl.substitute(dom->whole.midpoint(), 0);
      case Dom::Kind::SchemeSlice:
        return tmpl.substitute(dom->scheme.interval(dom->range.lo).midpoint(),
                               dom->range.lo);
      case Dom::Kind::Gap: {
        const Interval& par = dom->scheme.parent;
        Rat shoulder = (par.lo + par.width() / 2 + par.hi) / 2;
        return tmpl.substitute(shoulder, 0);
      }
    }
    throw internal_error("representative: bad domain");
  }

  // Member with the given parameter, when the parameter lies in the domain.
  std::optional<TailSeq> member_with_param(const Rat& t) const {
    if (point) return (point->at(0) == t) ? point : std::optional<TailSeq>{};
    auto [n, ok] = dom->member_index(t);
    if (!ok) return std::nullopt;
    return tmpl.substitute(t, n);
  }
};

class ClosedSetRep;

namespace repr {

struct FinitePoints {
  std::vector<TailSeq> points;
};

// Chain-refined parametrized family. Stage j subdivides one interval of the
// previous stage's family into quarter-scheme children; parameters left in
// the subdivided interval but outside every child keep their old template
// (the "gap" class). Templates are zero-run shaped: (t, 0^E, t, t, ...),
// with E = rule_base + n across a stage's children.
struct ParamFamily {
  struct Stage {
    std::uint64_t refined_index = 0;
    Int rule_base{0};
    // derived on construction
    Interval refined_interval{Rat(0), Rat(1)};
    Scheme child_scheme;
  };
  Int base_rule{1};
  std::vector<Stage> stages;
};

struct Graft {
  std::shared_ptr<const ClosedSetRep> inner;
  std::uint64_t cut = 1;
  Rat tail{1};
};

struct Union {
  std::vector<ClosedSetRep> parts;
};

}  // namespace repr

// Symbolic representation of a nonempty closed subset of X. Immutable;
// cheap to copy.
class ClosedSetRep {
 public:
  using Node =
      std::variant<repr::FinitePoints, repr::ParamFamily, repr::Graft, repr::Union>;

  static ClosedSetRep finite_points(std::vector<TailSeq> pts) {
    if (pts.empty())
      throw ill_formed_error("finite set representation must be nonempty");
    std::vector<TailSeq> uniq;
    for (auto& p : pts) {
      if (!in_space_X(p))
        throw ill_formed_error("finite set contains a point of F, not in X");
      bool dup = false;
      for (const auto& q : uniq) dup = dup || q == p;
      if (!dup) uniq.push_back(std::move(p));
    }
    return ClosedSetRep(repr::FinitePoints{std::move(uniq)});
  }

  // Full base family: classes over every base interval, zero-run length
  // base_rule + n.
  static ClosedSetRep base_family(Int base_rule) {
    if (base_rule < 0) throw ill_formed_error("family rule must be >= 0");
    repr::ParamFamily f;
    f.base_rule = std::move(base_rule);
    return ClosedSetRep(std::move(f));
  }

  // Refine: subdivide the interval at `refined_index` of the current
  // frontier stage; children get zero-run length rule_base + n.
  ClosedSetRep refine(std::uint64_t refined_index, Int rule_base) const {
    const auto* fam = std::get_if<repr::ParamFamily>(node_.get());
    if (!fam)
      throw ill_formed_error("refine applies to family representations only");
    if (rule_base < 0) throw ill_formed_error("family rule must be >= 0");
    repr::ParamFamily f = *fam;
    repr::ParamFamily::Stage st;
    st.refined_index = refined_index;
    st.rule_base = std::move(rule_base);
    if (f.stages.empty()) {
      Scheme base;
      st.refined_interval = base.interval(refined_index);
    } else {
      st.refined_interval =
          f.stages.back().child_scheme.interval(refined_index);
    }
    st.child_scheme =
        Scheme{Scheme::Kind::Quarter, st.refined_interval};
    f.stages.push_back(std::move(st));
    return ClosedSetRep(std::move(f));
  }

  static ClosedSetRep graft_of(ClosedSetRep inner, std::uint64_t cut, Rat tail) {
    if (cut < 1) throw ill_formed_error("graft cut index must be >= 1");
    if (tail == 0)
      throw ill_formed_error(
          "graft tail 0 rejected: could produce points of F");
    repr::Graft g;
    g.inner = std::make_shared<const ClosedSetRep>(std::move(inner));
    g.cut = cut;
    g.tail = std::move(tail);
    return ClosedSetRep(std::move(g));
  }

  static ClosedSetRep union_of(std::vector<ClosedSetRep> parts) {
    if (parts.empty())
      throw ill_formed_error("union representation must be nonempty");
    return ClosedSetRep(repr::Union{std::move(parts)});
  }

  const Node& node() const { return *node_; }

  bool closure_marker() const { return closure_marker_; }
  ClosedSetRep with_closure_marker() const {
    ClosedSetRep r = *this;
    r.closure_marker_ = true;
    return r;
  }

  bool operator==(const ClosedSetRep& o) const {
    return structurally_equal(*this, o);
  }

  static bool structurally_equal(const ClosedSetRep& a, const ClosedSetRep& b);

 private:
  explicit ClosedSetRep(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
  bool closure_marker_ = false;
};

inline bool ClosedSetRep::structurally_equal(const ClosedSetRep& a,
                                             const ClosedSetRep& b) {
  const Node& na = a.node();
  const Node& nb = b.node();
  if (na.index() != nb.index()) return false;
  if (auto* fa = std::get_if<repr::FinitePoints>(&na)) {
    auto* fb = std::get_if<repr::FinitePoints>(&nb);
    return fa->points == fb->points;
  }
  if (auto* pa = std::get_if<repr::ParamFamily>(&na)) {
    auto* pb = std::get_if<repr::ParamFamily>(&nb);
    if (pa->base_rule != pb->base_rule) return false;
    if (pa->stages.size() != pb->stages.size()) return false;
    for (std::size_t i = 0; i < pa->stages.size(); ++i) {
      if (pa->stages[i].refined_index != pb->stages[i].refined_index ||
          pa->stages[i].rule_base != pb->stages[i].rule_base)
        return false;
    }
    return true;
  }
  if (auto* ga = std::get_if<repr::Graft>(&na)) {
    auto* gb = std::get_if<repr::Graft>(&nb);
    return ga->cut == gb->cut && ga->tail == gb->tail &&
           structurally_equal(*ga->inner, *gb->inner);
  }
  auto* ua = std::get_if<repr::Union>(&na);
  auto* ub = std::get_if<repr::Union>(&nb);
  if (ua->parts.size() != ub->parts.size()) return false;
  for (std::size_t i = 0; i < ua->parts.size(); ++i)
    if (!structurally_equal(ua->parts[i], ub->parts[i])) return false;
  return true;
}

namespace detail {

inline void family_classes(const repr::ParamFamily& f,
                           std::vector<ClassDesc>& out) {
  auto push_slices = [&](const Scheme& scheme, const Int& rule,
                         std::optional<std::uint64_t> excluded,
                         const std::string& idbase) {
    SymSeq tmpl = SymSeq::zero_run_family(rule);
    auto push = [&](IndexRange r) {
      if (r.empty()) return;
      ClassDesc d;
      d.id = idbase + ":n" + std::to_string(r.lo) +
             (r.hi ? ".." + std::to_string(*r.hi) : "..");
      d.dom = Dom::slice(scheme, r);
      d.tmpl = tmpl;
      out.push_back(std::move(d));
    };
    if (!excluded) {
      push(IndexRange{0, std::nullopt});
    } else {
      if (*excluded > 0) push(IndexRange{0, *excluded - 1});
      push(IndexRange{*excluded + 1, std::nullopt});
    }
  };

  Scheme base;
  push_slices(base, f.base_rule,
              f.stages.empty()
                  ? std::nullopt
                  : std::optional<std::uint64_t>(f.stages[0].refined_index),
              "base");
  for (std::size_t j = 0; j < f.stages.size(); ++j) {
    const auto& st = f.stages[j];
    // gap class: parameters of the refined interval not in any child keep
    // the template they had before the subdivision
    Int gap_len = (j == 0 ? f.base_rule : f.stages[j - 1].rule_base) +
                  Int(st.refined_index);
    ClassDesc gap;
    gap.id = "st" + std::to_string(j) + ":gap";
    gap.dom = Dom::gap(st.child_scheme);
    gap.tmpl = SymSeq::zero_run_fixed(gap_len);
    out.push_back(std::move(gap));
    push_slices(st.child_scheme, st.rule_base,
                j + 1 < f.stages.size()
                    ? std::optional<std::uint64_t>(f.stages[j + 1].refined_index)
                    : std::nullopt,
                "st" + std::to_string(j));
  }
}

}  // namespace detail

// Flat class decomposition of a representation. Every represented point
// belongs to at least one class; classes of one ParamFamily partition it.
inline std::vector<ClassDesc> classes_of(const ClosedSetRep& rep) {
  std::vector<ClassDesc> out;
  const auto& n = rep.node();
  if (auto* fp = std::get_if<repr::FinitePoints>(&n)) {
    for (std::size_t i = 0; i < fp->points.size(); ++i) {
      ClassDesc d;
      d.id = "pt" + std::to_string(i);
      d.point = fp->points[i];
      out.push_back(std::move(d));
    }
    return out;
  }
  if (auto* fam = std::get_if<repr::ParamFamily>(&n)) {
    detail::family_classes(*fam, out);
    return out;
  }
  if (auto* g = std::get_if<repr::Graft>(&n)) {
    std::vector<ClassDesc> inner = classes_of(*g->inner);
    for (auto& d : inner) {
      if (d.is_point()) {
        ClassDesc nd;
        nd.id = "g/" + d.id;
        nd.point = graft_point(*d.point, g->cut, g->tail);
        out.push_back(std::move(nd));
        continue;
      }
      auto pieces = graft_template(d.tmpl, d.nrange(), g->cut, g->tail);
      if (d.dom->kind != Dom::Kind::SchemeSlice) {
        // fixed-template class; single piece expected
        ClassDesc nd;
        nd.id = "g/" + d.id;
        nd.dom = d.dom;
        nd.tmpl = normalize_symseq(pieces.front().second, IndexRange{0, 0});
        out.push_back(std::move(nd));
        continue;
      }
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        ClassDesc nd;
        nd.id = "g/" + d.id + (pieces.size() > 1 ? "#" + std::to_string(k) : "");
        Dom sub = *d.dom;
        sub.range = pieces[k].first;
        nd.dom = sub;
        nd.tmpl = normalize_symseq(pieces[k].second, pieces[k].first);
        out.push_back(std::move(nd));
      }
    }
    return out;
  }
  auto* u = std::get_if<repr::Union>(&n);
  for (std::size_t i = 0; i < u->parts.size(); ++i) {
    for (auto& d : classes_of(u->parts[i])) {
      d.id = "u" + std::to_string(i) + "/" + d.id;
      out.push_back(std::move(d));
    }
  }
  return out;
}

// Public operation from the spec's contract: graft(A, L, c) represents
// { a restricted to indices < L, then constant c : a in A }.
inline ClosedSetRep graft(const ClosedSetRep& a, std::uint64_t cut, Rat tail) {
  return ClosedSetRep::graft_of(a, cut, std::move(tail));
}

// Depth-D view of the classes: rule classes are expanded while their
// patterns are distinguishable below depth D (zero-run length < D) and
// merged into a single tail class beyond.
struct EnumClass {
  std::string id;
  std::optional<TailSeq> point;
  std::optional<Dom> dom;
  SymSeq truncated_tmpl;  // coordinates below D only
  bool merged = false;
};

inline std::vector<EnumClass> enumerate_classes(const ClosedSetRep& rep,
                                                const Int& depth) {
  if (depth < 1) throw ill_formed_error("enumerate_classes: depth must be >= 1");
  std::vector<EnumClass> out;
  for (const ClassDesc& d : classes_of(rep)) {
    auto truncate = [&](const SymSeq& t, std::uint64_t n) {
      // keep indices < depth
      SymSeq r;
      Int pos = 0;
      for (const auto& run : t.runs) {
        Int len = run.len.eval(n);
        if (pos + len > depth) len = Int(depth) - pos;
        if (len > 0) r.runs.push_back({AffExpr::constant(len), run.sym});
        pos += len;
        if (pos >= depth) break;
      }
      if (pos < depth)
        r.runs.push_back({AffExpr::constant(Int(depth) - pos), t.tail});
      r.tail = t.tail;
      return r;
    };
    if (d.is_point()) {
      out.push_back({d.id, d.point, std::nullopt,
                     truncate(SymSeq::from_point(*d.point), 0), false});
      continue;
    }
    if (!d.tmpl.depends_on_n()) {
      out.push_back({d.id, std::nullopt, d.dom, truncate(d.tmpl, 0), false});
      continue;
    }
    // zero-run rule class: distinguishable below D while rule_base + n < D
    const IndexRange r = d.nrange();
    // find the zero-run expression (single non-constant run by construction)
    AffExpr zr = AffExpr::constant(Int(0));
    for (const auto& run : d.tmpl.runs)
      if (!run.len.is_constant()) zr = run.len;
    std::uint64_t n = r.lo;
    while ((!r.hi || n <= *r.hi) && zr.eval(n) < depth) {
      EnumClass e;
      e.id = d.id + "@" + std::to_string(n);
      Dom sub = *d.dom;
      sub.range = IndexRange{n, n};
      e.dom = sub;
      e.truncated_tmpl = truncate(d.tmpl, n);
      out.push_back(std::move(e));
      ++n;
    }
    if (!r.hi || n <= *r.hi) {
      EnumClass e;
      e.id = d.id + "@" + std::to_string(n) + "..";
      Dom sub = *d.dom;
      sub.range = IndexRange{n, r.hi};
      e.dom = sub;
      e.truncated_tmpl = truncate(d.tmpl, n);
      e.merged = true;
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace hypergame
