#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypergame/rational.hpp"

namespace hypergame {

// Closed bounded interval [lo, hi] with rational endpoints, lo < hi.
struct Interval {
  Rat lo, hi;
  bool operator==(const Interval&) const = default;
  bool contains(const Rat& q) const { return lo <= q && q <= hi; }
  Rat width() const { return hi - lo; }
  Rat midpoint() const { return (lo + hi) / 2; }
};

// Generator of a countable pairwise-disjoint interval family.
//
//   Base:     I_n = [3n+1, 3n+2], n < omega (subsets of R minus {0})
//   Quarter:  children of [a,b]: child_m = [a + w/4^{m+1}, a + 2w/4^{m+1}],
//             pairwise disjoint closed intervals inside the open (a,b),
//             accumulating at a as m grows.
struct Scheme {
  enum class Kind { Base, Quarter };
  Kind kind = Kind::Base;
  Interval parent{Rat(0), Rat(1)};  // meaningful for Quarter only

  bool operator==(const Scheme&) const = default;

  Interval interval(std::uint64_t n) const {
    if (kind == Kind::Base) {
      Rat lo = Rat(3) * n + 1;
      return Interval{lo, lo + 1};
    }
    Rat w = parent.width();
    Rat q = Rat(1, pow4(n + 1));
    return Interval{parent.lo + w * q, parent.lo + 2 * w * q};
  }

  // Index of the member interval containing q, if any.
  std::optional<std::uint64_t> locate(const Rat& q) const {
    if (kind == Kind::Base) {
      if (q < 1) return std::nullopt;
      Int n = numerator(Rat(q - 1) / 3) / denominator(Rat(q - 1) / 3);
      // n = floor((q-1)/3); membership needs q - (3n+1) in [0,1]
      for (Int cand = n - 1; cand <= n + 1; ++cand) {
        if (cand < 0) continue;
        auto c = static_cast<std::uint64_t>(cand);
        if (interval(c).contains(q)) return c;
      }
      return std::nullopt;
    }
    if (!(parent.lo < q && q < parent.hi)) return std::nullopt;
    // need 4^{m+1} in [w/(q-a) , 2w/(q-a)]; estimate via bit lengths
    Rat ratio = parent.width() / (q - parent.lo);  // >= 1 wanted
    if (ratio < 1) return std::nullopt;
    std::int64_t bits = static_cast<std::int64_t>(bit_length(numerator(ratio))) -
                        static_cast<std::int64_t>(bit_length(denominator(ratio)));
    std::int64_t guess = bits / 2;  // 4^{m+1} ~ 2^{bits}
    for (std::int64_t e = std::max<std::int64_t>(guess - 2, 1); e <= guess + 2; ++e) {
      if (interval(static_cast<std::uint64_t>(e - 1)).contains(q))
        return static_cast<std::uint64_t>(e - 1);
    }
    return std::nullopt;
  }

  // Smallest index n such that interval(n) lies entirely left of hi resp.
  // inside [lo,hi]: helper for range intersections. Returns the index range
  // [first, last] (inclusive, last may be empty) of members intersecting
  // [lo,hi]; second=false if no member intersects.
  std::pair<std::pair<std::uint64_t, std::optional<std::uint64_t>>, bool>
  indices_intersecting(const Rat& lo, const Rat& hi) const {
    if (hi < lo) return {{0, 0}, false};
    if (kind == Kind::Base) {
      // member n spans [3n+1, 3n+2]
      if (hi < 1) return {{0, 0}, false};
      Int nmax = numerator(Rat(hi - 1) / 3) / denominator(Rat(hi - 1) / 3);
      while (nmax >= 0 && interval(static_cast<std::uint64_t>(nmax)).lo > hi) --nmax;
      if (nmax < 0) return {{0, 0}, false};
      Int nmin = 0;
      if (lo > 2) {
        nmin = numerator(Rat(lo - 2) / 3) / denominator(Rat(lo - 2) / 3);
        if (nmin < 0) nmin = 0;
        while (interval(static_cast<std::uint64_t>(nmin)).hi < lo) ++nmin;
      }
      if (nmin > nmax) return {{0, 0}, false};
      return {{static_cast<std::uint64_t>(nmin),
               static_cast<std::uint64_t>(nmax)}, true};
    }
    // Quarter: members shrink toward parent.lo. Member m intersects [lo,hi]
    // iff child_m.lo <= hi and child_m.hi >= lo.
    Rat a = parent.lo, w = parent.width();
    if (hi <= a || lo >= parent.hi) return {{0, 0}, false};
    // first index: smallest m with child_m.lo <= hi, i.e. 4^{m+1} >= w/(hi-a)
    std::uint64_t first = 0;
    if (hi < a + w / 4) {  // child_0.lo = a + w/4
      Rat ratio = w / (hi - a);
      std::int64_t bits = static_cast<std::int64_t>(bit_length(numerator(ratio))) -
                          static_cast<std::int64_t>(bit_length(denominator(ratio)));
      std::int64_t guess = std::max<std::int64_t>(bits / 2, 1);
      std::int64_t e = std::max<std::int64_t>(guess - 2, 1);
      while (interval(static_cast<std::uint64_t>(e - 1)).lo > hi) ++e;
      while (e >= 2 && interval(static_cast<std::uint64_t>(e - 2)).lo <= hi) --e;
      first = static_cast<std::uint64_t>(e - 1);
    }
    // last index: if lo <= a every tail member intersects (they accumulate
    // at a from above, all with child.hi > a >= lo ... since child.hi > a).
    if (lo <= a) return {{first, std::nullopt}, true};
    // child_m.hi = a + 2w/4^{m+1} >= lo  iff  4^{m+1} <= 2w/(lo-a)
    Rat ratio = 2 * w / (lo - a);
    if (ratio < 4) return {{0, 0}, false};
    std::int64_t bits = static_cast<std::int64_t>(bit_length(numerator(ratio))) -
                        static_cast<std::int64_t>(bit_length(denominator(ratio)));
    std::int64_t guess = std::max<std::int64_t>(bits / 2, 1);
    std::int64_t e = guess + 2;
    while (e >= 2 && pow4(static_cast<std::uint64_t>(e)) > ratio) --e;
    if (e < 1) return {{0, 0}, false};
    auto last = static_cast<std::uint64_t>(e - 1);
    if (last < first) return {{0, 0}, false};
    return {{first, last}, true};
  }

  std::string str() const {
    if (kind == Kind::Base) return "base";
    return "quarter[" + format_rational(parent.lo) + "," +
           format_rational(parent.hi) + "]";
  }
};

// Range of scheme indices [lo, hi]; hi empty means unbounded.
struct IndexRange {
  std::uint64_t lo = 0;
  std::optional<std::uint64_t> hi;
  bool operator==(const IndexRange&) const = default;
  bool contains(std::uint64_t n) const {
    return n >= lo && (!hi || n <= *hi);
  }
  bool empty() const { return hi && *hi < lo; }
  std::optional<IndexRange> intersect(const IndexRange& o) const {
    IndexRange r;
    r.lo = std::max(lo, o.lo);
    if (hi && o.hi)
      r.hi = std::min(*hi, *o.hi);
    else
      r.hi = hi ? hi : o.hi;
    if (r.empty()) return std::nullopt;
    return r;
  }
};

// Admissible parameter values of one class of a set representation.
//
//   Whole:       a single closed interval
//   SchemeSlice: union of scheme members with index in a range (the class is
//                then usually indexed by the same n as its templates)
//   Gap:         scheme parent minus all scheme members (parameters that a
//                refinement left behind)
struct Dom {
  enum class Kind { Whole, SchemeSlice, Gap };
  Kind kind = Kind::Whole;
  Interval whole{Rat(0), Rat(1)};
  Scheme scheme;
  IndexRange range;

  static Dom interval(Interval iv) {
    Dom d;
    d.kind = Kind::Whole;
    d.whole = std::move(iv);
    return d;
  }
  static Dom slice(Scheme s, IndexRange r) {
    Dom d;
    d.kind = Kind::SchemeSlice;
    d.scheme = std::move(s);
    d.range = r;
    return d;
  }
  static Dom gap(Scheme s) {
    if (s.kind != Scheme::Kind::Quarter)
      throw internal_error("gap domain requires a quarter scheme");
    Dom d;
    d.kind = Kind::Gap;
    d.scheme = std::move(s);
    return d;
  }

  bool operator==(const Dom&) const = default;

  // Membership; for SchemeSlice also yields the member index.
  bool member(const Rat& q) const { return member_index(q).second; }

  std::pair<std::uint64_t, bool> member_index(const Rat& q) const {
    switch (kind) {
      case Kind::Whole:
        return {0, whole.contains(q)};
      case Kind::SchemeSlice: {
        auto n = scheme.locate(q);
        if (n && range.contains(*n)) return {*n, true};
        return {0, false};
      }
      case Kind::Gap: {
        if (!scheme.parent.contains(q)) return {0, false};
        return {0, !scheme.locate(q).has_value()};
      }
    }
    return {0, false};
  }

  // Interval hull (smallest closed interval containing the domain).
  Interval hull() const {
    switch (kind) {
      case Kind::Whole:
        return whole;
      case Kind::SchemeSlice: {
        if (scheme.kind == Scheme::Kind::Base) {
          Interval first = scheme.interval(range.lo);
          if (!range.hi) {
            // unbounded; callers must not rely on hi. Use lo..lo and flag
            // unboundedness separately via range.
            return Interval{first.lo, first.lo};  // degenerate marker
          }
          return Interval{first.lo, scheme.interval(*range.hi).hi};
        }
        // quarter members shrink toward parent.lo
        Interval first = scheme.interval(range.lo);
        if (!range.hi) return Interval{scheme.parent.lo, first.hi};
        return Interval{scheme.interval(*range.hi).lo, first.hi};
      }
      case Kind::Gap:
        return scheme.parent;
    }
    return Interval{Rat(0), Rat(0)};
  }

  bool hull_bounded() const {
    return !(kind == Kind::SchemeSlice &&
             scheme.kind == Scheme::Kind::Base && !range.hi);
  }

  std::string str() const {
    switch (kind) {
      case Kind::Whole:
        return "[" + format_rational(whole.lo) + "," +
               format_rational(whole.hi) + "]";
      case Kind::SchemeSlice:
        return scheme.str() + ":n=" + std::to_string(range.lo) +
               (range.hi ? ".." + std::to_string(*range.hi) : "..");
      case Kind::Gap:
        return scheme.str() + ":gap";
    }
    return "?";
  }
};

}  // namespace hypergame
