#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hypergame/rational.hpp"

namespace hypergame {

// An eventually-constant real sequence: finitely many coordinates followed by
// a constant tail. Stored run-length encoded because game constructions
// produce zero-runs of length ~10^5; the canonical invariant (final run value
// differs from the tail, runs nonempty, adjacent runs differ) makes value
// equality equal representation equality.
class TailSeq {
 public:
  struct Run {
    std::uint64_t count;
    Rat value;
    bool operator==(const Run&) const = default;
  };

  TailSeq() : tail_(0) {}

  static TailSeq constant(Rat v) {
    TailSeq s;
    s.tail_ = std::move(v);
    return s;
  }

  static TailSeq from_prefix(const std::vector<Rat>& prefix, Rat tail) {
    std::vector<Run> runs;
    for (const Rat& v : prefix) {
      if (!runs.empty() && runs.back().value == v)
        ++runs.back().count;
      else
        runs.push_back({1, v});
    }
    return from_runs(std::move(runs), std::move(tail));
  }

  static TailSeq from_runs(std::vector<Run> runs, Rat tail) {
    TailSeq s;
    s.tail_ = std::move(tail);
    for (Run& r : runs) {
      if (r.count == 0) continue;
      if (!s.runs_.empty() && s.runs_.back().value == r.value)
        s.runs_.back().count += r.count;
      else
        s.runs_.push_back(std::move(r));
    }
    while (!s.runs_.empty() && s.runs_.back().value == s.tail_)
      s.runs_.pop_back();
    return s;
  }

  // Coordinate at index k; total.
  const Rat& at(std::uint64_t k) const {
    for (const Run& r : runs_) {
      if (k < r.count) return r.value;
      k -= r.count;
    }
    return tail_;
  }

  // Least L such that every coordinate at index >= L equals the tail.
  std::uint64_t prefix_length() const {
    std::uint64_t n = 0;
    for (const Run& r : runs_) n += r.count;
    return n;
  }

  const Rat& tail() const { return tail_; }
  const std::vector<Run>& runs() const { return runs_; }

  std::vector<Rat> explicit_prefix() const {
    std::vector<Rat> out;
    for (const Run& r : runs_)
      for (std::uint64_t i = 0; i < r.count; ++i) out.push_back(r.value);
    return out;
  }

  bool operator==(const TailSeq&) const = default;

 private:
  std::vector<Run> runs_;
  Rat tail_;
};

// A value of the Baire metric (or of a set distance derived from it).
// Nonzero distances are reciprocals of positive integers; at resolution
// depth D a computation may only report that a value lies in (0, 1/D].
class MetricValue {
 public:
  enum class Kind { Zero, Exact, Below };

  static MetricValue zero() { return MetricValue(Kind::Zero, 0); }
  static MetricValue exact(Int k) {
    if (k < 1) throw internal_error("MetricValue::exact needs k >= 1");
    return MetricValue(Kind::Exact, std::move(k));
  }
  static MetricValue below(Int depth) {
    if (depth < 1) throw internal_error("MetricValue::below needs D >= 1");
    return MetricValue(Kind::Below, std::move(depth));
  }

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_below() const { return kind_ == Kind::Below; }

  // Denominator of an Exact value 1/k, or the depth D of a Below value.
  const Int& denom() const { return k_; }

  // Largest value consistent with this result: 0, 1/k, or 1/D.
  Rat upper_bound() const {
    if (kind_ == Kind::Zero) return Rat(0);
    return Rat(1, k_);
  }

  // value < q, when decidable.
  std::optional<bool> less_than(const Rat& q) const {
    switch (kind_) {
      case Kind::Zero:
        return q > 0;
      case Kind::Exact:
        return Rat(1, k_) < q;
      case Kind::Below:
        if (Rat(1, k_) < q) return true;   // whole interval (0,1/D] below q
        if (q <= 0) return false;
        return std::nullopt;
    }
    return std::nullopt;
  }

  // value <= q, when decidable.
  std::optional<bool> leq(const Rat& q) const {
    switch (kind_) {
      case Kind::Zero:
        return q >= 0;
      case Kind::Exact:
        return Rat(1, k_) <= q;
      case Kind::Below:
        if (Rat(1, k_) <= q) return true;
        if (q <= 0) return false;
        return std::nullopt;
    }
    return std::nullopt;
  }

  bool operator==(const MetricValue&) const = default;

  static MetricValue max(const MetricValue& a, const MetricValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_exact() && b.is_exact())
      return a.k_ <= b.k_ ? a : b;  // 1/k larger for smaller k
    if (a.is_below() && b.is_below())
      return a.k_ <= b.k_ ? a : b;  // coarser bound wins
    const MetricValue& e = a.is_exact() ? a : b;
    const MetricValue& lo = a.is_exact() ? b : a;
    // exact 1/k vs value in (0,1/D]
    if (e.k_ < lo.k_) return e;  // 1/k > 1/D dominates
    return lo;                   // both at most 1/D, at least one positive
  }

  static MetricValue min(const MetricValue& a, const MetricValue& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    if (a.is_exact() && b.is_exact()) return a.k_ >= b.k_ ? a : b;
    if (a.is_below() && b.is_below()) return a.k_ >= b.k_ ? a : b;
    const MetricValue& e = a.is_exact() ? a : b;
    const MetricValue& lo = a.is_exact() ? b : a;
    if (e.k_ < lo.k_) return lo;  // 1/k > 1/D: the sub-resolution side wins
    return MetricValue::below(e.k_);  // min lands somewhere in (0, 1/k]
  }

  std::string str() const {
    switch (kind_) {
      case Kind::Zero:
        return "0";
      case Kind::Exact:
        return "1/" + k_.str();
      case Kind::Below:
        return "<=1/" + k_.str();
    }
    return "?";
  }

 private:
  MetricValue(Kind k, Int v) : kind_(k), k_(std::move(v)) {}
  Kind kind_;
  Int k_;
};

// First index at which two eventually-constant sequences disagree.
inline std::optional<Int> first_disagreement(const TailSeq& f, const TailSeq& g) {
  std::size_t ia = 0, ib = 0;
  std::uint64_t offa = 0, offb = 0;
  Int pos = 0;
  const auto& ra = f.runs();
  const auto& rb = g.runs();
  while (ia < ra.size() || ib < rb.size()) {
    const Rat& va = ia < ra.size() ? ra[ia].value : f.tail();
    const Rat& vb = ib < rb.size() ? rb[ib].value : g.tail();
    if (va != vb) return pos;
    std::uint64_t rema =
        ia < ra.size() ? ra[ia].count - offa : UINT64_MAX;
    std::uint64_t remb =
        ib < rb.size() ? rb[ib].count - offb : UINT64_MAX;
    std::uint64_t step = std::min(rema, remb);
    pos += step;
    if (ia < ra.size()) {
      offa += step;
      if (offa == ra[ia].count) { ++ia; offa = 0; }
    }
    if (ib < rb.size()) {
      offb += step;
      if (offb == rb[ib].count) { ++ib; offb = 0; }
    }
  }
  if (f.tail() != g.tail()) return pos;
  return std::nullopt;
}

// The Baire metric d(f,g) = 1 / min{n+1 : f(n) != g(n)}, an ultrametric.
inline MetricValue baire_dist(const TailSeq& f, const TailSeq& g) {
  auto n = first_disagreement(f, g);
  if (!n) return MetricValue::zero();
  return MetricValue::exact(*n + 1);
}

// F = { x : x(0) != 0 and x(k) = 0 for all k > 0 }; X = R^omega minus F.
inline bool in_space_X(const TailSeq& f) {
  if (f.at(0) == 0) return true;
  // some coordinate beyond 0 nonzero?
  std::uint64_t idx = 0;
  for (const auto& r : f.runs()) {
    if (r.value != 0 && idx + r.count > 1) return true;
    idx += r.count;
  }
  return f.tail() != 0;
}

// Distance from f to the closed set F.
inline MetricValue dist_to_F(const TailSeq& f) {
  if (f.at(0) == 0) return MetricValue::exact(1);
  // closest member of F is (f(0), 0, 0, ...); distance 1/(m+1) for the
  // first nonzero coordinate m > 0, or zero if f itself lies in F.
  std::uint64_t idx = 0;
  for (const auto& r : f.runs()) {
    if (r.value != 0) {
      std::uint64_t first = std::max<std::uint64_t>(idx, 1);
      if (idx + r.count > first) return MetricValue::exact(Int(first) + 1);
    }
    idx += r.count;
  }
  if (f.tail() != 0) return MetricValue::exact(Int(f.prefix_length()) + 1);
  return MetricValue::zero();  // f in F
}

// Complete metric on X compatible with d: the open-subspace remetrization
// min(1, d(f,g) + |1/d(f,F) - 1/d(g,F)|). Exact rational output.
inline Rat remetrize_d_prime(const TailSeq& f, const TailSeq& g) {
  MetricValue df = dist_to_F(f);
  MetricValue dg = dist_to_F(g);
  if (df.is_zero() || dg.is_zero())
    throw ill_formed_error("remetrize_d_prime: input lies in F, not in X");
  Rat base = baire_dist(f, g).upper_bound();
  Rat gap = Rat(df.denom()) - Rat(dg.denom());
  if (gap < 0) gap = -gap;
  Rat v = base + gap;
  return v > 1 ? Rat(1) : v;
}

enum class Metric { BaireD, DPrime };

// d or d'. On X, d' collapses to: d(f,g) when dist_to_F agrees on both
// sides, else 1 (the reciprocal gap is then >= 1 and the cap bites). The
// set-distance engine relies on this.
inline MetricValue point_dist(const TailSeq& f, const TailSeq& g, Metric m) {
  MetricValue d = baire_dist(f, g);
  if (m == Metric::BaireD) return d;
  if (d.is_zero()) return d;
  if (dist_to_F(f) == dist_to_F(g)) return d;
  return MetricValue::exact(1);
}

}  // namespace hypergame
