#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hypergame {

// All arithmetic in this library is exact. No floating point anywhere.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A representation violates a documented invariant.
struct ill_formed_error : error {
  using error::error;
};

// A comparison is not decidable at the requested resolution depth.
struct resolution_error : error {
  using error::error;
};

struct parse_error : error {
  using error::error;
};

struct config_error : error {
  using error::error;
};

// Something the engine proves impossible happened anyway.
struct internal_error : error {
  using error::error;
};

// Rationals travel as exact "p/q" strings, never decimals.
inline std::string format_rational(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat parse_rational(const std::string& s) {
  if (s.empty()) throw parse_error("empty rational");
  if (s.find('.') != std::string::npos)
    throw parse_error("decimal notation rejected, use p/q: " + s);
  std::size_t slash = s.find('/');
  auto check_digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) throw parse_error("malformed rational: " + s);
    for (std::size_t i = from; i < to; ++i) {
      char c = s[i];
      if (i == from && (c == '-' || c == '+')) {
        if (to - from == 1) throw parse_error("malformed rational: " + s);
        continue;
      }
      if (c < '0' || c > '9') throw parse_error("malformed rational: " + s);
    }
  };
  if (slash == std::string::npos) {
    check_digits(0, s.size());
    return Rat(Int(s));
  }
  check_digits(0, slash);
  check_digits(slash + 1, s.size());
  Int num(s.substr(0, slash));
  Int den(s.substr(slash + 1));
  if (den == 0) throw parse_error("zero denominator: " + s);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rat(num, den);
}

inline Int pow4(std::uint64_t e) {
  Int r(1);
  Int base(4);
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Number of bits of |v|; 0 for v == 0.
inline std::uint64_t bit_length(const Int& v) {
  if (v == 0) return 0;
  return boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

}  // namespace hypergame
