#pragma once

#include <cstdint>

namespace hypergame {

// splitmix64. Standard-library distributions are not bit-stable across
// implementations, and traces must replay byte-identically, so the engine
// carries its own generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) return lo;
    std::uint64_t span = hi - lo + 1;
    if (span == 0) return next();  // full 64-bit range
    std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span + 1) % span;
    std::uint64_t v = next();
    while (v > limit) v = next();
    return lo + v % span;
  }

  bool coin() { return next() & 1; }

  // Derive an independent stream, e.g. one per player role.
  Rng fork(std::uint64_t tag) const {
    Rng r(state_ ^ (0xa0761d6478bd642fULL * (tag + 1)));
    r.next();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace hypergame
