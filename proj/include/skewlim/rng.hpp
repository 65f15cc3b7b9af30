#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace skewlim {

// Seeded sampling helpers.  std::mt19937_64 output is pinned by the standard,
// but the std distributions are not, so bounded draws are done by hand to keep
// reports byte-identical across platforms.
class rng {
 public:
  explicit rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // uniform in [0, n); n >= 1
  std::int64_t below(std::int64_t n) {
    return static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(n));
  }

  // uniform in [lo, hi] inclusive
  std::int64_t range(std::int64_t lo, std::int64_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (engine_() & 1u) != 0; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(below(static_cast<std::int64_t>(xs.size())))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace skewlim
