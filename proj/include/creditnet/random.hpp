#pragma once

// Seeded random helpers. std::mt19937_64 output is fixed by the standard;
// the conversions below avoid the implementation-defined std distributions
// so seeded outputs match across standard libraries.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace creditnet {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a base seed and a tag (e.g. a
// period or trial index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform on [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer on [0, n), n >= 1, without modulo bias.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Continuous Pareto on [xmin, inf) with density exponent alpha > 1.
inline double pareto(Rng& rng, double xmin, double alpha) {
  return xmin * std::pow(1.0 - uniform01(rng), -1.0 / (alpha - 1.0));
}

}  // namespace creditnet
