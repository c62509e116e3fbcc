#ifndef PHDIM_RANDOM_HPP
#define PHDIM_RANDOM_HPP

// Seeded random streams whose output is fully specified by this header.
//
// std::mt19937_64 has a bit-exact definition in the standard, but the
// std::*_distribution adaptors do not, so every transform to a real-valued
// variate is written out here. Identical seeds therefore give identical
// numbers on every conforming toolchain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <vector>

namespace phdim {

/// One step of the splitmix64 mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a root seed and a tuple of
/// stream coordinates, e.g. (sample size, repetition).
inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(root);
  for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer on [0, bound) without modulo bias. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Exp(1).
  double exponential() { return -std::log(uniform_open()); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// `count` distinct indices drawn uniformly from [0, population), sorted
/// ascending (partial Fisher-Yates).
inline std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                           std::size_t count, Rng& rng) {
  std::vector<std::size_t> pool(population);
  for (std::size_t i = 0; i < population; ++i) pool[i] = i;
  count = std::min(count, population);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace phdim

#endif  // PHDIM_RANDOM_HPP
