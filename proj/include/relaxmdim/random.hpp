#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace relaxmdim {

// Seeded 64-bit Mersenne Twister. The engine's output sequence is fixed by the
// C++ standard; the derived draws below are written out by hand so that a
// seed reproduces the same samples with every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
      std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename It>
  void shuffle(It first, It last) {
    auto count = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = count; i > 1; --i) {
      std::uint64_t j = below(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

// Seed of replicate `index` in a run started from `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) { return master + index; }

} // namespace relaxmdim
