// rng.hpp -- deterministic randomness.
//
// Engine is std::mt19937_64 (bit-exact across platforms by the standard).
// Bounded draws and shuffles are implemented here instead of <random>
// distributions, whose output is implementation-defined; byte-identical
// reruns of any command with the same seed are a hard requirement.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace chainbal {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed for sub-stream `stream` of trial `index` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t stream = 0) {
  return mix64(mix64(master ^ mix64(index)) ^ mix64(stream ^ 0xa5a5a5a5a5a5a5a5ull));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform on [0, bound); rejection sampling over a power-of-two mask.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = next() & mask;
      if (v < bound) return v;
    }
  }

  bool coin() { return (next() >> 63) != 0; }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Returns true with probability num/den exactly.
  bool bernoulli(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Uniformly random permutation of {0,...,n-1}.
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace chainbal
