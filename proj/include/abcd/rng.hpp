#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace abcd {

// Deterministic per-agent random substream. Every agent (and the tree
// builder, and the benchmark generator) owns its own stream keyed by
// (root seed, stream id), so interleaving draws across agents never
// perturbs the values any single agent sees. The distributed solver and
// the centralized replica rely on this to consume identical sequences.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  // One engine step per call, uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_in(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
  }

  // Uniform index in {0, ..., k-1}; consumes exactly one draw.
  int uniform_index(int k) {
    int v = static_cast<int>(uniform01() * static_cast<double>(k));
    return v < k ? v : k - 1;
  }

  // Uniform over {0, ..., n-1} \ {self}; consumes exactly one draw.
  int uniform_other(int n, int self) {
    int v = uniform_index(n - 1);
    return v >= self ? v + 1 : v;
  }

  // Samples an index proportionally to `weights` (assumed to sum to ~1);
  // consumes exactly one draw.
  int weighted_index(const std::vector<double>& weights) {
    double r = uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (r < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer, used to derive benchmark run seeds from
// (base seed, instance, repeat, variant) so adding runs never shifts
// the seeds of existing ones.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

}  // namespace abcd
