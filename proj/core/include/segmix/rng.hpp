#pragma once

#include <cstdint>
#include <random>

namespace segmix {

// Seed scrambler used to decorrelate nearby seeds before they enter the
// mt19937_64 state.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// Deterministic random stream. All randomness in the library goes through
// this class so that runs are reproducible bit-for-bit across platforms;
// std::uniform_real_distribution and friends are implementation-defined and
// are deliberately avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(SplitMix64{seed}.next()) {}

  // Uniform double in [0, 1) with 53 random bits.
  double unif01() {
    return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Uniform integer in [0, n). n must be >= 1.
  int uniform_int(int n) {
    int v = static_cast<int>(unif01() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unif01(); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Derives the per-agent stream for a run. Agents draw exploration noise from
// independent streams so that trial outcomes do not depend on agent count or
// evaluation order.
inline Rng agent_stream(std::uint64_t run_seed, int agent_id) {
  return Rng(run_seed * 1000003ULL + static_cast<std::uint64_t>(agent_id));
}

}  // namespace segmix
