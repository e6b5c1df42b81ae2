#pragma once

#include <cstdint>

namespace cml {

// Counter-based splittable PRNG built on the splitmix64 finalizer.
// mix64(seed, counter) is a pure function, so streams can be split by
// index and merged deterministically regardless of worker scheduling.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed ^ (counter * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

// Uniform double in [0,1) from the top 53 bits.
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small sequential stream for call sites that need several draws per trial.
// Seeded from (seed, index) so trials stay independent and replayable.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream) : state_(mix64(seed, stream)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_u01() { return u01(next_u64()); }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

}  // namespace cml
