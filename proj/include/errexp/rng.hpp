#pragma once
#include <cstdint>

namespace errexp {

// Counter-based RNG: every draw is a pure function of (seed, stream tag,
// sweep, index, slot).  Parallel loops can draw independently at any index
// without shared state, so results do not depend on the thread count.
inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
  public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    uint64_t bits(uint64_t tag, uint64_t sweep, uint64_t index, uint64_t slot = 0) const {
        uint64_t h = splitmix64(seed_ ^ (tag * 0x9e3779b97f4a7c15ULL));
        h = splitmix64(h ^ sweep);
        h = splitmix64(h ^ index);
        return splitmix64(h ^ slot);
    }

    // uniform in [0, 1)
    double uniform(uint64_t tag, uint64_t sweep, uint64_t index, uint64_t slot = 0) const {
        return (bits(tag, sweep, index, slot) >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n)
    uint64_t below(uint64_t n, uint64_t tag, uint64_t sweep, uint64_t index, uint64_t slot = 0) const {
        return static_cast<uint64_t>(uniform(tag, sweep, index, slot) * static_cast<double>(n));
    }

    uint64_t seed() const { return seed_; }

  private:
    uint64_t seed_;
};

}  // namespace errexp
