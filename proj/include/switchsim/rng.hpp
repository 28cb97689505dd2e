#pragma once

#include <cstdint>
#include <random>

namespace switchsim {

// Stable seed derivation: shot i of a batch uses
//   derive_seed(base, i) = splitmix64(splitmix64(base) + 1 + i).
// This mapping is part of the on-disk reproducibility contract and must
// not change between versions.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t index) {
    return splitmix64(splitmix64(base) + 1 + index);
}

// Per-shot random stream. Draw order within a shot is fixed by the engine:
// instruction order, noise decision before the Born sample of the same
// instruction.
class ShotRng {
public:
    explicit ShotRng(uint64_t seed) : engine_(seed) {}
    double uniform() { return dist_(engine_); }
    // integer in [0, n)
    int below(int n) { return static_cast<int>(engine_() % static_cast<uint64_t>(n)); }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

}  // namespace switchsim
