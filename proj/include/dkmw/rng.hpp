#pragma once

#include <cassert>
#include <cstdint>

namespace dkmw::rng {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; a bijection on 64-bit values.
constexpr uint64_t mix64(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of sub-stream `stream` under a master seed. For a fixed master,
// distinct streams never collide (mix64 is a bijection and the offsets
// kGolden*(stream+1) are distinct mod 2^64).
constexpr uint64_t derive(uint64_t master, uint64_t stream) {
    return mix64(master + kGolden * (stream + 1));
}

// Stream labels, spaced so that indexed consumers of one master seed
// (trial counters, pair counters, ...) cannot overlap.
enum : uint64_t {
    kStreamTrial = 0x1'0000'0000ULL,
    kStreamPair = 0x2'0000'0000ULL,
    kStreamOracle = 0x3'0000'0000ULL,
    kStreamBundle = 0x4'0000'0000ULL,
    kStreamCoeff = 0x5'0000'0000ULL,
    kStreamShingle = 0x6'0000'0000ULL,
};

// Deterministic SplitMix64 sequence.
class Stream {
public:
    explicit Stream(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += kGolden);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, bound) by rejection; no modulo bias.
    uint64_t below(uint64_t bound) {
        assert(bound > 0);
        const uint64_t reject = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const uint64_t r = next();
            if (r >= reject) return r % bound;
        }
    }

private:
    uint64_t state_;
};

}  // namespace dkmw::rng
