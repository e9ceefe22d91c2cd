#pragma once

#include <cstdint>

namespace dkmw {

inline constexpr uint64_t kMersenne61 = (uint64_t{1} << 61) - 1;

// Deterministic Miller-Rabin, exact for every 64-bit n.
bool is_prime_u64(uint64_t n);

// Prime field together with the hash range. Polynomial arithmetic runs
// mod p; hash values live in [0, u). u = p is the recommended
// configuration: the range map is then the identity and the family is
// exactly l-wise uniform. With u < p each output is floor(v*u/p), which
// carries at most 1/u relative non-uniformity per point and is excluded
// from the exact certificates.
struct FieldParams {
    uint64_t p = kMersenne61;
    uint64_t u = kMersenne61;

    FieldParams() = default;
    FieldParams(uint64_t prime, uint64_t universe);

    static FieldParams mersenne61() { return {kMersenne61, kMersenne61}; }

    friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

// (a * b) mod m for any 64-bit modulus.
uint64_t mul_mod_u64(uint64_t a, uint64_t b, uint64_t m);

// Fast path for p = 2^61 - 1; operands must already be reduced.
inline uint64_t mul_mod_m61(uint64_t a, uint64_t b) {
    const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
    uint64_t s = static_cast<uint64_t>(z & kMersenne61) + static_cast<uint64_t>(z >> 61);
    s = (s & kMersenne61) + (s >> 61);
    return s >= kMersenne61 ? s - kMersenne61 : s;
}

inline uint64_t add_mod_m61(uint64_t a, uint64_t b) {
    const uint64_t s = a + b;
    return s >= kMersenne61 ? s - kMersenne61 : s;
}

}  // namespace dkmw
