#pragma once

#include <cstdint>

namespace dkmw {

// Parameter bundle shared by the closed-form analysis and the verification
// harness: universe size u, total set size n = |X u Y|, sampled-subset size
// d, bottom-set size k, error bound epsilon, slack constant c (applied as
// epsilon' = epsilon/c), and the family independence l.
// Derived shorthands: t = k-d+1, m = n-d.
struct DkmwParams {
    uint64_t u;
    uint64_t n;
    unsigned d;
    uint64_t k;
    double epsilon;
    double c;
    unsigned l;

    DkmwParams(uint64_t u, uint64_t n, unsigned d, uint64_t k, double epsilon, double c = 1.0,
               unsigned l = 8);

    uint64_t t() const { return k - d + 1; }
    uint64_t m() const { return n - d; }
};

}  // namespace dkmw
