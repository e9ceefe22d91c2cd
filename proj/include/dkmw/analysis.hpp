#pragma once

#include <cstdint>
#include <gmpxx.h>

#include "dkmw/params.hpp"

namespace dkmw {

// C(k,d)/C(n,d) in lowest terms, with a double approximation. This is the
// probability, under a fully random function, that a fixed d-subset lands
// entirely inside the bottom-k of an n-element set.
struct ExactProbability {
    mpq_class ratio;
    double real_value = 0.0;

    mpz_class numerator() const { return ratio.get_num(); }
    mpz_class denominator() const { return ratio.get_den(); }
};

ExactProbability exact_probability(uint64_t n, uint64_t k, unsigned d);

// Independence the construction needs. lemma_l = 2d+2 suffices for the
// per-block tail bounds alone; theorem_l = 3d+2 additionally covers the d
// values split off as independent in the deviation bound. Note theorem_l is
// odd for odd d; the threshold formulas below want an even l, so callers
// round up in that case.
struct IndependenceRequirement {
    unsigned lemma_l;
    unsigned theorem_l;
};
IndependenceRequirement required_independence(unsigned d);

// The hypothesis threshold d-1 + 2*8^(2/l)*(6l)^(1+1/l)/(epsilon/c)^2 and the
// smallest integer k strictly above it. Requires epsilon in (0,1), c >= 1,
// l even and l >= 2d+2.
double k_threshold(unsigned d, double epsilon, double c, unsigned l);
uint64_t required_k(unsigned d, double epsilon, double c, unsigned l);

// Half-open interval [lo, hi) already clipped to [0, u).
struct BlockInterval {
    double lo;
    double hi;
    bool empty() const { return !(lo < hi); }
};

// The blocks b_i = [(1+eps*(i-1))*center, (1+eps*i)*center) around
// center = t*u/m. Clipped to [0, u) they tile the hash range; indices whose
// raw interval falls fully outside come back empty.
double block_center(const DkmwParams& params);
BlockInterval block_boundaries(long i, const DkmwParams& params);

// Inverse of block_boundaries: the unique block containing the hash value
// (lower boundary inclusive). value must be < u.
long block_of(uint64_t value, const DkmwParams& params);

// 8 * (6l)^((l+1)/2) * expected^(l/2); l even, expected > 0. Upper bound on
// the l-th central moment of a sum of l-wise independent indicators.
double moment_bound(unsigned l, double expected);

// 1 / i^(d+1): the probability budget for the block at distance i >= 1 from
// the center, on either side.
double tail_bound(uint64_t i, unsigned d);

// Partial sum, through term `truncation`, of the series dominating the d = 2
// deviation bound, plus the two central-block terms normalized by epsilon.
// Non-decreasing in the truncation; terms decay like 1/i^2.
double delta_series_partial(double epsilon, uint64_t truncation);

// Integral bound on everything past the truncation: 4*(epsilon+1)/truncation.
double delta_series_tail(double epsilon, uint64_t truncation);

// Upper estimate of the series constant c: partial sum plus the analytic
// tail, so the result honestly dominates the full series.
double delta_series_constant(double epsilon, uint64_t truncation = 1'000'000);

// Smallest odd r >= 48*ln(1/tau), tau in (0,1). The median of r independent
// estimates that each land in the target interval with probability >= 3/4
// misses with probability at most tau; 48 is the standard amplification
// constant for that bound.
uint64_t sample_budget(double tau);

}  // namespace dkmw
