#include "dkmw/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace dkmw {

DkmwParams::DkmwParams(uint64_t u_, uint64_t n_, unsigned d_, uint64_t k_, double epsilon_,
                       double c_, unsigned l_)
    : u(u_), n(n_), d(d_), k(k_), epsilon(epsilon_), c(c_), l(l_) {
    if (d < 2 || d > k || k > n || n > u || n <= d) {
        throw std::invalid_argument("DkmwParams: need 2 <= d <= k <= n <= u and n > d");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("DkmwParams: epsilon must lie in (0,1)");
    }
    if (!(c >= 1.0)) throw std::invalid_argument("DkmwParams: c must be >= 1");
    if (l < 1) throw std::invalid_argument("DkmwParams: l must be >= 1");
}

ExactProbability exact_probability(uint64_t n, uint64_t k, unsigned d) {
    if (d < 1 || d > k || k > n) {
        throw std::invalid_argument("exact_probability: need 1 <= d <= k <= n");
    }
    // Product form (k/n)((k-1)/(n-1))...((k-d+1)/(n-d+1)) in exact rationals.
    mpq_class ratio(1);
    for (unsigned i = 0; i < d; ++i) {
        mpq_class factor(static_cast<unsigned long>(k - i), static_cast<unsigned long>(n - i));
        factor.canonicalize();
        ratio *= factor;
    }
    return {ratio, ratio.get_d()};
}

IndependenceRequirement required_independence(unsigned d) {
    if (d < 2) throw std::invalid_argument("required_independence: d must be >= 2");
    return {2 * d + 2, 3 * d + 2};
}

double k_threshold(unsigned d, double epsilon, double c, unsigned l) {
    if (d < 2) throw std::invalid_argument("k_threshold: d must be >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("k_threshold: epsilon must lie in (0,1)");
    }
    if (!(c >= 1.0)) throw std::invalid_argument("k_threshold: c must be >= 1");
    if (l % 2 != 0) throw std::invalid_argument("k_threshold: l must be even");
    if (l < 2 * d + 2) throw std::invalid_argument("k_threshold: l must be >= 2d+2");
    const long double eps_prime = static_cast<long double>(epsilon) / c;
    const long double ld = static_cast<long double>(l);
    const long double bound = 2.0L * powl(8.0L, 2.0L / ld) * powl(6.0L * ld, 1.0L + 1.0L / ld) /
                              (eps_prime * eps_prime);
    return static_cast<double>(d - 1 + bound);
}

uint64_t required_k(unsigned d, double epsilon, double c, unsigned l) {
    const long double threshold = k_threshold(d, epsilon, c, l);
    // Strictly above the threshold, so the returned k itself satisfies the
    // hypothesis even when the threshold is integral.
    return static_cast<uint64_t>(floorl(threshold)) + 1;
}

double block_center(const DkmwParams& params) {
    return static_cast<double>(params.t()) * static_cast<double>(params.u) /
           static_cast<double>(params.m());
}

BlockInterval block_boundaries(long i, const DkmwParams& params) {
    const double center = block_center(params);
    const double lo = (1.0 + params.epsilon * static_cast<double>(i - 1)) * center;
    const double hi = (1.0 + params.epsilon * static_cast<double>(i)) * center;
    const double top = static_cast<double>(params.u);
    return {std::max(lo, 0.0), std::min(hi, top)};
}

long block_of(uint64_t value, const DkmwParams& params) {
    if (value >= params.u) throw std::invalid_argument("block_of: value outside [0, u)");
    const double center = block_center(params);
    const double v = static_cast<double>(value);
    const double top = static_cast<double>(params.u);
    long i = static_cast<long>(std::floor((v / center - 1.0) / params.epsilon)) + 1;
    // Walk to the block whose clipped interval contains v; the estimate above
    // can be off by one at the seams.
    for (;;) {
        const double lo_raw = (1.0 + params.epsilon * static_cast<double>(i - 1)) * center;
        const double hi_raw = (1.0 + params.epsilon * static_cast<double>(i)) * center;
        if (hi_raw <= 0.0) {
            ++i;
            continue;
        }
        if (lo_raw >= top) {
            --i;
            continue;
        }
        // Clipped edges absorb everything beyond them.
        if (lo_raw > 0.0 && v < lo_raw) {
            --i;
            continue;
        }
        if (hi_raw < top && v >= hi_raw) {
            ++i;
            continue;
        }
        return i;
    }
}

double moment_bound(unsigned l, double expected) {
    if (l < 2 || l % 2 != 0) throw std::invalid_argument("moment_bound: l must be even and >= 2");
    if (!(expected > 0.0)) throw std::invalid_argument("moment_bound: expected must be positive");
    return 8.0 * std::pow(6.0 * l, (l + 1) / 2.0) * std::pow(expected, l / 2.0);
}

double tail_bound(uint64_t i, unsigned d) {
    if (i < 1) throw std::invalid_argument("tail_bound: i must be >= 1");
    return std::pow(static_cast<double>(i), -static_cast<double>(d + 1));
}

double delta_series_partial(double epsilon, uint64_t truncation) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("delta_series_partial: epsilon must lie in (0,1)");
    }
    if (truncation < 1000) {
        throw std::invalid_argument("delta_series_partial: truncation must be >= 1000");
    }
    // Central blocks 0 and 1, probability bounded by one, normalized by
    // epsilon in the large-n limit: 0 and ((1+eps)^2 - 1)/eps = 2 + eps.
    double sum = 2.0 + epsilon;
    for (uint64_t i = 1; i <= truncation; ++i) {
        const double di = static_cast<double>(i);
        const double cube = di * di * di;
        const double a = epsilon * (2.0 * di - 1.0);
        sum += std::abs(a - 2.0) / cube;
        if (i >= 2) sum += std::abs(a + 2.0) / cube;
    }
    return sum;
}

double delta_series_tail(double epsilon, uint64_t truncation) {
    return 4.0 * (epsilon + 1.0) / static_cast<double>(truncation);
}

double delta_series_constant(double epsilon, uint64_t truncation) {
    return delta_series_partial(epsilon, truncation) + delta_series_tail(epsilon, truncation);
}

uint64_t sample_budget(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("sample_budget: tau must lie in (0,1)");
    const double needed = 48.0 * std::log(1.0 / tau);
    uint64_t r = static_cast<uint64_t>(std::ceil(needed));
    if (r < 1) r = 1;
    if (r % 2 == 0) ++r;
    return r;
}

}  // namespace dkmw
