#include "dkmw/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "dkmw/rng.hpp"
#include "dkmw/sketch.hpp"

namespace dkmw {

namespace {

unsigned effective_threads(const TrialConfig& cfg, uint64_t trials) {
    unsigned n = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    if (n < 1) n = 1;
    if (trials < 4096) n = 1;
    const uint64_t cap = trials / 1024 + 1;
    return static_cast<unsigned>(std::min<uint64_t>(n, cap));
}

// Runs fn(begin, end, partial&) over disjoint chunks of [0, trials) and
// combines the partials in chunk order, so the aggregate is independent of
// the thread count. Partial must be default-constructible.
template <typename Partial, typename Fn, typename Combine>
Partial run_trials(const TrialConfig& cfg, uint64_t trials, Fn fn, Combine combine) {
    const unsigned workers = effective_threads(cfg, trials);
    std::vector<Partial> partials(workers);
    if (workers == 1) {
        fn(uint64_t{0}, trials, partials[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const uint64_t chunk = trials / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const uint64_t begin = w * chunk;
            const uint64_t end = (w + 1 == workers) ? trials : begin + chunk;
            pool.emplace_back([&, begin, end, w] { fn(begin, end, partials[w]); });
        }
        for (auto& th : pool) th.join();
    }
    Partial total{};
    for (auto& p : partials) combine(total, p);
    return total;
}

void check_sets(const TrialConfig& cfg, std::span<const uint64_t> x_set,
                std::span<const uint64_t> y_set) {
    const DkmwParams& prm = cfg.params;
    if (cfg.field.u != prm.u) {
        throw std::invalid_argument("TrialConfig: field universe and params universe differ");
    }
    if (y_set.size() != prm.d) throw std::invalid_argument("estimate: |Y| must equal d");
    if (x_set.size() != prm.m()) throw std::invalid_argument("estimate: |X| must equal n - d");
    std::unordered_set<uint64_t> seen;
    seen.reserve(2 * (x_set.size() + y_set.size()));
    for (uint64_t e : x_set) {
        if (e >= prm.u) throw std::invalid_argument("estimate: X element outside [0, u)");
        if (!seen.insert(e).second) throw std::invalid_argument("estimate: duplicate element in X");
    }
    for (uint64_t e : y_set) {
        if (e >= prm.u) throw std::invalid_argument("estimate: Y element outside [0, u)");
        if (!seen.insert(e).second) {
            throw std::invalid_argument("estimate: X and Y must be disjoint sets");
        }
    }
}

// Event for one function: every Y point below the t-th smallest X point.
// Early exit once t X points precede Y's maximum.
bool event_under_function(const PolyHashFunction& h, std::span<const uint64_t> x_set,
                          std::span<const uint64_t> y_set, uint64_t t) {
    HashedPoint y_max{0, 0};
    bool first = true;
    for (uint64_t e : y_set) {
        const HashedPoint p{h(e), e};
        if (first || y_max < p) y_max = p;
        first = false;
    }
    if (t > x_set.size()) return true;
    uint64_t below = 0;
    for (uint64_t e : x_set) {
        const HashedPoint p{h(e), e};
        if (p < y_max && ++below >= t) return false;
    }
    return true;
}

bool event_under_oracle(rng::Stream& g, uint64_t u, std::span<const uint64_t> x_set,
                        std::span<const uint64_t> y_set, uint64_t t) {
    // Fresh uniform value per element, Y first; ties broken by element id.
    HashedPoint y_max{0, 0};
    bool first = true;
    for (uint64_t e : y_set) {
        const HashedPoint p{g.below(u), e};
        if (first || y_max < p) y_max = p;
        first = false;
    }
    if (t > x_set.size()) {
        return true;
    }
    uint64_t below = 0;
    bool alive = true;
    for (uint64_t e : x_set) {
        // No early exit: every element must consume its draw so the stream
        // layout stays fixed.
        const HashedPoint p{g.below(u), e};
        if (alive && p < y_max && ++below >= t) alive = false;
    }
    return alive;
}

double ci_halfwidth_95(uint64_t successes, uint64_t trials) {
    if (trials == 0) return 0.0;
    const double n = static_cast<double>(trials);
    if (successes == 0 || successes == trials) {
        // Clopper-Pearson style bound for a degenerate frequency.
        return 1.0 - std::pow(0.025, 1.0 / n);
    }
    const double p = static_cast<double>(successes) / n;
    return 1.96 * std::sqrt(p * (1.0 - p) / n);
}

struct CountPartial {
    uint64_t successes = 0;
};

}  // namespace

DeltaEstimate estimate_event_probability(const TrialConfig& cfg, std::span<const uint64_t> x_set,
                                         std::span<const uint64_t> y_set) {
    check_sets(cfg, x_set, y_set);
    const DkmwParams& prm = cfg.params;
    const uint64_t t = prm.t();

    DeltaEstimate out;
    out.exact = exact_probability(prm.n, prm.k, prm.d);

    switch (cfg.mode) {
        case TrialMode::exhaustive: {
            FamilyEnumerator family(cfg.field, prm.l, cfg.enumeration_cap);
            out.trials = family.size();
            auto partial = run_trials<CountPartial>(
                cfg, family.size(),
                [&](uint64_t begin, uint64_t end, CountPartial& acc) {
                    for (uint64_t idx = begin; idx < end; ++idx) {
                        if (event_under_function(family.at(idx), x_set, y_set, t)) ++acc.successes;
                    }
                },
                [](CountPartial& a, const CountPartial& b) { a.successes += b.successes; });
            out.successes = partial.successes;
            out.ci_halfwidth = 0.0;
            break;
        }
        case TrialMode::monte_carlo: {
            if (cfg.trials == 0) throw std::invalid_argument("estimate: trials must be positive");
            out.trials = cfg.trials;
            auto partial = run_trials<CountPartial>(
                cfg, cfg.trials,
                [&](uint64_t begin, uint64_t end, CountPartial& acc) {
                    for (uint64_t trial = begin; trial < end; ++trial) {
                        const uint64_t seed = rng::derive(cfg.master_seed, rng::kStreamTrial + trial);
                        const PolyHashFunction h = sample_function(cfg.field, prm.l, seed);
                        if (event_under_function(h, x_set, y_set, t)) ++acc.successes;
                    }
                },
                [](CountPartial& a, const CountPartial& b) { a.successes += b.successes; });
            out.successes = partial.successes;
            out.ci_halfwidth = ci_halfwidth_95(out.successes, out.trials);
            break;
        }
        case TrialMode::truly_random_oracle: {
            if (cfg.trials == 0) throw std::invalid_argument("estimate: trials must be positive");
            out.trials = cfg.trials;
            auto partial = run_trials<CountPartial>(
                cfg, cfg.trials,
                [&](uint64_t begin, uint64_t end, CountPartial& acc) {
                    for (uint64_t trial = begin; trial < end; ++trial) {
                        rng::Stream g(rng::derive(cfg.master_seed, rng::kStreamOracle + trial));
                        if (event_under_oracle(g, prm.u, x_set, y_set, t)) ++acc.successes;
                    }
                },
                [](CountPartial& a, const CountPartial& b) { a.successes += b.successes; });
            out.successes = partial.successes;
            out.ci_halfwidth = ci_halfwidth_95(out.successes, out.trials);
            break;
        }
    }

    out.empirical_probability = static_cast<double>(out.successes) / static_cast<double>(out.trials);
    mpq_class empirical(static_cast<unsigned long>(out.successes),
                        static_cast<unsigned long>(out.trials));
    empirical.canonicalize();
    mpq_class deviation = empirical - out.exact.ratio;
    if (deviation < 0) deviation = -deviation;
    out.relative_deviation = mpq_class(deviation / out.exact.ratio).get_d();
    return out;
}

namespace {

struct HistogramPartial {
    std::map<long, uint64_t> counts;
};

// t-th smallest hash value of X under one function.
template <typename Hash>
uint64_t rank_t_value(std::span<const uint64_t> x_set, uint64_t t, Hash&& hash,
                      std::vector<HashedPoint>& scratch) {
    scratch.clear();
    for (uint64_t e : x_set) scratch.push_back({hash(e), e});
    std::nth_element(scratch.begin(), scratch.begin() + (t - 1), scratch.end());
    return scratch[t - 1].value;
}

}  // namespace

TailHistogram tail_histogram(const TrialConfig& cfg, std::span<const uint64_t> x_set) {
    const DkmwParams& prm = cfg.params;
    if (cfg.field.u != prm.u) {
        throw std::invalid_argument("TrialConfig: field universe and params universe differ");
    }
    if (x_set.size() != prm.m()) throw std::invalid_argument("tail_histogram: |X| must equal n - d");
    const uint64_t t = prm.t();
    if (t > prm.m()) throw std::invalid_argument("tail_histogram: t = k-d+1 must be at most |X|");

    uint64_t trials = cfg.trials;
    std::optional<FamilyEnumerator> family;
    if (cfg.mode == TrialMode::exhaustive) {
        family.emplace(cfg.field, prm.l, cfg.enumeration_cap);
        trials = family->size();
    } else if (trials == 0) {
        throw std::invalid_argument("tail_histogram: trials must be positive");
    }

    auto partial = run_trials<HistogramPartial>(
        cfg, trials,
        [&](uint64_t begin, uint64_t end, HistogramPartial& acc) {
            std::vector<HashedPoint> scratch;
            scratch.reserve(x_set.size());
            for (uint64_t trial = begin; trial < end; ++trial) {
                uint64_t value = 0;
                switch (cfg.mode) {
                    case TrialMode::exhaustive: {
                        const PolyHashFunction h = family->at(trial);
                        value = rank_t_value(x_set, t, h, scratch);
                        break;
                    }
                    case TrialMode::monte_carlo: {
                        const uint64_t seed = rng::derive(cfg.master_seed, rng::kStreamTrial + trial);
                        const PolyHashFunction h = sample_function(cfg.field, prm.l, seed);
                        value = rank_t_value(x_set, t, h, scratch);
                        break;
                    }
                    case TrialMode::truly_random_oracle: {
                        rng::Stream g(rng::derive(cfg.master_seed, rng::kStreamOracle + trial));
                        value = rank_t_value(
                            x_set, t, [&](uint64_t) { return g.below(prm.u); }, scratch);
                        break;
                    }
                }
                ++acc.counts[block_of(value, prm)];
            }
        },
        [](HistogramPartial& a, const HistogramPartial& b) {
            for (auto [idx, cnt] : b.counts) a.counts[idx] += cnt;
        });

    TailHistogram hist;
    hist.counts = std::move(partial.counts);
    hist.trials = trials;
    for (auto [idx, cnt] : hist.counts) {
        if (idx == 0) continue;
        const double bound = tail_bound(static_cast<uint64_t>(idx < 0 ? -idx : idx), prm.d);
        const double freq = static_cast<double>(cnt) / static_cast<double>(trials);
        const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(trials));
        if (freq > bound + 3.0 * se) hist.bound_violations.push_back({idx, freq, bound});
    }
    return hist;
}

namespace {

struct MomentPartial {
    double sum = 0.0;
    double sum_sq = 0.0;
};

double int_pow(double base, unsigned exp) {
    double r = 1.0;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

}  // namespace

MomentCheckResult moment_check(const TrialConfig& cfg, long block_index,
                               std::span<const uint64_t> x_set) {
    const DkmwParams& prm = cfg.params;
    if (cfg.field.u != prm.u) {
        throw std::invalid_argument("TrialConfig: field universe and params universe differ");
    }
    if (x_set.size() != prm.m()) throw std::invalid_argument("moment_check: |X| must equal n - d");
    if (prm.l % 2 != 0) throw std::invalid_argument("moment_check: l must be even");

    // Z counts hash values below (1 + eps*i) * t*u/m, the boundary shared by
    // blocks i and i+1; its nominal expectation is t*(1 + eps*i).
    const long double boundary = (1.0L + static_cast<long double>(prm.epsilon) * block_index) *
                                 static_cast<long double>(prm.t()) * static_cast<long double>(prm.u) /
                                 static_cast<long double>(prm.m());
    if (boundary < 0.0L || boundary > static_cast<long double>(prm.u)) {
        throw std::invalid_argument("moment_check: block boundary outside [0, u)");
    }
    const uint64_t threshold = static_cast<uint64_t>(ceill(boundary));
    const double expected = static_cast<double>(prm.t()) * (1.0 + prm.epsilon * block_index);

    uint64_t trials = cfg.trials;
    std::optional<FamilyEnumerator> family;
    if (cfg.mode == TrialMode::exhaustive) {
        family.emplace(cfg.field, prm.l, cfg.enumeration_cap);
        trials = family->size();
    } else if (trials == 0) {
        throw std::invalid_argument("moment_check: trials must be positive");
    }

    const unsigned l = prm.l;
    auto partial = run_trials<MomentPartial>(
        cfg, trials,
        [&](uint64_t begin, uint64_t end, MomentPartial& acc) {
            for (uint64_t trial = begin; trial < end; ++trial) {
                uint64_t z = 0;
                switch (cfg.mode) {
                    case TrialMode::exhaustive: {
                        const PolyHashFunction h = family->at(trial);
                        for (uint64_t e : x_set) z += h(e) < threshold;
                        break;
                    }
                    case TrialMode::monte_carlo: {
                        const uint64_t seed = rng::derive(cfg.master_seed, rng::kStreamTrial + trial);
                        const PolyHashFunction h = sample_function(cfg.field, prm.l, seed);
                        for (uint64_t e : x_set) z += h(e) < threshold;
                        break;
                    }
                    case TrialMode::truly_random_oracle: {
                        rng::Stream g(rng::derive(cfg.master_seed, rng::kStreamOracle + trial));
                        for (size_t j = 0; j < x_set.size(); ++j) z += g.below(prm.u) < threshold;
                        break;
                    }
                }
                const double centered = std::abs(static_cast<double>(z) - expected);
                const double powered = int_pow(centered, l);
                acc.sum += powered;
                acc.sum_sq += powered * powered;
            }
        },
        [](MomentPartial& a, const MomentPartial& b) {
            a.sum += b.sum;
            a.sum_sq += b.sum_sq;
        });

    MomentCheckResult out;
    const double n = static_cast<double>(trials);
    out.empirical_moment = partial.sum / n;
    out.expected = expected;
    out.threshold = threshold;
    out.per_element_probability = static_cast<double>(threshold) / static_cast<double>(prm.u);
    out.bound = moment_bound(l, expected);
    const double variance = std::max(0.0, partial.sum_sq / n - out.empirical_moment * out.empirical_moment);
    out.moment_stderr = std::sqrt(variance / n);
    return out;
}

DeltaScanResult delta_scan(const TrialConfig& cfg, uint64_t set_count, SetShape shape) {
    if (set_count < 1) throw std::invalid_argument("delta_scan: set_count must be >= 1");
    const DkmwParams& prm = cfg.params;
    const uint64_t d = prm.d;
    const uint64_t m = prm.m();

    DeltaScanResult result;
    result.pairs.reserve(set_count);

    for (uint64_t q = 0; q < set_count; ++q) {
        const uint64_t pair_seed = rng::derive(cfg.master_seed, rng::kStreamPair + q);
        rng::Stream g(pair_seed);

        std::vector<uint64_t> y_set, x_set;
        y_set.reserve(d);
        x_set.reserve(m);
        if (shape == SetShape::uniform) {
            // Y is the first d draws, X the next m; prefixes are stable under
            // growing m, which keeps pairs comparable across k at one seed.
            std::unordered_set<uint64_t> seen;
            seen.reserve(2 * (d + m));
            while (y_set.size() < d) {
                const uint64_t e = g.below(prm.u);
                if (seen.insert(e).second) y_set.push_back(e);
            }
            while (x_set.size() < m) {
                const uint64_t e = g.below(prm.u);
                if (seen.insert(e).second) x_set.push_back(e);
            }
        } else {
            // Two disjoint runs of consecutive values.
            const uint64_t y_base = g.below(prm.u - d + 1);
            uint64_t x_base;
            do {
                x_base = g.below(prm.u - m + 1);
            } while (x_base < y_base + d && y_base < x_base + m);
            for (uint64_t j = 0; j < d; ++j) y_set.push_back(y_base + j);
            for (uint64_t j = 0; j < m; ++j) x_set.push_back(x_base + j);
        }

        TrialConfig sub = cfg;
        sub.master_seed = rng::derive(pair_seed, 1);
        PairDeviation pd{pair_seed, estimate_event_probability(sub, x_set, y_set)};
        result.pairs.push_back(std::move(pd));
        if (result.pairs[q].estimate.relative_deviation >
            result.pairs[result.worst_index].estimate.relative_deviation) {
            result.worst_index = q;
        }
    }
    return result;
}

}  // namespace dkmw
