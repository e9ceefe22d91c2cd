#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dkmw/analysis.hpp"
#include "dkmw/field.hpp"
#include "dkmw/params.hpp"
#include "dkmw/poly_hash.hpp"

namespace dkmw {

// exhaustive          iterate every member of the polynomial family
// monte_carlo         sample one function per trial, counter-seeded
// truly_random_oracle fresh uniform value per element per trial; the fully
//                     random baseline the closed forms describe
enum class TrialMode { exhaustive, monte_carlo, truly_random_oracle };

struct TrialConfig {
    DkmwParams params;
    FieldParams field;
    uint64_t trials = 0;  // ignored in exhaustive mode (family size is used)
    uint64_t master_seed = 0;
    TrialMode mode = TrialMode::monte_carlo;
    uint64_t enumeration_cap = kDefaultEnumerationCap;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Empirical event frequency against the fully random baseline.
struct DeltaEstimate {
    uint64_t successes = 0;
    uint64_t trials = 0;
    double empirical_probability = 0.0;
    ExactProbability exact;           // C(k,d)/C(n,d)
    double relative_deviation = 0.0;  // |empirical - exact| / exact
    double ci_halfwidth = 0.0;        // 95%; zero in exhaustive mode
};

// Frequency of the event "all of Y lands in the bottom-k of X u Y" over the
// configured trials. X and Y are element sets below u, disjoint, |Y| = d,
// |X| = n - d. Results are a deterministic function of (master_seed, trials)
// regardless of thread count.
DeltaEstimate estimate_event_probability(const TrialConfig& cfg, std::span<const uint64_t> x_set,
                                         std::span<const uint64_t> y_set);

// Where the t-th smallest hash of X falls, block by block.
struct TailHistogram {
    std::map<long, uint64_t> counts;  // block index -> trials landing there
    uint64_t trials = 0;

    struct Violation {
        long index;
        double empirical;
        double bound;  // tail budget for |index|
    };
    // Blocks at |i| >= 1 whose frequency exceeds the budget by more than
    // three binomial standard errors.
    std::vector<Violation> bound_violations;
};
TailHistogram tail_histogram(const TrialConfig& cfg, std::span<const uint64_t> x_set);

// Empirical l-th central moment of Z = #{x in X : h(x) < (1+eps*i) * t*u/m}
// against the closed-form budget, using the nominal expectation t*(1+eps*i).
struct MomentCheckResult {
    double empirical_moment = 0.0;
    double bound = 0.0;     // moment_bound(l, expected)
    double expected = 0.0;  // t*(1+eps*i)
    uint64_t threshold = 0; // integer cutoff: Z counts hash values < threshold
    double per_element_probability = 0.0;  // threshold / u
    double moment_stderr = 0.0;            // sampling error of the empirical moment
};
MomentCheckResult moment_check(const TrialConfig& cfg, long block_index,
                               std::span<const uint64_t> x_set);

enum class SetShape { uniform, clustered };

struct PairDeviation {
    uint64_t pair_seed;  // replays the (X, Y) draw and its trial stream
    DeltaEstimate estimate;
};

struct DeltaScanResult {
    std::vector<PairDeviation> pairs;
    size_t worst_index = 0;

    const PairDeviation& worst() const { return pairs[worst_index]; }
};

// Draws `set_count` disjoint (X, Y) pairs from [0, u) -- uniform singletons
// or two clustered runs -- and estimates the event probability for each.
// Returns every pair's estimate plus the one with the largest relative
// deviation. Fully replayable from cfg.master_seed.
DeltaScanResult delta_scan(const TrialConfig& cfg, uint64_t set_count,
                           SetShape shape = SetShape::uniform);

}  // namespace dkmw
