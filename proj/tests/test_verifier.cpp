#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dkmw/verifier.hpp"
#include "test_util.hpp"

using namespace dkmw;

namespace {

std::vector<uint64_t> iota_set(uint64_t from, uint64_t count) {
    std::vector<uint64_t> out(count);
    std::iota(out.begin(), out.end(), from);
    return out;
}

}  // namespace

TEST_CASE("truly random oracle calibrates against the closed form") {
    TrialConfig cfg{DkmwParams(kMersenne61, 10, 2, 4, 0.5), FieldParams::mersenne61(), 200'000,
                    2024, TrialMode::truly_random_oracle};
    const auto y = iota_set(0, 2);
    const auto x = iota_set(2, 8);
    const DeltaEstimate est = estimate_event_probability(cfg, x, y);
    CHECK(est.exact.ratio == mpq_class(2, 15));
    const double p = est.exact.real_value;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(est.trials));
    CHECK(std::abs(est.empirical_probability - p) <= 4.0 * se);
    CHECK(est.ci_halfwidth > 0.0);
}

TEST_CASE("exhaustive mode is exact and reproducible") {
    TrialConfig cfg{DkmwParams(13, 6, 2, 3, 0.5, 1.0, 4), FieldParams(13, 13), 0, 0,
                    TrialMode::exhaustive};
    const std::vector<uint64_t> y{0, 1};
    const std::vector<uint64_t> x{2, 3, 4, 5};
    const DeltaEstimate first = estimate_event_probability(cfg, x, y);
    const DeltaEstimate second = estimate_event_probability(cfg, x, y);
    CHECK(first.trials == 13ull * 13 * 13 * 13);
    CHECK(first.successes == second.successes);
    CHECK(first.ci_halfwidth == 0.0);
    // single-threaded run agrees with the threaded one
    TrialConfig serial = cfg;
    serial.threads = 1;
    CHECK(estimate_event_probability(serial, x, y).successes == first.successes);
}

TEST_CASE("monte carlo approaches the exhaustive value") {
    TrialConfig cfg{DkmwParams(13, 6, 2, 3, 0.5, 1.0, 4), FieldParams(13, 13), 0, 7,
                    TrialMode::exhaustive};
    const std::vector<uint64_t> y{0, 1};
    const std::vector<uint64_t> x{2, 3, 4, 5};
    const DeltaEstimate exact = estimate_event_probability(cfg, x, y);
    cfg.mode = TrialMode::monte_carlo;
    cfg.trials = 200'000;
    const DeltaEstimate mc = estimate_event_probability(cfg, x, y);
    const double p = mc.empirical_probability;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(mc.trials));
    CHECK(std::abs(p - exact.empirical_probability) <= 5.0 * se);

    // the thread count never changes the outcome
    TrialConfig serial = cfg;
    serial.threads = 1;
    TrialConfig wide = cfg;
    wide.threads = 4;
    CHECK(estimate_event_probability(serial, x, y).successes == mc.successes);
    CHECK(estimate_event_probability(wide, x, y).successes == mc.successes);
}

TEST_CASE("k = n makes the event certain in every mode") {
    const std::vector<uint64_t> y{0, 1};
    const std::vector<uint64_t> x{2, 3, 4};
    for (TrialMode mode : {TrialMode::exhaustive, TrialMode::monte_carlo,
                           TrialMode::truly_random_oracle}) {
        TrialConfig cfg{DkmwParams(13, 5, 2, 5, 0.5, 1.0, 2), FieldParams(13, 13), 500, 3, mode};
        const DeltaEstimate est = estimate_event_probability(cfg, x, y);
        CHECK(est.successes == est.trials);
        CHECK(est.empirical_probability == 1.0);
        CHECK(est.exact.ratio == 1);
        CHECK(est.relative_deviation == 0.0);
    }
}

TEST_CASE("estimate validates its input sets") {
    TrialConfig cfg{DkmwParams(kMersenne61, 10, 2, 4, 0.5), FieldParams::mersenne61(), 10, 0,
                    TrialMode::monte_carlo};
    const auto x = iota_set(2, 8);
    CHECK_THROWS_AS(estimate_event_probability(cfg, x, iota_set(0, 3)), std::invalid_argument);
    CHECK_THROWS_AS(estimate_event_probability(cfg, x, iota_set(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(estimate_event_probability(cfg, iota_set(2, 7), iota_set(0, 2)),
                    std::invalid_argument);
    TrialConfig mismatched = cfg;
    mismatched.field = FieldParams(13, 13);
    CHECK_THROWS_AS(estimate_event_probability(mismatched, x, iota_set(0, 2)),
                    std::invalid_argument);

    // exhaustive mode refuses families beyond the enumeration cap
    TrialConfig huge = cfg;
    huge.mode = TrialMode::exhaustive;
    CHECK_THROWS_AS(estimate_event_probability(huge, x, iota_set(0, 2)), std::invalid_argument);
}

TEST_CASE("tail histogram counts are conserved") {
    TrialConfig cfg{DkmwParams(kMersenne61, 100, 2, 20, 0.3, 1.0, 4), FieldParams::mersenne61(),
                    2000, 5, TrialMode::monte_carlo};
    const auto x = test_util::distinct_elements(31, cfg.params.m(), kMersenne61);
    const TailHistogram hist = tail_histogram(cfg, x);
    CHECK(hist.trials == 2000);
    uint64_t total = 0;
    for (auto [idx, cnt] : hist.counts) total += cnt;
    CHECK(total == hist.trials);
}

TEST_CASE("a constant function concentrates the histogram on one block") {
    // a family of degree-0 polynomials: every sampled function is constant
    TrialConfig cfg{DkmwParams(kMersenne61, 100, 2, 20, 0.3, 1.0, 1), FieldParams::mersenne61(), 1,
                    11, TrialMode::monte_carlo};
    const auto x = test_util::distinct_elements(32, cfg.params.m(), kMersenne61);
    const TailHistogram hist = tail_histogram(cfg, x);
    CHECK(hist.counts.size() == 1);
    CHECK(hist.counts.begin()->second == hist.trials);
}

TEST_CASE("oracle histogram mass sits near the center when k is large") {
    TrialConfig cfg{DkmwParams(kMersenne61, 3250, 2, 325, 0.9, 1.0, 8), FieldParams::mersenne61(),
                    500, 17, TrialMode::truly_random_oracle};
    const auto x = test_util::distinct_elements(33, cfg.params.m(), kMersenne61);
    const TailHistogram hist = tail_histogram(cfg, x);
    uint64_t central = 0;
    for (long i : {0L, 1L}) {
        const auto it = hist.counts.find(i);
        if (it != hist.counts.end()) central += it->second;
    }
    CHECK(central == hist.trials);  // RANK_t lands inside the two central blocks
    CHECK(hist.bound_violations.empty());
}

TEST_CASE("moment check matches a brute-force family average") {
    // p = 5, l = 2, X = {0,1,2}: small enough to verify against a hand loop.
    TrialConfig cfg{DkmwParams(5, 5, 2, 3, 0.5, 1.0, 2), FieldParams(5, 5), 0, 0,
                    TrialMode::exhaustive};
    const std::vector<uint64_t> x{0, 1, 2};
    const MomentCheckResult at_zero = moment_check(cfg, 0, x);
    CHECK(at_zero.expected == doctest::Approx(2.0));  // t * (1 + eps*0)

    const FamilyEnumerator family(FieldParams(5, 5), 2);
    double sum = 0.0;
    for (uint64_t idx = 0; idx < family.size(); ++idx) {
        const PolyHashFunction h = family.at(idx);
        uint64_t z = 0;
        for (uint64_t e : x) z += h(e) < at_zero.threshold;
        const double c = std::abs(static_cast<double>(z) - at_zero.expected);
        sum += c * c;
    }
    CHECK(at_zero.empirical_moment == doctest::Approx(sum / static_cast<double>(family.size())));

    // boundary at u: every hash value is below it, so the count is constant
    const MomentCheckResult degenerate = moment_check(cfg, 1, x);
    CHECK(degenerate.threshold == 5);
    CHECK(degenerate.per_element_probability == 1.0);
    CHECK(degenerate.empirical_moment == 0.0);  // |Z - E|^2 = 0 for the single outcome
}

TEST_CASE("pairwise independence gives an exactly binomial second moment") {
    TrialConfig cfg{DkmwParams(kMersenne61, 102, 2, 51, 0.5, 1.0, 2), FieldParams::mersenne61(),
                    20'000, 19, TrialMode::monte_carlo};
    const auto x = test_util::distinct_elements(34, cfg.params.m(), kMersenne61);
    const MomentCheckResult mc = moment_check(cfg, 1, x);
    const double m = static_cast<double>(cfg.params.m());
    const double q = mc.per_element_probability;
    const double bias = m * q - mc.expected;
    const double oracle = m * q * (1.0 - q) + bias * bias;
    CHECK(std::abs(mc.empirical_moment - oracle) <= 4.0 * mc.moment_stderr);
}

TEST_CASE("moment check rejects odd l and out-of-range boundaries") {
    TrialConfig cfg{DkmwParams(kMersenne61, 100, 2, 20, 0.3, 1.0, 3), FieldParams::mersenne61(),
                    10, 0, TrialMode::monte_carlo};
    const auto x = test_util::distinct_elements(35, cfg.params.m(), kMersenne61);
    CHECK_THROWS_AS(moment_check(cfg, 1, x), std::invalid_argument);  // odd l
    TrialConfig even = cfg;
    even.params.l = 4;
    CHECK_THROWS_AS(moment_check(even, 1000, x), std::invalid_argument);  // boundary above u
    CHECK_THROWS_AS(moment_check(even, -1000, x), std::invalid_argument); // boundary below 0
}

TEST_CASE("delta scan is replayable and tracks its worst pair") {
    TrialConfig cfg{DkmwParams(kMersenne61, 64, 2, 4, 0.5, 1.0, 4), FieldParams::mersenne61(),
                    2000, 99, TrialMode::monte_carlo};
    const DeltaScanResult a = delta_scan(cfg, 8);
    const DeltaScanResult b = delta_scan(cfg, 8);
    REQUIRE(a.pairs.size() == 8);
    CHECK(a.worst_index == b.worst_index);
    for (size_t q = 0; q < 8; ++q) {
        CHECK(a.pairs[q].pair_seed == b.pairs[q].pair_seed);
        CHECK(a.pairs[q].estimate.successes == b.pairs[q].estimate.successes);
        CHECK(a.worst().estimate.relative_deviation >= a.pairs[q].estimate.relative_deviation);
    }
}

TEST_CASE("clustered scan draws disjoint runs") {
    TrialConfig cfg{DkmwParams(kMersenne61, 40, 2, 8, 0.5, 1.0, 4), FieldParams::mersenne61(), 200,
                    123, TrialMode::monte_carlo};
    const DeltaScanResult scan = delta_scan(cfg, 4, SetShape::clustered);
    CHECK(scan.pairs.size() == 4);
    for (const PairDeviation& pd : scan.pairs) {
        CHECK(pd.estimate.trials == 200);
    }
}
