// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. argv[1] must point at the CLI binary (used by the last
// criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "dkmw/analysis.hpp"
#include "dkmw/estimators.hpp"
#include "dkmw/rng.hpp"
#include "dkmw/sketch.hpp"
#include "dkmw/verifier.hpp"

using namespace dkmw;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("criterion %2d %-34s %s (%s) [%.1fs]\n", criterion, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <typename Fn>
void run(int criterion, const std::string& name, Fn fn) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = fn();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(criterion, name, pass, detail, seconds);
}

std::vector<uint64_t> distinct_elements(uint64_t seed, size_t count, uint64_t universe) {
    rng::Stream g(seed);
    std::unordered_set<uint64_t> seen;
    std::vector<uint64_t> out;
    out.reserve(count);
    while (out.size() < count) {
        const uint64_t e = g.below(universe);
        if (seen.insert(e).second) out.push_back(e);
    }
    return out;
}

std::pair<bool, std::string> criterion1_certificates() {
    const FieldParams field(5, 5);
    uint64_t max_dev = 0;
    uint64_t tables = 0;
    for (unsigned j : {3u, 2u}) {
        std::vector<uint64_t> idx(j);
        for (unsigned i = 0; i < j; ++i) idx[i] = i;
        for (;;) {
            const IndependenceCertificate cert = independence_certificate(field, 3, idx);
            ++tables;
            for (uint64_t cnt : cert.counts) {
                const uint64_t dev = cnt > cert.expected_count ? cnt - cert.expected_count
                                                               : cert.expected_count - cnt;
                max_dev = std::max(max_dev, dev);
            }
            int pos = static_cast<int>(j) - 1;
            while (pos >= 0 && idx[pos] == 5 - j + static_cast<unsigned>(pos)) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (unsigned i = pos + 1; i < j; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    std::ostringstream d;
    d << tables << " point sets, max count deviation " << max_dev << ", tolerance 0";
    return {max_dev == 0, d.str()};
}

std::pair<bool, std::string> criterion2_oracle() {
    TrialConfig cfg{DkmwParams(kMersenne61, 10, 2, 4, 0.5), FieldParams::mersenne61(), 1'000'000,
                    2001, TrialMode::truly_random_oracle};
    std::vector<uint64_t> y{0, 1};
    std::vector<uint64_t> x(8);
    std::iota(x.begin(), x.end(), uint64_t{2});
    const DeltaEstimate est = estimate_event_probability(cfg, x, y);
    const double err = std::abs(est.empirical_probability - est.exact.real_value);
    std::ostringstream d;
    d << "|empirical - 2/15| = " << err << ", tolerance 0.002";
    return {err <= 0.002, d.str()};
}

std::pair<bool, std::string> criterion3_exhaustive() {
    TrialConfig cfg{DkmwParams(13, 6, 2, 3, 0.5, 1.0, 4), FieldParams(13, 13), 0, 2003,
                    TrialMode::exhaustive};
    const std::vector<uint64_t> y{0, 1};
    const std::vector<uint64_t> x{2, 3, 4, 5};
    const DeltaEstimate exact = estimate_event_probability(cfg, x, y);
    const DeltaEstimate again = estimate_event_probability(cfg, x, y);
    if (exact.successes != again.successes || exact.trials != 28561) {
        return {false, "exhaustive enumeration is not reproducible"};
    }
    cfg.mode = TrialMode::monte_carlo;
    cfg.trials = 1'000'000;
    const DeltaEstimate mc = estimate_event_probability(cfg, x, y);
    const double p = mc.empirical_probability;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(mc.trials));
    const double err = std::abs(p - exact.empirical_probability);
    std::ostringstream d;
    d << "exact " << exact.successes << "/28561, |mc - exact| = " << err << ", tolerance 4se = "
      << 4.0 * se;
    return {err <= 4.0 * se, d.str()};
}

std::pair<bool, std::string> criterion4_tails() {
    const uint64_t k = required_k(2, 0.9, 1.0, 8);
    if (k != 325) return {false, "required_k(2, 0.9, 1, 8) drifted from 325"};
    const uint64_t n = 10 * k;
    TrialConfig cfg{DkmwParams(kMersenne61, n, 2, k, 0.9, 1.0, 8), FieldParams::mersenne61(),
                    10'000, 2004, TrialMode::monte_carlo};
    const auto x = distinct_elements(rng::derive(2004, 1), cfg.params.m(), kMersenne61);
    const TailHistogram hist = tail_histogram(cfg, x);

    bool pass = true;
    double worst_excess = -1.0;
    for (long mag = 2; mag <= 5; ++mag) {
        for (long sign : {1, -1}) {
            const auto it = hist.counts.find(sign * mag);
            const double freq = it == hist.counts.end() ? 0.0
                                                        : static_cast<double>(it->second) /
                                                              static_cast<double>(hist.trials);
            const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(hist.trials));
            const double bound = tail_bound(static_cast<uint64_t>(mag), 2) + 3.0 * se;
            pass = pass && freq <= bound;
            worst_excess = std::max(worst_excess, freq - bound);
        }
    }
    std::ostringstream d;
    d << "k=325 n=3250, worst freq-bound over |i| in 2..5 = " << worst_excess;
    return {pass, d.str()};
}

std::pair<bool, std::string> criterion5_moment() {
    // required_k(2, 0.9, 1, l) sits above n = 200 for every admissible l, so
    // the check runs at a feasible k = 100; the moment inequality is k-free.
    TrialConfig cfg{DkmwParams(kMersenne61, 200, 2, 100, 0.9, 1.0, 4), FieldParams::mersenne61(),
                    10'000, 2005, TrialMode::monte_carlo};
    const auto x = distinct_elements(rng::derive(2005, 1), cfg.params.m(), kMersenne61);
    const MomentCheckResult mc = moment_check(cfg, 1, x);
    std::ostringstream d;
    d << "E|Z-E1|^4 = " << mc.empirical_moment << ", bound " << mc.bound << ", margin "
      << mc.bound / mc.empirical_moment << " (>= 10 required)";
    return {mc.empirical_moment <= mc.bound && 10.0 * mc.empirical_moment <= mc.bound, d.str()};
}

std::pair<bool, std::string> criterion6_trend() {
    std::vector<double> worst;
    for (uint64_t k : {16ull, 64ull, 256ull}) {
        TrialConfig cfg{DkmwParams(kMersenne61, 16 * k, 2, k, 0.5, 1.0, 8),
                        FieldParams::mersenne61(), 100'000, 3, TrialMode::monte_carlo};
        const DeltaScanResult scan = delta_scan(cfg, 20);
        worst.push_back(scan.worst().estimate.relative_deviation);
    }
    const bool monotone = worst[0] >= worst[1] && worst[1] >= worst[2];
    const bool small = worst[2] <= 0.25;
    std::ostringstream d;
    d << "worst deviations " << worst[0] << " >= " << worst[1] << " >= " << worst[2]
      << ", k=256 tolerance 0.25";
    return {monotone && small, d.str()};
}

std::pair<bool, std::string> criterion7_telescoping() {
    std::mt19937_64 gen(2007);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        const int N = 5 + static_cast<int>(gen() % 46);
        const double eps = 0.05 + 0.9 * unif(gen);
        const double tm = 0.01 + 0.2 * unif(gen);
        const double K = unif(gen) * tm * tm * 4.0;

        std::vector<double> p(2 * N + 1);
        double total = 0.0;
        for (double& v : p) total += (v = unif(gen));
        for (double& v : p) v /= total;
        const auto prob = [&](int i) { return p[static_cast<size_t>(i + N)]; };
        const auto f = [&](int i) {
            const double b = tm * (1.0 + eps * i);
            return b * b;
        };

        double direct = 0.0;
        for (int i = -N; i <= N; ++i) direct += prob(i) * (f(i) - K);

        std::vector<double> prefix(2 * N + 1), suffix(2 * N + 1);
        double running = 0.0;
        for (int i = -N; i <= N; ++i) prefix[i + N] = (running += prob(i));
        running = 0.0;
        for (int i = N; i >= -N; --i) suffix[i + N] = (running += prob(i));

        double rearranged = 0.0;
        for (int i = -N; i <= -1; ++i) rearranged += prefix[i + N] * (f(i) - f(i + 1));
        rearranged += prefix[N] * (f(0) - K);
        rearranged += suffix[1 + N] * (f(1) - K);
        for (int i = 2; i <= N; ++i) rearranged += suffix[i + N] * (f(i) - f(i - 1));

        worst = std::max(worst, std::abs(direct - rearranged));
    }
    std::ostringstream d;
    d << "100 instances, worst |direct - rearranged| = " << worst << ", tolerance 1e-9";
    return {worst <= 1e-9, d.str()};
}

std::pair<bool, std::string> criterion8_jaccard() {
    std::vector<uint64_t> a_el, b_el;
    for (uint64_t e = 0; e < 2000; ++e) a_el.push_back(e);
    for (uint64_t e = 1000; e < 3000; ++e) b_el.push_back(e);
    BundleParams prm;
    prm.field = FieldParams::mersenne61();
    prm.l = 8;
    prm.k = 512;
    prm.d = 2;

    int hits = 0;
    for (uint64_t rep = 0; rep < 100; ++rep) {
        const uint64_t master = rng::derive(2008, rep);
        const SketchBundle a = build_bundle_r(a_el, prm, 9, master);
        const SketchBundle b = build_bundle_r(b_el, prm, 9, master);
        const JaccardEstimate est = jaccard_estimate(a, b);
        hits += std::abs(est.estimate - 1.0 / 3.0) <= 0.05;
    }
    std::ostringstream d;
    d << hits << "/100 medians within 0.05 of 1/3, need >= 95";
    return {hits >= 95, d.str()};
}

std::pair<bool, std::string> criterion9_algebra() {
    std::mt19937_64 gen(2009);
    const FieldParams field = FieldParams::mersenne61();
    int checked = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        const uint64_t seed = gen() % 256;
        const PolyHashFunction h = sample_function(field, 4, seed);
        const uint64_t k = 1 + gen() % 16;

        const auto random_elements = [&](size_t count) {
            std::vector<uint64_t> out;
            for (size_t i = 0; i < count; ++i) out.push_back(gen() % 400);
            return out;
        };
        const auto sketch_of = [&](const std::vector<uint64_t>& elements) {
            BottomKSketch s(k, seed);
            for (uint64_t e : elements) s.insert(e, h);
            return s;
        };

        auto a_el = random_elements(gen() % 40);
        const BottomKSketch a = sketch_of(a_el);
        const BottomKSketch b = sketch_of(random_elements(gen() % 40));
        const BottomKSketch c = sketch_of(random_elements(gen() % 20));

        if (!(merge(a, b) == merge(b, a))) return {false, "commutativity failed"};
        if (!(merge(merge(a, b), c) == merge(a, merge(b, c)))) {
            return {false, "associativity failed"};
        }
        if (!(merge(a, a) == a)) return {false, "idempotence failed"};

        std::shuffle(a_el.begin(), a_el.end(), gen);
        if (!(sketch_of(a_el) == a)) return {false, "insertion order changed the sketch"};
        ++checked;
    }
    return {true, std::to_string(checked) + " randomized instances, all laws exact"};
}

std::pair<bool, std::string> criterion10_cli(const std::string& cli) {
    const auto run_cli = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " 2>&1";
        FILE* pipe = popen(cmd.c_str(), "r");
        std::string output;
        if (pipe) {
            char buf[512];
            while (size_t got = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
            pclose(pipe);
        }
        return output;
    };
    const auto has_line = [](const std::string& output, const std::string& line) {
        return output.find(line + "\n") != std::string::npos;
    };

    const std::string unit_c = run_cli("params --d 2 --epsilon 0.5 --c 1");
    const std::string default_c = run_cli("params --d 2 --epsilon 0.5");

    // required_k values pinned by an independent high-precision evaluation of
    // the threshold: 1048.7529... at c = 1 and 37720.1047... at c = 6.
    const bool pass = has_line(unit_c, "theorem_l=8") && has_line(unit_c, "lemma_l=6") &&
                      has_line(unit_c, "required_k=1049") && has_line(default_c, "c=6") &&
                      has_line(default_c, "required_k=37721") &&
                      has_line(default_c, "theorem_l=8");
    return {pass, pass ? "params table matches the frozen evaluations"
                       : "params output drifted from the frozen evaluations"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::puts("usage: acceptance <path-to-cli-binary>");
        return 2;
    }
    const std::string cli = argv[1];

    run(1, "exact l-wise certificates", criterion1_certificates);
    run(2, "truly-random calibration", criterion2_oracle);
    run(3, "exhaustive vs monte carlo", criterion3_exhaustive);
    run(4, "per-block tail bounds", criterion4_tails);
    run(5, "fourth-moment budget", criterion5_moment);
    run(6, "deviation shrinks with k", criterion6_trend);
    run(7, "telescoping identity", criterion7_telescoping);
    run(8, "end-to-end jaccard", criterion8_jaccard);
    run(9, "sketch merge algebra", criterion9_algebra);
    run(10, "parameter table via cli", [&] { return criterion10_cli(cli); });

    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::puts("all criteria passed");
    return 0;
}
