// Command-line front end: parameter tables, corpus sketching, sketch
// comparison, and the empirical verification suites.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "dkmw/analysis.hpp"
#include "dkmw/estimators.hpp"
#include "dkmw/field.hpp"
#include "dkmw/rng.hpp"
#include "dkmw/sketch_io.hpp"
#include "dkmw/verifier.hpp"

namespace {

using namespace dkmw;

struct CheckLine {
    std::string name;
    double value;
    double bound;
    bool pass;
};

void print_checks(const std::vector<CheckLine>& checks) {
    for (const CheckLine& c : checks) {
        std::cout << "check=" << c.name << " value=" << std::setprecision(10) << c.value
                  << " bound=" << std::setprecision(10) << c.bound
                  << " status=" << (c.pass ? "pass" : "fail") << "\n";
    }
}

std::vector<uint64_t> random_distinct_set(uint64_t seed, uint64_t count, uint64_t universe) {
    rng::Stream g(seed);
    std::unordered_set<uint64_t> seen;
    seen.reserve(2 * count);
    std::vector<uint64_t> out;
    out.reserve(count);
    while (out.size() < count) {
        const uint64_t e = g.below(universe);
        if (seen.insert(e).second) out.push_back(e);
    }
    return out;
}

int run_params(unsigned d, double epsilon, std::optional<double> c_opt, double tau) {
    const IndependenceRequirement req = required_independence(d);
    const double series = delta_series_constant(epsilon);
    const double c = c_opt ? *c_opt : std::ceil(series);
    unsigned l = req.theorem_l;
    if (l % 2 != 0) ++l;  // the threshold formula wants an even l

    std::cout << "d=" << d << "\n";
    std::cout << "epsilon=" << epsilon << "\n";
    std::cout << "lemma_l=" << req.lemma_l << "\n";
    std::cout << "theorem_l=" << req.theorem_l << "\n";
    std::cout << "series_constant=" << std::setprecision(10) << series << "\n";
    std::cout << "c=" << std::setprecision(10) << c << "\n";
    std::cout << "epsilon_prime=" << std::setprecision(10) << epsilon / c << "\n";
    std::cout << "required_k_l=" << l << "\n";
    std::cout << "required_k=" << required_k(d, epsilon, c, l) << "\n";
    std::cout << "tau=" << tau << "\n";
    std::cout << "sample_budget=" << sample_budget(tau) << "\n";
    return 0;
}

int run_sketch(const std::string& input, size_t w, uint64_t k, double tau, uint64_t seed,
               const std::string& out_path, unsigned d, unsigned l) {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open input file " << input << "\n";
        return 2;
    }
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::vector<uint64_t> elements =
        shingle_ingest(std::as_bytes(std::span<const char>(raw)), w, seed);

    BundleParams params;
    params.field = FieldParams::mersenne61();
    params.l = l;
    params.k = k;
    params.d = d;
    const SketchBundle bundle = build_bundle(elements, params, tau, seed);
    save_bundle(bundle, std::filesystem::path(out_path));

    std::cout << "elements=" << elements.size() << "\n";
    std::cout << "sketches=" << bundle.r() << "\n";
    std::cout << "underfull=" << (elements.size() < k ? "true" : "false") << "\n";
    std::cout << "out=" << out_path << "\n";
    return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path) {
    const SketchBundle a = load_bundle(std::filesystem::path(a_path));
    const SketchBundle b = load_bundle(std::filesystem::path(b_path));
    const JaccardEstimate est = jaccard_estimate(a, b);
    for (size_t j = 0; j < est.per_sketch.size(); ++j) {
        std::cout << "sketch[" << j << "]=" << std::setprecision(10) << est.per_sketch[j] << "\n";
    }
    std::cout << "underfull=" << (est.underfull ? "true" : "false") << "\n";
    std::cout << "jaccard=" << std::setprecision(10) << est.estimate << "\n";
    return 0;
}

std::vector<CheckLine> suite_independence() {
    std::vector<CheckLine> checks;
    const FieldParams field(5, 5);
    for (unsigned j : {3u, 2u}) {
        uint64_t max_dev = 0;
        std::vector<uint64_t> points(j);
        // all j-subsets of [0, 5)
        std::vector<uint64_t> idx(j);
        for (unsigned i = 0; i < j; ++i) idx[i] = i;
        for (;;) {
            for (unsigned i = 0; i < j; ++i) points[i] = idx[i];
            const IndependenceCertificate cert = independence_certificate(field, 3, points);
            for (uint64_t cnt : cert.counts) {
                const uint64_t dev = cnt > cert.expected_count ? cnt - cert.expected_count
                                                               : cert.expected_count - cnt;
                max_dev = std::max(max_dev, dev);
            }
            // next combination
            int pos = static_cast<int>(j) - 1;
            while (pos >= 0 && idx[pos] == 5 - j + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (unsigned i = pos + 1; i < j; ++i) idx[i] = idx[i - 1] + 1;
        }
        checks.push_back({"independence_j" + std::to_string(j), static_cast<double>(max_dev), 0.0,
                          max_dev == 0});
    }
    return checks;
}

std::vector<CheckLine> suite_lemma1(uint64_t seed, uint64_t trials) {
    if (trials == 0) trials = 1'000'000;
    TrialConfig cfg{DkmwParams(kMersenne61, 10, 2, 4, 0.5, 1.0, 8), FieldParams::mersenne61(),
                    trials, seed, TrialMode::truly_random_oracle};
    std::vector<uint64_t> y_set{0, 1};
    std::vector<uint64_t> x_set;
    for (uint64_t e = 2; e < 10; ++e) x_set.push_back(e);
    const DeltaEstimate est = estimate_event_probability(cfg, x_set, y_set);
    const double err = std::abs(est.empirical_probability - est.exact.real_value);
    return {{"lemma1_truly_random", err, 0.002, err <= 0.002}};
}

std::vector<CheckLine> suite_delta(uint64_t seed, uint64_t trials) {
    std::vector<CheckLine> checks;

    // Exhaustive enumeration against Monte Carlo sampling of the same family.
    {
        const uint64_t mc_trials = trials ? trials : 1'000'000;
        TrialConfig cfg{DkmwParams(13, 6, 2, 3, 0.5, 1.0, 4), FieldParams(13, 13), 0, seed,
                        TrialMode::exhaustive};
        std::vector<uint64_t> y_set{0, 1};
        std::vector<uint64_t> x_set{2, 3, 4, 5};
        const DeltaEstimate exact = estimate_event_probability(cfg, x_set, y_set);
        cfg.mode = TrialMode::monte_carlo;
        cfg.trials = mc_trials;
        const DeltaEstimate mc = estimate_event_probability(cfg, x_set, y_set);
        const double p = mc.empirical_probability;
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(mc.trials));
        const double err = std::abs(p - exact.empirical_probability);
        checks.push_back({"delta_exhaustive_vs_mc", err, 4.0 * se, err <= 4.0 * se});
    }

    // Worst deviation over random pairs shrinks as k grows with n/k fixed.
    {
        const uint64_t pair_trials = trials ? trials : 100'000;
        std::vector<double> worst;
        for (uint64_t k : {16ull, 64ull, 256ull}) {
            TrialConfig cfg{DkmwParams(kMersenne61, 16 * k, 2, k, 0.5, 1.0, 8),
                            FieldParams::mersenne61(), pair_trials, seed, TrialMode::monte_carlo};
            const DeltaScanResult scan = delta_scan(cfg, 20);
            worst.push_back(scan.worst().estimate.relative_deviation);
        }
        const double increase = std::max({worst[1] - worst[0], worst[2] - worst[1], 0.0});
        checks.push_back({"delta_trend_monotone", increase, 0.0, increase <= 0.0});
        checks.push_back({"delta_worst_k256", worst[2], 0.25, worst[2] <= 0.25});
    }
    return checks;
}

std::vector<CheckLine> suite_tails(uint64_t seed, uint64_t trials) {
    if (trials == 0) trials = 10'000;
    const uint64_t k = required_k(2, 0.9, 1.0, 8);
    const uint64_t n = 10 * k;
    TrialConfig cfg{DkmwParams(kMersenne61, n, 2, k, 0.9, 1.0, 8), FieldParams::mersenne61(),
                    trials, seed, TrialMode::monte_carlo};
    const std::vector<uint64_t> x_set =
        random_distinct_set(rng::derive(seed, 7001), cfg.params.m(), kMersenne61);
    const TailHistogram hist = tail_histogram(cfg, x_set);

    std::vector<CheckLine> checks;
    for (long mag = 2; mag <= 5; ++mag) {
        for (long sign : {1, -1}) {
            const long i = sign * mag;
            const auto it = hist.counts.find(i);
            const double freq = it == hist.counts.end()
                                    ? 0.0
                                    : static_cast<double>(it->second) / static_cast<double>(trials);
            const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(trials));
            const double bound = tail_bound(static_cast<uint64_t>(mag), 2) + 3.0 * se;
            const std::string name =
                std::string("tail_block_") + (sign > 0 ? "pos" : "neg") + std::to_string(mag);
            checks.push_back({name, freq, bound, freq <= bound});
        }
    }
    return checks;
}

std::vector<CheckLine> suite_moments(uint64_t seed, uint64_t trials) {
    if (trials == 0) trials = 10'000;
    std::vector<CheckLine> checks;

    // Fourth central moment against the closed-form budget.
    {
        TrialConfig cfg{DkmwParams(kMersenne61, 200, 2, 100, 0.9, 1.0, 4),
                        FieldParams::mersenne61(), trials, seed, TrialMode::monte_carlo};
        const std::vector<uint64_t> x_set =
            random_distinct_set(rng::derive(seed, 7002), cfg.params.m(), kMersenne61);
        const MomentCheckResult mc = moment_check(cfg, 1, x_set);
        checks.push_back({"moment_l4", mc.empirical_moment, mc.bound, mc.empirical_moment <= mc.bound});
        checks.push_back({"moment_l4_margin10", 10.0 * mc.empirical_moment, mc.bound,
                          10.0 * mc.empirical_moment <= mc.bound});
    }

    // Pairwise independence makes the second moment exactly binomial.
    {
        TrialConfig cfg{DkmwParams(kMersenne61, 102, 2, 51, 0.5, 1.0, 2), FieldParams::mersenne61(),
                        trials, seed, TrialMode::monte_carlo};
        const std::vector<uint64_t> x_set =
            random_distinct_set(rng::derive(seed, 7003), cfg.params.m(), kMersenne61);
        const MomentCheckResult mc = moment_check(cfg, 1, x_set);
        const double m = static_cast<double>(cfg.params.m());
        const double q = mc.per_element_probability;
        const double bias = m * q - mc.expected;
        const double oracle = m * q * (1.0 - q) + bias * bias;
        const double err = std::abs(mc.empirical_moment - oracle);
        checks.push_back({"moment_l2_variance", err, 3.0 * mc.moment_stderr,
                          err <= 3.0 * mc.moment_stderr});
    }
    return checks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"d-k-min-wise sketching toolkit"};
    app.require_subcommand(1);

    // params
    auto* params_cmd = app.add_subcommand("params", "print the parameter table for one (d, epsilon)");
    unsigned arg_d = 2;
    double arg_epsilon = 0.5;
    std::optional<double> arg_c;
    double arg_tau = 0.05;
    params_cmd->add_option("--d", arg_d, "sampled-subset size")->required();
    params_cmd->add_option("--epsilon", arg_epsilon, "error bound in (0,1)")->required();
    params_cmd->add_option("--c", arg_c, "series constant override (default: computed)");
    params_cmd->add_option("--tau", arg_tau, "failure probability for the sample budget");

    // sketch
    auto* sketch_cmd = app.add_subcommand("sketch", "sketch a file into a bundle");
    std::string arg_input, arg_out;
    size_t arg_w = 8;
    uint64_t arg_k = 512;
    double arg_sketch_tau = 0.05;
    uint64_t arg_seed = 0;
    unsigned arg_sketch_d = 2;
    unsigned arg_l = 8;
    sketch_cmd->add_option("--input", arg_input, "input file")->required();
    sketch_cmd->add_option("--w", arg_w, "shingle width in bytes")->required();
    sketch_cmd->add_option("--k", arg_k, "bottom-k capacity")->required();
    sketch_cmd->add_option("--tau", arg_sketch_tau, "failure probability")->required();
    sketch_cmd->add_option("--seed", arg_seed, "master seed")->required();
    sketch_cmd->add_option("--out", arg_out, "output sketch file")->required();
    sketch_cmd->add_option("--d", arg_sketch_d, "sampled-subset size (default 2)");
    sketch_cmd->add_option("--l", arg_l, "family independence (default 8)");

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "estimate Jaccard similarity of two bundles");
    std::string arg_a, arg_b;
    compare_cmd->add_option("--a", arg_a, "first sketch file")->required();
    compare_cmd->add_option("--b", arg_b, "second sketch file")->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run one empirical verification suite");
    std::string arg_suite;
    uint64_t arg_verify_seed = 0;
    uint64_t arg_trials = 0;
    verify_cmd->add_option("--suite", arg_suite, "lemma1|tails|moments|delta|independence")
        ->required()
        ->check(CLI::IsMember({"lemma1", "tails", "moments", "delta", "independence"}));
    verify_cmd->add_option("--seed", arg_verify_seed, "master seed")->required();
    verify_cmd->add_option("--trials", arg_trials, "trial count override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*params_cmd) return run_params(arg_d, arg_epsilon, arg_c, arg_tau);
        if (*sketch_cmd) {
            return run_sketch(arg_input, arg_w, arg_k, arg_sketch_tau, arg_seed, arg_out,
                              arg_sketch_d, arg_l);
        }
        if (*compare_cmd) return run_compare(arg_a, arg_b);
        if (*verify_cmd) {
            std::vector<CheckLine> checks;
            if (arg_suite == "independence") checks = suite_independence();
            if (arg_suite == "lemma1") checks = suite_lemma1(arg_verify_seed, arg_trials);
            if (arg_suite == "delta") checks = suite_delta(arg_verify_seed, arg_trials);
            if (arg_suite == "tails") checks = suite_tails(arg_verify_seed, arg_trials);
            if (arg_suite == "moments") checks = suite_moments(arg_verify_seed, arg_trials);
            print_checks(checks);
            for (const CheckLine& c : checks) {
                if (!c.pass) return 1;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
