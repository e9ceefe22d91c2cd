#include "dkmw/estimators.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "dkmw/analysis.hpp"
#include "dkmw/rng.hpp"

namespace dkmw {

std::vector<uint64_t> shingle_ingest(std::span<const std::byte> data, size_t w,
                                     uint64_t fingerprint_seed) {
    if (w < 1) throw std::invalid_argument("shingle_ingest: window width must be >= 1");
    std::vector<uint64_t> out;
    if (data.size() < w) return out;

    constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
    constexpr uint64_t kFnvPrime = 0x100000001b3ULL;
    const uint64_t init = kFnvOffset ^ rng::mix64(fingerprint_seed + rng::kStreamShingle);

    std::unordered_set<uint64_t> seen;
    seen.reserve(2 * (data.size() - w + 1));
    for (size_t i = 0; i + w <= data.size(); ++i) {
        uint64_t fp = init;
        for (size_t j = 0; j < w; ++j) {
            fp = (fp ^ static_cast<uint64_t>(std::to_integer<uint8_t>(data[i + j]))) * kFnvPrime;
        }
        seen.insert(rng::mix64(fp));
    }
    out.assign(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

SketchBundle build_bundle_r(std::span<const uint64_t> elements, const BundleParams& params,
                            uint64_t r, uint64_t master_seed, bool track_multiplicity) {
    if (r < 1) throw std::invalid_argument("build_bundle: needs at least one sketch");
    if (params.k < 1) throw std::invalid_argument("build_bundle: k must be >= 1");

    SketchBundle bundle;
    bundle.params = params;
    bundle.multiplicity_tracked = track_multiplicity;
    bundle.sketches.reserve(r);

    std::vector<PolyHashFunction> functions;
    functions.reserve(r);
    for (uint64_t j = 0; j < r; ++j) {
        const uint64_t seed = rng::derive(master_seed, rng::kStreamBundle + j);
        functions.push_back(sample_function(params.field, params.l, seed));
        bundle.sketches.emplace_back(params.k, seed);
    }

    for (uint64_t raw : elements) {
        const uint64_t element = raw % params.field.u;
        if (track_multiplicity) ++bundle.occurrences[element];
        for (uint64_t j = 0; j < r; ++j) {
            bundle.sketches[j].insert(element, functions[j]);
        }
    }
    return bundle;
}

SketchBundle build_bundle(std::span<const uint64_t> elements, const BundleParams& params,
                          double tau, uint64_t master_seed, bool track_multiplicity) {
    SketchBundle bundle =
        build_bundle_r(elements, params, sample_budget(tau), master_seed, track_multiplicity);
    bundle.tau = tau;
    return bundle;
}

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void check_compatible(const SketchBundle& a, const SketchBundle& b) {
    if (!(a.params.field == b.params.field) || a.params.l != b.params.l ||
        a.params.k != b.params.k || a.params.d != b.params.d) {
        throw std::invalid_argument("jaccard_estimate: bundle parameters differ");
    }
    if (a.r() != b.r()) throw std::invalid_argument("jaccard_estimate: sketch counts differ");
    for (uint64_t j = 0; j < a.r(); ++j) {
        if (a.sketches[j].function_id() != b.sketches[j].function_id()) {
            throw std::invalid_argument("jaccard_estimate: function seeds differ at sketch " +
                                        std::to_string(j));
        }
    }
}

}  // namespace

JaccardEstimate jaccard_estimate(const SketchBundle& a, const SketchBundle& b) {
    check_compatible(a, b);

    JaccardEstimate out;
    out.per_sketch.reserve(a.r());
    for (uint64_t j = 0; j < a.r(); ++j) {
        const BottomKSketch& sa = a.sketches[j];
        const BottomKSketch& sb = b.sketches[j];
        out.underfull = out.underfull || !sa.full() || !sb.full();

        const BottomKSketch joined = merge(sa, sb);
        if (joined.entries().empty()) {
            out.per_sketch.push_back(1.0);  // both sides empty: identical sets
            continue;
        }
        size_t both = 0;
        for (const HashedPoint& p : joined.entries()) {
            const bool in_a = std::binary_search(sa.entries().begin(), sa.entries().end(), p);
            const bool in_b = std::binary_search(sb.entries().begin(), sb.entries().end(), p);
            both += in_a && in_b;
        }
        out.per_sketch.push_back(static_cast<double>(both) /
                                 static_cast<double>(joined.entries().size()));
    }
    out.estimate = median(out.per_sketch);
    return out;
}

RarityEstimate rarity_estimate(const SketchBundle& bundle,
                               const std::function<bool(uint64_t)>& rare) {
    if (!bundle.multiplicity_tracked) {
        throw std::logic_error("rarity_estimate: bundle was built without multiplicity tracking");
    }
    const auto is_rare = [&](uint64_t count) { return rare ? rare(count) : count == 1; };

    RarityEstimate out;
    out.per_sketch.reserve(bundle.r());
    for (const BottomKSketch& sketch : bundle.sketches) {
        if (sketch.entries().empty()) {
            out.per_sketch.push_back(0.0);
            continue;
        }
        size_t hits = 0;
        for (const HashedPoint& p : sketch.entries()) {
            const auto it = bundle.occurrences.find(p.element);
            const uint64_t count = it == bundle.occurrences.end() ? 0 : it->second;
            hits += is_rare(count);
        }
        out.per_sketch.push_back(static_cast<double>(hits) /
                                 static_cast<double>(sketch.entries().size()));
    }
    out.estimate = median(out.per_sketch);
    return out;
}

}  // namespace dkmw
