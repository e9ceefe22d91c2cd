#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "dkmw/field.hpp"
#include "dkmw/sketch.hpp"

namespace dkmw {

// Sliding w-byte windows fingerprinted to 64 bits: seeded FNV-1a over the
// window, folded through a finalizer. Returns the distinct fingerprints,
// sorted. Input shorter than w yields the empty set.
std::vector<uint64_t> shingle_ingest(std::span<const std::byte> data, size_t w,
                                     uint64_t fingerprint_seed);

// Sketch-side parameters: the field, the family independence l, the sketch
// capacity k, and the subset size d the guarantees refer to.
struct BundleParams {
    FieldParams field;
    unsigned l = 8;
    uint64_t k = 512;
    unsigned d = 2;
};

// r bottom-k sketches of one element set, each under its own function seed.
// Elements are reduced mod u before hashing. When multiplicity tracking is
// on, occurrences maps each reduced element to its insert count.
struct SketchBundle {
    BundleParams params;
    double tau = 0.0;  // informational; not serialized
    std::vector<BottomKSketch> sketches;
    bool multiplicity_tracked = false;
    std::unordered_map<uint64_t, uint64_t> occurrences;

    uint64_t r() const { return sketches.size(); }
};

// r = sample_budget(tau) sketches; sketch j's function seed derives from
// (master_seed, j), so rebuilding with the same arguments is bit-identical.
SketchBundle build_bundle(std::span<const uint64_t> elements, const BundleParams& params,
                          double tau, uint64_t master_seed, bool track_multiplicity = false);

// Same, with the sketch count pinned explicitly.
SketchBundle build_bundle_r(std::span<const uint64_t> elements, const BundleParams& params,
                            uint64_t r, uint64_t master_seed, bool track_multiplicity = false);

struct JaccardEstimate {
    double estimate = 0.0;             // median of the per-sketch estimates
    std::vector<double> per_sketch;
    bool underfull = false;  // some sketch holds its whole source set
};

// Per sketch: merge the two bottom-k sketches (bottom-k of the union) and
// count merged entries present on both sides; the per-sketch estimate is
// that fraction, and the bundle estimate is the median across sketches.
// Bundles must share parameters, r, and function seeds.
JaccardEstimate jaccard_estimate(const SketchBundle& a, const SketchBundle& b);

struct RarityEstimate {
    double estimate = 0.0;
    std::vector<double> per_sketch;
};

// Fraction of bottom-k entries whose element is rare, per sketch, median
// across sketches. Default rarity: the element occurred exactly once. The
// bundle must have been built with multiplicity tracking.
RarityEstimate rarity_estimate(const SketchBundle& bundle,
                               const std::function<bool(uint64_t)>& rare = {});

}  // namespace dkmw
