#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dkmw/field.hpp"

namespace dkmw {

inline constexpr uint64_t kDefaultEnumerationCap = 10'000'000;

// A degree-(l-1) polynomial over F_p: one member of the standard l-wise
// independent family [u] -> [u]. coeffs[0] is the constant term. Immutable
// after construction; safe to evaluate from many threads concurrently.
class PolyHashFunction {
public:
    PolyHashFunction(FieldParams field, std::vector<uint64_t> coeffs, uint64_t function_id = 0);

    // Horner evaluation, highest coefficient first, reduced into [0, u).
    // Throws std::domain_error for x >= u.
    uint64_t operator()(uint64_t x) const;

    unsigned independence() const { return static_cast<unsigned>(coeffs_.size()); }
    const std::vector<uint64_t>& coeffs() const { return coeffs_; }
    const FieldParams& field() const { return field_; }
    uint64_t function_id() const { return function_id_; }

private:
    FieldParams field_;
    std::vector<uint64_t> coeffs_;
    uint64_t function_id_;
};

// Uniform draw from the family. Coefficient j is produced by a counter-based
// expansion of (seed, j) with rejection sampling to [0, p), so the result is
// reproducible regardless of evaluation order; the seed becomes the
// function id.
PolyHashFunction sample_function(const FieldParams& field, unsigned l, uint64_t seed);

// Random access over all p^l coefficient vectors in lexicographic order
// (constant term most significant). Construction refuses families whose
// size exceeds the cap.
class FamilyEnumerator {
public:
    FamilyEnumerator(FieldParams field, unsigned l, uint64_t cap = kDefaultEnumerationCap);

    uint64_t size() const { return size_; }
    std::vector<uint64_t> coeffs_at(uint64_t index) const;
    PolyHashFunction at(uint64_t index) const;

private:
    FieldParams field_;
    unsigned l_;
    uint64_t size_;
};

// Exact joint distribution of (h(points[0]), ..., h(points[j-1])) over the
// whole family. counts is indexed by the target tuple in mixed radix p,
// points[0] most significant. An l-wise independent family yields
// p^(l-j) for every tuple; uniform() checks exactly that.
struct IndependenceCertificate {
    std::vector<uint64_t> points;
    uint64_t family_size = 0;
    uint64_t expected_count = 0;
    std::vector<uint64_t> counts;

    bool uniform() const;
};

// Requires u = p (the certified configuration), distinct points, and
// j <= l; beyond l the family makes no uniformity claim.
IndependenceCertificate independence_certificate(const FieldParams& field, unsigned l,
                                                 std::span<const uint64_t> points,
                                                 uint64_t cap = kDefaultEnumerationCap);

}  // namespace dkmw
