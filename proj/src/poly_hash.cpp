#include "dkmw/poly_hash.hpp"

#include <stdexcept>
#include <string>

#include "dkmw/rng.hpp"

namespace dkmw {

PolyHashFunction::PolyHashFunction(FieldParams field, std::vector<uint64_t> coeffs, uint64_t function_id)
    : field_(field), coeffs_(std::move(coeffs)), function_id_(function_id) {
    if (coeffs_.empty()) {
        throw std::invalid_argument("PolyHashFunction: needs at least one coefficient");
    }
    for (uint64_t c : coeffs_) {
        if (c >= field_.p) {
            throw std::invalid_argument("PolyHashFunction: coefficient out of [0, p)");
        }
    }
}

uint64_t PolyHashFunction::operator()(uint64_t x) const {
    if (x >= field_.u) {
        throw std::domain_error("PolyHashFunction: input " + std::to_string(x) +
                                " outside [0, " + std::to_string(field_.u) + ")");
    }
    const size_t l = coeffs_.size();
    uint64_t acc = coeffs_[l - 1];
    if (field_.p == kMersenne61) {
        for (size_t j = l - 1; j-- > 0;) {
            acc = add_mod_m61(mul_mod_m61(acc, x), coeffs_[j]);
        }
    } else {
        for (size_t j = l - 1; j-- > 0;) {
            acc = static_cast<uint64_t>((static_cast<unsigned __int128>(acc) * x + coeffs_[j]) % field_.p);
        }
    }
    if (field_.u == field_.p) return acc;
    // Range map for u < p: floor(acc * u / p). Monotone, at most 1/u relative
    // non-uniformity per point.
    return static_cast<uint64_t>(static_cast<unsigned __int128>(acc) * field_.u / field_.p);
}

PolyHashFunction sample_function(const FieldParams& field, unsigned l, uint64_t seed) {
    if (l < 1) throw std::invalid_argument("sample_function: l must be >= 1");
    std::vector<uint64_t> coeffs(l);
    for (unsigned j = 0; j < l; ++j) {
        rng::Stream s(rng::derive(seed, rng::kStreamCoeff + j));
        coeffs[j] = s.below(field.p);
    }
    return PolyHashFunction(field, std::move(coeffs), seed);
}

namespace {

// p^l if it fits under cap, otherwise throws naming the cap.
uint64_t family_size_checked(uint64_t p, unsigned l, uint64_t cap) {
    unsigned __int128 size = 1;
    for (unsigned j = 0; j < l; ++j) {
        size *= p;
        if (size > cap) {
            throw std::invalid_argument("family of size p^l = " + std::to_string(p) + "^" +
                                        std::to_string(l) + " exceeds enumeration cap " +
                                        std::to_string(cap));
        }
    }
    return static_cast<uint64_t>(size);
}

}  // namespace

FamilyEnumerator::FamilyEnumerator(FieldParams field, unsigned l, uint64_t cap)
    : field_(field), l_(l), size_(0) {
    if (l < 1) throw std::invalid_argument("FamilyEnumerator: l must be >= 1");
    size_ = family_size_checked(field_.p, l_, cap);
}

std::vector<uint64_t> FamilyEnumerator::coeffs_at(uint64_t index) const {
    if (index >= size_) throw std::out_of_range("FamilyEnumerator: index past family size");
    std::vector<uint64_t> coeffs(l_);
    for (unsigned j = l_; j-- > 0;) {
        coeffs[j] = index % field_.p;
        index /= field_.p;
    }
    return coeffs;
}

PolyHashFunction FamilyEnumerator::at(uint64_t index) const {
    return PolyHashFunction(field_, coeffs_at(index), index);
}

bool IndependenceCertificate::uniform() const {
    for (uint64_t c : counts) {
        if (c != expected_count) return false;
    }
    return true;
}

IndependenceCertificate independence_certificate(const FieldParams& field, unsigned l,
                                                 std::span<const uint64_t> points, uint64_t cap) {
    if (field.u != field.p) {
        throw std::invalid_argument("independence_certificate: only u = p configurations are certified");
    }
    if (points.empty() || points.size() > l) {
        throw std::invalid_argument("independence_certificate: needs 1 <= #points <= l");
    }
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i] >= field.u) {
            throw std::invalid_argument("independence_certificate: point outside [0, u)");
        }
        for (size_t j = i + 1; j < points.size(); ++j) {
            if (points[i] == points[j]) {
                throw std::invalid_argument("independence_certificate: points must be distinct");
            }
        }
    }

    const unsigned j = static_cast<unsigned>(points.size());
    const uint64_t table_size = family_size_checked(field.p, j, cap);
    FamilyEnumerator family(field, l, cap);

    IndependenceCertificate cert;
    cert.points.assign(points.begin(), points.end());
    cert.family_size = family.size();
    cert.expected_count = family.size() / table_size;  // p^(l-j)
    cert.counts.assign(table_size, 0);

    for (uint64_t idx = 0; idx < family.size(); ++idx) {
        const PolyHashFunction h = family.at(idx);
        uint64_t slot = 0;
        for (uint64_t pt : points) slot = slot * field.p + h(pt);
        ++cert.counts[slot];
    }
    return cert;
}

}  // namespace dkmw
