#include "dkmw/sketch.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace dkmw {

HashedPoint rank_k(std::span<const HashedPoint> points, size_t k) {
    if (k < 1 || k > points.size()) {
        throw std::invalid_argument("rank_k: k must be in [1, #points]");
    }
    std::vector<HashedPoint> work(points.begin(), points.end());
    std::nth_element(work.begin(), work.begin() + (k - 1), work.end());
    return work[k - 1];
}

std::vector<HashedPoint> min_k(std::span<const HashedPoint> points, size_t k) {
    std::vector<HashedPoint> work(points.begin(), points.end());
    if (k < work.size()) {
        std::nth_element(work.begin(), work.begin() + k, work.end());
        work.resize(k);
    }
    std::sort(work.begin(), work.end());
    return work;
}

bool dkm_event(std::span<const HashedPoint> x_points, std::span<const HashedPoint> y_points,
               size_t d, size_t k) {
    if (y_points.size() != d) throw std::invalid_argument("dkm_event: |Y| must equal d");
    if (d < 1 || d > k) throw std::invalid_argument("dkm_event: needs 1 <= d <= k");
    if (x_points.size() + d < k) {
        throw std::invalid_argument("dkm_event: |X| + d must be at least k");
    }
    std::unordered_set<uint64_t> x_ids;
    x_ids.reserve(x_points.size() * 2);
    for (const HashedPoint& p : x_points) x_ids.insert(p.element);
    for (const HashedPoint& p : y_points) {
        if (x_ids.contains(p.element)) {
            throw std::invalid_argument("dkm_event: X and Y must be element-disjoint");
        }
    }

    const size_t t = k - d + 1;
    if (t > x_points.size()) return true;  // k = |X| + d: everything is in the bottom-k
    const HashedPoint y_max = *std::max_element(y_points.begin(), y_points.end());
    size_t below = 0;
    for (const HashedPoint& p : x_points) {
        if (p < y_max && ++below >= t) return false;
    }
    return true;
}

BottomKSketch::BottomKSketch(uint64_t k, uint64_t function_id) : k_(k), function_id_(function_id) {
    if (k_ < 1) throw std::invalid_argument("BottomKSketch: k must be >= 1");
    entries_.reserve(k_);
}

BottomKSketch BottomKSketch::from_entries(uint64_t k, uint64_t function_id,
                                          std::vector<HashedPoint> entries, uint64_t source_count) {
    BottomKSketch s(k, function_id);
    if (entries.size() > k) throw std::invalid_argument("BottomKSketch: more entries than capacity");
    if (!std::is_sorted(entries.begin(), entries.end()) ||
        std::adjacent_find(entries.begin(), entries.end()) != entries.end()) {
        throw std::invalid_argument("BottomKSketch: entries must be strictly increasing");
    }
    s.entries_ = std::move(entries);
    s.source_count_ = source_count;
    return s;
}

void BottomKSketch::insert(uint64_t element, const PolyHashFunction& h) {
    if (h.function_id() != function_id_) {
        throw std::invalid_argument("BottomKSketch: hash function id does not match the sketch");
    }
    insert_hashed({h(element), element});
}

void BottomKSketch::insert_hashed(HashedPoint p) {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), p);
    if (it != entries_.end() && *it == p) return;  // already present
    if (entries_.size() < k_) {
        entries_.insert(it, p);
        ++source_count_;
    } else if (p < entries_.back()) {
        entries_.pop_back();
        entries_.insert(std::lower_bound(entries_.begin(), entries_.end(), p), p);
        ++source_count_;
    }
}

BottomKSketch merge(const BottomKSketch& a, const BottomKSketch& b) {
    if (a.k() != b.k()) {
        throw std::invalid_argument("merge: sketch capacities differ");
    }
    if (a.function_id() != b.function_id()) {
        throw std::invalid_argument("merge: sketches built under different hash functions");
    }
    std::vector<HashedPoint> joined;
    joined.reserve(a.entries().size() + b.entries().size());
    std::set_union(a.entries().begin(), a.entries().end(), b.entries().begin(), b.entries().end(),
                   std::back_inserter(joined));
    if (joined.size() > a.k()) joined.resize(a.k());
    return BottomKSketch::from_entries(a.k(), a.function_id(), std::move(joined),
                                       a.source_count() + b.source_count());
}

}  // namespace dkmw
