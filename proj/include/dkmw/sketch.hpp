#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "dkmw/poly_hash.hpp"

namespace dkmw {

// One hashed element. The ordering is lexicographic on (value, element),
// which stays a strict total order under hash collisions.
struct HashedPoint {
    uint64_t value;
    uint64_t element;

    friend auto operator<=>(const HashedPoint&, const HashedPoint&) = default;
};

// The k-th smallest point, 1-based (k = 1 is the minimum).
HashedPoint rank_k(std::span<const HashedPoint> points, size_t k);

// The k smallest points in ascending order; all of them if fewer than k.
std::vector<HashedPoint> min_k(std::span<const HashedPoint> points, size_t k);

// True iff every point of Y precedes the (k-d+1)-th smallest point of X --
// equivalently, Y lands entirely inside the bottom-k of X u Y. X and Y must
// be element-disjoint with |Y| = d <= k and |X| >= k - d; when |X| = k - d
// the union has exactly k points and the event holds vacuously.
bool dkm_event(std::span<const HashedPoint> x_points, std::span<const HashedPoint> y_points,
               size_t d, size_t k);

// Bottom-k sketch: the k smallest (hash, element) pairs inserted so far
// under one hash function. Entries are strictly increasing. Single writer;
// merging independently built sketches is the parallel aggregation path.
class BottomKSketch {
public:
    BottomKSketch(uint64_t k, uint64_t function_id);

    // Rebuilds a sketch from already-sorted entries (used by the loader).
    static BottomKSketch from_entries(uint64_t k, uint64_t function_id,
                                      std::vector<HashedPoint> entries, uint64_t source_count);

    // Hashes the element and admits it if it belongs to the bottom-k.
    // Re-inserting an element already present is a no-op. The function's id
    // must match the sketch's.
    void insert(uint64_t element, const PolyHashFunction& h);
    void insert_hashed(HashedPoint p);

    uint64_t k() const { return k_; }
    uint64_t function_id() const { return function_id_; }
    const std::vector<HashedPoint>& entries() const { return entries_; }
    bool full() const { return entries_.size() == k_; }

    // Number of accepted inserts (element not already present, value inside
    // the current bottom-k). Diagnostic only: not serialized, not part of
    // equality, not used by the estimators.
    uint64_t source_count() const { return source_count_; }

    friend bool operator==(const BottomKSketch& a, const BottomKSketch& b) {
        return a.k_ == b.k_ && a.function_id_ == b.function_id_ && a.entries_ == b.entries_;
    }

private:
    uint64_t k_;
    uint64_t function_id_;
    uint64_t source_count_ = 0;
    std::vector<HashedPoint> entries_;  // strictly increasing
};

// Sketch of the union of the two source sets. Capacities and function ids
// must match. Commutative, associative, idempotent.
BottomKSketch merge(const BottomKSketch& a, const BottomKSketch& b);

}  // namespace dkmw
