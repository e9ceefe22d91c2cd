#include "dkmw/sketch_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace dkmw {

namespace {

void put_u64(std::ostream& os, uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(v >> (8 * i));
    os.write(buf, 8);
}

uint64_t get_u64(std::istream& is, const char* field) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8)) {
        throw std::runtime_error(std::string("sketch file: unexpected end of file reading ") + field);
    }
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
}

}  // namespace

void save_bundle(const SketchBundle& bundle, std::ostream& os) {
    os.write(kSketchMagic, sizeof(kSketchMagic));
    put_u64(os, kSketchFormatVersion);
    put_u64(os, bundle.params.field.p);
    put_u64(os, bundle.params.field.u);
    put_u64(os, bundle.params.l);
    put_u64(os, bundle.params.k);
    put_u64(os, bundle.r());
    put_u64(os, bundle.params.d);
    for (const BottomKSketch& sketch : bundle.sketches) {
        put_u64(os, sketch.function_id());
        put_u64(os, sketch.entries().size());
        for (const HashedPoint& p : sketch.entries()) {
            put_u64(os, p.value);
            put_u64(os, p.element);
        }
    }
    if (!os) throw std::runtime_error("sketch file: write failed");
}

void save_bundle(const SketchBundle& bundle, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("sketch file: cannot open " + path.string() + " for writing");
    save_bundle(bundle, os);
}

SketchBundle load_bundle(std::istream& is) {
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kSketchMagic, 8) != 0) {
        throw std::runtime_error("sketch file: bad magic");
    }
    const uint64_t version = get_u64(is, "version");
    if (version != kSketchFormatVersion) {
        throw std::runtime_error("sketch file: unsupported version " + std::to_string(version));
    }
    const uint64_t p = get_u64(is, "p");
    const uint64_t u = get_u64(is, "u");
    const uint64_t l = get_u64(is, "l");
    const uint64_t k = get_u64(is, "k");
    const uint64_t r = get_u64(is, "r");
    const uint64_t d = get_u64(is, "d");

    SketchBundle bundle;
    try {
        bundle.params.field = FieldParams(p, u);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("sketch file: ") + e.what());
    }
    if (l < 1 || l > 64) throw std::runtime_error("sketch file: implausible l");
    if (k < 1) throw std::runtime_error("sketch file: k must be >= 1");
    if (d < 1) throw std::runtime_error("sketch file: d must be >= 1");
    bundle.params.l = static_cast<unsigned>(l);
    bundle.params.k = k;
    bundle.params.d = static_cast<unsigned>(d);

    bundle.sketches.reserve(r);
    std::unordered_set<uint64_t> seeds_seen;
    for (uint64_t j = 0; j < r; ++j) {
        const uint64_t seed = get_u64(is, "sketch seed");
        if (!seeds_seen.insert(seed).second) {
            throw std::runtime_error("sketch file: duplicate sketch seed " + std::to_string(seed));
        }
        const uint64_t count = get_u64(is, "entry count");
        if (count > k) {
            throw std::runtime_error("sketch file: entry count " + std::to_string(count) +
                                     " exceeds k = " + std::to_string(k));
        }
        std::vector<HashedPoint> entries;
        entries.reserve(count);
        for (uint64_t e = 0; e < count; ++e) {
            const uint64_t value = get_u64(is, "entry value");
            const uint64_t element = get_u64(is, "entry element");
            if (value >= u) throw std::runtime_error("sketch file: entry value outside [0, u)");
            if (element >= u) throw std::runtime_error("sketch file: entry element outside [0, u)");
            entries.push_back({value, element});
        }
        const uint64_t source_count = entries.size();
        try {
            bundle.sketches.push_back(
                BottomKSketch::from_entries(k, seed, std::move(entries), source_count));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("sketch file: ") + e.what());
        }
    }
    is.peek();
    if (!is.eof()) throw std::runtime_error("sketch file: trailing bytes after last sketch");
    return bundle;
}

SketchBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("sketch file: cannot open " + path.string());
    return load_bundle(is);
}

}  // namespace dkmw
