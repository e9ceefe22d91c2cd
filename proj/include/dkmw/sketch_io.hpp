#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "dkmw/estimators.hpp"

namespace dkmw {

// Binary sketch file, all integers unsigned 64-bit little-endian:
//   magic   8 bytes "DKMWSK01"
//   version u64 (currently 1)
//   p, u, l, k, r, d   u64 each
//   r times: seed u64, entry_count u64, entry_count x (value u64, element u64)
// Entries are strictly increasing per sketch. tau is not stored; loaded
// bundles report tau = 0 and no multiplicity data.
inline constexpr char kSketchMagic[8] = {'D', 'K', 'M', 'W', 'S', 'K', '0', '1'};
inline constexpr uint64_t kSketchFormatVersion = 1;

void save_bundle(const SketchBundle& bundle, std::ostream& os);
void save_bundle(const SketchBundle& bundle, const std::filesystem::path& path);

// Throws std::runtime_error naming the offending field on malformed input.
SketchBundle load_bundle(std::istream& is);
SketchBundle load_bundle(const std::filesystem::path& path);

}  // namespace dkmw
