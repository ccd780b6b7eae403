#pragma once

#include "hsv/path_engine.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace hsv {

/// Binary accumulator dump: 8-byte magic "HSVACC1\0", little-endian uint64
/// record count, then one record of PathAccumulators::kFieldCount little-endian
/// float64 values per path in PathAccumulators field order.
void write_accumulators(std::ostream& os, const std::vector<PathAccumulators>& paths);
std::vector<PathAccumulators> read_accumulators(std::istream& is);

void write_accumulators(const std::filesystem::path& file, const std::vector<PathAccumulators>& paths);
std::vector<PathAccumulators> read_accumulators(const std::filesystem::path& file);

}  // namespace hsv
