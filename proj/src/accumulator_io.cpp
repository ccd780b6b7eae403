#include "hsv/accumulator_io.hpp"

#include "hsv/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace hsv {

namespace {

constexpr char kMagic[8] = {'H', 'S', 'V', 'A', 'C', 'C', '1', '\0'};

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((x >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return out;
  }
  return x;
}

void put_u64(std::ostream& os, std::uint64_t x) {
  x = to_little(x);
  char buf[8];
  std::memcpy(buf, &x, 8);
  os.write(buf, 8);
}

std::uint64_t get_u64(std::istream& is) {
  char buf[8];
  if (!is.read(buf, 8)) throw Error(ErrorCode::Io, "truncated accumulator file");
  std::uint64_t x;
  std::memcpy(&x, buf, 8);
  return to_little(x);
}

}  // namespace

void write_accumulators(std::ostream& os, const std::vector<PathAccumulators>& paths) {
  os.write(kMagic, sizeof kMagic);
  put_u64(os, paths.size());
  for (const auto& p : paths) {
    for (double v : p.to_array()) put_u64(os, std::bit_cast<std::uint64_t>(v));
  }
  if (!os) throw Error(ErrorCode::Io, "failed writing accumulator stream");
}

std::vector<PathAccumulators> read_accumulators(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw Error(ErrorCode::Io, "not an accumulator file (bad magic)");
  }
  const std::uint64_t count = get_u64(is);
  std::vector<PathAccumulators> out;
  out.reserve(static_cast<std::size_t>(count));
  std::array<double, PathAccumulators::kFieldCount> record{};
  for (std::uint64_t i = 0; i < count; ++i) {
    for (auto& v : record) v = std::bit_cast<double>(get_u64(is));
    out.push_back(PathAccumulators::from_array(record));
  }
  return out;
}

void write_accumulators(const std::filesystem::path& file, const std::vector<PathAccumulators>& paths) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + file.string() + " for writing");
  write_accumulators(os, paths);
}

std::vector<PathAccumulators> read_accumulators(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + file.string());
  return read_accumulators(is);
}

}  // namespace hsv
