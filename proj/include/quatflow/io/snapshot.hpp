#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "quatflow/errors.hpp"
#include "quatflow/field.hpp"

namespace quatflow::io {

/// Binary field snapshot, all integers and floats little-endian:
///
///   "QFLD" | u16 version | u8 dim | u32 size x dim | f64 length x dim |
///   u8 representation | f64 payload (all w, then x, y, z) | u64 checksum
///
/// The checksum is 64-bit FNV-1a over the payload bytes.
inline constexpr std::uint16_t kSnapshotVersion = 1;

enum class SnapshotErrorKind { io, bad_magic, version_mismatch, truncated, checksum_mismatch, dimension_mismatch, bad_header };

class SnapshotError : public Error {
 public:
  SnapshotError(SnapshotErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  SnapshotErrorKind kind() const noexcept { return kind_; }

 private:
  SnapshotErrorKind kind_;
};

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t size);

/// Physical fields only; throws RepresentationError otherwise.
std::vector<std::uint8_t> encode_snapshot(const QField& field);
QField decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const QField& field, const std::filesystem::path& path);
QField read_snapshot(const std::filesystem::path& path);

/// As read_snapshot, but rejects a grid other than `expected` with a
/// dimension_mismatch error naming both shapes.
QField read_snapshot(const std::filesystem::path& path, const GridSpec& expected);

}  // namespace quatflow::io
