#include "quatflow/io/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace quatflow::io {

namespace {

constexpr char kMagic[4] = {'Q', 'F', 'L', 'D'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  }
  template <typename T>
  void le(T value) {
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    bytes(buf, sizeof(T));
  }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& data) : data_(data) {}

  template <typename T>
  T le(const char* what) {
    need(sizeof(T), what);
    std::uint8_t buf[sizeof(T)];
    std::memcpy(buf, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
  }
  void need(std::size_t n, const char* what) const {
    if (data_.size() - pos_ < n) {
      throw SnapshotError(SnapshotErrorKind::truncated, std::string("snapshot truncated while reading ") + what);
    }
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t size) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> encode_snapshot(const QField& field) {
  field.require(Representation::physical, "write_snapshot");
  const GridSpec& g = field.grid();
  Writer w;
  w.bytes(kMagic, 4);
  w.le<std::uint16_t>(kSnapshotVersion);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) w.le<std::uint32_t>(static_cast<std::uint32_t>(g.sizes[a]));
  for (int a = 0; a < g.dim; ++a) w.le<double>(g.lengths[a]);
  w.le<std::uint8_t>(static_cast<std::uint8_t>(field.repr()));
  const std::size_t payload_start = w.out.size();
  for (int c = 0; c < QField::kComponents; ++c) {
    const Eigen::ArrayXd& d = field.real(c);
    for (Index s = 0; s < d.size(); ++s) w.le<double>(d[s]);
  }
  const std::uint64_t sum = fnv1a64(w.out.data() + payload_start, w.out.size() - payload_start);
  w.le<std::uint64_t>(sum);
  return std::move(w.out);
}

QField decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(4, "magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw SnapshotError(SnapshotErrorKind::bad_magic, "not a QFLD snapshot (bad magic)");
  r.le<std::uint32_t>("magic");
  const auto version = r.le<std::uint16_t>("version");
  if (version != kSnapshotVersion) {
    throw SnapshotError(SnapshotErrorKind::version_mismatch, "snapshot format version " + std::to_string(version) +
                                                                 " is not supported (expected " +
                                                                 std::to_string(kSnapshotVersion) + ")");
  }
  GridSpec g;
  g.dim = r.le<std::uint8_t>("dim");
  if (g.dim != 2 && g.dim != 3) {
    throw SnapshotError(SnapshotErrorKind::bad_header, "snapshot dim " + std::to_string(g.dim) + " is invalid");
  }
  g.sizes = {1, 1, 1};
  g.lengths = {1.0, 1.0, 1.0};
  for (int a = 0; a < g.dim; ++a) g.sizes[a] = static_cast<int>(r.le<std::uint32_t>("sizes"));
  for (int a = 0; a < g.dim; ++a) g.lengths[a] = r.le<double>("domain lengths");
  try {
    g.validate();
  } catch (const ConfigurationError& e) {
    throw SnapshotError(SnapshotErrorKind::bad_header, std::string("snapshot header: ") + e.what());
  }
  const auto repr = r.le<std::uint8_t>("representation");
  if (repr != static_cast<std::uint8_t>(Representation::physical)) {
    throw SnapshotError(SnapshotErrorKind::bad_header, "snapshot representation tag must be physical");
  }
  const std::size_t payload_bytes = static_cast<std::size_t>(g.points()) * QField::kComponents * sizeof(double);
  r.need(payload_bytes + sizeof(std::uint64_t), "payload");
  const std::size_t payload_start = r.pos();
  QField f(g, Representation::physical);
  for (int c = 0; c < QField::kComponents; ++c) {
    Eigen::ArrayXd& d = f.real(c);
    for (Index s = 0; s < d.size(); ++s) d[s] = r.le<double>("payload");
  }
  const std::uint64_t expected = fnv1a64(bytes.data() + payload_start, payload_bytes);
  const auto stored = r.le<std::uint64_t>("checksum");
  if (stored != expected) throw SnapshotError(SnapshotErrorKind::checksum_mismatch, "snapshot checksum mismatch");
  if (r.remaining() != 0) throw SnapshotError(SnapshotErrorKind::bad_header, "trailing bytes after snapshot checksum");
  return f;
}

void write_snapshot(const QField& field, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_snapshot(field);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError(SnapshotErrorKind::io, "cannot write snapshot '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError(SnapshotErrorKind::io, "failed writing snapshot '" + path.string() + "'");
}

QField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError(SnapshotErrorKind::io, "cannot open snapshot '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

QField read_snapshot(const std::filesystem::path& path, const GridSpec& expected) {
  QField f = read_snapshot(path);
  if (!(f.grid() == expected)) {
    throw SnapshotError(SnapshotErrorKind::dimension_mismatch, "snapshot grid " + f.grid().shape_string() +
                                                                   " does not match expected grid " +
                                                                   expected.shape_string());
  }
  return f;
}

}  // namespace quatflow::io
