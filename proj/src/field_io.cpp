#include "nmx/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian and this reader assumes a matching host");

namespace nmx {
namespace {

constexpr char kMagic[4] = {'N', 'M', 'X', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::int64_t kHeaderBytes = 28;

void put_u32(std::string& buf, std::uint32_t v) { buf.append(reinterpret_cast<char*>(&v), 4); }
void put_f64(std::string& buf, double v) { buf.append(reinterpret_cast<char*>(&v), 8); }

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::runtime_error("field file '" + path + "': " + why);
}

}  // namespace

void write_field(const std::string& path, const VectorField& f, FieldKind kind) {
  std::string header;
  header.reserve(kHeaderBytes);
  header.append(kMagic, 4);
  put_u32(header, kVersion);
  put_u32(header, std::uint32_t(f.grid().n));
  put_f64(header, f.grid().l);
  header.push_back(char(std::uint8_t(kind)));
  header.append(7, '\0');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  out.write(header.data(), std::streamsize(header.size()));
  out.write(reinterpret_cast<const char*>(f.data().data()),
            std::streamsize(sizeof(double) * 3 * f.points()));
  out.flush();
  if (!out) fail(path, "write failed");
}

StoredField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) fail(path, "cannot stat");

  char header[kHeaderBytes];
  if (!in.read(header, kHeaderBytes)) fail(path, "truncated header");
  if (std::memcmp(header, kMagic, 4) != 0) fail(path, "bad magic");
  std::uint32_t version, n32;
  double l;
  std::memcpy(&version, header + 4, 4);
  std::memcpy(&n32, header + 8, 4);
  std::memcpy(&l, header + 12, 8);
  const std::uint8_t kind_byte = std::uint8_t(header[20]);
  for (int i = 21; i < kHeaderBytes; ++i)
    if (header[i] != 0) fail(path, "reserved bytes are not zero");

  if (version != kVersion) fail(path, "unsupported version");
  if (n32 < 4 || n32 > 1024 || n32 % 2 != 0) fail(path, "grid size out of range or odd");
  if (!(l > 0.0) || !std::isfinite(l)) fail(path, "box length must be positive and finite");
  if (kind_byte > 2) fail(path, "unknown field kind");

  const int n = int(n32);
  const std::int64_t expected = kHeaderBytes + 24ll * n * n * n;
  if (std::int64_t(size) != expected) fail(path, "size does not match the header");

  StoredField out{VectorField(GridSpec(n, l)), FieldKind(kind_byte)};
  if (!in.read(reinterpret_cast<char*>(out.field.data().data()), expected - kHeaderBytes))
    fail(path, "truncated payload");
  if (!out.field.all_finite()) fail(path, "payload holds non-finite values");
  return out;
}

void export_slice(const std::string& path, const VectorField& f, char axis, int index) {
  const GridSpec& g = f.grid();
  const int n = g.n;
  int ax;
  switch (axis) {
    case 'x': ax = 0; break;
    case 'y': ax = 1; break;
    case 'z': ax = 2; break;
    default: throw std::invalid_argument("export_slice: axis must be x, y or z");
  }
  if (index < 0 || index >= n) throw std::invalid_argument("export_slice: index out of range");

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("export_slice: cannot open '" + path + "'");
  out << "i,j,c1,c2,c3,magnitude\n";
  char line[320];
  // (i, j) are the remaining axes in (x, y, z) order, i fastest
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int jx, jy, jz;
      if (ax == 0) {
        jx = index; jy = i; jz = j;
      } else if (ax == 1) {
        jx = i; jy = index; jz = j;
      } else {
        jx = i; jy = j; jz = index;
      }
      const std::int64_t idx = g.idx(jx, jy, jz);
      const double c1 = f.comp(0)[idx], c2 = f.comp(1)[idx], c3 = f.comp(2)[idx];
      const double mag = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
      std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", i, j, c1, c2, c3, mag);
      out << line;
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("export_slice: write failed for '" + path + "'");
}

}  // namespace nmx
