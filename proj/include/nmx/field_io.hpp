#pragma once

#include <cstdint>
#include <string>

#include "nmx/field.hpp"

namespace nmx {

// On-disk field container, little-endian throughout:
//   bytes 0..3   magic "NMX1"
//   u32          format version, currently 1
//   u32          n, points per axis
//   f64          l, box edge length
//   u8           field kind (0 generic, 1 dual, 2 primal)
//   7 bytes      reserved, must be zero
//   3*n^3 f64    payload, component-major, x index fastest
// A reader rejects anything whose size is not exactly 28 + 24*n^3 bytes.
enum class FieldKind : std::uint8_t { generic = 0, dual = 1, primal = 2 };

struct StoredField {
  VectorField field;
  FieldKind kind;
};

void write_field(const std::string& path, const VectorField& f, FieldKind kind);
StoredField read_field(const std::string& path);

// One axis-normal plane as CSV with in-plane indices and the three
// components, 17 significant digits.  axis is 'x', 'y' or 'z'; the two
// index columns are the remaining axes in (x, y, z) order, first column
// fastest.
void export_slice(const std::string& path, const VectorField& f, char axis, int index);

}  // namespace nmx
