#pragma once

#include <iosfwd>
#include <string>

#include "fpp/field.hpp"

namespace fpp {

// Binary field dump: a 32-byte little-endian header
//   0  "FPBW"      4  version u16   6  kind u8   7  n u8
//   8  Gamma u32  12  reserved u32 (zero)
//  16  origin.x i64  24  origin.y i64
// followed by the values as little-endian IEEE-754 doubles, row-major.
inline constexpr std::uint16_t kFieldDumpVersion = 1;
inline constexpr std::size_t kFieldHeaderBytes = 32;

void write_field(std::ostream& out, const FieldSample& field);
FieldSample read_field(std::istream& in);

void write_field_file(const std::string& path, const FieldSample& field);
FieldSample read_field_file(const std::string& path);

}  // namespace fpp
