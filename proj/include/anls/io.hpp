#pragma once

#include <filesystem>
#include <string>

#include "anls/field.hpp"

namespace anls {

inline constexpr std::uint32_t kFieldFormatVersion = 1;

/// Binary dump: 32-byte header {magic "ANLS", version u32, nx u32, ny u32,
/// lx f64, ly f64}, then nx*ny little-endian f64 (real) or interleaved f64
/// pairs (complex), row-major with x as the slow index. The payload size
/// distinguishes real from complex.
void write_field(const std::filesystem::path& path, const RealField& f);
void write_field(const std::filesystem::path& path, const ComplexField& f);

bool field_is_complex(const std::filesystem::path& path);
RealField read_real_field(const std::filesystem::path& path);
ComplexField read_complex_field(const std::filesystem::path& path);

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_double(double x);

/// RFC-4180 quoting: wrap in quotes when the cell contains comma, quote or
/// newline; double embedded quotes.
std::string csv_escape(const std::string& cell);

}  // namespace anls
