#include "anls/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace anls {

namespace {

constexpr char kMagic[4] = {'A', 'N', 'L', 'S'};

struct Header {
  char magic[4];
  std::uint32_t version;
  std::uint32_t nx;
  std::uint32_t ny;
  double lx;
  double ly;
};
static_assert(sizeof(Header) == 32);

void write_header(std::ofstream& out, const GridSpec& g) {
  Header h;
  std::memcpy(h.magic, kMagic, 4);
  h.version = kFieldFormatVersion;
  h.nx = static_cast<std::uint32_t>(g.nx);
  h.ny = static_cast<std::uint32_t>(g.ny);
  h.lx = g.lx;
  h.ly = g.ly;
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
}

GridSpec read_header(std::ifstream& in, const std::filesystem::path& path) {
  Header h;
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in || std::memcmp(h.magic, kMagic, 4) != 0)
    fail_io("not a field dump: " + path.string());
  if (h.version != kFieldFormatVersion)
    fail_io("unsupported field dump version in " + path.string());
  GridSpec g;
  g.nx = static_cast<int>(h.nx);
  g.ny = static_cast<int>(h.ny);
  g.lx = h.lx;
  g.ly = h.ly;
  g.validate();
  return g;
}

}  // namespace

void write_field(const std::filesystem::path& path, const RealField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_io("cannot open " + path.string() + " for writing");
  write_header(out, f.grid);
  out.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!out) fail_io("short write to " + path.string());
}

void write_field(const std::filesystem::path& path, const ComplexField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_io("cannot open " + path.string() + " for writing");
  write_header(out, f.grid);
  out.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(cdouble)));
  if (!out) fail_io("short write to " + path.string());
}

bool field_is_complex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path.string());
  GridSpec g = read_header(in, path);
  auto payload = std::filesystem::file_size(path) - sizeof(Header);
  if (payload == g.size() * sizeof(double)) return false;
  if (payload == g.size() * sizeof(cdouble)) return true;
  fail_io("field dump payload size mismatch in " + path.string());
}

RealField read_real_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path.string());
  GridSpec g = read_header(in, path);
  RealField f(g);
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!in) fail_io("short read from " + path.string());
  return f;
}

ComplexField read_complex_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path.string());
  GridSpec g = read_header(in, path);
  ComplexField f(g);
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(cdouble)));
  if (!in) fail_io("short read from " + path.string());
  return f;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace anls
