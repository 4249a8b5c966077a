#include "cda/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cda/error.hpp"

namespace cda {

namespace {

void put_le(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffU);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const std::string& name, const ScalarField& f) {
  if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
    throw ValidationError("snapshot name must be a non-empty token", errc::kInvalidArgument);
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open snapshot for writing: " + path.string(), errc::kIo);
  const Grid& g = f.grid;
  os << "CDAFLD v1 " << name << ' ' << g.nx << ' ' << g.ny << ' ' << g.nz << ' ' << fmt(g.lx) << ' ' << fmt(g.ly)
     << '\n';
  for (double v : f.v) put_le(os, v);
  if (!os) throw ValidationError("write failed: " + path.string(), errc::kIo);
}

Snapshot read_snapshot(const std::filesystem::path& path, HorizontalBC bc) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("snapshot not found: " + path.string(), errc::kFileNotFound);
  std::string header;
  std::getline(is, header);
  std::istringstream hs(header);
  std::string magic, version;
  Snapshot s;
  Grid g;
  g.horizontal_bc = bc;
  if (!(hs >> magic >> version >> s.name >> g.nx >> g.ny >> g.nz >> g.lx >> g.ly) || magic != "CDAFLD" ||
      version != "v1") {
    throw ValidationError("malformed snapshot header in " + path.string(), errc::kIo);
  }
  g.validate();
  std::vector<unsigned char> raw(g.size() * 8);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(is.gcount()) != raw.size()) {
    throw ValidationError("truncated snapshot payload in " + path.string(), errc::kIo);
  }
  s.field = ScalarField(g);
  for (std::size_t i = 0; i < g.size(); ++i) s.field.v[i] = get_le(raw.data() + 8 * i);
  return s;
}

}  // namespace cda
