#include "ismf/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace ismf {

namespace {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

template <typename T>
void put(std::ostream& os, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  os.write(bytes, sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  char bytes[sizeof(T)];
  if (!is.read(bytes, sizeof(T))) throw InvalidArgument("read_field: truncated stream");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_field(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  os.write("ISMF", 4);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(g.dim()));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(f.components()));
  put<std::uint16_t>(os, 0);
  for (int a = 0; a < g.dim(); ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(g.cells(a)));
  for (double x : f.values()) put<double>(os, x);
}

void write_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("write_field: cannot open " + path.string());
  write_field(os, f);
}

Field read_field(std::istream& is, const std::vector<double>& extents) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "ISMF", 4) != 0) {
    throw InvalidArgument("read_field: bad magic");
  }
  const int dim = get<std::uint8_t>(is);
  const int comps = get<std::uint8_t>(is);
  (void)get<std::uint16_t>(is);
  if (dim < 1 || dim > 3 || static_cast<std::size_t>(dim) != extents.size()) {
    throw InvalidArgument("read_field: dimension does not match supplied extents");
  }
  std::vector<int> cells(dim);
  for (int a = 0; a < dim; ++a) cells[a] = static_cast<int>(get<std::uint32_t>(is));
  Field f(Grid(extents, cells), comps);
  for (double& x : f.values()) x = get<double>(is);
  return f;
}

Field read_field(const std::filesystem::path& path, const std::vector<double>& extents) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("read_field: cannot open " + path.string());
  return read_field(is, extents);
}

void write_field_csv(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  static const char* axis_names[] = {"x", "y", "z"};
  for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << axis_names[a];
  for (int c = 0; c < f.components(); ++c) os << ",c" << c;
  os << '\n' << std::setprecision(17);
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    const auto x = g.position(cell);
    for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << x[a];
    for (int c = 0; c < f.components(); ++c) os << ',' << f(cell, c);
    os << '\n';
  }
}

}  // namespace ismf
