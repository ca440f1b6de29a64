#pragma once

#include <filesystem>
#include <iosfwd>

#include "ismf/grid.hpp"

namespace ismf {

/// Binary field dump. Header: magic "ISMF", u8 dim, u8 components,
/// u16 reserved (0), one u32 cell count per axis; then the interleaved
/// values as little-endian f64. The header is 8 + 4*dim bytes (16 in 2D).
void write_field(std::ostream& os, const Field& f);
void write_field(const std::filesystem::path& path, const Field& f);

/// Reads a dump; the grid extents are not stored and must be supplied.
/// Throws InvalidArgument on bad magic, truncated data or a cell-count
/// mismatch with `extents`.
Field read_field(std::istream& is, const std::vector<double>& extents);
Field read_field(const std::filesystem::path& path, const std::vector<double>& extents);

/// One row per cell: x[,y[,z]],c0[,c1,c2].
void write_field_csv(std::ostream& os, const Field& f);

}  // namespace ismf
