#pragma once

#include "potflow/solver.hpp"

#include <iosfwd>
#include <string>

namespace potflow {

/// Columns x[,y],rho,v[,w][,E] (gas models) or x,u (Burgers); velocities
/// are primitive, E is the full-Euler energy density. Values print in the
/// shortest form that reads back exactly.
void write_field_csv(std::ostream& out, const Field& field);

/// Binary snapshot: a 64-byte little-endian header
///   char[8] magic "PFLOW1\0\0", u32 dims, u32 model tag, u64 nx, u64 ny,
///   f64 lx, f64 ly, f64 time, f64 gamma
/// followed by nx*ny*components f64 conserved values, row-major [j][i][k].
void write_field_binary(std::ostream& out, const Field& field);
Field read_field_binary(std::istream& in);

inline constexpr std::size_t kBinaryHeaderBytes = 64;

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace potflow
