#ifndef COVLAP_FIELD_IO_HPP
#define COVLAP_FIELD_IO_HPP

#include <string>

#include "covlap/fields.hpp"

namespace covlap {

/// Binary field format: 16-byte header (magic "GFLD", u32 n, u32 d, u32
/// reserved zero), followed by n^3 * d little-endian f64 values in the
/// node-major layout. The box size L is not stored; it comes from the
/// configuration that owns the grid.
void write_field(const ScalarField& F, const std::string& path);

/// Read a field written by write_field. The grid and algebra are supplied by
/// the caller and validated against the header.
ScalarField read_field(const std::string& path, const Grid3& grid,
                       const AlgebraPtr& alg);

/// One row per node: x,y,z then the d coefficients.
void write_csv(const ScalarField& F, const std::string& path);

}  // namespace covlap

#endif  // COVLAP_FIELD_IO_HPP
