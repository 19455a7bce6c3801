#pragma once

#include <iosfwd>
#include <string>

#include "lprec/types.hpp"

namespace lprec {

// Binary matrix container. Layout, all little-endian:
//   bytes 0-3   magic "LPRM"
//   uint32      version (currently 1)
//   uint32      M, uint32 N
//   uint8       ensemble code (0 gaussian, 1 uniform_sphere, 2 external)
//   uint64      seed
//   M*N float64 entries, row-major
void save_matrix(const MeasurementMatrix& m, const std::string& path);
MeasurementMatrix load_matrix(const std::string& path);

void write_matrix(const MeasurementMatrix& m, std::ostream& out);
MeasurementMatrix read_matrix(std::istream& in);

// One matrix row per line, comma separated, '.' decimal separator,
// shortest round-trip formatting.
void save_matrix_csv(const Matrix& m, const std::string& path);

void save_vector_csv(const Vector& v, const std::string& path);
Vector load_vector_csv(const std::string& path);

}  // namespace lprec
