#pragma once

#include <string>

#include "kahler/curvature.hpp"

namespace kahler {

inline constexpr int kTensorFormatVersion = 1;
inline constexpr const char* kTensorLayout =
    "row-major i,j,k,l ascending, 1-based indices mapped to 0-based storage";

// JSON text object: format_version, n, layout, entries ((2n)^4 numbers at 17
// significant digits), symmetry_tolerance. Writing then reading reproduces
// the entries bit for bit.
std::string write_tensor(const CurvatureTensor& r, double symmetry_tolerance = kSymmetryTolerance);

struct TensorFile {
  CurvatureTensor tensor;
  double symmetry_tolerance = kSymmetryTolerance;
};

// Throws Parse on malformed input, InvalidDimension for a bad n.
TensorFile read_tensor(const std::string& text);

void save_tensor(const std::string& path, const CurvatureTensor& r,
                 double symmetry_tolerance = kSymmetryTolerance);
// Throws Io when the file cannot be read.
TensorFile load_tensor(const std::string& path);

}  // namespace kahler
