#pragma once

#include <string>
#include <vector>

#include "abelrad/types.hpp"

namespace abelrad {

/// PGM image output, maxval 65535, linear quantization of [0, max(values)];
/// negative values clamp to 0. binary=true writes P5 (big-endian 16-bit
/// samples per the format), otherwise P2 ASCII.
void write_pgm(const std::string& path, const Image& img, bool binary = true);

/// Lossless image CSV: one line per grid row (top row first), full
/// precision. The grid side m is the row count.
void write_image_csv(const std::string& path, const Image& img);
Image read_image_csv(const std::string& path);

/// Sinogram CSV. Three header lines -- "j,s", the p axis as "lo,hi,count",
/// the y1 axis likewise -- then one line per p with the values over y1.
void write_sinogram_csv(const std::string& path, const Sinogram& sino);
Sinogram read_sinogram_csv(const std::string& path);

/// Flat binary cache of a sparse operator: 8-byte magic "ABRSPM01", then
/// rows, cols, nnz and the three arrays, all little-endian 64-bit.
void write_matrix_bin(const std::string& path, const SparseOperator& A);
SparseOperator read_matrix_bin(const std::string& path);

/// Single-column profile CSV (one value per line).
void write_profile_csv(const std::string& path, const std::vector<double>& values);
std::vector<double> read_profile_csv(const std::string& path);

}  // namespace abelrad
