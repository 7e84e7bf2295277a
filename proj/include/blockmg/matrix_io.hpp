#pragma once

#include <stdexcept>
#include <string>

#include "blockmg/block_matrix.hpp"

namespace bmg {

struct IoError : std::runtime_error {
  int line;  // 1-based line number in the offending file, 0 if not line-specific
  IoError(const std::string& msg, int line_ = 0);
};

// Coordinate text format for square block matrices:
//   %%block-matrix <n_rows> <n_cols> <nnz_scalar>
//   i j value                          (1-based scalar triplets)
// plus a sidecar "<path>.blocks" with one block size per line.  All entries of
// every stored block are written (17 significant digits), so a round trip
// reproduces values and pattern exactly.
void write_matrix(const std::string& path, const BlockSparseMatrix& a);
BlockSparseMatrix read_matrix(const std::string& path);

// Plain vector file: N values, one per line, 17 significant digits.
void write_vector(const std::string& path, const Vector& v);
Vector read_vector(const std::string& path);

}  // namespace bmg
