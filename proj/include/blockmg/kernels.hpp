#pragma once

#include <span>

#include "blockmg/block_matrix.hpp"

namespace bmg {

// Dense restriction B[I, J]; absent blocks materialize as zeros and the
// ordering follows the given index sequences.
DenseBlock extract(const BlockSparseMatrix& a, std::span<const int> i_set,
                   std::span<const int> j_set);

// y = A x
void spmv(const BlockSparseMatrix& a, const Vector& x, Vector& y);
BlockVector spmv(const BlockSparseMatrix& a, const BlockVector& x);

// y = A^T x
void spmv_transpose(const BlockSparseMatrix& a, const Vector& x, Vector& y);

// C = A B
BlockSparseMatrix multiply(const BlockSparseMatrix& a, const BlockSparseMatrix& b);

// C = P^T B
BlockSparseMatrix transpose_multiply(const BlockSparseMatrix& p, const BlockSparseMatrix& b);

// F A F^T, stored exactly symmetric; blocks with exactly zero Frobenius norm
// are dropped.
BlockSparseMatrix triple_product(const BlockSparseMatrix& f, const BlockSparseMatrix& a);

DenseBlock to_dense(const BlockSparseMatrix& a);
BlockSparseMatrix block_diagonal(const BlockSparseMatrix& a);

}  // namespace bmg
