#pragma once

#include <map>
#include <vector>

#include "blockmg/block_layout.hpp"
#include "blockmg/types.hpp"

namespace bmg {

struct BlockVector {
  BlockLayout layout;
  Vector values;

  BlockVector() = default;
  explicit BlockVector(BlockLayout l) : layout(std::move(l)), values(Vector::Zero(layout.dim())) {}
  BlockVector(BlockLayout l, Vector v);

  auto segment(int i) { return values.segment(layout.offset(i), layout.size(i)); }
  auto segment(int i) const { return values.segment(layout.offset(i), layout.size(i)); }
};

// Sparse matrix of dense variable-size blocks.  Rows own ordered maps from
// column index to block, which keeps iteration deterministic.  Symmetric
// matrices store both halves; the flag is a validation contract.
class BlockSparseMatrix {
 public:
  using Row = std::map<int, DenseBlock>;

  BlockSparseMatrix() = default;
  BlockSparseMatrix(BlockLayout rows, BlockLayout cols, bool symmetric = false);
  explicit BlockSparseMatrix(BlockLayout square, bool symmetric = false);

  static BlockSparseMatrix identity(const BlockLayout& layout);

  const BlockLayout& row_layout() const { return rows_; }
  const BlockLayout& col_layout() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool symmetric() const { return symmetric_; }
  void set_symmetric(bool s) { symmetric_ = s; }

  int block_rows() const { return rows_.blocks(); }
  int block_cols() const { return cols_.blocks(); }

  bool has(int i, int j) const;
  const DenseBlock& block(int i, int j) const;  // throws if absent
  const Row& row(int i) const { return data_[static_cast<std::size_t>(i)]; }

  // Inserts (overwrites) block (i, j); dimensions must match the layouts.
  void insert(int i, int j, DenseBlock b);
  // Inserts both (i, j) and its transpose at (j, i).
  void insert_symmetric(int i, int j, const DenseBlock& b);
  // Returns block (i, j), creating it as zero if absent.
  DenseBlock& at_or_zero(int i, int j);
  void erase(int i, int j);
  void clear_row(int i) { data_[static_cast<std::size_t>(i)].clear(); }

  std::size_t stored_blocks() const;
  std::size_t stored_scalars() const;

  // Largest deviation |A_ij - A_ji^T| over stored blocks (validation helper).
  double symmetry_error() const;

 private:
  void check_indices(int i, int j) const;

  BlockLayout rows_, cols_;
  std::vector<Row> data_;
  bool symmetric_ = false;
};

}  // namespace bmg
