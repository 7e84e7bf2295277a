#include "blockmg/block_matrix.hpp"

#include <stdexcept>
#include <utility>

namespace bmg {

BlockVector::BlockVector(BlockLayout l, Vector v) : layout(std::move(l)), values(std::move(v)) {
  if (values.size() != layout.dim())
    throw std::invalid_argument("BlockVector: value length does not match layout");
}

BlockSparseMatrix::BlockSparseMatrix(BlockLayout rows, BlockLayout cols, bool symmetric)
    : rows_(std::move(rows)), cols_(std::move(cols)), symmetric_(symmetric) {
  if (symmetric_ && !(rows_ == cols_))
    throw std::invalid_argument("BlockSparseMatrix: symmetric matrix must be square");
  data_.resize(static_cast<std::size_t>(rows_.blocks()));
}

BlockSparseMatrix::BlockSparseMatrix(BlockLayout square, bool symmetric)
    : BlockSparseMatrix(square, square, symmetric) {}

BlockSparseMatrix BlockSparseMatrix::identity(const BlockLayout& layout) {
  BlockSparseMatrix a(layout, layout, true);
  for (int i = 0; i < layout.blocks(); ++i)
    a.insert(i, i, DenseBlock::Identity(layout.size(i), layout.size(i)));
  return a;
}

bool BlockSparseMatrix::has(int i, int j) const {
  check_indices(i, j);
  const Row& r = data_[static_cast<std::size_t>(i)];
  return r.find(j) != r.end();
}

const DenseBlock& BlockSparseMatrix::block(int i, int j) const {
  check_indices(i, j);
  const Row& r = data_[static_cast<std::size_t>(i)];
  auto it = r.find(j);
  if (it == r.end()) throw std::out_of_range("BlockSparseMatrix: block not stored");
  return it->second;
}

void BlockSparseMatrix::insert(int i, int j, DenseBlock b) {
  check_indices(i, j);
  if (b.rows() != rows_.size(i) || b.cols() != cols_.size(j))
    throw std::invalid_argument("BlockSparseMatrix: block dimensions do not match layout");
  data_[static_cast<std::size_t>(i)][j] = std::move(b);
}

void BlockSparseMatrix::insert_symmetric(int i, int j, const DenseBlock& b) {
  insert(i, j, b);
  if (i != j) insert(j, i, b.transpose());
}

DenseBlock& BlockSparseMatrix::at_or_zero(int i, int j) {
  check_indices(i, j);
  Row& r = data_[static_cast<std::size_t>(i)];
  auto it = r.find(j);
  if (it == r.end())
    it = r.emplace(j, DenseBlock::Zero(rows_.size(i), cols_.size(j))).first;
  return it->second;
}

void BlockSparseMatrix::erase(int i, int j) {
  check_indices(i, j);
  data_[static_cast<std::size_t>(i)].erase(j);
}

std::size_t BlockSparseMatrix::stored_blocks() const {
  std::size_t n = 0;
  for (const Row& r : data_) n += r.size();
  return n;
}

std::size_t BlockSparseMatrix::stored_scalars() const {
  std::size_t n = 0;
  for (const Row& r : data_)
    for (const auto& [j, b] : r) n += static_cast<std::size_t>(b.size());
  return n;
}

double BlockSparseMatrix::symmetry_error() const {
  if (!square()) return 0.0;
  double err = 0.0;
  for (int i = 0; i < block_rows(); ++i) {
    for (const auto& [j, b] : row(i)) {
      if (!has(j, i)) {
        err = std::max(err, b.cwiseAbs().maxCoeff());
        continue;
      }
      err = std::max(err, (b - DenseBlock(block(j, i).transpose())).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

void BlockSparseMatrix::check_indices(int i, int j) const {
  if (i < 0 || i >= rows_.blocks() || j < 0 || j >= cols_.blocks())
    throw std::out_of_range("BlockSparseMatrix: block index out of range");
}

}  // namespace bmg
