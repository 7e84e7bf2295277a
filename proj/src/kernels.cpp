#include "blockmg/kernels.hpp"

#include <stdexcept>

namespace bmg {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

DenseBlock extract(const BlockSparseMatrix& a, std::span<const int> i_set,
                   std::span<const int> j_set) {
  int rows = 0, cols = 0;
  for (int i : i_set) {
    if (i < 0 || i >= a.block_rows()) throw std::out_of_range("extract: row index out of range");
    rows += a.row_layout().size(i);
  }
  for (int j : j_set) {
    if (j < 0 || j >= a.block_cols()) throw std::out_of_range("extract: column index out of range");
    cols += a.col_layout().size(j);
  }
  DenseBlock out = DenseBlock::Zero(rows, cols);
  int r = 0;
  for (int i : i_set) {
    int c = 0;
    for (int j : j_set) {
      if (a.has(i, j)) out.block(r, c, a.row_layout().size(i), a.col_layout().size(j)) = a.block(i, j);
      c += a.col_layout().size(j);
    }
    r += a.row_layout().size(i);
  }
  return out;
}

void spmv(const BlockSparseMatrix& a, const Vector& x, Vector& y) {
  require(x.size() == a.col_layout().dim(), "spmv: vector length does not match layout");
  y.setZero(a.row_layout().dim());
  for (int i = 0; i < a.block_rows(); ++i) {
    auto yi = y.segment(a.row_layout().offset(i), a.row_layout().size(i));
    for (const auto& [j, blk] : a.row(i))
      yi.noalias() += blk * x.segment(a.col_layout().offset(j), a.col_layout().size(j));
  }
}

BlockVector spmv(const BlockSparseMatrix& a, const BlockVector& x) {
  require(x.layout == a.col_layout(), "spmv: vector layout does not match matrix");
  BlockVector y(a.row_layout());
  spmv(a, x.values, y.values);
  return y;
}

void spmv_transpose(const BlockSparseMatrix& a, const Vector& x, Vector& y) {
  require(x.size() == a.row_layout().dim(), "spmv_transpose: vector length does not match layout");
  y.setZero(a.col_layout().dim());
  for (int i = 0; i < a.block_rows(); ++i) {
    auto xi = x.segment(a.row_layout().offset(i), a.row_layout().size(i));
    for (const auto& [j, blk] : a.row(i))
      y.segment(a.col_layout().offset(j), a.col_layout().size(j)).noalias() += blk.transpose() * xi;
  }
}

BlockSparseMatrix multiply(const BlockSparseMatrix& a, const BlockSparseMatrix& b) {
  require(a.col_layout() == b.row_layout(), "multiply: inner layouts do not match");
  BlockSparseMatrix c(a.row_layout(), b.col_layout());
  for (int i = 0; i < a.block_rows(); ++i) {
    for (const auto& [k, a_ik] : a.row(i)) {
      for (const auto& [j, b_kj] : b.row(k)) c.at_or_zero(i, j).noalias() += a_ik * b_kj;
    }
  }
  return c;
}

BlockSparseMatrix transpose_multiply(const BlockSparseMatrix& p, const BlockSparseMatrix& b) {
  require(p.row_layout() == b.row_layout(), "transpose_multiply: row layouts do not match");
  BlockSparseMatrix c(p.col_layout(), b.col_layout());
  for (int i = 0; i < p.block_rows(); ++i) {
    for (const auto& [k, p_ik] : p.row(i)) {
      for (const auto& [j, b_ij] : b.row(i)) c.at_or_zero(k, j).noalias() += p_ik.transpose() * b_ij;
    }
  }
  return c;
}

BlockSparseMatrix triple_product(const BlockSparseMatrix& f, const BlockSparseMatrix& a) {
  require(f.square() && a.square() && f.row_layout() == a.row_layout(),
          "triple_product: layouts must be square and compatible");
  require(a.symmetric(), "triple_product: A must be symmetric");
  const BlockSparseMatrix h = multiply(f, a);
  BlockSparseMatrix c(f.row_layout(), f.row_layout(), true);
  for (int i = 0; i < f.block_rows(); ++i) {
    for (int j = 0; j <= i; ++j) {
      const auto& hrow = h.row(i);
      const auto& frow = f.row(j);
      DenseBlock blk = DenseBlock::Zero(f.row_layout().size(i), f.row_layout().size(j));
      bool any = false;
      auto hit = hrow.begin();
      auto fit = frow.begin();
      while (hit != hrow.end() && fit != frow.end()) {
        if (hit->first < fit->first) {
          ++hit;
        } else if (fit->first < hit->first) {
          ++fit;
        } else {
          blk.noalias() += hit->second * fit->second.transpose();
          any = true;
          ++hit;
          ++fit;
        }
      }
      if (i == j) blk = 0.5 * (blk + DenseBlock(blk.transpose()));
      if (any && blk.squaredNorm() != 0.0) c.insert_symmetric(i, j, blk);
    }
  }
  return c;
}

DenseBlock to_dense(const BlockSparseMatrix& a) {
  DenseBlock out = DenseBlock::Zero(a.row_layout().dim(), a.col_layout().dim());
  for (int i = 0; i < a.block_rows(); ++i)
    for (const auto& [j, blk] : a.row(i))
      out.block(a.row_layout().offset(i), a.col_layout().offset(j), blk.rows(), blk.cols()) = blk;
  return out;
}

BlockSparseMatrix block_diagonal(const BlockSparseMatrix& a) {
  require(a.square(), "block_diagonal: matrix must be square");
  BlockSparseMatrix d(a.row_layout(), a.col_layout(), a.symmetric());
  for (int i = 0; i < a.block_rows(); ++i)
    if (a.has(i, i)) d.insert(i, i, a.block(i, i));
  return d;
}

}  // namespace bmg
