#pragma once

#include <span>
#include <vector>

namespace bmg {

class BlockSparseMatrix;

// Lower-triangular block sparsity pattern containing the diagonal.  Row i is
// kept sorted, so its last entry is always the diagonal index i.
class LowerPattern {
 public:
  LowerPattern() = default;
  explicit LowerPattern(int n);  // diagonal-only

  static LowerPattern diagonal(int n) { return LowerPattern(n); }
  static LowerPattern full(int n);
  // Lower triangle of the stored block pattern of a square matrix.
  static LowerPattern from_matrix(const BlockSparseMatrix& a);

  int rows() const { return static_cast<int>(rows_.size()); }
  // Sorted row including the diagonal index.
  std::span<const int> row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  // Sorted row without the diagonal index.
  std::span<const int> strict_row(int i) const {
    const auto& r = rows_[static_cast<std::size_t>(i)];
    return {r.data(), r.size() - 1};
  }
  bool contains(int i, int j) const;
  // Adds (i, j) with j < i; no-op if present.
  void add(int i, int j);

  std::size_t entries() const;

 private:
  std::vector<std::vector<int>> rows_;
};

// Unordered symmetric block pattern (e.g. the structure of F^T S^-1 F).
class BlockPattern {
 public:
  BlockPattern() = default;
  explicit BlockPattern(int n) : rows_(static_cast<std::size_t>(n)) {}

  int rows() const { return static_cast<int>(rows_.size()); }
  std::span<const int> row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  bool contains(int i, int j) const;
  void add_symmetric(int i, int j);

  std::size_t entries() const;

 private:
  void add_one(int i, int j);

  std::vector<std::vector<int>> rows_;
};

}  // namespace bmg
