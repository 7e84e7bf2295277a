#include "blockmg/pattern.hpp"

#include <algorithm>
#include <stdexcept>

#include "blockmg/block_matrix.hpp"

namespace bmg {

LowerPattern::LowerPattern(int n) : rows_(static_cast<std::size_t>(n)) {
  for (int i = 0; i < n; ++i) rows_[static_cast<std::size_t>(i)] = {i};
}

LowerPattern LowerPattern::full(int n) {
  LowerPattern p(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) p.add(i, j);
  return p;
}

LowerPattern LowerPattern::from_matrix(const BlockSparseMatrix& a) {
  if (!a.square()) throw std::invalid_argument("LowerPattern::from_matrix: matrix must be square");
  LowerPattern p(a.block_rows());
  for (int i = 0; i < a.block_rows(); ++i)
    for (const auto& [j, blk] : a.row(i))
      if (j < i) p.add(i, j);
  return p;
}

bool LowerPattern::contains(int i, int j) const {
  const auto& r = rows_[static_cast<std::size_t>(i)];
  return std::binary_search(r.begin(), r.end(), j);
}

void LowerPattern::add(int i, int j) {
  if (j >= i) throw std::invalid_argument("LowerPattern::add: entry must be strictly lower");
  auto& r = rows_[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(r.begin(), r.end(), j);
  if (it != r.end() && *it == j) return;
  r.insert(it, j);
}

std::size_t LowerPattern::entries() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

bool BlockPattern::contains(int i, int j) const {
  const auto& r = rows_[static_cast<std::size_t>(i)];
  return std::binary_search(r.begin(), r.end(), j);
}

void BlockPattern::add_one(int i, int j) {
  auto& r = rows_[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(r.begin(), r.end(), j);
  if (it != r.end() && *it == j) return;
  r.insert(it, j);
}

void BlockPattern::add_symmetric(int i, int j) {
  add_one(i, j);
  if (i != j) add_one(j, i);
}

std::size_t BlockPattern::entries() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

}  // namespace bmg
