#pragma once

#include <vector>

namespace bmg {

// Partition of {0..N-1} into n contiguous blocks of sizes m_i >= 1.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<int> sizes);

  static BlockLayout scalar(int n);          // n blocks of size 1
  static BlockLayout uniform(int n, int m);  // n blocks of size m

  int blocks() const { return static_cast<int>(sizes_.size()); }
  int dim() const { return dim_; }
  int size(int i) const { return sizes_[i]; }
  int offset(int i) const { return offsets_[i]; }
  const std::vector<int>& sizes() const { return sizes_; }

  bool operator==(const BlockLayout& other) const { return sizes_ == other.sizes_; }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

}  // namespace bmg
