#include "blockmg/block_layout.hpp"

#include <stdexcept>
#include <utility>

namespace bmg {

BlockLayout::BlockLayout(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  offsets_.reserve(sizes_.size());
  dim_ = 0;
  for (int m : sizes_) {
    if (m < 1) throw std::invalid_argument("BlockLayout: block sizes must be >= 1");
    offsets_.push_back(dim_);
    dim_ += m;
  }
}

BlockLayout BlockLayout::scalar(int n) { return uniform(n, 1); }

BlockLayout BlockLayout::uniform(int n, int m) {
  return BlockLayout(std::vector<int>(static_cast<std::size_t>(n), m));
}

}  // namespace bmg
