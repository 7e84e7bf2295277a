#pragma once

#include <utility>

namespace bmg::pum {

struct Rect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// Regular-grid cover of the unit square: 2^level x 2^level cells, each patch
// is its cell scaled by `stretch` about the cell center.  For stretch < 2 a
// patch overlaps only the patches of neighboring cells.
class Cover {
 public:
  Cover() = default;
  Cover(int level, double stretch);

  int level() const { return level_; }
  double stretch() const { return stretch_; }
  int cells_per_side() const { return nside_; }
  int patches() const { return nside_ * nside_; }
  double cell_size() const { return h_; }

  int index(int ix, int iy) const { return iy * nside_ + ix; }
  std::pair<int, int> coords(int i) const { return {i % nside_, i / nside_}; }

  Rect cell(int i) const;
  Rect patch(int i) const;

  // Whether the patch support reaches the boundary of the unit square.
  bool touches_boundary(int i) const;

  // Patches whose closed support contains (x, y); at most 4. Returns count.
  int patches_at(double x, double y, int out[4]) const;

 private:
  int level_ = 0;
  int nside_ = 1;
  double h_ = 1.0;
  double stretch_ = 1.3;
};

}  // namespace bmg::pum
