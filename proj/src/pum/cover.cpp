#include "blockmg/pum/cover.hpp"

#include <cmath>
#include <stdexcept>

namespace bmg::pum {

Cover::Cover(int level, double stretch) : level_(level), stretch_(stretch) {
  if (level < 0) throw std::invalid_argument("Cover: level must be >= 0");
  if (!(stretch > 1.0 && stretch < 2.0))
    throw std::invalid_argument("Cover: stretch must lie in (1, 2)");
  nside_ = 1 << level;
  h_ = 1.0 / nside_;
}

Rect Cover::cell(int i) const {
  const auto [ix, iy] = coords(i);
  return {ix * h_, iy * h_, (ix + 1) * h_, (iy + 1) * h_};
}

Rect Cover::patch(int i) const {
  const auto [ix, iy] = coords(i);
  const double half = 0.5 * stretch_ * h_;
  const double cx = (ix + 0.5) * h_;
  const double cy = (iy + 0.5) * h_;
  return {cx - half, cy - half, cx + half, cy + half};
}

bool Cover::touches_boundary(int i) const {
  const auto [ix, iy] = coords(i);
  return ix == 0 || iy == 0 || ix == nside_ - 1 || iy == nside_ - 1;
}

namespace {

// Cells c (along one axis) with |t - (c + 0.5) h| <= stretch h / 2.
int cells_at(double t, double h, double stretch, int nside, int out[2]) {
  const double lo = t / h - 0.5 - 0.5 * stretch;
  const double hi = t / h - 0.5 + 0.5 * stretch;
  int count = 0;
  for (int c = static_cast<int>(std::ceil(lo)); c <= static_cast<int>(std::floor(hi)); ++c) {
    if (c < 0 || c >= nside) continue;
    if (count < 2) out[count] = c;
    ++count;
  }
  return count > 2 ? 2 : count;
}

}  // namespace

int Cover::patches_at(double x, double y, int out[4]) const {
  int cx[2], cy[2];
  const int nx = cells_at(x, h_, stretch_, nside_, cx);
  const int ny = cells_at(y, h_, stretch_, nside_, cy);
  int count = 0;
  for (int b = 0; b < ny; ++b)
    for (int a = 0; a < nx; ++a) out[count++] = index(cx[a], cy[b]);
  return count;
}

}  // namespace bmg::pum
