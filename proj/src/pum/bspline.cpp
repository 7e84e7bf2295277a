#include "blockmg/pum/bspline.hpp"

#include <cmath>
#include <stdexcept>

namespace bmg::pum {

namespace {

using Poly = std::vector<double>;  // monomial coefficients, lowest first

Poly shift_scale(const Poly& p, double a, double b) {
  // returns a * t * p(t) + b * p(t) merged: (a t + b) p(t)
  Poly out(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] += a * p[i];
    out[i] += b * p[i];
  }
  return out;
}

void add_into(Poly& dst, const Poly& src) {
  if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
}

}  // namespace

WeightSpline::WeightSpline(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("WeightSpline: degree must be >= 1");
  // Cox-de Boor in coefficient space on integer knots: pieces[i][j] is the
  // polynomial of B_{i,k} on [i + j, i + j + 1).
  const int q = degree;
  std::vector<std::vector<Poly>> cur(static_cast<std::size_t>(q + 1));
  for (int i = 0; i <= q; ++i) cur[static_cast<std::size_t>(i)] = {Poly{1.0}};
  for (int k = 1; k <= q; ++k) {
    std::vector<std::vector<Poly>> next(static_cast<std::size_t>(q - k + 1));
    for (int i = 0; i + k <= q; ++i) {
      std::vector<Poly> pieces(static_cast<std::size_t>(k + 1));
      for (int j = 0; j <= k; ++j) {
        Poly acc;
        // (t - i)/k * B_{i,k-1} piece
        if (j < k) {
          const Poly& p = cur[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          acc = shift_scale(p, 1.0 / k, -static_cast<double>(i) / k);
        }
        // (i + k + 1 - t)/k * B_{i+1,k-1} piece (its piece index is j - 1)
        if (j >= 1) {
          const Poly& p = cur[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j - 1)];
          add_into(acc, shift_scale(p, -1.0 / k, static_cast<double>(i + k + 1) / k));
        }
        pieces[static_cast<std::size_t>(j)] = std::move(acc);
      }
      next[static_cast<std::size_t>(i)] = std::move(pieces);
    }
    cur = std::move(next);
  }
  pieces_ = std::move(cur[0]);
  for (int j = 1; j <= q; ++j) knots_.push_back(-1.0 + 2.0 * j / (q + 1));
}

void WeightSpline::eval(double xi, int order, double* derivs) const {
  for (int m = 0; m <= order; ++m) derivs[m] = 0.0;
  if (xi <= -1.0 || xi >= 1.0) return;
  const double scale = 0.5 * (degree_ + 1);  // dt/dxi
  const double t = (xi + 1.0) * scale;
  int piece = static_cast<int>(t);
  if (piece > degree_) piece = degree_;
  const auto& p = pieces_[static_cast<std::size_t>(piece)];
  // Horner evaluation of each derivative, then chain-rule powers of dt/dxi.
  double chain = 1.0;
  for (int m = 0; m <= order; ++m) {
    double v = 0.0;
    for (int c = static_cast<int>(p.size()) - 1; c >= m; --c) {
      double fall = 1.0;
      for (int r = 0; r < m; ++r) fall *= (c - r);
      v = v * t + fall * p[static_cast<std::size_t>(c)];
    }
    derivs[m] = v * chain;
    chain *= scale;
  }
}

}  // namespace bmg::pum
