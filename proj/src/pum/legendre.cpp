#include "blockmg/pum/legendre.hpp"

#include <array>
#include <stdexcept>

namespace bmg::pum {

namespace {

// Monomial coefficients of L_0..L_8 from the three-term recurrence.
struct CoeffTable {
  std::array<std::array<double, kMaxLegendreDegree + 1>, kMaxLegendreDegree + 1> c{};
  CoeffTable() {
    c[0][0] = 1.0;
    c[1][1] = 1.0;
    for (int n = 1; n < kMaxLegendreDegree; ++n) {
      for (int k = 0; k <= n; ++k)
        c[n + 1][k + 1] += (2.0 * n + 1.0) / (n + 1.0) * c[n][k];
      for (int k = 0; k < n; ++k)
        c[n + 1][k] -= static_cast<double>(n) / (n + 1.0) * c[n - 1][k];
    }
  }
};

}  // namespace

void legendre_eval(int n, double xi, int order, double* out) {
  if (n < 0 || n > kMaxLegendreDegree) throw std::invalid_argument("legendre_eval: degree out of range");
  static const CoeffTable table;
  const auto& p = table.c[static_cast<std::size_t>(n)];
  for (int m = 0; m <= order; ++m) {
    double v = 0.0;
    for (int c = n; c >= m; --c) {
      double fall = 1.0;
      for (int r = 0; r < m; ++r) fall *= (c - r);
      v = v * xi + fall * p[static_cast<std::size_t>(c)];
    }
    out[m] = v;
  }
}

}  // namespace bmg::pum
