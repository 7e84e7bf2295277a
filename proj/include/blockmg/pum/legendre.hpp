#pragma once

namespace bmg::pum {

inline constexpr int kMaxLegendreDegree = 8;

// out[m] = d^m L_n(xi) / d xi^m for m = 0..order (order <= 5).
void legendre_eval(int n, double xi, int order, double* out);

}  // namespace bmg::pum
