#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "blockmg/rng.hpp"
#include "blockmg/types.hpp"

namespace bmg {

namespace detail {

// Plain symmetric Lanczos without reorthogonalization; returns the Ritz values
// of the tridiagonal matrix after `iters` steps (fewer on breakdown).
template <class Op>
Vector lanczos_ritz_values(const Op& op, int n, int iters, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("lanczos: operator dimension must be >= 1");
  iters = std::min(iters, n);
  RngStream rng(seed);
  Vector v = rng.vector(n);
  v /= v.norm();
  Vector v_prev = Vector::Zero(n);
  Vector w(n);
  std::vector<double> diag, offdiag;
  double beta = 0.0;
  for (int j = 0; j < iters; ++j) {
    op(v, w);
    const double alpha = v.dot(w);
    diag.push_back(alpha);
    w.noalias() -= alpha * v;
    w.noalias() -= beta * v_prev;
    beta = w.norm();
    if (j + 1 == iters) break;
    if (beta <= 1e-14 * std::abs(alpha) || beta == 0.0) break;  // breakdown: keep current estimate
    offdiag.push_back(beta);
    v_prev = v;
    v = w / beta;
  }
  const int m = static_cast<int>(diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), m);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(std::max(m - 1, 0));
  for (int i = 0; i + 1 < m; ++i) e[i] = offdiag[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace detail

// safety * (largest Ritz value after `iters` Lanczos steps), seeded start
// vector, no reorthogonalization.
template <class Op>
double lanczos_lambda_max(const Op& op, int n, int iters = 100, double safety = 1.01,
                          std::uint64_t seed = 42) {
  const Vector ritz = detail::lanczos_ritz_values(op, n, iters, seed);
  return safety * ritz.maxCoeff();
}

// Smallest Ritz value; used as an indefiniteness probe.
template <class Op>
double lanczos_smallest_ritz(const Op& op, int n, int iters = 30, std::uint64_t seed = 42) {
  const Vector ritz = detail::lanczos_ritz_values(op, n, iters, seed);
  return ritz.minCoeff();
}

}  // namespace bmg
