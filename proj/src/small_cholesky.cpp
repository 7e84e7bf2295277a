#include "blockmg/small_cholesky.hpp"

#include <cmath>

namespace bmg {

NotPositiveDefinite::NotPositiveDefinite(int pivot_, const std::string& context)
    : std::runtime_error("matrix not positive definite at pivot " + std::to_string(pivot_) +
                         (context.empty() ? "" : " (" + context + ")")),
      pivot(pivot_) {}

SmallCholesky::SmallCholesky(const DenseBlock& b, const std::string& context) {
  const int n = static_cast<int>(b.rows());
  if (b.cols() != n) throw std::invalid_argument("SmallCholesky: matrix must be square");
  l_ = DenseBlock::Zero(n, n);
  logdet_ = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = b(j, j) - l_.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) throw NotPositiveDefinite(j, context);
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    logdet_ += 2.0 * std::log(ljj);
    for (int i = j + 1; i < n; ++i) {
      double s = b(i, j) - l_.row(i).head(j).dot(l_.row(j).head(j));
      l_(i, j) = s / ljj;
    }
  }
}

Vector SmallCholesky::solve(const Vector& rhs) const {
  return solve_lt(solve_l(rhs));
}

DenseBlock SmallCholesky::solve(const DenseBlock& rhs) const {
  DenseBlock x = rhs;
  l_.triangularView<Eigen::Lower>().solveInPlace(x);
  l_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

Vector SmallCholesky::solve_l(const Vector& rhs) const {
  return l_.triangularView<Eigen::Lower>().solve(rhs);
}

Vector SmallCholesky::solve_lt(const Vector& rhs) const {
  return l_.transpose().triangularView<Eigen::Upper>().solve(rhs);
}

}  // namespace bmg
