#pragma once

#include <stdexcept>
#include <string>

#include "blockmg/types.hpp"

namespace bmg {

struct NotPositiveDefinite : std::runtime_error {
  int pivot;  // 0-based pivot index at which factorization failed
  explicit NotPositiveDefinite(int pivot_, const std::string& context = {});
};

// Dense Cholesky B = L L^T for small s.p.d. blocks.  Unlike Eigen's LLT it
// reports the failing pivot, and keeps the log-determinant around for the
// Kaporin-number and determinant-ratio computations.
class SmallCholesky {
 public:
  SmallCholesky() = default;
  explicit SmallCholesky(const DenseBlock& b, const std::string& context = {});

  int dim() const { return static_cast<int>(l_.rows()); }
  const DenseBlock& matrix_l() const { return l_; }
  double logdet() const { return logdet_; }  // log det(B)

  Vector solve(const Vector& rhs) const;          // B x = rhs
  DenseBlock solve(const DenseBlock& rhs) const;  // B X = RHS
  Vector solve_l(const Vector& rhs) const;        // L x = rhs
  Vector solve_lt(const Vector& rhs) const;       // L^T x = rhs

 private:
  DenseBlock l_;
  double logdet_ = 0.0;
};

}  // namespace bmg
