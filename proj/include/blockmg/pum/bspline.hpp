#pragma once

#include <vector>

namespace bmg::pum {

// Cardinal B-spline bump of degree q, reparametrized to [-1, 1].  The weight
// is C^{q-1}, strictly positive on (-1, 1), and piecewise polynomial with
// q + 2 knots; knot positions in [-1, 1] are exposed so quadrature cells can
// resolve the pieces.
class WeightSpline {
 public:
  WeightSpline() = default;
  explicit WeightSpline(int degree);

  int degree() const { return degree_; }

  // derivs[m] = d^m W / d xi^m for m = 0..order; zero outside [-1, 1].
  void eval(double xi, int order, double* derivs) const;

  // Interior knot positions in (-1, 1).
  const std::vector<double>& interior_knots() const { return knots_; }

 private:
  int degree_ = 0;
  std::vector<std::vector<double>> pieces_;  // monomial coeffs in t on [j, j+1)
  std::vector<double> knots_;
};

}  // namespace bmg::pum
