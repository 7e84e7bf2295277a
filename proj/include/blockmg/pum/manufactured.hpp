#pragma once

#include <Eigen/Dense>
#include <functional>
#include <tuple>
#include <vector>

namespace bmg::pum {

enum class Problem { Biharmonic, Anisotropic, Triharmonic };

// S = R(theta) diag(kappa, 1) R(theta)^T; the fourth-order tensor of the
// anisotropic problem is S (x) S.
struct AnisotropySpec {
  double theta = 0.0;  // radians
  double kappa = 1.0;
  Eigen::Matrix2d tensor() const;
};

// Closed-form reference solution with derivatives through order 6, plus the
// matching right-hand side and boundary data for the chosen problem.
class ManufacturedSolution {
 public:
  using Deriv = std::function<double(int, int, double, double)>;

  ManufacturedSolution() = default;
  ManufacturedSolution(Deriv d, Problem problem, const AnisotropySpec& aniso = {});

  double deriv(int ax, int ay, double x, double y) const { return d_(ax, ay, x, y); }
  double value(double x, double y) const { return d_(0, 0, x, y); }

  double f(double x, double y) const;  // problem right-hand side
  double g0(double x, double y) const { return value(x, y); }
  double g1(double x, double y, const Eigen::Vector2d& n) const;  // grad u . n (or . S n)
  double g2(double x, double y) const;                            // laplace u

  Problem problem() const { return problem_; }
  const Eigen::Matrix2d& aniso_tensor() const { return s_; }

 private:
  Deriv d_ = [](int, int, double, double) { return 0.0; };
  Problem problem_ = Problem::Biharmonic;
  Eigen::Matrix2d s_ = Eigen::Matrix2d::Identity();
};

// The reference solution used throughout the experiments: cos(2 pi x) sin(2 pi y).
ManufacturedSolution manufactured(Problem problem, const AnisotropySpec& aniso = {});

// Derivative closures for test solutions.
ManufacturedSolution::Deriv trig_deriv();
ManufacturedSolution::Deriv polynomial_deriv(std::vector<std::tuple<int, int, double>> terms);
ManufacturedSolution::Deriv zero_deriv();

}  // namespace bmg::pum
