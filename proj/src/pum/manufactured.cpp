#include "blockmg/pum/manufactured.hpp"

#include <cmath>

namespace bmg::pum {

Eigen::Matrix2d AnisotropySpec::tensor() const {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(0, 0) = kappa;
  d(1, 1) = 1.0;
  return r * d * r.transpose();
}

ManufacturedSolution::ManufacturedSolution(Deriv d, Problem problem, const AnisotropySpec& aniso)
    : d_(std::move(d)), problem_(problem) {
  if (problem == Problem::Anisotropic) s_ = aniso.tensor();
}

double ManufacturedSolution::f(double x, double y) const {
  switch (problem_) {
    case Problem::Biharmonic:
      return deriv(4, 0, x, y) + 2.0 * deriv(2, 2, x, y) + deriv(0, 4, x, y);
    case Problem::Anisotropic: {
      // S_ij S_kl u_{,ijkl}
      double acc = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
              const int ay = i + j + k + l;
              acc += s_(i, j) * s_(k, l) * deriv(4 - ay, ay, x, y);
            }
      return acc;
    }
    case Problem::Triharmonic:
      return -(deriv(6, 0, x, y) + 3.0 * deriv(4, 2, x, y) + 3.0 * deriv(2, 4, x, y) +
               deriv(0, 6, x, y));
  }
  return 0.0;
}

double ManufacturedSolution::g1(double x, double y, const Eigen::Vector2d& n) const {
  const Eigen::Vector2d m = problem_ == Problem::Anisotropic ? Eigen::Vector2d(s_ * n) : n;
  return deriv(1, 0, x, y) * m[0] + deriv(0, 1, x, y) * m[1];
}

double ManufacturedSolution::g2(double x, double y) const {
  return deriv(2, 0, x, y) + deriv(0, 2, x, y);
}

ManufacturedSolution manufactured(Problem problem, const AnisotropySpec& aniso) {
  return ManufacturedSolution(trig_deriv(), problem, aniso);
}

ManufacturedSolution::Deriv trig_deriv() {
  // u = cos(2 pi x) sin(2 pi y); every derivative is a phase shift.
  constexpr double two_pi = 2.0 * M_PI;
  return [](int ax, int ay, double x, double y) {
    const double fx = std::pow(two_pi, ax) * std::cos(two_pi * x + 0.5 * M_PI * ax);
    const double fy = std::pow(two_pi, ay) * std::sin(two_pi * y + 0.5 * M_PI * ay);
    return fx * fy;
  };
}

ManufacturedSolution::Deriv polynomial_deriv(std::vector<std::tuple<int, int, double>> terms) {
  return [terms = std::move(terms)](int ax, int ay, double x, double y) {
    double acc = 0.0;
    for (const auto& [px, py, c] : terms) {
      if (ax > px || ay > py) continue;
      double v = c;
      for (int r = 0; r < ax; ++r) v *= (px - r);
      for (int r = 0; r < ay; ++r) v *= (py - r);
      acc += v * std::pow(x, px - ax) * std::pow(y, py - ay);
    }
    return acc;
  };
}

ManufacturedSolution::Deriv zero_deriv() {
  return [](int, int, double, double) { return 0.0; };
}

}  // namespace bmg::pum
