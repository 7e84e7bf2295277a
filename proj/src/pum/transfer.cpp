#include "blockmg/pum/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "blockmg/kernels.hpp"
#include "blockmg/pum/legendre.hpp"
#include "blockmg/pum/quadrature.hpp"
#include "blockmg/small_cholesky.hpp"

namespace bmg::pum {

BlockSparseMatrix build_prolongation(const PuSpace& coarse, const PuSpace& fine) {
  if (fine.cover().level() != coarse.cover().level() + 1)
    throw std::invalid_argument("build_prolongation: fine level must be coarse level + 1");
  const std::vector<double> breaks =
      merge_breakpoints(breakpoints_1d(coarse.cover(), coarse.weight().interior_knots()),
                        breakpoints_1d(fine.cover(), fine.weight().interior_knots()));
  const int nq = std::max(coarse.max_degree(), fine.max_degree()) +
                 std::max(coarse.options().weight_degree, fine.options().weight_degree) + 2;
  const GaussRule& rule = gauss_rule(nq);

  BlockSparseMatrix p(fine.layout(), coarse.layout(), false);
  PuSpace::ActivePoint act;
  std::vector<Jet2> phi;
  std::vector<double> fx, fy, cx, cy;
  Jet2 theta(0);

  for (int i = 0; i < fine.patches(); ++i) {
    const Rect r = fine.cover().patch(i);
    const double x0 = std::max(r.x0, 0.0), x1 = std::min(r.x1, 1.0);
    const double y0 = std::max(r.y0, 0.0), y1 = std::min(r.y1, 1.0);
    const int mi = fine.block_size(i);
    const double fcx = 0.5 * (r.x0 + r.x1), fcy = 0.5 * (r.y0 + r.y1);
    const int pf = fine.patch_degree(i);

    Eigen::MatrixXd m_i = Eigen::MatrixXd::Zero(mi, mi);
    std::map<int, Eigen::MatrixXd> c_i;  // coarse patch -> <phi_j theta_j^m, theta_i^k>

    const auto [xlo, xhi] = interval_range(breaks, x0, x1);
    const auto [ylo, yhi] = interval_range(breaks, y0, y1);
    for (int ry = ylo; ry < yhi; ++ry) {
      for (int rx = xlo; rx < xhi; ++rx) {
        const double ax = breaks[static_cast<std::size_t>(rx)], bx = breaks[static_cast<std::size_t>(rx) + 1];
        const double ay = breaks[static_cast<std::size_t>(ry)], by = breaks[static_cast<std::size_t>(ry) + 1];
        const double jac = 0.25 * (bx - ax) * (by - ay);
        for (int gy = 0; gy < nq; ++gy) {
          const double y = 0.5 * (ay + by) + 0.5 * (by - ay) * rule.x[gy];
          for (int gx = 0; gx < nq; ++gx) {
            const double x = 0.5 * (ax + bx) + 0.5 * (bx - ax) * rule.x[gx];
            const double w = jac * rule.w[gx] * rule.w[gy];
            fine.basis_stack_1d(i, x, fcx, 0, fx);
            fine.basis_stack_1d(i, y, fcy, 0, fy);
            coarse.pu_jets(x, y, 0, act, phi);
            std::vector<double> tk(static_cast<std::size_t>(mi));
            for (int k = 0; k < mi; ++k) {
              const auto [ea, eb] = PuSpace::basis_exponents(pf, k);
              tk[static_cast<std::size_t>(k)] =
                  fx[static_cast<std::size_t>(ea)] * fy[static_cast<std::size_t>(eb)];
            }
            for (int k = 0; k < mi; ++k)
              for (int l = 0; l < mi; ++l)
                m_i(k, l) += w * tk[static_cast<std::size_t>(k)] * tk[static_cast<std::size_t>(l)];
            for (int a = 0; a < act.count; ++a) {
              const int j = act.patches[a];
              const Rect rc = coarse.cover().patch(j);
              coarse.basis_stack_1d(j, x, 0.5 * (rc.x0 + rc.x1), 0, cx);
              coarse.basis_stack_1d(j, y, 0.5 * (rc.y0 + rc.y1), 0, cy);
              auto it = c_i.find(j);
              if (it == c_i.end())
                it = c_i.emplace(j, Eigen::MatrixXd::Zero(mi, coarse.block_size(j))).first;
              const double phival = phi[static_cast<std::size_t>(a)].at(0, 0);
              const int pc = coarse.patch_degree(j);
              for (int m = 0; m < coarse.block_size(j); ++m) {
                const auto [ca, cb] = PuSpace::basis_exponents(pc, m);
                const double tm =
                    phival * cx[static_cast<std::size_t>(ca)] * cy[static_cast<std::size_t>(cb)];
                for (int k = 0; k < mi; ++k) it->second(k, m) += w * tk[static_cast<std::size_t>(k)] * tm;
              }
            }
          }
        }
      }
    }

    SmallCholesky m_chol{DenseBlock(m_i), "prolongation local mass, fine patch " + std::to_string(i)};
    for (const auto& [j, c_block] : c_i)
      p.insert(i, j, m_chol.solve(DenseBlock(c_block)));
  }
  return p;
}

Vector interpolate_polynomial(const PuSpace& space, const ManufacturedSolution::Deriv& poly) {
  const int nq = space.max_degree() + 1;
  const GaussRule& rule = gauss_rule(nq);
  Vector out = Vector::Zero(space.layout().dim());
  std::vector<double> lx(static_cast<std::size_t>(kMaxLegendreDegree) + 1);
  for (int i = 0; i < space.patches(); ++i) {
    const Rect r = space.cover().patch(i);
    const int p = space.patch_degree(i);
    const int mi = space.block_size(i);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(mi, mi);
    Vector rhs = Vector::Zero(mi);
    std::vector<double> bx(static_cast<std::size_t>(p) + 1), by(static_cast<std::size_t>(p) + 1);
    for (int gy = 0; gy < nq; ++gy) {
      const double y = 0.5 * (r.y0 + r.y1) + 0.5 * (r.y1 - r.y0) * rule.x[gy];
      for (int gx = 0; gx < nq; ++gx) {
        const double x = 0.5 * (r.x0 + r.x1) + 0.5 * (r.x1 - r.x0) * rule.x[gx];
        const double w = rule.w[gx] * rule.w[gy];
        for (int n = 0; n <= p; ++n) {
          legendre_eval(n, rule.x[gx], 0, lx.data());
          bx[static_cast<std::size_t>(n)] = lx[0];
          legendre_eval(n, rule.x[gy], 0, lx.data());
          by[static_cast<std::size_t>(n)] = lx[0];
        }
        const double u = poly(0, 0, x, y);
        for (int k = 0; k < mi; ++k) {
          const auto [ea, eb] = PuSpace::basis_exponents(p, k);
          const double tk = bx[static_cast<std::size_t>(ea)] * by[static_cast<std::size_t>(eb)];
          rhs[k] += w * u * tk;
          for (int l = 0; l < mi; ++l) {
            const auto [la, lb] = PuSpace::basis_exponents(p, l);
            gram(k, l) += w * tk * bx[static_cast<std::size_t>(la)] * by[static_cast<std::size_t>(lb)];
          }
        }
      }
    }
    const SmallCholesky chol{DenseBlock(gram), "polynomial interpolation gram"};
    out.segment(space.layout().offset(i), mi) = chol.solve(rhs);
  }
  return out;
}

double l2_norm(const BlockSparseMatrix& mass, const Vector& coeffs) {
  Vector tmp(coeffs.size());
  spmv(mass, coeffs, tmp);
  return std::sqrt(std::max(coeffs.dot(tmp), 0.0));
}

double evaluate_function(const PuSpace& space, const Vector& coeffs, double x, double y) {
  PuSpace::ActivePoint act;
  std::vector<Jet2> phi;
  space.pu_jets(x, y, 0, act, phi);
  std::vector<double> sx, sy;
  double acc = 0.0;
  for (int a = 0; a < act.count; ++a) {
    const int i = act.patches[a];
    const Rect r = space.cover().patch(i);
    space.basis_stack_1d(i, x, 0.5 * (r.x0 + r.x1), 0, sx);
    space.basis_stack_1d(i, y, 0.5 * (r.y0 + r.y1), 0, sy);
    const int p = space.patch_degree(i);
    const double phival = phi[static_cast<std::size_t>(a)].at(0, 0);
    for (int k = 0; k < space.block_size(i); ++k) {
      const auto [ea, eb] = PuSpace::basis_exponents(p, k);
      acc += coeffs[space.layout().offset(i) + k] * phival * sx[static_cast<std::size_t>(ea)] *
             sy[static_cast<std::size_t>(eb)];
    }
  }
  return acc;
}

}  // namespace bmg::pum
