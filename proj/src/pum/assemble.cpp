#include "blockmg/pum/assemble.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blockmg/kernels.hpp"
#include "blockmg/lanczos.hpp"
#include "blockmg/pum/quadrature.hpp"

namespace bmg::pum {

namespace {

// Values of one shape function phi_i theta_i^k at a quadrature point.
struct ShapeVals {
  double val = 0;   // function value
  double vol0 = 0;  // volume differential operator components
  double vol1 = 0;
  double dn = 0;    // grad . n (or grad . S n)
  double lap = 0;   // laplacian (or S:H)
  double q0 = 0;    // highest-order boundary flux
  double q1 = 0;    // middle boundary flux
  double q3 = 0;    // grad(laplacian) . n (triharmonic gamma2 partner)
};

struct Side {
  int axis;       // 0: runs along x, 1: runs along y
  double fixed;   // the constant coordinate
  double nx, ny;  // outward normal
};

class Assembler {
 public:
  Assembler(const PuSpace& space, const AssembleOptions& opts)
      : s_(space), o_(opts), sx_(Eigen::Matrix2d::Identity()) {
    if (o_.problem == Problem::Anisotropic) sx_ = o_.aniso.tensor();
    order_vol_ = o_.problem == Problem::Triharmonic ? 3 : 2;
    order_bd_ = o_.problem == Problem::Triharmonic ? 5 : 3;
    nq_ = o_.quad_points > 0 ? o_.quad_points : s_.max_degree() + s_.options().weight_degree + 2;
    breaks_ = breakpoints_1d(s_.cover(), s_.weight().interior_knots());
  }

  const std::vector<double>& breakpoints() const { return breaks_; }

  void volume_pass(BlockSparseMatrix& a, BlockSparseMatrix* mass, BlockVector* b,
                   const ManufacturedSolution* ms) {
    const GaussRule& rule = gauss_rule(nq_);
    const int m = static_cast<int>(breaks_.size()) - 1;
    for (int ry = 0; ry < m; ++ry) {
      for (int rx = 0; rx < m; ++rx) {
        const double x0 = breaks_[static_cast<std::size_t>(rx)], x1 = breaks_[static_cast<std::size_t>(rx) + 1];
        const double y0 = breaks_[static_cast<std::size_t>(ry)], y1 = breaks_[static_cast<std::size_t>(ry) + 1];
        const PuSpace::ActivePoint act = s_.active(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        begin_local(act);
        const double jac = 0.25 * (x1 - x0) * (y1 - y0);
        for (int gy = 0; gy < nq_; ++gy) {
          const double y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * rule.x[gy];
          for (int gx = 0; gx < nq_; ++gx) {
            const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * rule.x[gx];
            const double w = jac * rule.w[gx] * rule.w[gy];
            shape_values(act, x, y, order_vol_, false);
            accumulate_volume(w, mass != nullptr, b != nullptr && ms != nullptr,
                              ms ? ms->f(x, y) : 0.0);
          }
        }
        scatter_local(act, a, mass, b);
      }
    }
  }

  void boundary_pass(const NitscheParams& gammas, BlockSparseMatrix& a, BlockVector* b,
                     const ManufacturedSolution* ms) {
    const GaussRule& rule = gauss_rule(nq_);
    const int m = static_cast<int>(breaks_.size()) - 1;
    for (const Side& side : sides()) {
      for (int r = 0; r < m; ++r) {
        const double t0 = breaks_[static_cast<std::size_t>(r)], t1 = breaks_[static_cast<std::size_t>(r) + 1];
        const double tm = 0.5 * (t0 + t1);
        const auto [px, py] = side_point(side, tm);
        const PuSpace::ActivePoint act = s_.active(px, py);
        const int owner = owner_patch(side, tm);
        const auto& g = gammas.gamma[static_cast<std::size_t>(owner)];
        begin_local(act);
        const double jac = 0.5 * (t1 - t0);
        for (int q = 0; q < nq_; ++q) {
          const double t = tm + jac * rule.x[q];
          const auto [x, y] = side_point(side, t);
          const double w = jac * rule.w[q];
          shape_values(act, x, y, order_bd_, true, side.nx, side.ny);
          accumulate_boundary(w, g, b != nullptr && ms != nullptr, ms, x, y, side);
        }
        scatter_local(act, a, nullptr, b);
      }
    }
  }

  NitscheParams penalties(const BlockSparseMatrix& a_vol) {
    NitscheParams out;
    out.gamma.assign(static_cast<std::size_t>(s_.patches()), {0.0, 0.0, 0.0});
    if (!o_.eigen_penalties) {
      fallback_all(out);
      return out;
    }
    const GaussRule& rule = gauss_rule(nq_);
    for (int i = 0; i < s_.patches(); ++i) {
      if (!s_.cover().touches_boundary(i)) continue;
      // Boundary segments of this patch's cell.
      std::vector<std::pair<Side, std::pair<double, double>>> segs = cell_boundary_segments(i);
      // Active shape functions along the segments.
      std::vector<int> nbr;
      for (const auto& [side, seg] : segs) {
        const auto [x, y] = side_point(side, 0.5 * (seg.first + seg.second));
        const PuSpace::ActivePoint act = s_.active(x, y);
        for (int a = 0; a < act.count; ++a)
          if (std::find(nbr.begin(), nbr.end(), act.patches[a]) == nbr.end())
            nbr.push_back(act.patches[a]);
      }
      std::sort(nbr.begin(), nbr.end());
      int dim = 0;
      std::vector<int> base(nbr.size());
      for (std::size_t a = 0; a < nbr.size(); ++a) {
        base[a] = dim;
        dim += s_.block_size(nbr[a]);
      }
      const int nflux = o_.problem == Problem::Triharmonic ? 3 : 2;
      std::vector<Eigen::MatrixXd> flux_gram(static_cast<std::size_t>(nflux),
                                             Eigen::MatrixXd::Zero(dim, dim));
      for (const auto& [side, seg] : segs) {
        const auto [lo, hi] = interval_range(breaks_, seg.first, seg.second);
        for (int r = lo; r < hi; ++r) {
          const double t0 = breaks_[static_cast<std::size_t>(r)], t1 = breaks_[static_cast<std::size_t>(r) + 1];
          const double jac = 0.5 * (t1 - t0);
          for (int q = 0; q < nq_; ++q) {
            const double t = 0.5 * (t0 + t1) + jac * rule.x[q];
            const auto [x, y] = side_point(side, t);
            const double w = jac * rule.w[q];
            PuSpace::ActivePoint act = s_.active(x, y);
            shape_values(act, x, y, order_bd_, true, side.nx, side.ny);
            // local slot per active function
            std::vector<int> slot(vals_.size());
            int v = 0;
            for (int a = 0; a < act.count; ++a) {
              const auto it = std::lower_bound(nbr.begin(), nbr.end(), act.patches[a]);
              const int pbase = base[static_cast<std::size_t>(it - nbr.begin())];
              for (int k = 0; k < s_.block_size(act.patches[a]); ++k) slot[static_cast<std::size_t>(v + k)] = pbase + k;
              v += s_.block_size(act.patches[a]);
            }
            for (std::size_t fa = 0; fa < vals_.size(); ++fa) {
              for (std::size_t fb = 0; fb < vals_.size(); ++fb) {
                const double f0 = flux_of(vals_[fa], 0), g0v = flux_of(vals_[fb], 0);
                flux_gram[0](slot[fa], slot[fb]) += w * f0 * g0v;
                flux_gram[1](slot[fa], slot[fb]) += w * flux_of(vals_[fa], 1) * flux_of(vals_[fb], 1);
                if (nflux == 3)
                  flux_gram[2](slot[fa], slot[fb]) += w * flux_of(vals_[fa], 2) * flux_of(vals_[fb], 2);
              }
            }
          }
        }
      }
      // Volume Gram over the neighbor blocks.
      Eigen::MatrixXd k_gram = Eigen::MatrixXd::Zero(dim, dim);
      for (std::size_t a = 0; a < nbr.size(); ++a)
        for (std::size_t c = 0; c < nbr.size(); ++c)
          if (a_vol.has(nbr[a], nbr[c]))
            k_gram.block(base[a], base[c], s_.block_size(nbr[a]), s_.block_size(nbr[c])) =
                a_vol.block(nbr[a], nbr[c]);
      const double shift = 1e-10 * k_gram.trace() / dim;
      Eigen::MatrixXd k_reg = k_gram + shift * Eigen::MatrixXd::Identity(dim, dim);
      Eigen::LLT<Eigen::MatrixXd> llt(k_reg);
      if (llt.info() != Eigen::Success || !(shift > 0.0)) {
        fallback_patch(out, i);
        out.fallback = true;
        continue;
      }
      for (int j = 0; j < nflux; ++j) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(flux_gram[static_cast<std::size_t>(j)],
                                                                     k_reg, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
          fallback_patch(out, i);
          out.fallback = true;
          break;
        }
        out.gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            4.0 * es.eigenvalues().maxCoeff();
      }
    }
    return out;
  }

 private:
  double fallback_scale() const {
    if (o_.penalty_constant > 0.0) return o_.penalty_constant;
    const double p1 = s_.max_degree() + 1;
    return 10.0 * p1 * p1;
  }

  void fallback_patch(NitscheParams& out, int i) const {
    const double h = s_.cover().cell_size();
    const double c = fallback_scale();
    const int m = o_.problem == Problem::Triharmonic ? 3 : 2;
    for (int j = 0; j < m; ++j)
      out.gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          c * std::pow(h, -(2.0 * m - 2.0 * j - 1.0));
  }

  void fallback_all(NitscheParams& out) const {
    out.fallback = true;
    for (int i = 0; i < s_.patches(); ++i)
      if (s_.cover().touches_boundary(i)) fallback_patch(out, i);
  }

  static std::array<Side, 4> sides() {
    return {Side{0, 0.0, 0.0, -1.0}, Side{0, 1.0, 0.0, 1.0}, Side{1, 0.0, -1.0, 0.0},
            Side{1, 1.0, 1.0, 0.0}};
  }

  static std::pair<double, double> side_point(const Side& s, double t) {
    return s.axis == 0 ? std::pair{t, s.fixed} : std::pair{s.fixed, t};
  }

  int owner_patch(const Side& s, double t) const {
    const int n = s_.cover().cells_per_side();
    int c = static_cast<int>(t * n);
    c = std::clamp(c, 0, n - 1);
    const int edge = s.fixed == 0.0 ? 0 : n - 1;
    return s.axis == 0 ? s_.cover().index(c, edge) : s_.cover().index(edge, c);
  }

  std::vector<std::pair<Side, std::pair<double, double>>> cell_boundary_segments(int i) const {
    std::vector<std::pair<Side, std::pair<double, double>>> out;
    const auto [ix, iy] = s_.cover().coords(i);
    const int n = s_.cover().cells_per_side();
    const Rect c = s_.cover().cell(i);
    if (iy == 0) out.push_back({Side{0, 0.0, 0.0, -1.0}, {c.x0, c.x1}});
    if (iy == n - 1) out.push_back({Side{0, 1.0, 0.0, 1.0}, {c.x0, c.x1}});
    if (ix == 0) out.push_back({Side{1, 0.0, -1.0, 0.0}, {c.y0, c.y1}});
    if (ix == n - 1) out.push_back({Side{1, 1.0, 1.0, 0.0}, {c.y0, c.y1}});
    return out;
  }

  double flux_of(const ShapeVals& v, int j) const {
    if (o_.problem == Problem::Triharmonic) {
      if (j == 0) return v.q0;
      if (j == 1) return v.q1;
      return v.q3;
    }
    return j == 0 ? v.q0 : v.q1;
  }

  // Shape-function values at a point, grouped per active patch in order.
  void shape_values(const PuSpace::ActivePoint& act, double x, double y, int order, bool boundary,
                    double nx = 0.0, double ny = 0.0) {
    s_.pu_jets(x, y, order, act_scratch_, phi_);
    vals_.clear();
    Jet2 theta, u;
    for (int a = 0; a < act_scratch_.count; ++a) {
      const int patch = act_scratch_.patches[a];
      const Rect r = s_.cover().patch(patch);
      s_.basis_stack_1d(patch, x, 0.5 * (r.x0 + r.x1), order, stack_x_);
      s_.basis_stack_1d(patch, y, 0.5 * (r.y0 + r.y1), order, stack_y_);
      const int p = s_.patch_degree(patch);
      const int mb = s_.block_size(patch);
      theta.set_order(order);
      for (int k = 0; k < mb; ++k) {
        const auto [ea, eb] = PuSpace::basis_exponents(p, k);
        theta.set_separable(stack_x_.data() + static_cast<std::ptrdiff_t>(ea) * (order + 1),
                            stack_y_.data() + static_cast<std::ptrdiff_t>(eb) * (order + 1));
        Jet2::multiply(phi_[static_cast<std::size_t>(a)], theta, u);
        vals_.push_back(extract_vals(u, order, boundary, nx, ny));
      }
    }
  }

  ShapeVals extract_vals(const Jet2& u, int order, bool boundary, double nx, double ny) const {
    ShapeVals v;
    v.val = u.at(0, 0);
    const double uxx = u.deriv(2, 0), uxy = u.deriv(1, 1), uyy = u.deriv(0, 2);
    const bool aniso = o_.problem == Problem::Anisotropic;
    const double lap = uxx + uyy;
    const double slap = aniso ? sx_(0, 0) * uxx + 2.0 * sx_(0, 1) * uxy + sx_(1, 1) * uyy : lap;
    if (o_.problem == Problem::Triharmonic) {
      const double gx = u.deriv(3, 0) + u.deriv(1, 2);
      const double gy = u.deriv(2, 1) + u.deriv(0, 3);
      v.vol0 = gx;
      v.vol1 = gy;
      if (boundary) {
        v.dn = u.deriv(1, 0) * nx + u.deriv(0, 1) * ny;
        v.lap = lap;
        v.q3 = gx * nx + gy * ny;
        v.q1 = u.deriv(4, 0) + 2.0 * u.deriv(2, 2) + u.deriv(0, 4);
        const double bx = u.deriv(5, 0) + 2.0 * u.deriv(3, 2) + u.deriv(1, 4);
        const double by = u.deriv(4, 1) + 2.0 * u.deriv(2, 3) + u.deriv(0, 5);
        v.q0 = bx * nx + by * ny;
      }
      return v;
    }
    v.vol0 = slap;
    if (boundary) {
      double mx = nx, my = ny;
      if (aniso) {
        mx = sx_(0, 0) * nx + sx_(0, 1) * ny;
        my = sx_(1, 0) * nx + sx_(1, 1) * ny;
      }
      v.dn = u.deriv(1, 0) * mx + u.deriv(0, 1) * my;
      v.lap = slap;
      v.q1 = slap;
      double gx, gy;
      if (aniso) {
        gx = sx_(0, 0) * u.deriv(3, 0) + 2.0 * sx_(0, 1) * u.deriv(2, 1) + sx_(1, 1) * u.deriv(1, 2);
        gy = sx_(0, 0) * u.deriv(2, 1) + 2.0 * sx_(0, 1) * u.deriv(1, 2) + sx_(1, 1) * u.deriv(0, 3);
      } else {
        gx = u.deriv(3, 0) + u.deriv(1, 2);
        gy = u.deriv(2, 1) + u.deriv(0, 3);
      }
      v.q0 = gx * mx + gy * my;
    }
    (void)order;
    return v;
  }

  void begin_local(const PuSpace::ActivePoint& act) {
    nloc_ = 0;
    for (int a = 0; a < act.count; ++a) nloc_ += s_.block_size(act.patches[a]);
    a_loc_.setZero(nloc_, nloc_);
    mass_loc_.setZero(nloc_, nloc_);
    b_loc_.setZero(nloc_);
  }

  void accumulate_volume(double w, bool with_mass, bool with_load, double f_val) {
    const int n = static_cast<int>(vals_.size());
    for (int i = 0; i < n; ++i) {
      const ShapeVals& vi = vals_[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        const ShapeVals& vj = vals_[static_cast<std::size_t>(j)];
        a_loc_(i, j) += w * (vi.vol0 * vj.vol0 + vi.vol1 * vj.vol1);
        if (with_mass) mass_loc_(i, j) += w * (vi.val * vj.val);
      }
      if (with_load) b_loc_[i] += w * f_val * vi.val;
    }
  }

  void accumulate_boundary(double w, const std::array<double, 3>& g, bool with_load,
                           const ManufacturedSolution* ms, double x, double y, const Side& side) {
    const int n = static_cast<int>(vals_.size());
    const bool tri = o_.problem == Problem::Triharmonic;
    double g0 = 0, g1 = 0, g2 = 0;
    if (with_load) {
      const Eigen::Vector2d nrm(side.nx, side.ny);
      g0 = ms->g0(x, y);
      g1 = ms->g1(x, y, nrm);
      if (tri) g2 = ms->g2(x, y);
    }
    for (int i = 0; i < n; ++i) {
      const ShapeVals& vi = vals_[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        const ShapeVals& vj = vals_[static_cast<std::size_t>(j)];
        double d;
        if (tri) {
          d = g[0] * (vi.val * vj.val) - (vi.val * vj.q0 + vj.val * vi.q0) +
              g[1] * (vi.dn * vj.dn) + (vi.q1 * vj.dn + vj.q1 * vi.dn) +
              g[2] * (vi.lap * vj.lap) - (vi.lap * vj.q3 + vj.lap * vi.q3);
        } else {
          d = g[0] * (vi.val * vj.val) + (vi.val * vj.q0 + vj.val * vi.q0) +
              g[1] * (vi.dn * vj.dn) - (vi.q1 * vj.dn + vj.q1 * vi.dn);
        }
        a_loc_(i, j) += w * d;
      }
      if (with_load) {
        double lb;
        if (tri) {
          lb = g0 * (g[0] * vi.val - vi.q0) + g1 * (g[1] * vi.dn + vi.q1) +
               g2 * (g[2] * vi.lap - vi.q3);
        } else {
          lb = g0 * (g[0] * vi.val + vi.q0) + g1 * (g[1] * vi.dn - vi.q1);
        }
        b_loc_[i] += w * lb;
      }
    }
  }

  void scatter_local(const PuSpace::ActivePoint& act, BlockSparseMatrix& a,
                     BlockSparseMatrix* mass, BlockVector* b) {
    int ri = 0;
    for (int ai = 0; ai < act.count; ++ai) {
      const int pi = act.patches[ai];
      const int mi = s_.block_size(pi);
      int cj = 0;
      for (int aj = 0; aj < act.count; ++aj) {
        const int pj = act.patches[aj];
        const int mj = s_.block_size(pj);
        if (a_loc_.block(ri, cj, mi, mj).cwiseAbs().sum() != 0.0)
          a.at_or_zero(pi, pj) += a_loc_.block(ri, cj, mi, mj);
        if (mass) mass->at_or_zero(pi, pj) += mass_loc_.block(ri, cj, mi, mj);
        cj += mj;
      }
      if (b) b->segment(pi) += b_loc_.segment(ri, mi);
      ri += mi;
    }
  }

  const PuSpace& s_;
  AssembleOptions o_;
  Eigen::Matrix2d sx_;
  int order_vol_ = 2, order_bd_ = 3, nq_ = 7;
  std::vector<double> breaks_;

  PuSpace::ActivePoint act_scratch_;
  std::vector<Jet2> phi_;
  std::vector<double> stack_x_, stack_y_;
  std::vector<ShapeVals> vals_;
  int nloc_ = 0;
  Eigen::MatrixXd a_loc_, mass_loc_;
  Vector b_loc_;
};

}  // namespace

AssembledSystem assemble(const PuSpace& space, const AssembleOptions& opts,
                         const ManufacturedSolution& ms) {
  Assembler asmbl(space, opts);
  AssembledSystem sys;
  sys.problem = opts.problem;
  sys.A = BlockSparseMatrix(space.layout(), space.layout(), false);
  sys.mass = BlockSparseMatrix(space.layout(), space.layout(), false);
  sys.b = BlockVector(space.layout());
  asmbl.volume_pass(sys.A, &sys.mass, &sys.b, &ms);
  sys.penalties = asmbl.penalties(sys.A);
  asmbl.boundary_pass(sys.penalties, sys.A, &sys.b, &ms);
  sys.A.set_symmetric(true);
  sys.mass.set_symmetric(true);

  if (!opts.skip_probe) {
    auto op = [&](const Vector& x, Vector& y) { spmv(sys.A, x, y); };
    const double ritz = lanczos_smallest_ritz(op, space.layout().dim(), 30, opts.probe_seed);
    if (!(ritz > 0.0))
      throw std::runtime_error(
          "assemble: stiffness coercivity probe failed; increase the Nitsche penalty constant");
  }
  return sys;
}

NitscheParams estimate_penalties(const PuSpace& space, const AssembleOptions& opts) {
  Assembler asmbl(space, opts);
  if (!opts.eigen_penalties) {
    BlockSparseMatrix unused(space.layout(), space.layout(), false);
    return asmbl.penalties(unused);
  }
  BlockSparseMatrix a_vol(space.layout(), space.layout(), false);
  asmbl.volume_pass(a_vol, nullptr, nullptr, nullptr);
  return asmbl.penalties(a_vol);
}

const Vector& solve_reference(AssembledSystem& sys) {
  if (sys.reference) return *sys.reference;
  const int n = sys.A.row_layout().dim();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(sys.A.stored_scalars());
  for (int i = 0; i < sys.A.block_rows(); ++i) {
    const int r0 = sys.A.row_layout().offset(i);
    for (const auto& [j, blk] : sys.A.row(i)) {
      const int c0 = sys.A.col_layout().offset(j);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c) trip.emplace_back(r0 + r, c0 + c, blk(r, c));
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("solve_reference: sparse factorization failed");
  sys.reference = solver.solve(sys.b.values);
  return *sys.reference;
}

}  // namespace bmg::pum
