#include "blockmg/multilevel.hpp"

#include <cstdio>
#include <stdexcept>

#include "blockmg/kernels.hpp"
#include "blockmg/lanczos.hpp"

namespace bmg {

BlockSparseMatrix galerkin_coarsen(const BlockSparseMatrix& a, const BlockSparseMatrix& p) {
  if (!(a.square() && a.row_layout() == p.row_layout()))
    throw std::invalid_argument("galerkin_coarsen: layouts do not match");
  const BlockSparseMatrix c = transpose_multiply(p, multiply(a, p));
  BlockSparseMatrix out(c.row_layout(), c.col_layout(), true);
  for (int i = 0; i < c.block_rows(); ++i) {
    for (const auto& [j, blk] : c.row(i)) {
      if (j > i) continue;
      DenseBlock sym = blk;
      if (c.has(j, i))
        sym = 0.5 * (blk + DenseBlock(c.block(j, i).transpose()));
      else
        sym *= 0.5;
      out.insert_symmetric(i, j, sym);
    }
  }
  return out;
}

double lanczos_lambda_max(const BlockSparseMatrix& a, const NestedFsai& fsai, int iters,
                          double safety, std::uint64_t seed) {
  auto op = [&](const Vector& x, Vector& y) { y = fsai.apply_transformed(a, x); };
  return lanczos_lambda_max(op, a.row_layout().dim(), iters, safety, seed);
}

Hierarchy setup(const BlockSparseMatrix& a_finest, std::vector<BlockSparseMatrix> transfers,
                const SetupParams& params) {
  Hierarchy h;
  const int depth = static_cast<int>(transfers.size());
  h.levels.resize(static_cast<std::size_t>(depth) + 1);
  h.levels[static_cast<std::size_t>(depth)].A = a_finest;
  for (int l = depth; l >= 1; --l) {
    h.levels[static_cast<std::size_t>(l)].P = std::move(transfers[static_cast<std::size_t>(l - 1)]);
    h.levels[static_cast<std::size_t>(l - 1)].A =
        galerkin_coarsen(h.levels[static_cast<std::size_t>(l)].A, h.levels[static_cast<std::size_t>(l)].P);
  }

  for (int l = 0; l < depth; ++l) {
    const BlockSparseMatrix& a_l = h.levels[static_cast<std::size_t>(l)].A;
    auto op = [&](const Vector& x, Vector& y) { spmv(a_l, x, y); };
    const double ritz = lanczos_smallest_ritz(op, a_l.row_layout().dim(), 30, params.seed);
    if (!(ritz > 0.0))
      std::fprintf(stderr, "blockmg: warning: level %d Galerkin operator looks indefinite (Ritz %.3e)\n",
                   l, ritz);
  }

  for (int l = 1; l <= depth; ++l) {
    Level& lv = h.levels[static_cast<std::size_t>(l)];
    lv.fsai = nested_build(lv.A, params.t_max, params.tau, params.nest);
    const double beta =
        lanczos_lambda_max(lv.A, lv.fsai, params.lanczos_iters, params.lanczos_safety, params.seed);
    lv.smoother.kind = params.kind;
    lv.smoother.beta = beta;
    lv.smoother.alpha = params.first_kind_fraction * beta;
    lv.smoother.omega = params.richardson_omega;
  }

  const int n0 = h.levels.front().A.row_layout().dim();
  if (n0 > params.coarse_dim_cap)
    throw std::invalid_argument("setup: coarsest level exceeds the dense-solve cap");
  h.coarse.compute(to_dense(h.levels.front().A));
  if (h.coarse.info() != Eigen::Success)
    throw std::runtime_error("setup: coarsest operator is not positive definite");
  return h;
}

void v_cycle(const Hierarchy& h, const CycleSpec& spec, int level, const Vector& b, Vector& x) {
  if (spec.k_pre + spec.k_post < 1)
    throw std::invalid_argument("v_cycle: cycle needs at least one smoothing step");
  if (level < 0 || level > h.finest()) throw std::out_of_range("v_cycle: level out of range");
  if (level == 0) {
    x = h.coarse.solve(b);
    return;
  }
  const Level& lv = h.levels[static_cast<std::size_t>(level)];
  auto a_op = [&](const Vector& in, Vector& out) { spmv(lv.A, in, out); };
  auto m_op = [&](const Vector& in, Vector& out) { out = lv.fsai.apply(in); };

  if (spec.k_pre > 0) x = apply_smoother(lv.smoother, spec.k_pre, a_op, m_op, b, std::move(x));

  Vector r(x.size());
  spmv(lv.A, x, r);
  r = b - r;
  Vector rc(lv.P.col_layout().dim());
  spmv_transpose(lv.P, r, rc);
  Vector ec = Vector::Zero(rc.size());
  v_cycle(h, spec, level - 1, rc, ec);
  Vector pe(x.size());
  spmv(lv.P, ec, pe);
  x += pe;

  if (spec.k_post > 0) x = apply_smoother(lv.smoother, spec.k_post, a_op, m_op, b, std::move(x));
}

}  // namespace bmg
