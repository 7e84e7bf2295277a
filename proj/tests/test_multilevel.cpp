#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "blockmg/experiments.hpp"
#include "blockmg/kernels.hpp"
#include "blockmg/lanczos.hpp"
#include "blockmg/multilevel.hpp"
#include "test_support.hpp"

using namespace bmg;

namespace {

auto matrix_op(const BlockSparseMatrix& a) {
  return [&a](const Vector& x, Vector& y) { spmv(a, x, y); };
}

Hierarchy fd_hierarchy(int n_grid, int levels, SetupParams params = {}) {
  FdProblem fd = fd_biharmonic(n_grid, levels);
  return setup(fd.system.A, std::move(fd.transfers), params);
}

}  // namespace

TEST_CASE("galerkin coarsening identities") {
  RngStream rng(201);
  const BlockLayout layout({2, 1, 3});
  const BlockSparseMatrix a = testsup::random_spd(rng, layout, 0.8);
  const BlockSparseMatrix id = BlockSparseMatrix::identity(layout);
  CHECK((testsup::dense_oracle(galerkin_coarsen(a, id)) - testsup::dense_oracle(a)).norm() <=
        1e-15);

  // scalar aggregation [1; 1] on the 2x2 identity gives [2]
  BlockSparseMatrix p(BlockLayout::scalar(2), BlockLayout::scalar(1), false);
  p.at_or_zero(0, 0)(0, 0) = 1.0;
  p.at_or_zero(1, 0)(0, 0) = 1.0;
  const BlockSparseMatrix ac =
      galerkin_coarsen(BlockSparseMatrix::identity(BlockLayout::scalar(2)), p);
  CHECK(ac.block(0, 0)(0, 0) == doctest::Approx(2.0).epsilon(1e-15));

  for (int rep = 0; rep < 10; ++rep) {
    const BlockLayout fine = testsup::random_layout(rng, 6, 3);
    const BlockLayout coarse = testsup::random_layout(rng, 3, 3);
    BlockSparseMatrix pr(fine, coarse, false);
    for (int i = 0; i < fine.blocks(); ++i)
      for (int j = 0; j < coarse.blocks(); ++j)
        if (rng.uniform() < 0.6)
          pr.insert(i, j, testsup::random_block(rng, fine.size(i), coarse.size(j)));
    const BlockSparseMatrix af = testsup::random_spd(rng, fine, 0.7);
    const BlockSparseMatrix c = galerkin_coarsen(af, pr);
    const Eigen::MatrixXd want = testsup::dense_oracle(pr).transpose() *
                                 testsup::dense_oracle(af) * testsup::dense_oracle(pr);
    CHECK((testsup::dense_oracle(c) - want).norm() <= 1e-13 * (1.0 + want.norm()));
    CHECK(c.symmetry_error() == 0.0);
  }
}

TEST_CASE("lanczos on known spectra") {
  // diag(1..50) with identity preconditioner
  const int n = 50;
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam[i] = i + 1.0;
  auto op = [&](const Vector& x, Vector& y) { y = lam.cwiseProduct(x); };
  const double raw = lanczos_lambda_max(op, n, 100, 1.0, 42);
  CHECK(raw >= 49.5);
  CHECK(raw <= 50.0 + 1e-10);
  CHECK(lanczos_lambda_max(op, n, 100, 1.01, 42) >= 50.0);

  // c I converges after one step (breakdown path)
  auto scal = [](const Vector& x, Vector& y) { y = 7.5 * x; };
  CHECK(lanczos_lambda_max(scal, 20, 100, 1.0, 1) == doctest::Approx(7.5).epsilon(1e-12));

  // full-pattern FSAI turns the operator into the identity
  RngStream rng(203);
  const BlockLayout layout = testsup::random_layout(rng, 8, 3);
  const BlockSparseMatrix a = testsup::random_spd(rng, layout, 1.0);
  NestedFsai full;
  full.layout = layout;
  full.chain.push_back(build_fsai(a, LowerPattern::full(layout.blocks())));
  CHECK(lanczos_lambda_max(a, full, 100, 1.0, 42) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lanczos bound dominates the dense spectrum") {
  RngStream rng(207);
  for (int rep = 0; rep < 5; ++rep) {
    const BlockLayout layout = testsup::random_layout(rng, 8, 4);
    const BlockSparseMatrix a = testsup::random_spd(rng, layout, 0.6);
    const NestedFsai fsai = nested_build(a, 2, 1.0, 0);
    const double beta = lanczos_lambda_max(a, fsai, 100, 1.01, 42);
    const Eigen::MatrixXd dense = dense_preconditioned(fsai, a);
    const double lam_max =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense).eigenvalues().maxCoeff();
    CHECK(beta >= 0.99 * lam_max);
  }
}

TEST_CASE("one-level hierarchy solves directly") {
  FdProblem fd = fd_biharmonic(8, 1);
  REQUIRE(fd.transfers.empty());
  const Hierarchy h = setup(fd.system.A, {}, {});
  Vector x = Vector::Zero(fd.system.A.row_layout().dim());
  v_cycle(h, CycleSpec::vkk(2), 0, fd.system.b.values, x);
  CHECK((x - *fd.system.reference).norm() <= 1e-9 * fd.system.reference->norm());
}

TEST_CASE("v_cycle fixed point and linearity") {
  SetupParams params;
  params.t_max = 3;
  const Hierarchy h = fd_hierarchy(16, 2, params);
  const int n = h.levels.back().A.row_layout().dim();
  RngStream rng(211);

  // zero right-hand side keeps the zero vector fixed
  Vector x = Vector::Zero(n);
  v_cycle(h, CycleSpec::vkk(2), h.finest(), Vector::Zero(n), x);
  CHECK(x.norm() == 0.0);

  // superposition of solutions
  const Vector b1 = rng.vector(n), b2 = rng.vector(n);
  Vector xa = Vector::Zero(n), xb = Vector::Zero(n), xc = Vector::Zero(n);
  v_cycle(h, CycleSpec::vkk(2), h.finest(), b1, xa);
  v_cycle(h, CycleSpec::vkk(2), h.finest(), b2, xb);
  v_cycle(h, CycleSpec::vkk(2), h.finest(), Vector(0.5 * b1 - 2.0 * b2), xc);
  CHECK((xc - (0.5 * xa - 2.0 * xb)).norm() <= 1e-12 * (1.0 + xc.norm()));
}

TEST_CASE("v_cycle error contraction on the FD biharmonic problem") {
  SetupParams params;
  params.t_max = 4;
  const Hierarchy h = fd_hierarchy(32, 3, params);
  const BlockSparseMatrix& a = h.levels.back().A;
  const int n = a.row_layout().dim();
  RngStream rng(213);
  Vector e = rng.vector(n);
  Vector tmp(n);
  spmv(a, e, tmp);
  double prev = std::sqrt(e.dot(tmp));
  double rho_max = 0.0;
  for (int it = 0; it < 6; ++it) {
    v_cycle(h, CycleSpec::vkk(4), h.finest(), Vector::Zero(n), e);
    spmv(a, e, tmp);
    const double cur = std::sqrt(std::max(e.dot(tmp), 0.0));
    rho_max = std::max(rho_max, cur / prev);
    prev = cur;
  }
  CHECK(rho_max < 1.0);
}

TEST_CASE("symmetric cycle operator is A-self-adjoint") {
  SetupParams params;
  params.t_max = 2;
  const Hierarchy h = fd_hierarchy(16, 2, params);
  const BlockSparseMatrix& a = h.levels.back().A;
  const int n = a.row_layout().dim();
  RngStream rng(217);
  const Vector e1 = rng.vector(n), e2 = rng.vector(n);
  auto cycle_err = [&](Vector e) {
    v_cycle(h, CycleSpec::vkk(3), h.finest(), Vector::Zero(n), e);
    return e;
  };
  const Vector ce1 = cycle_err(e1), ce2 = cycle_err(e2);
  Vector tmp(n);
  spmv(a, ce1, tmp);
  const double lhs = tmp.dot(e2);
  spmv(a, ce2, tmp);
  const double rhs = tmp.dot(e1);
  const double scale = std::max(std::abs(lhs), 1.0);
  CHECK(std::abs(lhs - rhs) <= 1e-11 * scale);
}

TEST_CASE("setup is deterministic and keeps levels positive definite") {
  SetupParams params;
  params.t_max = 3;
  const Hierarchy h1 = fd_hierarchy(16, 3, params);
  const Hierarchy h2 = fd_hierarchy(16, 3, params);
  for (std::size_t l = 0; l < h1.levels.size(); ++l) {
    CHECK(h1.levels[l].smoother.beta == h2.levels[l].smoother.beta);
    CHECK((testsup::dense_oracle(h1.levels[l].A) - testsup::dense_oracle(h2.levels[l].A)).norm() ==
          0.0);
  }
  for (const Level& lv : h1.levels) {
    const double ritz = lanczos_smallest_ritz(matrix_op(lv.A), lv.A.row_layout().dim(), 30, 5);
    CHECK(ritz > 0.0);
  }
}

TEST_CASE("degenerate identity-transfer chain shares the spectral bound") {
  RngStream rng(219);
  const BlockLayout layout = testsup::random_layout(rng, 6, 3);
  const BlockSparseMatrix a = testsup::random_spd(rng, layout, 0.8);
  SetupParams params;
  params.t_max = 2;
  const Hierarchy h = setup(a, {BlockSparseMatrix::identity(layout)}, params);
  const double beta_fine = h.levels[1].smoother.beta;
  const NestedFsai coarse_fsai = nested_build(h.levels[0].A, params.t_max, params.tau, params.nest);
  const double beta_coarse = lanczos_lambda_max(h.levels[0].A, coarse_fsai, 100, 1.01, params.seed);
  CHECK(beta_fine == doctest::Approx(beta_coarse).epsilon(0.011));
}
