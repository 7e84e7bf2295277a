#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "blockmg/kernels.hpp"
#include "blockmg/pum/assemble.hpp"
#include "blockmg/pum/transfer.hpp"
#include "blockmg/rng.hpp"
#include "test_support.hpp"

using namespace bmg;
using namespace bmg::pum;

namespace {

PuSpaceOptions opts(int p, int q = 3, bool refine = false) {
  PuSpaceOptions o;
  o.degree = p;
  o.weight_degree = q;
  o.boundary_refine = refine;
  return o;
}

double pu_value_sum(const PuSpace& s, double x, double y, int da, int db) {
  double acc = 0.0;
  for (const PuDerivs& pd : evaluate_pu(s, x, y, std::max(da + db, 0))) acc += pd.jet.deriv(da, db);
  return acc;
}

}  // namespace

TEST_CASE("partition of unity and derivative sums") {
  const PuSpace s = PuSpace::create(3, opts(2));
  RngStream rng(301);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    CHECK(std::abs(pu_value_sum(s, x, y, 0, 0) - 1.0) <= 1e-12);
    for (const PuDerivs& pd : evaluate_pu(s, x, y, 0)) {
      CHECK(pd.jet.at(0, 0) >= -1e-12);
      CHECK(pd.jet.at(0, 0) <= 1.0 + 1e-12);
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    CHECK(std::abs(pu_value_sum(s, x, y, 1, 0)) <= 1e-10);
    CHECK(std::abs(pu_value_sum(s, x, y, 0, 1)) <= 1e-10);
  }
}

TEST_CASE("single-patch region has a flat PU function") {
  const PuSpace s = PuSpace::create(2, opts(2));
  const double h = s.cover().cell_size();
  // middle of a cell, outside every neighbor's support
  const double x = 1.5 * h, y = 2.5 * h;
  const auto vals = evaluate_pu(s, x, y, 2);
  REQUIRE(vals.size() == 1);
  CHECK(vals[0].jet.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(vals[0].jet.deriv(1, 0)) <= 1e-12);
  CHECK(std::abs(vals[0].jet.deriv(0, 1)) <= 1e-12);
  CHECK(std::abs(vals[0].jet.deriv(2, 0)) <= 1e-10);
}

TEST_CASE("evaluate_pu derivatives match finite differences") {
  const PuSpace s = PuSpace::create(2, opts(2));
  RngStream rng(303);
  const double fd_h = 1e-5;
  for (int rep = 0; rep < 25; ++rep) {
    const double x = 0.05 + 0.9 * rng.uniform(), y = 0.05 + 0.9 * rng.uniform();
    const auto vals = evaluate_pu(s, x, y, 2);
    for (const PuDerivs& pd : vals) {
      auto phi_at = [&](double px, double py) {
        for (const PuDerivs& q : evaluate_pu(s, px, py, 0))
          if (q.patch == pd.patch) return q.jet.at(0, 0);
        return 0.0;
      };
      const double dx_fd = (phi_at(x + fd_h, y) - phi_at(x - fd_h, y)) / (2.0 * fd_h);
      const double dy_fd = (phi_at(x, y + fd_h) - phi_at(x, y - fd_h)) / (2.0 * fd_h);
      const double dxx_fd =
          (phi_at(x + fd_h, y) - 2.0 * phi_at(x, y) + phi_at(x - fd_h, y)) / (fd_h * fd_h);
      const double scale = 1.0 + std::abs(pd.jet.deriv(1, 0));
      CHECK(std::abs(pd.jet.deriv(1, 0) - dx_fd) <= 1e-5 * scale * 10.0);
      CHECK(std::abs(pd.jet.deriv(0, 1) - dy_fd) <= 1e-5 * (1.0 + std::abs(dy_fd)) * 10.0);
      CHECK(std::abs(pd.jet.deriv(2, 0) - dxx_fd) <= 1e-4 * (1.0 + std::abs(dxx_fd)) * 10.0);
    }
  }
  CHECK_THROWS_AS(evaluate_pu(s, 0.5, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_pu(s, 3.0, 0.5, 1), std::domain_error);
}

TEST_CASE("block layout matches the local space dimensions") {
  const PuSpace plain = PuSpace::create(3, opts(2));
  for (int i = 0; i < plain.patches(); ++i) CHECK(plain.block_size(i) == 6);

  const PuSpace refined = PuSpace::create(3, opts(2, 3, true));
  for (int i = 0; i < refined.patches(); ++i) {
    const int want = refined.cover().touches_boundary(i) ? 10 : 6;
    CHECK(refined.block_size(i) == want);
    CHECK(refined.block_size(i) ==
          (refined.patch_degree(i) + 1) * (refined.patch_degree(i) + 2) / 2);
  }
}

TEST_CASE("zero data assembles to the zero solution") {
  const PuSpace s = PuSpace::create(2, opts(2));
  AssembleOptions ao;
  ManufacturedSolution zero(zero_deriv(), Problem::Biharmonic);
  AssembledSystem sys = assemble(s, ao, zero);
  CHECK(sys.b.values.norm() == 0.0);
  solve_reference(sys);
  CHECK(sys.reference->norm() <= 1e-12);
}

TEST_CASE("stiffness is exactly symmetric and mass is s.p.d.") {
  const PuSpace s = PuSpace::create(2, opts(2));
  AssembleOptions ao;
  AssembledSystem sys = assemble(s, ao, manufactured(Problem::Biharmonic));
  CHECK(sys.A.symmetry_error() == 0.0);
  CHECK(sys.mass.symmetry_error() == 0.0);
  const Eigen::MatrixXd mass = testsup::dense_oracle(sys.mass);
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  CHECK(llt.info() == Eigen::Success);
  const Eigen::MatrixXd stiff = testsup::dense_oracle(sys.A);
  Eigen::LLT<Eigen::MatrixXd> llt_a(stiff);
  CHECK(llt_a.info() == Eigen::Success);
}

TEST_CASE("biharmonic solve reproduces global quadratics") {
  const PuSpace s = PuSpace::create(3, opts(2));
  const auto poly = polynomial_deriv({{2, 0, 1.0}, {0, 2, 1.0}});  // x^2 + y^2
  AssembleOptions ao;
  AssembledSystem sys = assemble(s, ao, ManufacturedSolution(poly, Problem::Biharmonic));
  solve_reference(sys);
  const Vector exact = interpolate_polynomial(s, poly);
  const Vector err = *sys.reference - exact;
  CHECK(l2_norm(sys.mass, err) <= 1e-8);
  RngStream rng(307);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    CHECK(std::abs(evaluate_function(s, *sys.reference, x, y) - (x * x + y * y)) <= 1e-8);
  }
}

TEST_CASE("penalty estimation: interior patches stay zero, fallback scales with h") {
  AssembleOptions fallback;
  fallback.eigen_penalties = false;
  const PuSpace s3 = PuSpace::create(3, opts(2));
  const NitscheParams p3 = estimate_penalties(s3, fallback);
  const PuSpace s4 = PuSpace::create(4, opts(2));
  const NitscheParams p4 = estimate_penalties(s4, fallback);
  for (int i = 0; i < s3.patches(); ++i)
    if (!s3.cover().touches_boundary(i))
      CHECK(p3.gamma[static_cast<std::size_t>(i)][0] == 0.0);
  // halving h doubles gamma^(1) (exponent -1) and scales gamma^(0) by 8
  int b3 = -1, b4 = -1;
  for (int i = 0; i < s3.patches(); ++i)
    if (s3.cover().touches_boundary(i)) b3 = i;
  for (int i = 0; i < s4.patches(); ++i)
    if (s4.cover().touches_boundary(i)) b4 = i;
  CHECK(p4.gamma[static_cast<std::size_t>(b4)][1] ==
        doctest::Approx(2.0 * p3.gamma[static_cast<std::size_t>(b3)][1]).epsilon(1e-12));
  CHECK(p4.gamma[static_cast<std::size_t>(b4)][0] ==
        doctest::Approx(8.0 * p3.gamma[static_cast<std::size_t>(b3)][0]).epsilon(1e-12));

  // eigen-mode penalties keep the level-3 biharmonic matrix s.p.d.
  AssembleOptions eig;
  AssembledSystem sys = assemble(s3, eig, manufactured(Problem::Biharmonic));
  Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd(testsup::dense_oracle(sys.A)));
  CHECK(llt.info() == Eigen::Success);
  for (int i = 0; i < s3.patches(); ++i)
    if (s3.cover().touches_boundary(i)) CHECK(sys.penalties.gamma[static_cast<std::size_t>(i)][0] > 0.0);
}

TEST_CASE("prolongation reproduces constants and polynomials") {
  const PuSpace coarse = PuSpace::create(2, opts(2));
  const PuSpace fine = PuSpace::create(3, opts(2));
  const BlockSparseMatrix p = build_prolongation(coarse, fine);

  AssembleOptions ao;
  ao.skip_probe = true;
  AssembledSystem fine_sys = assemble(fine, ao, manufactured(Problem::Biharmonic));

  const auto check_poly = [&](const ManufacturedSolution::Deriv& d, double tol) {
    const Vector uc = interpolate_polynomial(coarse, d);
    const Vector uf_exact = interpolate_polynomial(fine, d);
    Vector uf(fine.layout().dim());
    spmv(p, uc, uf);
    CHECK(l2_norm(fine_sys.mass, Vector(uf - uf_exact)) <= tol);
  };
  check_poly(polynomial_deriv({{0, 0, 1.0}}), 1e-10);
  check_poly(polynomial_deriv({{2, 0, 0.5}, {1, 1, -2.0}, {0, 1, 3.0}}), 1e-9);

  // block rows touch only overlapping coarse patches
  for (int i = 0; i < fine.patches(); ++i) {
    const Rect ri = fine.cover().patch(i);
    for (const auto& [j, blk] : p.row(i)) {
      const Rect rj = coarse.cover().patch(j);
      CHECK(ri.x0 < rj.x1 + 1e-12);
      CHECK(rj.x0 < ri.x1 + 1e-12);
      CHECK(ri.y0 < rj.y1 + 1e-12);
      CHECK(rj.y0 < ri.y1 + 1e-12);
    }
  }
}

TEST_CASE("manufactured solutions carry the right data") {
  const ManufacturedSolution bi = manufactured(Problem::Biharmonic);
  const ManufacturedSolution tri = manufactured(Problem::Triharmonic);
  RngStream rng(311);
  const double pi4 = std::pow(M_PI, 4), pi6 = std::pow(M_PI, 6);
  for (int i = 0; i < 40; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    const double u = std::cos(2.0 * M_PI * x) * std::sin(2.0 * M_PI * y);
    CHECK(bi.value(x, y) == doctest::Approx(u).epsilon(1e-12));
    CHECK(bi.f(x, y) == doctest::Approx(64.0 * pi4 * u).epsilon(1e-10));
    CHECK(tri.f(x, y) == doctest::Approx(512.0 * pi6 * u).epsilon(1e-10));
    CHECK(bi.g0(x, 0.0) == doctest::Approx(std::cos(2.0 * M_PI * x) * 0.0).epsilon(1e-12));
    CHECK(bi.g2(x, y) == doctest::Approx(-8.0 * M_PI * M_PI * u).epsilon(1e-10));
  }
  // anisotropic data reduces to the isotropic one for kappa = 1
  const ManufacturedSolution iso = manufactured(Problem::Anisotropic, {0.7, 1.0});
  for (int i = 0; i < 10; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    CHECK(iso.f(x, y) == doctest::Approx(bi.f(x, y)).epsilon(1e-9));
  }
  const Eigen::Vector2d n(0.0, -1.0);
  const AnisotropySpec spec{M_PI / 3.0, 10.0};
  const ManufacturedSolution an = manufactured(Problem::Anisotropic, spec);
  const Eigen::Vector2d sn = spec.tensor() * n;
  for (int i = 0; i < 10; ++i) {
    const double x = rng.uniform();
    const double want = an.deriv(1, 0, x, 0.0) * sn[0] + an.deriv(0, 1, x, 0.0) * sn[1];
    CHECK(an.g1(x, 0.0, n) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("anisotropic and triharmonic assemblies stay coercive") {
  AssembleOptions aniso;
  aniso.problem = Problem::Anisotropic;
  aniso.aniso = {M_PI / 3.0, 10.0};
  const PuSpace s = PuSpace::create(3, opts(2));
  AssembledSystem sys = assemble(s, aniso, manufactured(Problem::Anisotropic, aniso.aniso));
  CHECK(sys.A.symmetry_error() == 0.0);
  Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd(testsup::dense_oracle(sys.A)));
  CHECK(llt.info() == Eigen::Success);

  AssembleOptions tri;
  tri.problem = Problem::Triharmonic;
  const PuSpace st = PuSpace::create(2, opts(4, 4, true));
  AssembledSystem tsys = assemble(st, tri, manufactured(Problem::Triharmonic));
  CHECK(tsys.A.symmetry_error() == 0.0);
  Eigen::LLT<Eigen::MatrixXd> tllt(Eigen::MatrixXd(testsup::dense_oracle(tsys.A)));
  CHECK(tllt.info() == Eigen::Success);
}
