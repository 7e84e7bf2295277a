#include <doctest.h>

#include <cmath>

#include "blockmg/chebyshev.hpp"
#include "blockmg/rng.hpp"

using namespace bmg;

namespace {

auto identity_op() {
  return [](const Vector& x, Vector& y) { y = x; };
}

auto diag_op(const Vector& lam) {
  return [&lam](const Vector& x, Vector& y) { y = lam.cwiseProduct(x); };
}

}  // namespace

TEST_CASE("fourth-kind recurrence values at one") {
  for (int k = 0; k <= 6; ++k) {
    const PolyEval w{ChebKind::FourthW, k};
    CHECK(poly_eval(w, 1.0) == doctest::Approx(2.0 * k + 1.0).epsilon(1e-14));
  }
}

TEST_CASE("scaled fourth kind: degree one closed form and normalization") {
  const double beta = 3.7;
  const PolyEval w1{ChebKind::ScaledFourth, 1, 0.0, beta};
  CHECK(poly_eval(w1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  RngStream rng(5);
  for (int i = 0; i < 50; ++i) {
    const double z = beta * rng.uniform();
    CHECK(poly_eval(w1, z) == doctest::Approx(1.0 - 4.0 / (3.0 * beta) * z).epsilon(1e-14));
  }
  for (int k = 1; k <= 10; ++k)
    CHECK(poly_eval({ChebKind::ScaledFourth, k, 0.0, beta}, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("scaled first kind: normalization and sampled maximum") {
  const double alpha = 0.4, beta = 2.5;
  for (int k = 1; k <= 8; ++k) {
    const PolyEval t{ChebKind::ScaledFirst, k, alpha, beta};
    CHECK(poly_eval(t, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    double max_abs = 0.0;
    const int samples = 20000;
    for (int i = 0; i <= samples; ++i) {
      const double z = alpha + (beta - alpha) * i / samples;
      max_abs = std::max(max_abs, std::abs(poly_eval(t, z)));
    }
    const double want =
        1.0 / std::abs(poly_eval({ChebKind::FirstT, k}, (alpha + beta) / (alpha - beta)));
    CHECK(max_abs == doctest::Approx(want).epsilon(1e-3));
  }
}

TEST_CASE("equioscillation: k+1 extremal clusters on the interval") {
  const double alpha = 0.3, beta = 2.0;
  for (int k = 1; k <= 6; ++k) {
    const PolyEval t{ChebKind::ScaledFirst, k, alpha, beta};
    const int samples = 200000;
    double max_abs = 0.0;
    std::vector<double> vals(static_cast<std::size_t>(samples) + 1);
    for (int i = 0; i <= samples; ++i) {
      const double z = alpha + (beta - alpha) * i / samples;
      vals[static_cast<std::size_t>(i)] = poly_eval(t, z);
      max_abs = std::max(max_abs, std::abs(vals[static_cast<std::size_t>(i)]));
    }
    int clusters = 0;
    bool inside = false;
    for (double v : vals) {
      const bool extremal = std::abs(v) >= max_abs * (1.0 - 1e-8);
      if (extremal && !inside) ++clusters;
      inside = extremal;
    }
    CHECK(clusters == k + 1);
  }
}

TEST_CASE("fourth-kind degree one matches the closed form") {
  Vector e = Vector::Ones(4);
  e[1] = -2.0;
  const Vector b = Vector::Zero(4);
  const Vector x = cheb_fourth_apply(identity_op(), identity_op(), b, e, 1.0, 1);
  CHECK((x + e / 3.0).norm() <= 1e-15);  // error factor W-hat_1(1) = -1/3
}

TEST_CASE("fourth-kind per-mode error equals the scaled polynomial") {
  RngStream rng(7);
  const int n = 12;
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam[i] = 0.05 + 2.0 * rng.uniform();
  const double beta = lam.maxCoeff();
  const Vector b = Vector::Zero(n);
  for (int k = 1; k <= 10; ++k) {
    Vector e0 = rng.vector(n);
    const Vector x = cheb_fourth_apply(diag_op(lam), identity_op(), b, e0, beta, k);
    for (int i = 0; i < n; ++i) {
      const double want = poly_eval({ChebKind::ScaledFourth, k, 0.0, beta}, lam[i]) * e0[i];
      CHECK(x[i] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("mu sequence equals the closed form exactly") {
  for (int n = 0; n <= 20; ++n) CHECK(fourth_kind_mu(n) == (2.0 * n + 1.0) / (2.0 * n + 3.0));
}

TEST_CASE("first-kind single step and spectrum collapse") {
  RngStream rng(11);
  const int n = 6;
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam[i] = 1.0 + rng.uniform();
  const double alpha = 1.0, beta = 2.0;
  const Vector b = rng.vector(n);
  Vector x0 = rng.vector(n);
  const Vector x = cheb_first_apply(diag_op(lam), identity_op(), b, x0, alpha, beta, 1);
  const Vector want = x0 + 2.0 / (alpha + beta) * (b - lam.cwiseProduct(x0));
  CHECK((x - want).norm() <= 1e-14 * want.norm());

  auto scaled = [](const Vector& v, Vector& y) { y = 3.0 * v; };
  const Vector sol = cheb_first_apply(scaled, identity_op(), b, x0, 3.0 - 1e-9, 3.0, 1);
  CHECK((3.0 * sol - b).norm() <= 1e-7 * b.norm());
}

TEST_CASE("first-kind per-mode error equals the scaled polynomial") {
  RngStream rng(13);
  const int n = 10;
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam[i] = 0.5 + 1.5 * rng.uniform();
  const double alpha = 0.5, beta = 2.0;
  const Vector b = Vector::Zero(n);
  for (int k = 1; k <= 8; ++k) {
    Vector e0 = rng.vector(n);
    const Vector x = cheb_first_apply(diag_op(lam), identity_op(), b, e0, alpha, beta, k);
    for (int i = 0; i < n; ++i) {
      const double want = poly_eval({ChebKind::ScaledFirst, k, alpha, beta}, lam[i]) * e0[i];
      CHECK(x[i] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("richardson fixed point and per-mode damping") {
  RngStream rng(17);
  const int n = 8;
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam[i] = 0.1 + rng.uniform();
  const Vector sol = rng.vector(n);
  const Vector b = lam.cwiseProduct(sol);
  const Vector fixed = richardson_apply(diag_op(lam), identity_op(), b, sol, 1.0, 3);
  CHECK((fixed - sol).norm() <= 1e-14 * sol.norm());

  Vector x0 = rng.vector(n);
  const Vector one_step = richardson_apply(diag_op(lam), identity_op(), b, x0, 1.0, 1);
  const Vector want = x0 + (b - lam.cwiseProduct(x0));
  CHECK((one_step - want).norm() == 0.0);

  const double omega = 0.7;
  for (int k = 1; k <= 5; ++k) {
    const Vector xk = richardson_apply(diag_op(lam), identity_op(), Vector::Zero(n), x0, omega, k);
    for (int i = 0; i < n; ++i)
      CHECK(xk[i] == doctest::Approx(std::pow(1.0 - omega * lam[i], k) * x0[i]).epsilon(1e-12));
  }
}

TEST_CASE("weighted minimax value of the scaled fourth kind") {
  const double beta = 2.3;
  for (int k = 1; k <= 8; ++k) {
    double max_val = 0.0;
    const int samples = 100000;
    for (int i = 0; i <= samples; ++i) {
      const double z = beta * i / samples;
      max_val = std::max(
          max_val, std::sqrt(z) * std::abs(poly_eval({ChebKind::ScaledFourth, k, 0.0, beta}, z)));
    }
    CHECK(max_val == doctest::Approx(std::sqrt(beta) / (2.0 * k + 1.0)).epsilon(1e-3));
  }
}

TEST_CASE("smoothing bound for diagonal operators") {
  RngStream rng(19);
  const int n = 30;
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam[i] = 2.5 * rng.uniform();
  const double beta = lam.maxCoeff();
  for (int k = 1; k <= 6; ++k) {
    double bound = 0.0;
    for (int i = 0; i < n; ++i)
      bound = std::max(
          bound, lam[i] * std::abs(poly_eval({ChebKind::ScaledFourth, k, 0.0, beta}, lam[i])));
    const Vector v = rng.vector(n);
    const Vector e = cheb_fourth_apply(diag_op(lam), identity_op(), Vector::Zero(n), v, beta, k);
    CHECK((lam.cwiseProduct(e)).norm() <= bound * v.norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("fourth-kind application is linear in (b, x0)") {
  RngStream rng(23);
  const int n = 9;
  Vector lam(n);
  for (int i = 0; i < n; ++i) lam[i] = 0.2 + rng.uniform();
  const double beta = lam.maxCoeff() * 1.05;
  const Vector b1 = rng.vector(n), b2 = rng.vector(n);
  const Vector x1 = rng.vector(n), x2 = rng.vector(n);
  const double c1 = 0.7, c2 = -1.3;
  for (int k = 1; k <= 5; ++k) {
    const Vector lhs =
        cheb_fourth_apply(diag_op(lam), identity_op(), Vector(c1 * b1 + c2 * b2),
                          Vector(c1 * x1 + c2 * x2), beta, k);
    const Vector rhs = c1 * cheb_fourth_apply(diag_op(lam), identity_op(), b1, x1, beta, k) +
                       c2 * cheb_fourth_apply(diag_op(lam), identity_op(), b2, x2, beta, k);
    CHECK((lhs - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("parameter validation") {
  const Vector b = Vector::Zero(2), x = Vector::Zero(2);
  CHECK_THROWS_AS(cheb_fourth_apply(identity_op(), identity_op(), b, x, -1.0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(cheb_first_apply(identity_op(), identity_op(), b, x, 0.0, 1.0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(cheb_first_apply(identity_op(), identity_op(), b, x, 1.5, 1.0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(richardson_apply(identity_op(), identity_op(), b, x, 1.0, 0),
                  std::invalid_argument);
}
