#pragma once

#include <cmath>
#include <stdexcept>

#include "blockmg/types.hpp"

namespace bmg {

enum class SmootherKind { Richardson, ChebFirst, ChebFourth };

struct SmootherSpec {
  SmootherKind kind = SmootherKind::ChebFourth;
  int degree = 1;
  double alpha = 0.0;  // lower interval end (first kind)
  double beta = 1.0;   // upper spectral bound
  double omega = 1.0;  // Richardson damping
};

enum class ChebKind {
  FirstT,        // T_k on [-1, 1]
  FourthW,       // W_k on [-1, 1]
  ScaledFirst,   // T-hat_k on [alpha, beta], T-hat_k(0) = 1
  ScaledFourth,  // W-hat_k on [0, beta], W-hat_k(0) = 1
};

struct PolyEval {
  ChebKind kind = ChebKind::FirstT;
  int degree = 0;
  double alpha = 0.0;
  double beta = 1.0;
};

// Two-term recurrence evaluation; the scaled variants are reparametrized so
// that the polynomial equals 1 at zero.
double poly_eval(const PolyEval& spec, double t);

// Iteration scalars of the fourth-kind recurrence.  After n updates
// mu_n = (2n+1)/(2n+3); the closed form is used so the identity holds exactly
// in floating point (the equivalent update mu <- 1/(2 - mu) drifts in the
// last bits).
inline double fourth_kind_mu(int n) { return (2.0 * n + 1.0) / (2.0 * n + 3.0); }

// x_k from Algorithm "Chebyshev iteration of the fourth kind":
// r = b - A x0; p = M r; x = x0 + (4/beta) mu_0 p; then per step
// p <- mu^2 p + M r with the refreshed residual.  Error propagation is
// e_k = W-hat_k(M A) e_0.
template <class OpA, class OpM>
Vector cheb_fourth_apply(const OpA& a, const OpM& m, const Vector& b, Vector x, double beta,
                         int k) {
  if (!(beta > 0.0)) throw std::invalid_argument("cheb_fourth_apply: beta must be positive");
  if (k < 1) throw std::invalid_argument("cheb_fourth_apply: degree must be >= 1");
  const double d = 4.0 / beta;
  Vector r(x.size()), p(x.size()), t(x.size());
  a(x, t);
  r = b - t;
  m(r, p);
  double mu = fourth_kind_mu(0);
  x.noalias() += d * mu * p;
  for (int i = 2; i <= k; ++i) {
    a(x, t);
    r = b - t;
    m(r, t);
    p = mu * mu * p + t;
    mu = fourth_kind_mu(i - 1);
    x.noalias() += d * mu * p;
  }
  return x;
}

// Preconditioned first-kind iteration on [alpha, beta]:
// c = (alpha+beta)/2, d = (beta-alpha)/2, omega = 1/c, psi = (d omega)^2 / 2,
// with updates omega <- (c - psi/omega)^{-1}, psi <- (d omega / 2)^2.
// Error propagation is e_k = T-hat_k(M A) e_0.
template <class OpA, class OpM>
Vector cheb_first_apply(const OpA& a, const OpM& m, const Vector& b, Vector x, double alpha,
                        double beta, int k) {
  if (!(alpha > 0.0) || !(alpha < beta))
    throw std::invalid_argument("cheb_first_apply: interval must satisfy 0 < alpha < beta");
  if (k < 1) throw std::invalid_argument("cheb_first_apply: degree must be >= 1");
  const double c = 0.5 * (alpha + beta);
  const double d = 0.5 * (beta - alpha);
  Vector r(x.size()), p(x.size()), t(x.size());
  a(x, t);
  r = b - t;
  m(r, p);
  double omega = 1.0 / c;
  double psi = 0.5 * (d * omega) * (d * omega);
  x.noalias() += omega * p;
  for (int i = 2; i <= k; ++i) {
    a(x, t);
    r = b - t;
    m(r, t);
    p = t + psi * p;
    omega = 1.0 / (c - psi / omega);
    psi = 0.25 * (d * omega) * (d * omega);
    x.noalias() += omega * p;
  }
  return x;
}

// x <- x + omega M (b - A x), k times.
template <class OpA, class OpM>
Vector richardson_apply(const OpA& a, const OpM& m, const Vector& b, Vector x, double omega,
                        int k) {
  if (k < 1) throw std::invalid_argument("richardson_apply: step count must be >= 1");
  Vector r(x.size()), t(x.size());
  for (int i = 0; i < k; ++i) {
    a(x, t);
    r = b - t;
    m(r, t);
    x.noalias() += omega * t;
  }
  return x;
}

template <class OpA, class OpM>
Vector apply_smoother(const SmootherSpec& spec, int degree, const OpA& a, const OpM& m,
                      const Vector& b, Vector x) {
  switch (spec.kind) {
    case SmootherKind::Richardson:
      return richardson_apply(a, m, b, std::move(x), spec.omega, degree);
    case SmootherKind::ChebFirst:
      return cheb_first_apply(a, m, b, std::move(x), spec.alpha, spec.beta, degree);
    case SmootherKind::ChebFourth:
      return cheb_fourth_apply(a, m, b, std::move(x), spec.beta, degree);
  }
  throw std::logic_error("apply_smoother: unknown kind");
}

}  // namespace bmg
