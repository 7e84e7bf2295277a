#include "blockmg/chebyshev.hpp"

namespace bmg {

namespace {

// T_n or W_n at t via the shared recurrence; they differ in the linear term.
double cheb_recurrence(int n, double t, double p1) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = p1;
  for (int i = 1; i < n; ++i) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double poly_eval(const PolyEval& spec, double t) {
  if (spec.degree < 0) throw std::invalid_argument("poly_eval: degree must be >= 0");
  switch (spec.kind) {
    case ChebKind::FirstT:
      return cheb_recurrence(spec.degree, t, t);
    case ChebKind::FourthW:
      return cheb_recurrence(spec.degree, t, 2.0 * t + 1.0);
    case ChebKind::ScaledFirst: {
      if (!(spec.alpha > 0.0) || !(spec.alpha < spec.beta))
        throw std::invalid_argument("poly_eval: scaled first kind needs 0 < alpha < beta");
      const double u = (2.0 * t - spec.alpha - spec.beta) / (spec.beta - spec.alpha);
      const double u0 = (spec.alpha + spec.beta) / (spec.alpha - spec.beta);
      const double norm = cheb_recurrence(spec.degree, u0, u0);
      return cheb_recurrence(spec.degree, u, u) / norm;
    }
    case ChebKind::ScaledFourth: {
      if (!(spec.beta > 0.0)) throw std::invalid_argument("poly_eval: scaled fourth kind needs beta > 0");
      const double u = 1.0 - 2.0 * t / spec.beta;
      return cheb_recurrence(spec.degree, u, 2.0 * u + 1.0) / (2.0 * spec.degree + 1.0);
    }
  }
  throw std::logic_error("poly_eval: unknown kind");
}

}  // namespace bmg
