#include "blockmg/pum/jet.hpp"

#include <stdexcept>

namespace bmg::pum {

namespace {

constexpr double kFactorial[] = {1, 1, 2, 6, 24, 120, 720};

}  // namespace

double Jet2::deriv(int a, int b) const { return at(a, b) * kFactorial[a] * kFactorial[b]; }

void Jet2::set_separable(const double* fx, const double* fy) {
  for (int d = 0; d <= order_; ++d)
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      at(a, b) = (fx[a] / kFactorial[a]) * (fy[b] / kFactorial[b]);
    }
}

Jet2& Jet2::operator+=(const Jet2& other) {
  if (other.order_ != order_) throw std::invalid_argument("Jet2: order mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

void Jet2::multiply(const Jet2& f, const Jet2& g, Jet2& out) {
  const int d_max = f.order_;
  out.set_order(d_max);
  for (int d1 = 0; d1 <= d_max; ++d1)
    for (int b1 = 0; b1 <= d1; ++b1) {
      const int a1 = d1 - b1;
      const double fv = f.at(a1, b1);
      if (fv == 0.0) continue;
      for (int d2 = 0; d1 + d2 <= d_max; ++d2)
        for (int b2 = 0; b2 <= d2; ++b2) {
          const int a2 = d2 - b2;
          out.at(a1 + a2, b1 + b2) += fv * g.at(a2, b2);
        }
    }
}

void Jet2::divide(const Jet2& f, const Jet2& g, Jet2& out) {
  const int d_max = f.order_;
  const double g0 = g.at(0, 0);
  if (g0 == 0.0) throw std::domain_error("Jet2: division by a jet vanishing at the point");
  out.set_order(d_max);
  // Graded recursion: q_ab = (f_ab - sum_{(a',b') < (a,b)} q_a'b' g_{a-a',b-b'}) / g_00.
  for (int d = 0; d <= d_max; ++d)
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      double acc = f.at(a, b);
      for (int a1 = 0; a1 <= a; ++a1)
        for (int b1 = 0; b1 <= b; ++b1) {
          if (a1 == a && b1 == b) continue;
          acc -= out.at(a1, b1) * g.at(a - a1, b - b1);
        }
      out.at(a, b) = acc / g0;
    }
}

}  // namespace bmg::pum
