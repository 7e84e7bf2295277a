#pragma once

#include <vector>

namespace bmg::pum {

// Truncated bivariate Taylor expansion up to a total order (<= 5): coefficient
// c_ab of x^a y^b is d^{a+b} f / (dx^a dy^b) / (a! b!).  Division implements
// the quotient rule to all stored orders at once, which is how derivatives of
// the rational Shepard functions are obtained.
class Jet2 {
 public:
  static constexpr int kMaxOrder = 5;

  Jet2() = default;
  explicit Jet2(int order) : order_(order), c_(size(order), 0.0) {}

  static int size(int order) { return (order + 1) * (order + 2) / 2; }
  static int index(int a, int b) {
    const int d = a + b;
    return d * (d + 1) / 2 + b;
  }

  int order() const { return order_; }
  void set_order(int order) {
    order_ = order;
    c_.assign(static_cast<std::size_t>(size(order)), 0.0);
  }

  double at(int a, int b) const { return c_[static_cast<std::size_t>(index(a, b))]; }
  double& at(int a, int b) { return c_[static_cast<std::size_t>(index(a, b))]; }

  // d^{a+b} f / dx^a dy^b
  double deriv(int a, int b) const;

  // Fill from univariate factors: fx[a] = d^a f/dx^a, fy[b] = d^b g/dy^b.
  void set_separable(const double* fx, const double* fy);

  Jet2& operator+=(const Jet2& other);

  static void multiply(const Jet2& f, const Jet2& g, Jet2& out);
  static void divide(const Jet2& f, const Jet2& g, Jet2& out);  // out = f / g, g(0) != 0

 private:
  int order_ = 0;
  std::vector<double> c_ = {0.0};
};

}  // namespace bmg::pum
