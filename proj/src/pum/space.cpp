#include "blockmg/pum/space.hpp"

#include <stdexcept>

#include "blockmg/pum/legendre.hpp"

namespace bmg::pum {

PuSpace PuSpace::create(int level, const PuSpaceOptions& opts) {
  if (opts.degree < 0) throw std::invalid_argument("PuSpace: degree must be >= 0");
  if (opts.degree + (opts.boundary_refine ? 1 : 0) > kMaxLegendreDegree)
    throw std::invalid_argument("PuSpace: degree exceeds the basis table");
  PuSpace s;
  s.cover_ = Cover(level, opts.stretch);
  s.opts_ = opts;
  s.weight_ = WeightSpline(opts.weight_degree);
  s.degrees_.resize(static_cast<std::size_t>(s.cover_.patches()));
  std::vector<int> sizes(static_cast<std::size_t>(s.cover_.patches()));
  s.max_degree_ = 0;
  for (int i = 0; i < s.cover_.patches(); ++i) {
    int p = opts.degree;
    if (opts.boundary_refine && s.cover_.touches_boundary(i)) ++p;
    s.degrees_[static_cast<std::size_t>(i)] = p;
    sizes[static_cast<std::size_t>(i)] = (p + 1) * (p + 2) / 2;
    s.max_degree_ = std::max(s.max_degree_, p);
  }
  s.layout_ = BlockLayout(sizes);
  return s;
}

std::pair<int, int> PuSpace::basis_exponents(int p, int k) {
  // graded order: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
  int d = 0;
  while (k > d) {
    k -= d + 1;
    ++d;
  }
  if (d > p) throw std::out_of_range("basis_exponents: index out of range");
  return {d - k, k};
}

PuSpace::ActivePoint PuSpace::active(double x, double y) const {
  ActivePoint a;
  a.count = cover_.patches_at(x, y, a.patches);
  return a;
}

void PuSpace::weight_jet(int patch, double x, double y, int order, Jet2& out) const {
  const Rect r = cover_.patch(patch);
  const double half = 0.5 * (r.x1 - r.x0);
  const double cx = 0.5 * (r.x0 + r.x1);
  const double cy = 0.5 * (r.y0 + r.y1);
  double wx[Jet2::kMaxOrder + 1], wy[Jet2::kMaxOrder + 1];
  weight_.eval((x - cx) / half, order, wx);
  weight_.eval((y - cy) / half, order, wy);
  // chain rule for the affine patch map
  double scale = 1.0;
  for (int m = 0; m <= order; ++m) {
    wx[m] *= scale;
    wy[m] *= scale;
    scale /= half;
  }
  out.set_order(order);
  out.set_separable(wx, wy);
}

void PuSpace::pu_jets(double x, double y, int order, ActivePoint& act,
                      std::vector<Jet2>& phi) const {
  act = active(x, y);
  phi.resize(static_cast<std::size_t>(act.count));
  Jet2 denom(order);
  std::vector<Jet2> weights(static_cast<std::size_t>(act.count));
  for (int a = 0; a < act.count; ++a) {
    weight_jet(act.patches[a], x, y, order, weights[static_cast<std::size_t>(a)]);
    denom += weights[static_cast<std::size_t>(a)];
  }
  if (denom.at(0, 0) <= 0.0)
    throw std::domain_error("pu_jets: point not covered by any patch");
  for (int a = 0; a < act.count; ++a)
    Jet2::divide(weights[static_cast<std::size_t>(a)], denom, phi[static_cast<std::size_t>(a)]);
}

void PuSpace::basis_stack_1d(int patch, double coord, double center, int order,
                             std::vector<double>& stack) const {
  const int p = patch_degree(patch);
  const double half = 0.5 * opts_.stretch * cover_.cell_size();
  const double xi = (coord - center) / half;
  stack.resize(static_cast<std::size_t>((p + 1) * (order + 1)));
  for (int n = 0; n <= p; ++n) {
    double* out = stack.data() + static_cast<std::ptrdiff_t>(n) * (order + 1);
    legendre_eval(n, xi, order, out);
    double scale = 1.0;
    for (int m = 0; m <= order; ++m) {
      out[m] *= scale;
      scale /= half;
    }
  }
}

void PuSpace::basis_jet(int patch, int k, double x, double y, int order, Jet2& out) const {
  const Rect r = cover_.patch(patch);
  const auto [a, b] = basis_exponents(patch_degree(patch), k);
  const double half = 0.5 * (r.x1 - r.x0);
  double lx[Jet2::kMaxOrder + 1], ly[Jet2::kMaxOrder + 1];
  legendre_eval(a, (x - 0.5 * (r.x0 + r.x1)) / half, order, lx);
  legendre_eval(b, (y - 0.5 * (r.y0 + r.y1)) / half, order, ly);
  double scale = 1.0;
  for (int m = 0; m <= order; ++m) {
    lx[m] *= scale;
    ly[m] *= scale;
    scale /= half;
  }
  out.set_order(order);
  out.set_separable(lx, ly);
}

std::vector<PuDerivs> evaluate_pu(const PuSpace& space, double x, double y, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("evaluate_pu: order must be in 0..3");
  PuSpace::ActivePoint act;
  std::vector<Jet2> phi;
  space.pu_jets(x, y, order, act, phi);
  if (act.count == 0) throw std::domain_error("evaluate_pu: point outside every patch");
  std::vector<PuDerivs> out(static_cast<std::size_t>(act.count));
  for (int a = 0; a < act.count; ++a)
    out[static_cast<std::size_t>(a)] = {act.patches[a], phi[static_cast<std::size_t>(a)]};
  return out;
}

}  // namespace bmg::pum
