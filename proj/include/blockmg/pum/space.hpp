#pragma once

#include <utility>
#include <vector>

#include "blockmg/block_layout.hpp"
#include "blockmg/pum/bspline.hpp"
#include "blockmg/pum/cover.hpp"
#include "blockmg/pum/jet.hpp"

namespace bmg::pum {

struct PuSpaceOptions {
  int degree = 2;         // local polynomial degree p
  int weight_degree = 3;  // PU weight spline degree q (C^{q-1})
  double stretch = 1.3;
  bool boundary_refine = false;  // p -> p + 1 on patches touching the boundary
};

// Shepard partition of unity over a regular-grid cover with local Legendre
// product bases of total degree <= p_i; block i has size (p_i+1)(p_i+2)/2.
class PuSpace {
 public:
  PuSpace() = default;
  static PuSpace create(int level, const PuSpaceOptions& opts);

  const Cover& cover() const { return cover_; }
  const PuSpaceOptions& options() const { return opts_; }
  const BlockLayout& layout() const { return layout_; }
  const WeightSpline& weight() const { return weight_; }

  int patches() const { return cover_.patches(); }
  int patch_degree(int i) const { return degrees_[static_cast<std::size_t>(i)]; }
  int max_degree() const { return max_degree_; }
  int block_size(int i) const { return layout_.size(i); }
  // Exponent pair (a, b) of local basis function k on a patch of degree p.
  static std::pair<int, int> basis_exponents(int p, int k);

  struct ActivePoint {
    int patches[4];
    int count = 0;
  };
  ActivePoint active(double x, double y) const;

  // W_i jets (numerators) and PU jets phi_i = W_i / sum W_j for the active
  // patches, all up to total order `order`.
  void pu_jets(double x, double y, int order, ActivePoint& act, std::vector<Jet2>& phi) const;

  // Jet of the local basis function theta_i^k in global coordinates.
  void basis_jet(int patch, int k, double x, double y, int order, Jet2& out) const;

  // 1-D Legendre derivative stacks for all degrees 0..p at a patch-local
  // coordinate; used by the assembler to avoid repeated evaluations.
  void basis_stack_1d(int patch, double coord, double center, int order,
                      std::vector<double>& stack) const;

 private:
  void weight_jet(int patch, double x, double y, int order, Jet2& out) const;

  Cover cover_;
  PuSpaceOptions opts_;
  WeightSpline weight_;
  BlockLayout layout_;
  std::vector<int> degrees_;
  int max_degree_ = 0;
};

// Per-patch PU jets at a point, order <= 3.
struct PuDerivs {
  int patch;
  Jet2 jet;
};
std::vector<PuDerivs> evaluate_pu(const PuSpace& space, double x, double y, int order);

}  // namespace bmg::pum
