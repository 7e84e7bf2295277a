#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "blockmg/block_matrix.hpp"
#include "blockmg/pum/manufactured.hpp"
#include "blockmg/pum/space.hpp"

namespace bmg::pum {

struct NitscheParams {
  // gamma[i] = {gamma0, gamma1, gamma2} for patch i; zeros on interior patches.
  std::vector<std::array<double, 3>> gamma;
  bool fallback = false;
};

struct AssembleOptions {
  Problem problem = Problem::Biharmonic;
  AnisotropySpec aniso;
  bool eigen_penalties = true;   // generalized-eigenvalue estimate, else power law
  double penalty_constant = 0.0; // power-law scale; 0 selects 10 (p+1)^2
  int quad_points = 0;           // per direction; 0 selects p + q + 2
  bool skip_probe = false;
  std::uint64_t probe_seed = 42;
};

struct AssembledSystem {
  BlockSparseMatrix A;
  BlockSparseMatrix mass;
  BlockVector b;
  Problem problem = Problem::Biharmonic;
  NitscheParams penalties;
  std::optional<Vector> reference;  // coefficients of the direct solve
};

// Nitsche discretization of the chosen problem: volume terms, boundary
// consistency/symmetry/penalty terms, the mass matrix, and the load for the
// given reference solution.  Quadrature is tensor Gauss on the rectangle
// arrangement induced by cell edges, patch edges, and weight knot lines.
AssembledSystem assemble(const PuSpace& space, const AssembleOptions& opts,
                         const ManufacturedSolution& ms);

// Per boundary patch, bounds the boundary-flux forms by the volume form on
// the space of all shape functions active on the patch's boundary segment;
// gamma = 4 x the largest generalized eigenvalue.  Falls back to the power
// law C h^{-(2m-2j-1)} when the local volume form is singular.
NitscheParams estimate_penalties(const PuSpace& space, const AssembleOptions& opts);

// Sparse direct solve for the reference coefficients; stores them in `sys`.
const Vector& solve_reference(AssembledSystem& sys);

}  // namespace bmg::pum
