#pragma once

#include "blockmg/block_matrix.hpp"
#include "blockmg/pum/manufactured.hpp"
#include "blockmg/pum/space.hpp"

namespace bmg::pum {

// Global-to-local L^2 projection: for each fine patch i the block row is
// M_i^{-1} C_i with (M_i)_{kk'} = <theta_i^k, theta_i^k'> over omega_i cap
// Omega and C_i columns <phi_j theta_j^m, theta_i^k> over the same region.
// Restriction is the transpose.
BlockSparseMatrix build_prolongation(const PuSpace& coarse, const PuSpace& fine);

// Coefficients that represent a global polynomial of degree <= p exactly
// (local Legendre expansion per patch).
Vector interpolate_polynomial(const PuSpace& space, const ManufacturedSolution::Deriv& poly);

// L^2(Omega) norm of the function represented by coefficients, via the mass
// matrix of the space.
double l2_norm(const BlockSparseMatrix& mass, const Vector& coeffs);

// Pointwise evaluation of a PUM function from its coefficients.
double evaluate_function(const PuSpace& space, const Vector& coeffs, double x, double y);

}  // namespace bmg::pum
