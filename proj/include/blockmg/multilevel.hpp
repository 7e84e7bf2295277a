#pragma once

#include <Eigen/Cholesky>
#include <cstdint>
#include <vector>

#include "blockmg/block_matrix.hpp"
#include "blockmg/chebyshev.hpp"
#include "blockmg/fsai.hpp"

namespace bmg {

struct CycleSpec {
  int k_pre = 1;
  int k_post = 1;

  static CycleSpec vkk(int k) { return {k, k}; }
  static CycleSpec v2k0(int k) { return {2 * k, 0}; }
};

struct Level {
  BlockSparseMatrix A;
  BlockSparseMatrix P;  // prolongation from the next-coarser level; unset at level 0
  NestedFsai fsai;
  SmootherSpec smoother;  // carries the level's spectral bound
};

struct Hierarchy {
  std::vector<Level> levels;  // index 0 is the coarsest level
  Eigen::LLT<Eigen::MatrixXd> coarse;

  int finest() const { return static_cast<int>(levels.size()) - 1; }
};

struct SetupParams {
  int t_max = 4;
  double tau = 1.0;
  int nest = 0;
  SmootherKind kind = SmootherKind::ChebFourth;
  double richardson_omega = 1.0;
  // First-kind smoothing covers [fraction * beta, beta].
  double first_kind_fraction = 1.0 / 30.0;
  int lanczos_iters = 100;
  double lanczos_safety = 1.01;
  std::uint64_t seed = 42;
  int coarse_dim_cap = 5000;
};

// P^T A P, symmetrized as (B + B^T)/2 after assembly.
BlockSparseMatrix galerkin_coarsen(const BlockSparseMatrix& a, const BlockSparseMatrix& p);

// Spectral bound of M A via Lanczos on the symmetrized preconditioned operator.
double lanczos_lambda_max(const BlockSparseMatrix& a, const NestedFsai& fsai, int iters = 100,
                          double safety = 1.01, std::uint64_t seed = 42);

// Coarsens through the transfer chain (transfers[l-1] prolongates level l-1 to
// level l), builds per-level nested FSAI smoothers and spectral bounds, and
// factorizes the coarsest operator densely.
Hierarchy setup(const BlockSparseMatrix& a_finest, std::vector<BlockSparseMatrix> transfers,
                const SetupParams& params);

// Pre-smooth (one Chebyshev application of degree k_pre), restrict the
// residual, recurse once, prolongate and correct, post-smooth; the coarsest
// level solves directly.
void v_cycle(const Hierarchy& h, const CycleSpec& spec, int level, const Vector& b, Vector& x);

}  // namespace bmg
