#pragma once

#include <vector>

#include "blockmg/block_matrix.hpp"
#include "blockmg/pattern.hpp"
#include "blockmg/small_cholesky.hpp"

namespace bmg {

// Factor pair for M = F^T S^{-1} F: F has unit diagonal blocks on a lower
// pattern, S = diag(F A F^T) is kept as per-row Cholesky factors.
struct FsaiFactors {
  BlockLayout layout;
  LowerPattern pattern;
  BlockSparseMatrix F;
  std::vector<SmallCholesky> S;

  // F^T S^{-1} F r
  Vector apply(const Vector& r) const;
};

// F rows solve F[{i}, P~_i] = -A[{i}, P~_i] A[P~_i, P~_i]^{-1}, and
// S_ii = A_ii - A[{i}, P~_i] A[P~_i, P~_i]^{-1} A[P~_i, {i}].
FsaiFactors build_fsai(const BlockSparseMatrix& a, const LowerPattern& p);

BlockVector apply_fsai(const FsaiFactors& fac, const BlockVector& r);

// Working state of the adaptive pattern construction.
struct AdaptiveState {
  LowerPattern pattern;
  std::vector<char> active;           // rows that may still be adapted
  BlockSparseMatrix H;                // H = F A, maintained for active rows
  std::vector<SmallCholesky> gram;    // Cholesky of A[P~_k, P~_k]
  std::vector<SmallCholesky> s_diag;  // Cholesky of H_kk = S_kk
  int t_max = 1;
  double tau = 1.0;
  double eps_drop = 1e-12;            // H_kc counts as zero below eps_drop * ||H_kk||_F
};

// State consistent with the given pattern, as used by the adaptive loop.
AdaptiveState make_adaptive_state(const BlockSparseMatrix& a, const LowerPattern& p);

// det(W_c - H_kc^T H_kk^{-1} H_kc) / det(W_c), the factor by which admitting
// column c shrinks det((F A F^T)_kk).  Computed in log space.
double delta_ratio(const AdaptiveState& state, const BlockSparseMatrix& a, int k, int c);

// One admission (or retirement) per active row per outer step; at most t_max
// indices are added to any row beyond the initial pattern.
FsaiFactors adaptive_build(const BlockSparseMatrix& a, int t_max, double tau,
                           const LowerPattern& p0);

// Chain F_0..F_{n_l} with A_0 = A, A_{k+1} = F_k A_k F_k^T; the last factor's
// S is the block-Jacobi diagonal of the fully transformed matrix, so the
// preconditioner is M = \hat F^T \hat S^{-1} \hat F with \hat F = F_{n_l}...F_0.
struct NestedFsai {
  BlockLayout layout;
  std::vector<FsaiFactors> chain;

  const std::vector<SmallCholesky>& final_diag() const { return chain.back().S; }

  Vector apply(const Vector& r) const;  // M r
  // \hat L^{-1} \hat F A \hat F^T \hat L^{-T} x with \hat S = \hat L \hat L^T;
  // symmetric, with the spectrum of M A.
  Vector apply_transformed(const BlockSparseMatrix& a, const Vector& x) const;
};

NestedFsai nested_build(const BlockSparseMatrix& a, int t_max, double tau, int n_levels);

// Kaporin number trace(B) / (N det(B)^{1/N}) via Cholesky log-determinant.
double kaporin(const DenseBlock& b);
double kaporin(const BlockSparseMatrix& b);
// (det(S) / det(A))^{1/N} from built factors; equals kaporin of the
// preconditioned matrix.
double kaporin_via_dets(const FsaiFactors& fac, const BlockSparseMatrix& a);

// Structural symmetric pattern of F^T S^{-1} F (resp. of the nested product).
BlockPattern preconditioner_pattern(const FsaiFactors& fac);
BlockPattern preconditioner_pattern(const NestedFsai& fac);

// Dense symmetrized preconditioned operator, column by column; desk scale.
DenseBlock dense_preconditioned(const NestedFsai& fac, const BlockSparseMatrix& a);
DenseBlock dense_preconditioned(const FsaiFactors& fac, const BlockSparseMatrix& a);

}  // namespace bmg
