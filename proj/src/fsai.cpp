#include "blockmg/fsai.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blockmg/kernels.hpp"

namespace bmg {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Rebuilds F row k, its S Cholesky, and the gram Cholesky of A[P~_k, P~_k].
void build_row(const BlockSparseMatrix& a, const LowerPattern& p, int k, BlockSparseMatrix& f,
               std::vector<SmallCholesky>& s, std::vector<SmallCholesky>& gram) {
  const int mk = a.row_layout().size(k);
  const int row_k[]{k};
  const auto strict = p.strict_row(k);
  f.clear_row(k);
  f.insert(k, k, DenseBlock::Identity(mk, mk));
  DenseBlock s_kk = extract(a, row_k, row_k);
  if (!strict.empty()) {
    gram[static_cast<std::size_t>(k)] =
        SmallCholesky(extract(a, strict, strict), "row " + std::to_string(k) + " principal submatrix");
    const DenseBlock a_ks = extract(a, row_k, strict);
    const DenseBlock x = gram[static_cast<std::size_t>(k)].solve(DenseBlock(a_ks.transpose()));
    const DenseBlock f_row = -x.transpose();
    int col = 0;
    for (int j : strict) {
      const int mj = a.row_layout().size(j);
      f.insert(k, j, f_row.middleCols(col, mj));
      col += mj;
    }
    s_kk.noalias() -= a_ks * x;
  } else {
    gram[static_cast<std::size_t>(k)] = SmallCholesky(DenseBlock::Zero(0, 0));
  }
  s[static_cast<std::size_t>(k)] = SmallCholesky(s_kk, "S row " + std::to_string(k));
}

// Recomputes row k of H = F A from the current F row.
void build_h_row(const BlockSparseMatrix& a, const BlockSparseMatrix& f, int k,
                 BlockSparseMatrix& h) {
  h.clear_row(k);
  for (const auto& [j, f_kj] : f.row(k))
    for (const auto& [c, a_jc] : a.row(j)) h.at_or_zero(k, c).noalias() += f_kj * a_jc;
}

void check_spd_inputs(const BlockSparseMatrix& a) {
  require(a.square(), "fsai: matrix must be square");
  require(a.symmetric(), "fsai: matrix must be symmetric");
}

}  // namespace

Vector FsaiFactors::apply(const Vector& r) const {
  Vector v(r.size());
  spmv(F, r, v);
  for (int i = 0; i < layout.blocks(); ++i) {
    auto seg = v.segment(layout.offset(i), layout.size(i));
    seg = S[static_cast<std::size_t>(i)].solve(Vector(seg));
  }
  Vector out(r.size());
  spmv_transpose(F, v, out);
  return out;
}

FsaiFactors build_fsai(const BlockSparseMatrix& a, const LowerPattern& p) {
  check_spd_inputs(a);
  require(p.rows() == a.block_rows(), "build_fsai: pattern size does not match matrix");
  FsaiFactors fac;
  fac.layout = a.row_layout();
  fac.pattern = p;
  fac.F = BlockSparseMatrix(fac.layout, fac.layout, false);
  fac.S.resize(static_cast<std::size_t>(a.block_rows()));
  std::vector<SmallCholesky> gram(static_cast<std::size_t>(a.block_rows()));
  for (int k = 0; k < a.block_rows(); ++k) build_row(a, p, k, fac.F, fac.S, gram);
  return fac;
}

BlockVector apply_fsai(const FsaiFactors& fac, const BlockVector& r) {
  require(r.layout == fac.layout, "apply_fsai: layout mismatch");
  return BlockVector(fac.layout, fac.apply(r.values));
}

AdaptiveState make_adaptive_state(const BlockSparseMatrix& a, const LowerPattern& p) {
  check_spd_inputs(a);
  AdaptiveState st;
  st.pattern = p;
  st.active.assign(static_cast<std::size_t>(a.block_rows()), 1);
  st.H = BlockSparseMatrix(a.row_layout(), a.col_layout(), false);
  st.gram.resize(static_cast<std::size_t>(a.block_rows()));
  st.s_diag.resize(static_cast<std::size_t>(a.block_rows()));
  BlockSparseMatrix f(a.row_layout(), a.col_layout(), false);
  for (int k = 0; k < a.block_rows(); ++k) {
    build_row(a, p, k, f, st.s_diag, st.gram);
    build_h_row(a, f, k, st.H);
  }
  return st;
}

double delta_ratio(const AdaptiveState& state, const BlockSparseMatrix& a, int k, int c) {
  require(c >= 0 && c < k, "delta_ratio: candidate must precede the row");
  require(!state.pattern.contains(k, c), "delta_ratio: candidate already in pattern");
  require(state.H.has(k, c), "delta_ratio: H_kc not stored");

  const int col_c[]{c};
  const auto strict = state.pattern.strict_row(k);
  DenseBlock w = extract(a, col_c, col_c);
  if (!strict.empty()) {
    const DenseBlock a_cs = extract(a, col_c, strict);
    w.noalias() -= a_cs * state.gram[static_cast<std::size_t>(k)].solve(DenseBlock(a_cs.transpose()));
  }
  const SmallCholesky w_chol(w, "W_c for row " + std::to_string(k) + ", candidate " + std::to_string(c));

  const DenseBlock& h_kc = state.H.block(k, c);
  DenseBlock u = w;
  u.noalias() -= h_kc.transpose() * state.s_diag[static_cast<std::size_t>(k)].solve(h_kc);
  double log_ratio;
  try {
    log_ratio = SmallCholesky(u).logdet() - w_chol.logdet();
  } catch (const NotPositiveDefinite&) {
    return 0.0;  // update numerically annihilates det((F A F^T)_kk)
  }
  return std::min(std::exp(log_ratio), 1.0);
}

FsaiFactors adaptive_build(const BlockSparseMatrix& a, int t_max, double tau,
                           const LowerPattern& p0) {
  check_spd_inputs(a);
  require(t_max >= 1, "adaptive_build: t_max must be >= 1");
  require(tau > 0.0 && tau <= 1.0, "adaptive_build: tau must be in (0, 1]");
  require(p0.rows() == a.block_rows(), "adaptive_build: pattern size does not match matrix");

  const int n = a.block_rows();
  FsaiFactors fac;
  fac.layout = a.row_layout();
  fac.F = BlockSparseMatrix(fac.layout, fac.layout, false);
  fac.S.resize(static_cast<std::size_t>(n));

  AdaptiveState st;
  st.pattern = p0;
  st.active.assign(static_cast<std::size_t>(n), 1);
  st.H = BlockSparseMatrix(a.row_layout(), a.col_layout(), false);
  st.gram.resize(static_cast<std::size_t>(n));
  st.s_diag.resize(static_cast<std::size_t>(n));
  st.t_max = t_max;
  st.tau = tau;

  // Initial build covers every row; later steps revisit active rows only.
  std::vector<char> stale(static_cast<std::size_t>(n), 1);
  for (int t = 1; t <= t_max; ++t) {
    for (int k = 0; k < n; ++k) {
      if (!stale[static_cast<std::size_t>(k)]) continue;
      build_row(a, st.pattern, k, fac.F, st.s_diag, st.gram);
      build_h_row(a, fac.F, k, st.H);
      stale[static_cast<std::size_t>(k)] = 0;
    }
    for (int k = 0; k < n; ++k) {
      if (!st.active[static_cast<std::size_t>(k)]) continue;
      const DenseBlock& h_kk = st.H.block(k, k);
      const double threshold = st.eps_drop * h_kk.norm();
      int best = -1;
      double best_rho = 0.0;
      for (const auto& [c, h_kc] : st.H.row(k)) {
        if (c >= k) break;
        if (st.pattern.contains(k, c)) continue;
        if (h_kc.norm() <= threshold) continue;
        const double rho = delta_ratio(st, a, k, c);
        if (best < 0 || rho < best_rho) {  // ties keep the smallest column
          best = c;
          best_rho = rho;
        }
      }
      if (best < 0) {
        st.active[static_cast<std::size_t>(k)] = 0;
      } else if (best_rho < tau) {
        st.pattern.add(k, best);
        stale[static_cast<std::size_t>(k)] = 1;
      } else {
        st.active[static_cast<std::size_t>(k)] = 0;
      }
    }
  }
  for (int k = 0; k < n; ++k)
    if (stale[static_cast<std::size_t>(k)]) build_row(a, st.pattern, k, fac.F, fac.S, st.gram);

  // Rows rebuilt inside the loop already carry their S factors.
  for (int k = 0; k < n; ++k)
    if (!stale[static_cast<std::size_t>(k)])
      fac.S[static_cast<std::size_t>(k)] = std::move(st.s_diag[static_cast<std::size_t>(k)]);
  fac.pattern = std::move(st.pattern);
  return fac;
}

Vector NestedFsai::apply(const Vector& r) const {
  Vector v = r;
  Vector tmp(r.size());
  for (const FsaiFactors& fac : chain) {
    spmv(fac.F, v, tmp);
    v.swap(tmp);
  }
  const auto& s_hat = final_diag();
  for (int i = 0; i < layout.blocks(); ++i) {
    auto seg = v.segment(layout.offset(i), layout.size(i));
    seg = s_hat[static_cast<std::size_t>(i)].solve(Vector(seg));
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    spmv_transpose(it->F, v, tmp);
    v.swap(tmp);
  }
  return v;
}

Vector NestedFsai::apply_transformed(const BlockSparseMatrix& a, const Vector& x) const {
  const auto& s_hat = final_diag();
  Vector v(x.size());
  for (int i = 0; i < layout.blocks(); ++i)
    v.segment(layout.offset(i), layout.size(i)) = s_hat[static_cast<std::size_t>(i)].solve_lt(
        Vector(x.segment(layout.offset(i), layout.size(i))));
  Vector tmp(x.size());
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    spmv_transpose(it->F, v, tmp);
    v.swap(tmp);
  }
  spmv(a, v, tmp);
  v.swap(tmp);
  for (const FsaiFactors& fac : chain) {
    spmv(fac.F, v, tmp);
    v.swap(tmp);
  }
  for (int i = 0; i < layout.blocks(); ++i) {
    auto seg = v.segment(layout.offset(i), layout.size(i));
    seg = s_hat[static_cast<std::size_t>(i)].solve_l(Vector(seg));
  }
  return v;
}

NestedFsai nested_build(const BlockSparseMatrix& a, int t_max, double tau, int n_levels) {
  require(n_levels >= 0, "nested_build: n_levels must be >= 0");
  NestedFsai out;
  out.layout = a.row_layout();
  BlockSparseMatrix a_k = a;
  for (int level = 0; level <= n_levels; ++level) {
    out.chain.push_back(adaptive_build(a_k, t_max, tau, LowerPattern::diagonal(a.block_rows())));
    if (level < n_levels) a_k = triple_product(out.chain.back().F, a_k);
  }
  return out;
}

double kaporin(const DenseBlock& b) {
  const int n = static_cast<int>(b.rows());
  require(n > 0 && b.cols() == n, "kaporin: matrix must be square");
  const SmallCholesky chol(b, "kaporin");
  return b.trace() / (n * std::exp(chol.logdet() / n));
}

double kaporin(const BlockSparseMatrix& b) { return kaporin(to_dense(b)); }

double kaporin_via_dets(const FsaiFactors& fac, const BlockSparseMatrix& a) {
  double logdet_s = 0.0;
  for (const SmallCholesky& s : fac.S) logdet_s += s.logdet();
  const double logdet_a = SmallCholesky(to_dense(a), "kaporin_via_dets").logdet();
  return std::exp((logdet_s - logdet_a) / a.row_layout().dim());
}

BlockPattern preconditioner_pattern(const FsaiFactors& fac) {
  BlockPattern out(fac.pattern.rows());
  for (int k = 0; k < fac.pattern.rows(); ++k) {
    const auto row = fac.pattern.row(k);
    for (int i : row)
      for (int j : row)
        if (j <= i) out.add_symmetric(i, j);
  }
  return out;
}

BlockPattern preconditioner_pattern(const NestedFsai& fac) {
  const int n = fac.layout.blocks();
  // Symbolic rows of \hat F = F_{n_l} ... F_0.
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto r = fac.chain.front().pattern.row(i);
    rows[static_cast<std::size_t>(i)].assign(r.begin(), r.end());
  }
  for (std::size_t l = 1; l < fac.chain.size(); ++l) {
    std::vector<std::vector<int>> next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<int>& out = next[static_cast<std::size_t>(i)];
      for (int j : fac.chain[l].pattern.row(i)) {
        const auto& src = rows[static_cast<std::size_t>(j)];
        std::vector<int> merged;
        merged.reserve(out.size() + src.size());
        std::set_union(out.begin(), out.end(), src.begin(), src.end(), std::back_inserter(merged));
        out.swap(merged);
      }
    }
    rows.swap(next);
  }
  BlockPattern out(n);
  for (int k = 0; k < n; ++k)
    for (int i : rows[static_cast<std::size_t>(k)])
      for (int j : rows[static_cast<std::size_t>(k)])
        if (j <= i) out.add_symmetric(i, j);
  return out;
}

DenseBlock dense_preconditioned(const NestedFsai& fac, const BlockSparseMatrix& a) {
  const int n = a.row_layout().dim();
  DenseBlock out(n, n);
  Vector e = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    out.col(j) = fac.apply_transformed(a, e);
    e[j] = 0.0;
  }
  return out;
}

DenseBlock dense_preconditioned(const FsaiFactors& fac, const BlockSparseMatrix& a) {
  NestedFsai wrap;
  wrap.layout = fac.layout;
  wrap.chain.push_back(fac);
  return dense_preconditioned(wrap, a);
}

}  // namespace bmg
