#include "blockmg/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "blockmg/kernels.hpp"
#include "blockmg/matrix_io.hpp"
#include "blockmg/pum/transfer.hpp"
#include "blockmg/rng.hpp"

namespace bmg {

RateReport measure_rates(const Hierarchy& h, const pum::AssembledSystem& sys,
                         const CycleSpec& spec, std::uint64_t seed, double tol, int max_iter) {
  if (!sys.reference)
    throw std::invalid_argument("measure_rates: reference coefficients missing (direct solve)");
  const Vector& u_ref = *sys.reference;
  const BlockSparseMatrix& a = h.levels.back().A;
  const int n = a.row_layout().dim();

  CounterRng rng(seed);
  Vector e(n);
  for (int i = 0; i < n; ++i) e[i] = rng.symmetric(static_cast<std::uint64_t>(i));
  Vector tmp(n);
  spmv(sys.mass, e, tmp);
  e /= std::sqrt(e.dot(tmp));

  Vector x = u_ref + e;
  RateReport rep;
  auto record = [&](const Vector& err) {
    spmv(sys.mass, err, tmp);
    rep.l2_sq.push_back(err.dot(tmp));
    spmv(a, err, tmp);
    rep.energy_sq.push_back(err.dot(tmp));
    spmv(a, err + u_ref, tmp);
    rep.residual.push_back((sys.b.values - tmp).norm());
  };
  record(e);

  const double tol_sq = tol * tol;
  int it = 0;
  rep.status = SolveStatus::MaxIter;
  if (rep.l2_sq[0] < tol_sq) rep.status = SolveStatus::Converged;
  while (rep.status == SolveStatus::MaxIter && it < max_iter) {
    v_cycle(h, spec, h.finest(), sys.b.values, x);
    ++it;
    record(x - u_ref);
    const double growth = rep.residual[static_cast<std::size_t>(it)] /
                          std::max(rep.residual[static_cast<std::size_t>(it - 1)], 1e-300);
    if (!std::isfinite(rep.residual.back()) || growth > 1e6) {
      rep.status = SolveStatus::Diverged;
      rep.blowup_iteration = it;
      break;
    }
    if (rep.l2_sq.back() < tol_sq) rep.status = SolveStatus::Converged;
  }
  rep.iterations = it;
  if (it > 0) {
    const double exponent = 1.0 / (2.0 * it);
    rep.rho_l2 = std::pow(rep.l2_sq.back() / rep.l2_sq.front(), exponent);
    rep.rho_a = std::pow(rep.energy_sq.back() / rep.energy_sq.front(), exponent);
    rep.rho_r = std::pow(rep.residual.back() / rep.residual.front(), 1.0 / it);
  }
  return rep;
}

NeighborhoodHistogram neighborhood_histogram(const pum::PuSpace& space,
                                             const BlockPattern& pattern) {
  if (pattern.rows() != space.patches())
    throw std::invalid_argument("neighborhood_histogram: pattern does not match the cover");
  NeighborhoodHistogram hist;
  const int n = pattern.rows();
  const double inv_n = 1.0 / n;
  for (int k = 0; k < n; ++k) {
    const auto [kx, ky] = space.cover().coords(k);
    for (int j : pattern.row(k)) {
      if (j < 0 || j >= n) throw std::out_of_range("neighborhood_histogram: pattern index outside cover");
      const auto [jx, jy] = space.cover().coords(j);
      hist.freq[{jx - kx, jy - ky}] += inv_n;
    }
  }
  for (const auto& [offset, f] : hist.freq) {
    const double dx = offset.first, dy = offset.second;
    hist.second_moment(0, 0) += f * dx * dx;
    hist.second_moment(0, 1) += f * dx * dy;
    hist.second_moment(1, 0) += f * dx * dy;
    hist.second_moment(1, 1) += f * dy * dy;
  }
  const Eigen::Matrix2d& m = hist.second_moment;
  if (m.norm() == 0.0) {
    hist.isotropic = true;
    hist.eigen_ratio = 1.0;
    return hist;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const double lmin = es.eigenvalues()[0], lmax = es.eigenvalues()[1];
  hist.eigen_ratio = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  hist.principal_angle = 0.5 * std::atan2(2.0 * m(0, 1), m(0, 0) - m(1, 1));
  return hist;
}

FdProblem fd_biharmonic(int n_grid, int levels) {
  if (levels < 1) throw std::invalid_argument("fd_biharmonic: need at least one level");
  if ((n_grid & (n_grid - 1)) != 0) throw std::invalid_argument("fd_biharmonic: n_grid must be 2^l");
  if (n_grid >> (levels - 1) < 4)
    throw std::invalid_argument("fd_biharmonic: grid too small for the level count");

  auto build_matrix = [](int ng) {
    const int m = ng - 1;  // interior points per direction
    const double h = 1.0 / ng;
    const double s = 1.0 / (h * h * h * h);
    BlockSparseMatrix a(BlockLayout::scalar(m * m), true);
    auto id = [m](int i, int j) { return j * m + i; };
    auto add = [&](int r, int c, double v) {
      a.at_or_zero(r, c)(0, 0) += v;
    };
    // 13-point bilaplacian; Dirichlet values drop, clamped boundary reflects
    // the distance-2 ghost onto the first interior line.
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        const int r = id(i, j);
        add(r, r, 20.0 * s);
        if (i == 0 || i == m - 1) add(r, r, s);
        if (j == 0 || j == m - 1) add(r, r, s);
        const int di[] = {1, -1, 0, 0};
        const int dj[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int i1 = i + di[d], j1 = j + dj[d];
          if (i1 >= 0 && i1 < m && j1 >= 0 && j1 < m) add(r, id(i1, j1), -8.0 * s);
          const int i2 = i + 2 * di[d], j2 = j + 2 * dj[d];
          if (i2 >= 0 && i2 < m && j2 >= 0 && j2 < m) add(r, id(i2, j2), 1.0 * s);
        }
        const int ci[] = {1, 1, -1, -1};
        const int cj[] = {1, -1, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int i1 = i + ci[d], j1 = j + cj[d];
          if (i1 >= 0 && i1 < m && j1 >= 0 && j1 < m) add(r, id(i1, j1), 2.0 * s);
        }
      }
    }
    return a;
  };

  auto build_prolong = [](int ng_fine) {
    const int mf = ng_fine - 1;
    const int mc = ng_fine / 2 - 1;
    BlockSparseMatrix p(BlockLayout::scalar(mf * mf), BlockLayout::scalar(mc * mc), false);
    auto idc = [mc](int i, int j) { return j * mc + i; };
    for (int j = 0; j < mf; ++j) {
      for (int i = 0; i < mf; ++i) {
        const int r = j * mf + i;
        // bilinear weights from the four surrounding coarse nodes
        for (int cj = (j - 1) / 2; cj <= (j + 1) / 2; ++cj) {
          for (int ci = (i - 1) / 2; ci <= (i + 1) / 2; ++ci) {
            if (ci < 0 || ci >= mc || cj < 0 || cj >= mc) continue;
            const double wx = 1.0 - 0.5 * std::abs(i + 1 - 2 * (ci + 1));
            const double wy = 1.0 - 0.5 * std::abs(j + 1 - 2 * (cj + 1));
            if (wx <= 0.0 || wy <= 0.0) continue;
            p.at_or_zero(r, idc(ci, cj))(0, 0) = wx * wy;
          }
        }
      }
    }
    return p;
  };

  FdProblem out;
  out.h = 1.0 / n_grid;
  out.system.problem = pum::Problem::Biharmonic;
  out.system.A = build_matrix(n_grid);

  const int m = n_grid - 1;
  BlockSparseMatrix mass(BlockLayout::scalar(m * m), true);
  for (int i = 0; i < m * m; ++i) mass.at_or_zero(i, i)(0, 0) = out.h * out.h;
  out.system.mass = std::move(mass);

  // Exact reference: samples of the smooth manufactured field, with the load
  // defined by construction.
  Vector ref(m * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      ref[j * m + i] =
          std::cos(2.0 * M_PI * (i + 1) * out.h) * std::sin(2.0 * M_PI * (j + 1) * out.h);
  out.system.b = BlockVector(out.system.A.row_layout());
  spmv(out.system.A, ref, out.system.b.values);
  out.system.reference = std::move(ref);

  for (int l = levels - 1; l >= 1; --l) {
    const int ng = n_grid >> (levels - 1 - l);
    out.transfers.push_back(build_prolong(ng));
  }
  std::reverse(out.transfers.begin(), out.transfers.end());
  return out;
}

PumChain build_pum_chain(int coarsest, int finest, const pum::PuSpaceOptions& space_opts,
                         const pum::AssembleOptions& asm_opts) {
  if (coarsest >= finest) throw std::invalid_argument("build_pum_chain: need coarsest < finest");
  PumChain chain;
  for (int l = coarsest; l <= finest; ++l)
    chain.spaces.push_back(pum::PuSpace::create(l, space_opts));
  for (std::size_t l = 1; l < chain.spaces.size(); ++l)
    chain.transfers.push_back(pum::build_prolongation(chain.spaces[l - 1], chain.spaces[l]));
  chain.system = pum::assemble(chain.spaces.back(), asm_opts,
                               pum::manufactured(asm_opts.problem, asm_opts.aniso));
  return chain;
}

namespace {

std::string format_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_rates_csv(const std::string& path, const std::string& header_echo, int t_max, int nest,
                     const std::vector<std::pair<int, RateReport>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("write_rates_csv: cannot open " + path);
  out << "# blockmg " << kVersion << "\n# " << header_echo << '\n';
  const std::string tag = "a" + std::to_string(t_max) + "_r" + std::to_string(nest);
  out << "k," << tag << "_L2_norm," << tag << "_energy_norm," << tag << "_residual\n";
  for (const auto& [k, rep] : rows) {
    // Diverged runs are recorded with rates clamped to >= 1.
    auto mark = [&](double rho) {
      return rep.status == SolveStatus::Diverged ? std::max(rho, 1.0) : rho;
    };
    out << k << ',' << format_rate(mark(rep.rho_l2)) << ',' << format_rate(mark(rep.rho_a)) << ','
        << format_rate(mark(rep.rho_r)) << '\n';
  }
}

void write_histogram_csv(const std::string& path, const std::string& header_echo,
                         const NeighborhoodHistogram& hist) {
  std::ofstream out(path);
  if (!out) throw IoError("write_histogram_csv: cannot open " + path);
  out << "# blockmg " << kVersion << "\n# " << header_echo << '\n';
  out << "dx,dy,frequency\n";
  for (const auto& [offset, f] : hist.freq)
    out << offset.first << ',' << offset.second << ',' << format_rate(f) << '\n';
}

}  // namespace bmg
