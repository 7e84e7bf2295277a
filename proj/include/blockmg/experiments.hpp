#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "blockmg/multilevel.hpp"
#include "blockmg/pattern.hpp"
#include "blockmg/pum/assemble.hpp"
#include "blockmg/pum/space.hpp"

namespace bmg {

enum class SolveStatus { Converged, MaxIter, Diverged };

struct RateReport {
  double rho_l2 = 0.0;
  double rho_a = 0.0;
  double rho_r = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  int blowup_iteration = -1;
  // Per-iteration histories (index 0 is the initial state): squared M- and
  // A-norms of the error and the l2 residual norm.
  std::vector<double> l2_sq, energy_sq, residual;
};

// Random initial error in (-1, 1) per coefficient, normalized to unit L^2
// norm; V-cycles run until the L^2 error drops below tol or max_iter is hit.
// Rates: rho = (q_n / q_0)^{1/(2n)} for the quadratic forms, and
// (||r_n|| / ||r_0||)^{1/n} for the residual.
RateReport measure_rates(const Hierarchy& h, const pum::AssembledSystem& sys,
                         const CycleSpec& spec, std::uint64_t seed, double tol, int max_iter);

struct NeighborhoodHistogram {
  std::map<std::pair<int, int>, double> freq;  // cell offset -> frequency in [0, 1]
  Eigen::Matrix2d second_moment = Eigen::Matrix2d::Zero();
  double principal_angle = 0.0;  // radians in (-pi/2, pi/2]
  double eigen_ratio = 1.0;      // largest / smallest moment eigenvalue
  bool isotropic = false;        // diagonal-only pattern; angle undefined
};

// Superimposes the preconditioner pattern rows as integer cell offsets from
// each row's own patch.
NeighborhoodHistogram neighborhood_histogram(const pum::PuSpace& space,
                                             const BlockPattern& pattern);

struct FdProblem {
  pum::AssembledSystem system;               // A, mass = h^2 I, b, reference
  std::vector<BlockSparseMatrix> transfers;  // bilinear interpolation chain
  double h = 0.0;
};

// 13-point finite-difference biharmonic operator on the unit square with
// clamped boundary (scalar blocks), plus nested-grid transfer operators.
FdProblem fd_biharmonic(int n_grid, int levels);

// Discretization chain from the coarsest to the finest level: spaces, the
// L^2-projection transfers, and the assembled finest system.
struct PumChain {
  std::vector<pum::PuSpace> spaces;
  std::vector<BlockSparseMatrix> transfers;
  pum::AssembledSystem system;
};

PumChain build_pum_chain(int coarsest, int finest, const pum::PuSpaceOptions& space_opts,
                         const pum::AssembleOptions& asm_opts);

// CSV writers; `columns` uses the a{t}_r{nest} naming convention.
void write_rates_csv(const std::string& path, const std::string& header_echo, int t_max, int nest,
                     const std::vector<std::pair<int, RateReport>>& rows);
void write_histogram_csv(const std::string& path, const std::string& header_echo,
                         const NeighborhoodHistogram& hist);

}  // namespace bmg
