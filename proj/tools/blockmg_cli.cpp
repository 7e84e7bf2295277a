// Command-line harness: discretize, build the multilevel solver, and measure
// V-cycle convergence rates.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>

#include "blockmg/experiments.hpp"
#include "blockmg/matrix_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

struct RunConfig {
  std::string problem = "biharmonic";
  std::string levels = "2..4";
  int p = 2;
  bool boundary_refine = false;
  int t_max = 4;
  double tau = 1.0;
  int nest = 0;
  std::string smoother = "cheb4";
  std::string k_range = "1..5";
  std::string cycle = "vkk";
  double theta_deg = 0.0;
  double kappa = 1.0;
  std::uint64_t seed = 42;
  double tol = -1.0;
  int max_iter = -1;
  std::string out = "rates.csv";
  int threads = 0;
};

std::pair<int, int> parse_range(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) {
    const int v = std::stoi(s);
    return {v, v};
  }
  return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
}

bmg::pum::Problem parse_problem(const std::string& s) {
  if (s == "biharmonic") return bmg::pum::Problem::Biharmonic;
  if (s == "anisotropic") return bmg::pum::Problem::Anisotropic;
  if (s == "triharmonic") return bmg::pum::Problem::Triharmonic;
  throw CLI::ValidationError("--problem", "unknown problem tag " + s);
}

bmg::SmootherKind parse_smoother(const std::string& s) {
  if (s == "cheb4") return bmg::SmootherKind::ChebFourth;
  if (s == "cheb1") return bmg::SmootherKind::ChebFirst;
  if (s == "richardson") return bmg::SmootherKind::Richardson;
  throw CLI::ValidationError("--smoother", "unknown smoother " + s);
}

std::string echo(const RunConfig& c) {
  std::ostringstream ss;
  ss << "problem=" << c.problem << " levels=" << c.levels << " p=" << c.p
     << " boundary_refine=" << (c.boundary_refine ? 1 : 0) << " tmax=" << c.t_max
     << " tau=" << c.tau << " nest=" << c.nest << " smoother=" << c.smoother << " k=" << c.k_range
     << " cycle=" << c.cycle << " theta=" << c.theta_deg << " kappa=" << c.kappa
     << " seed=" << c.seed << " tol=" << c.tol << " max_iter=" << c.max_iter
     << " threads=" << c.threads;
  return ss.str();
}

void fill_defaults(RunConfig& c) {
  const bool slow = c.problem == "triharmonic";
  if (c.tol < 0.0) c.tol = slow ? 1e-7 : 1e-8;
  if (c.max_iter < 0) c.max_iter = slow ? 100 : 50;
  if (c.threads <= 0) c.threads = static_cast<int>(std::thread::hardware_concurrency());
  if (c.threads <= 0) c.threads = 1;
}

void set_threads(int n) {
  Eigen::setNbThreads(n);
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

bmg::pum::PuSpaceOptions space_options(const RunConfig& c) {
  bmg::pum::PuSpaceOptions o;
  o.degree = c.p;
  o.weight_degree = c.problem == "triharmonic" ? 4 : 3;
  o.boundary_refine = c.boundary_refine;
  return o;
}

bmg::pum::AssembleOptions assemble_options(const RunConfig& c) {
  bmg::pum::AssembleOptions o;
  o.problem = parse_problem(c.problem);
  o.aniso = {c.theta_deg * M_PI / 180.0, c.kappa};
  return o;
}

struct Prepared {
  bmg::pum::AssembledSystem system;
  std::vector<bmg::BlockSparseMatrix> transfers;
};

Prepared prepare(const RunConfig& c) {
  const auto [lo, hi] = parse_range(c.levels);
  Prepared prep;
  if (c.problem == "fd") {
    bmg::FdProblem fd = bmg::fd_biharmonic(1 << hi, hi - lo + 1);
    prep.system = std::move(fd.system);
    prep.transfers = std::move(fd.transfers);
  } else {
    bmg::PumChain chain = bmg::build_pum_chain(lo, hi, space_options(c), assemble_options(c));
    bmg::pum::solve_reference(chain.system);
    prep.system = std::move(chain.system);
    prep.transfers = std::move(chain.transfers);
  }
  return prep;
}

bmg::SetupParams setup_params(const RunConfig& c) {
  bmg::SetupParams sp;
  sp.t_max = c.t_max;
  sp.tau = c.tau;
  sp.nest = c.nest;
  sp.kind = parse_smoother(c.smoother);
  sp.seed = c.seed;
  return sp;
}

int run_solve(const RunConfig& c) {
  Prepared prep = prepare(c);
  const bmg::Hierarchy h = bmg::setup(prep.system.A, std::move(prep.transfers), setup_params(c));
  const auto [k_lo, k_hi] = parse_range(c.k_range);
  std::vector<std::pair<int, bmg::RateReport>> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    const bmg::CycleSpec spec =
        c.cycle == "v2k0" ? bmg::CycleSpec::v2k0(k) : bmg::CycleSpec::vkk(k);
    rows.emplace_back(k, bmg::measure_rates(h, prep.system, spec, c.seed, c.tol, c.max_iter));
    const bmg::RateReport& rep = rows.back().second;
    std::printf("k=%d status=%s iters=%d rho_L2=%.4f rho_A=%.4f rho_r=%.4f\n", k,
                rep.status == bmg::SolveStatus::Converged  ? "converged"
                : rep.status == bmg::SolveStatus::Diverged ? "diverged"
                                                           : "max-iter",
                rep.iterations, rep.rho_l2, rep.rho_a, rep.rho_r);
  }
  bmg::write_rates_csv(c.out, echo(c), c.t_max, c.nest, rows);
  return 0;
}

int run_assemble(const RunConfig& c) {
  Prepared prep = prepare(c);
  bmg::write_matrix(c.out + "_A.mtx", prep.system.A);
  bmg::write_matrix(c.out + "_mass.mtx", prep.system.mass);
  bmg::write_vector(c.out + "_b.txt", prep.system.b.values);
  std::printf("wrote %s_A.mtx, %s_mass.mtx, %s_b.txt (N=%d)\n", c.out.c_str(), c.out.c_str(),
              c.out.c_str(), prep.system.A.row_layout().dim());
  return 0;
}

int run_neighborhood(const RunConfig& c) {
  if (c.problem == "fd") throw CLI::ValidationError("--problem", "neighborhood needs a PUM problem");
  const auto [lo, hi] = parse_range(c.levels);
  (void)lo;
  const bmg::pum::PuSpace space = bmg::pum::PuSpace::create(hi, space_options(c));
  const bmg::pum::AssembledSystem sys =
      bmg::pum::assemble(space, assemble_options(c),
                         bmg::pum::manufactured(parse_problem(c.problem),
                                                {c.theta_deg * M_PI / 180.0, c.kappa}));
  bmg::NestedFsai fsai = bmg::nested_build(sys.A, c.t_max, c.tau, c.nest);
  const bmg::BlockPattern pat = bmg::preconditioner_pattern(fsai);
  const bmg::NeighborhoodHistogram hist = bmg::neighborhood_histogram(space, pat);
  bmg::write_histogram_csv(c.out, echo(c), hist);
  if (hist.isotropic)
    std::printf("neighborhood: isotropic (diagonal pattern)\n");
  else
    std::printf("neighborhood: principal angle %.2f deg, moment ratio %.3f\n",
                hist.principal_angle * 180.0 / M_PI, hist.eigen_ratio);
  return 0;
}

int run_sanity(RunConfig c) {
  c.problem = "fd";
  return run_solve(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blockmg: multilevel block-FSAI + Chebyshev solver harness"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_flags = [&](CLI::App* cmd) {
    cmd->add_option("--problem", c.problem, "biharmonic|anisotropic|triharmonic|fd");
    cmd->add_option("--levels", c.levels, "level range A..B (coarsest..finest)");
    cmd->add_option("--p", c.p, "local polynomial degree");
    cmd->add_flag("--boundary-refine", c.boundary_refine, "raise p by one on boundary patches");
    cmd->add_option("--tmax", c.t_max, "adaptive FSAI steps");
    cmd->add_option("--tau", c.tau, "adaptive threshold in (0,1]");
    cmd->add_option("--nest", c.nest, "FSAI nesting depth (0 or 1)");
    cmd->add_option("--smoother", c.smoother, "cheb4|cheb1|richardson");
    cmd->add_option("--k", c.k_range, "smoothing degree range A..B");
    cmd->add_option("--cycle", c.cycle, "vkk|v2k0");
    cmd->add_option("--theta", c.theta_deg, "anisotropy angle in degrees");
    cmd->add_option("--kappa", c.kappa, "anisotropy scaling");
    cmd->add_option("--seed", c.seed, "PRNG seed");
    cmd->add_option("--tol", c.tol, "L2 error tolerance");
    cmd->add_option("--max-iter", c.max_iter, "iteration cap");
    cmd->add_option("--out", c.out, "output CSV path");
    cmd->add_option("--threads", c.threads, "worker count (default: cores)");
  };

  CLI::App* solve = app.add_subcommand("solve", "measure V-cycle convergence rates");
  CLI::App* assemble = app.add_subcommand("assemble", "export assembled matrices");
  CLI::App* neighborhood = app.add_subcommand("neighborhood", "average FSAI neighborhood data");
  CLI::App* sanity = app.add_subcommand("sanity", "finite-difference fallback run");
  for (CLI::App* cmd : {solve, assemble, neighborhood, sanity}) add_flags(cmd);

  CLI11_PARSE(app, argc, argv);
  fill_defaults(c);
  set_threads(c.threads);

  try {
    if (solve->parsed()) return run_solve(c);
    if (assemble->parsed()) return run_assemble(c);
    if (neighborhood->parsed()) return run_neighborhood(c);
    if (sanity->parsed()) return run_sanity(c);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "blockmg: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
