#include "blockmg/pum/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace bmg::pum {

const GaussRule& gauss_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  if (n == 1) {
    rule.x = Vector::Zero(1);
    rule.w = Vector::Constant(1, 2.0);
  } else {
    Vector diag = Vector::Zero(n);
    Vector off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off);
    rule.x = es.eigenvalues();
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
      const double v = es.eigenvectors()(0, i);
      rule.w[i] = 2.0 * v * v;
    }
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

constexpr double kDedupEps = 1e-12;

void push_clipped(std::vector<double>& pts, double t) {
  if (t > kDedupEps && t < 1.0 - kDedupEps) pts.push_back(t);
}

std::vector<double> finalize(std::vector<double> pts) {
  pts.push_back(0.0);
  pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double t : pts)
    if (out.empty() || t - out.back() > kDedupEps) out.push_back(t);
  return out;
}

}  // namespace

std::vector<double> breakpoints_1d(const Cover& cover, const std::vector<double>& interior_knots) {
  const int n = cover.cells_per_side();
  const double h = cover.cell_size();
  const double half = 0.5 * cover.stretch() * h;
  std::vector<double> pts;
  for (int c = 0; c < n; ++c) {
    const double center = (c + 0.5) * h;
    push_clipped(pts, c * h);
    push_clipped(pts, center - half);
    push_clipped(pts, center + half);
    for (double k : interior_knots) push_clipped(pts, center + half * k);
  }
  return finalize(std::move(pts));
}

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pts = a;
  pts.insert(pts.end(), b.begin(), b.end());
  return finalize(std::move(pts));
}

std::pair<int, int> interval_range(const std::vector<double>& points, double t0, double t1) {
  const auto lo =
      std::lower_bound(points.begin(), points.end(), t0 + kDedupEps) - points.begin();
  const auto hi =
      std::lower_bound(points.begin(), points.end(), t1 - kDedupEps) - points.begin();
  return {static_cast<int>(lo) - 1, static_cast<int>(hi)};
}

}  // namespace bmg::pum
