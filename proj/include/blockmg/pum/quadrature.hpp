#pragma once

#include <vector>

#include "blockmg/pum/cover.hpp"
#include "blockmg/types.hpp"

namespace bmg::pum {

struct GaussRule {
  Vector x, w;  // nodes and weights on [-1, 1]
};

// Gauss-Legendre rule via the Golub-Welsch eigenproblem; cached per n.
const GaussRule& gauss_rule(int n);

// Sorted, deduplicated breakpoints in [0, 1] of the cover's piecewise
// structure along one axis: grid lines, patch edges, and the interior knot
// lines of the weight spline.
std::vector<double> breakpoints_1d(const Cover& cover, const std::vector<double>& interior_knots);

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b);

// Indices [lo, hi) of the sub-intervals of `points` covering [t0, t1].
std::pair<int, int> interval_range(const std::vector<double>& points, double t0, double t1);

}  // namespace bmg::pum
