#pragma once

#include <Eigen/Dense>

namespace bmg {

// Dense blocks are stored row-major so that the in-memory layout matches the
// coordinate file format and row-wise extraction.
using DenseBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bmg
