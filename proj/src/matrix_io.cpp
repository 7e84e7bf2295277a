#include "blockmg/matrix_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bmg {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int locate_block(const BlockLayout& layout, int scalar, int* local) {
  // scalar is 0-based; layout offsets are sorted
  int lo = 0, hi = layout.blocks() - 1;
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (layout.offset(mid) <= scalar)
      lo = mid;
    else
      hi = mid - 1;
  }
  *local = scalar - layout.offset(lo);
  return lo;
}

}  // namespace

IoError::IoError(const std::string& msg, int line_)
    : std::runtime_error(line_ > 0 ? msg + " (line " + std::to_string(line_) + ")" : msg),
      line(line_) {}

void write_matrix(const std::string& path, const BlockSparseMatrix& a) {
  if (!a.square()) throw IoError("write_matrix: only square block matrices are supported");
  std::ofstream out(path);
  if (!out) throw IoError("write_matrix: cannot open " + path);
  out << "%%block-matrix " << a.row_layout().dim() << ' ' << a.col_layout().dim() << ' '
      << a.stored_scalars() << '\n';
  for (int i = 0; i < a.block_rows(); ++i) {
    for (const auto& [j, blk] : a.row(i)) {
      const int r0 = a.row_layout().offset(i), c0 = a.col_layout().offset(j);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c)
          out << (r0 + r + 1) << ' ' << (c0 + c + 1) << ' ' << format_value(blk(r, c)) << '\n';
    }
  }
  if (!out) throw IoError("write_matrix: write failed for " + path);

  std::ofstream side(path + ".blocks");
  if (!side) throw IoError("write_matrix: cannot open " + path + ".blocks");
  for (int m : a.row_layout().sizes()) side << m << '\n';
}

BlockSparseMatrix read_matrix(const std::string& path) {
  std::ifstream side(path + ".blocks");
  if (!side) throw IoError("read_matrix: cannot open " + path + ".blocks");
  std::vector<int> sizes;
  {
    std::string line;
    int lineno = 0;
    while (std::getline(side, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream ss(line);
      int m;
      if (!(ss >> m) || m < 1) throw IoError("read_matrix: bad block size in " + path + ".blocks", lineno);
      sizes.push_back(m);
    }
  }
  if (sizes.empty()) throw IoError("read_matrix: empty layout file " + path + ".blocks");
  BlockLayout layout(sizes);

  std::ifstream in(path);
  if (!in) throw IoError("read_matrix: cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw IoError("read_matrix: missing header", 1);
  std::istringstream hs(header);
  std::string tag;
  long n_rows = 0, n_cols = 0;
  std::uint64_t nnz = 0;
  if (!(hs >> tag >> n_rows >> n_cols >> nnz) || tag != "%%block-matrix")
    throw IoError("read_matrix: malformed header", 1);
  if (n_rows != n_cols) throw IoError("read_matrix: only square matrices are supported", 1);
  if (n_rows != layout.dim())
    throw IoError("read_matrix: layout file sum does not match matrix dimension", 1);

  BlockSparseMatrix a(layout, layout, false);
  std::string line;
  int lineno = 1;
  std::uint64_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    long i = 0, j = 0;
    double v = 0;
    if (!(ss >> i >> j >> v)) throw IoError("read_matrix: malformed triplet", lineno);
    if (i < 1 || i > n_rows || j < 1 || j > n_cols)
      throw IoError("read_matrix: scalar index out of range", lineno);
    int li = 0, lj = 0;
    const int bi = locate_block(layout, static_cast<int>(i - 1), &li);
    const int bj = locate_block(layout, static_cast<int>(j - 1), &lj);
    a.at_or_zero(bi, bj)(li, lj) = v;
    ++seen;
  }
  if (seen != nnz) throw IoError("read_matrix: header count does not match triplet count", lineno);

  // Restore the symmetry flag when the stored data is exactly symmetric.
  if (a.stored_blocks() > 0 && a.symmetry_error() == 0.0) {
    bool pattern_sym = true;
    for (int i = 0; i < a.block_rows() && pattern_sym; ++i)
      for (const auto& [j, blk] : a.row(i))
        if (!a.has(j, i)) {
          pattern_sym = false;
          break;
        }
    a.set_symmetric(pattern_sym);
  }
  return a;
}

void write_vector(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) throw IoError("write_vector: cannot open " + path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_value(v[i]) << '\n';
}

Vector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_vector: cannot open " + path);
  std::vector<double> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v;
    if (!(ss >> v)) throw IoError("read_vector: malformed value", lineno);
    vals.push_back(v);
  }
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace bmg
