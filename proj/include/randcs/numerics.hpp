#ifndef RANDCS_NUMERICS_HPP
#define RANDCS_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "randcs/error.hpp"
#include "randcs/random.hpp"

namespace randcs {

/// Dense real vector.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0)
      : entries_(dim, fill) {}
  explicit DenseVector(std::vector<double> entries)
      : entries_(std::move(entries)) {}
  DenseVector(std::initializer_list<double> entries) : entries_(entries) {}

  std::size_t dim() const { return entries_.size(); }

  double& operator[](std::size_t i) { return entries_[i]; }
  double operator[](std::size_t i) const { return entries_[i]; }

  std::span<double> span() { return entries_; }
  std::span<const double> span() const { return entries_; }
  const std::vector<double>& entries() const { return entries_; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> entries_;
};

/// Dense real matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols) {
    check_shape(rows, cols);
    entries_.assign(rows * cols, fill);
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    check_shape(rows, cols);
    if (entries_.size() != rows * cols) {
      throw InvalidDimension("matrix entries length " +
                             std::to_string(entries_.size()) +
                             " does not equal rows*cols");
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  std::span<const double> entries() const { return entries_; }
  std::span<double> entries() { return entries_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  static void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
      throw InvalidDimension("matrix dimensions must be positive, got " +
                             std::to_string(rows) + "x" +
                             std::to_string(cols));
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("dot: lengths " + std::to_string(a.size()) +
                            " and " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double squared_norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

inline double squared_norm(const DenseVector& x) {
  return squared_norm(x.span());
}

inline double norm(std::span<const double> x) {
  return std::sqrt(squared_norm(x));
}

/// Writes A x into out; out must have A.rows() entries.
inline void matvec_into(const DenseMatrix& a, std::span<const double> x,
                        std::span<double> out) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("matvec: matrix has " + std::to_string(a.cols()) +
                            " columns, vector has " +
                            std::to_string(x.size()) + " entries");
  }
  if (out.size() != a.rows()) {
    throw DimensionMismatch("matvec: output length mismatch");
  }
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = dot(a.row(r), x);
}

inline DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  DenseVector out(a.rows());
  matvec_into(a, x.span(), out.span());
  return out;
}

/// Writes A^T y into out without forming the transpose: rows of A are
/// accumulated in storage order.
inline void matvec_transposed_into(const DenseMatrix& a,
                                   std::span<const double> y,
                                   std::span<double> out) {
  if (a.rows() != y.size()) {
    throw DimensionMismatch("matvec_transposed: matrix has " +
                            std::to_string(a.rows()) + " rows, vector has " +
                            std::to_string(y.size()) + " entries");
  }
  if (out.size() != a.cols()) {
    throw DimensionMismatch("matvec_transposed: output length mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t n = a.cols();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double scale = y[r];
    if (scale == 0.0) continue;
    const double* row = a.row(r).data();
    double* dst = out.data();
    for (std::size_t c = 0; c < n; ++c) dst[c] += scale * row[c];
  }
}

inline DenseVector matvec_transposed(const DenseMatrix& a,
                                     const DenseVector& y) {
  DenseVector out(a.cols());
  matvec_transposed_into(a, y.span(), out.span());
  return out;
}

/// Median of `values`, reordering them in the process.  Even lengths give
/// the mean of the two middle order statistics.
inline double median_inplace(std::span<double> values) {
  if (values.empty()) throw EmptyInput("median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

inline double median(std::span<const double> values) {
  std::vector<double> scratch(values.begin(), values.end());
  return median_inplace(scratch);
}

inline double median(std::initializer_list<double> values) {
  return median(std::span<const double>(values.begin(), values.size()));
}

/// k x n matrix of iid N(0, variance) entries drawn in row-major order.
inline DenseMatrix sample_gaussian_matrix(GaussianStream& source,
                                          std::size_t k, std::size_t n,
                                          double variance) {
  if (k == 0 || n == 0) {
    throw InvalidDimension("sample_gaussian_matrix: k and n must be positive");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidParameter("sample_gaussian_matrix: variance must be positive");
  }
  const double stddev = std::sqrt(variance);
  // Work on a local copy so the stream state can live in registers while
  // the entries are written; the caller's stream is advanced afterwards.
  GaussianStream stream = source;
  std::vector<double> entries;
  entries.reserve(k * n);
  for (std::size_t i = 0; i < k * n; ++i) entries.push_back(stddev * stream.normal());
  source = stream;
  return DenseMatrix(k, n, std::move(entries));
}

}  // namespace randcs

#endif  // RANDCS_NUMERICS_HPP
