#ifndef RANDCS_BASELINES_HPP
#define RANDCS_BASELINES_HPP

// Comparators that recover from a single sensing matrix: orthogonal matching
// pursuit on real-valued measurements, and binary iterative hard thresholding
// (plain and normalized) on sign-only measurements.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "randcs/error.hpp"
#include "randcs/numerics.hpp"
#include "randcs/recovery.hpp"
#include "randcs/sensing.hpp"

namespace randcs {

// ---------------------------------------------------------------------------
// Orthogonal matching pursuit

struct OmpState {
  DenseVector residual;
  std::vector<std::size_t> selected;  // in selection order
  std::vector<double> coefficients;   // aligned with `selected`
};

/// Step-wise OMP.  The least-squares fit over the selected columns is kept as
/// an incrementally grown thin QR factorization (classical Gram-Schmidt with
/// one reorthogonalization pass), so each step costs O(k n + k t).
/// A and b are held by reference and must outlive the solver.
class OmpSolver {
 public:
  static constexpr double kPivotTolerance = 1e-12;

  OmpSolver(const DenseMatrix& a, const DenseVector& b, std::size_t s_budget,
            double residual_tol)
      : a_(a), b_(b), budget_(s_budget), tol_(residual_tol) {
    if (b.dim() != a.rows()) {
      throw DimensionMismatch("omp: b has length " + std::to_string(b.dim()) +
                              ", A has " + std::to_string(a.rows()) + " rows");
    }
    if (s_budget > std::min(a.rows(), a.cols())) {
      throw InvalidParameter("omp: sparsity budget exceeds min(k, n)");
    }
    if (!(residual_tol >= 0.0)) {
      throw InvalidParameter("omp: residual tolerance must be >= 0");
    }
    column_norms_.assign(a.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const auto row = a.row(r);
      for (std::size_t c = 0; c < a.cols(); ++c) column_norms_[c] += row[c] * row[c];
    }
    for (double& x : column_norms_) x = std::sqrt(x);
    is_selected_.assign(a.cols(), false);
    state_.residual = b;
    correlations_ = DenseVector(a.cols());
  }

  const OmpState& state() const { return state_; }
  double residual_norm() const { return norm(state_.residual.span()); }

  bool done() {
    if (finished_) return true;
    if (state_.selected.size() >= budget_ || residual_norm() <= tol_) finished_ = true;
    return finished_;
  }

  /// One selection + refit.  Returns false once the stopping rule holds.
  bool step() {
    if (done()) return false;
    matvec_transposed_into(a_, state_.residual.span(), correlations_.span());
    std::size_t best = a_.cols();
    double best_score = 0.0;
    for (std::size_t j = 0; j < a_.cols(); ++j) {
      if (is_selected_[j] || column_norms_[j] == 0.0) continue;
      const double score = std::fabs(correlations_[j]) / column_norms_[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best == a_.cols()) {
      // Residual is orthogonal to every remaining column.
      finished_ = true;
      return false;
    }
    append_column(best);
    return true;
  }

  RecoveredSignal result() const {
    RecoveredSignal out;
    out.values = DenseVector(a_.cols());
    for (std::size_t t = 0; t < state_.selected.size(); ++t) {
      out.values[state_.selected[t]] = state_.coefficients[t];
    }
    out.support = state_.selected;
    std::sort(out.support.begin(), out.support.end());
    out.method = Method::omp;
    return out;
  }

 private:
  void append_column(std::size_t j) {
    const std::size_t k = a_.rows();
    DenseVector q(k);
    for (std::size_t p = 0; p < k; ++p) q[p] = a_(p, j);

    const std::size_t t = basis_.size();
    std::vector<double> r_col(t + 1, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < t; ++i) {
        const double proj = dot(basis_[i].span(), q.span());
        r_col[i] += proj;
        for (std::size_t p = 0; p < k; ++p) q[p] -= proj * basis_[i][p];
      }
    }
    const double pivot = norm(q.span());
    const double leading = t == 0 ? column_norms_[j] : r_diag_.front();
    if (!(pivot > kPivotTolerance * leading)) {
      throw RankDeficient("omp: column " + std::to_string(j) +
                          " is numerically dependent on the selected columns");
    }
    for (double& x : q) x /= pivot;
    r_col[t] = pivot;

    basis_.push_back(std::move(q));
    r_cols_.push_back(std::move(r_col));
    r_diag_.push_back(pivot);
    qtb_.push_back(dot(basis_.back().span(), b_.span()));

    const double along = dot(basis_.back().span(), state_.residual.span());
    for (std::size_t p = 0; p < k; ++p) state_.residual[p] -= along * basis_.back()[p];

    is_selected_[j] = true;
    state_.selected.push_back(j);
    solve_coefficients();
  }

  // Back substitution on R c = Q^T b; r_cols_[c][i] holds R(i, c).
  void solve_coefficients() {
    const std::size_t t = basis_.size();
    state_.coefficients.assign(t, 0.0);
    for (std::size_t ii = t; ii-- > 0;) {
      double acc = qtb_[ii];
      for (std::size_t c = ii + 1; c < t; ++c) acc -= r_cols_[c][ii] * state_.coefficients[c];
      state_.coefficients[ii] = acc / r_cols_[ii][ii];
    }
  }

  const DenseMatrix& a_;
  const DenseVector& b_;
  std::size_t budget_;
  double tol_;
  bool finished_ = false;

  std::vector<double> column_norms_;
  std::vector<bool> is_selected_;
  DenseVector correlations_;
  std::vector<DenseVector> basis_;
  std::vector<std::vector<double>> r_cols_;
  std::vector<double> r_diag_;
  std::vector<double> qtb_;
  OmpState state_;
};

inline RecoveredSignal omp(const DenseMatrix& a, const DenseVector& b,
                           std::size_t s_budget, double residual_tol = 0.0) {
  OmpSolver solver(a, b, s_budget, residual_tol);
  while (solver.step()) {
  }
  return solver.result();
}

// ---------------------------------------------------------------------------
// One-bit measurements

/// +1 for strictly positive values, -1 otherwise (zero maps to -1).
inline int sign_of(double x) { return x > 0.0 ? 1 : -1; }

class OneBitMeasurements {
 public:
  explicit OneBitMeasurements(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_) {
      if (s != 1 && s != -1) throw InvalidParameter("one-bit measurement must be +1 or -1");
    }
  }

  std::size_t dim() const { return signs_.size(); }
  int operator[](std::size_t p) const { return signs_[p]; }
  const std::vector<int>& signs() const { return signs_; }

  friend bool operator==(const OneBitMeasurements&, const OneBitMeasurements&) = default;

 private:
  std::vector<int> signs_;
};

inline OneBitMeasurements sign_quantize(std::span<const double> values) {
  std::vector<int> signs(values.size());
  for (std::size_t p = 0; p < values.size(); ++p) signs[p] = sign_of(values[p]);
  return OneBitMeasurements(std::move(signs));
}

/// Signs of the noiseless product A z.
inline OneBitMeasurements sign_quantize(const DenseMatrix& a, const Signal& z) {
  return sign_quantize(matvec(a, z.values()).span());
}

// ---------------------------------------------------------------------------
// Hard thresholding

/// Keeps the s largest-magnitude entries of x (ties: lowest index) and zeroes
/// the rest.
inline void hard_threshold(std::span<double> x, std::size_t s) {
  if (s >= x.size()) return;
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto before = [&](std::size_t i, std::size_t j) {
    const double ai = std::fabs(x[i]);
    const double aj = std::fabs(x[j]);
    return ai > aj || (ai == aj && i < j);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s),
                   order.end(), before);
  for (std::size_t t = s; t < order.size(); ++t) x[order[t]] = 0.0;
}

// ---------------------------------------------------------------------------
// Binary iterative hard thresholding

struct IhtState {
  DenseVector iterate;
  std::size_t iteration = 0;
  double step_size = 1.0;
};

/// Called after every completed iteration with the thresholded (and, for
/// NBIHT, normalized) iterate.
using IhtObserver = std::function<void(const IhtState&)>;

inline constexpr std::size_t kDefaultIhtIterations = 100;

/// sqrt(k).  With N(0, 1/k) entries, (step / k) A^T (y - sign(A x)) is then
/// O(1) per coordinate, the same scale as a unit-norm iterate.  BIHT itself is
/// invariant to the step (its iterates scale linearly with it); NBIHT is not.
inline double default_iht_step(std::size_t k) { return std::sqrt(static_cast<double>(k)); }

namespace detail {

inline RecoveredSignal run_iht(const DenseMatrix& a, const OneBitMeasurements& signs,
                               std::size_t s_budget, std::size_t max_iters,
                               std::optional<double> step_override, bool normalize,
                               const IhtObserver& observer) {
  if (signs.dim() != a.rows()) {
    throw DimensionMismatch("biht: sign vector length does not match A");
  }
  if (max_iters == 0) throw InvalidParameter("biht: max_iters must be >= 1");
  const std::size_t k = a.rows();
  const double step = step_override ? *step_override : default_iht_step(k);
  if (!(step > 0.0)) throw InvalidParameter("biht: step must be positive");

  const double scale = step / static_cast<double>(k);
  IhtState state{DenseVector(a.cols()), 0, step};
  DenseVector product(k);
  DenseVector mismatch(k);
  DenseVector gradient(a.cols());

  for (std::size_t it = 1; it <= max_iters; ++it) {
    matvec_into(a, state.iterate.span(), product.span());
    bool consistent = true;
    for (std::size_t p = 0; p < k; ++p) {
      mismatch[p] = static_cast<double>(signs[p] - sign_of(product[p]));
      if (mismatch[p] != 0.0) consistent = false;
    }
    if (consistent) break;  // fixed point

    matvec_transposed_into(a, mismatch.span(), gradient.span());
    for (std::size_t i = 0; i < a.cols(); ++i) state.iterate[i] += scale * gradient[i];
    hard_threshold(state.iterate.span(), s_budget);
    if (normalize) {
      const double length = norm(state.iterate.span());
      if (length > 0.0) {
        for (double& x : state.iterate) x /= length;
      }
    }
    state.iteration = it;
    if (observer) observer(state);
  }

  RecoveredSignal out;
  out.support = nonzero_support(state.iterate.span());
  out.values = std::move(state.iterate);
  out.method = normalize ? Method::nbiht : Method::biht;
  return out;
}

}  // namespace detail

/// x <- H_s(x + (step / k) A^T (y - sign(A x))) from x = 0; the step
/// defaults to default_iht_step(k).
inline RecoveredSignal biht(const DenseMatrix& a, const OneBitMeasurements& signs,
                            std::size_t s_budget,
                            std::size_t max_iters = kDefaultIhtIterations,
                            std::optional<double> step = std::nullopt,
                            const IhtObserver& observer = {}) {
  return detail::run_iht(a, signs, s_budget, max_iters, step, false, observer);
}

/// BIHT with the iterate rescaled to unit norm after every threshold step.
inline RecoveredSignal nbiht(const DenseMatrix& a, const OneBitMeasurements& signs,
                             std::size_t s_budget,
                             std::size_t max_iters = kDefaultIhtIterations,
                             std::optional<double> step = std::nullopt,
                             const IhtObserver& observer = {}) {
  return detail::run_iht(a, signs, s_budget, max_iters, step, true, observer);
}

}  // namespace randcs

#endif  // RANDCS_BASELINES_HPP
