#ifndef RANDCS_TESTS_STATS_HPP
#define RANDCS_TESTS_STATS_HPP

// Test-only statistics: streaming moments and simple signal builders.  Kept
// independent of the library's own reductions.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "randcs/random.hpp"
#include "randcs/sensing.hpp"

namespace randcs::testing {

/// Welford accumulator.
class Moments {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance.
  double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double standard_error() const { return stddev() / std::sqrt(static_cast<double>(count_)); }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Sparse signal with the given support values placed at seeded distinct
/// positions.
inline Signal signal_with_values(std::size_t n, const std::vector<double>& values,
                                 std::uint64_t seed) {
  GaussianStream stream(seed, 12345);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  DenseVector z(n);
  for (std::size_t t = 0; t < values.size(); ++t) {
    const auto j = t + static_cast<std::size_t>(stream.uniform_below(n - t));
    std::swap(order[t], order[j]);
    z[order[t]] = values[t];
  }
  return Signal(std::move(z));
}

}  // namespace randcs::testing

#endif  // RANDCS_TESTS_STATS_HPP
