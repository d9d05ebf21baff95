#ifndef RANDCS_RECOVERY_HPP
#define RANDCS_RECOVERY_HPP

// Optimization-free recovery from an ensemble of Gaussian measurements.
//
// Each round r gives a back-projection v = A^T b whose coordinates are
// unbiased estimates of z.  The median over rounds [0, r0) concentrates
// around z; the median of |b|^2 over rounds [r0, 2 r0) estimates
// |z|^2 + k sigma_w^2 and gives the classification threshold 2 sigma / sqrt(k)
// separating support coordinates from noise.  The two halves are never mixed.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "randcs/error.hpp"
#include "randcs/numerics.hpp"
#include "randcs/sensing.hpp"

namespace randcs {

/// 0-based half-open range of rounds [first, first + count).
struct RoundRange {
  std::size_t first = 0;
  std::size_t count = 0;

  std::size_t end() const { return first + count; }

  static RoundRange estimation(std::size_t r0) { return {0, r0}; }
  static RoundRange noise_floor(std::size_t r0) { return {r0, r0}; }
};

enum class Method { basic, suppressed, support, omp, biht, nbiht };

inline const char* to_string(Method method) {
  switch (method) {
    case Method::basic: return "basic";
    case Method::suppressed: return "suppressed";
    case Method::support: return "rand";
    case Method::omp: return "omp";
    case Method::biht: return "biht";
    case Method::nbiht: return "nbiht";
  }
  return "?";
}

struct RecoveredSignal {
  DenseVector values;
  SupportSet support;
  Method method = Method::basic;
};

class BackProjection {
 public:
  explicit BackProjection(std::vector<DenseVector> per_round)
      : per_round_(std::move(per_round)) {}

  std::size_t rounds() const { return per_round_.size(); }
  std::size_t n() const { return per_round_.empty() ? 0 : per_round_.front().dim(); }
  const DenseVector& operator[](std::size_t r) const { return per_round_[r]; }
  const std::vector<DenseVector>& per_round() const { return per_round_; }

 private:
  std::vector<DenseVector> per_round_;
};

struct NoiseFloor {
  double sigma2 = 0.0;
  double threshold = 0.0;

  static NoiseFloor from_sigma2(double sigma2, std::size_t k) {
    return {sigma2, 2.0 * std::sqrt(sigma2 / static_cast<double>(k))};
  }
};

namespace detail {

inline void check_pairing(const SensingEnsemble& ensemble,
                          const MeasurementEnsemble& measurements) {
  if (ensemble.size() != measurements.size()) {
    throw DimensionMismatch("ensemble has " + std::to_string(ensemble.size()) +
                            " matrices but " +
                            std::to_string(measurements.size()) +
                            " measurement vectors");
  }
  if (ensemble.k() != measurements.k()) {
    throw DimensionMismatch("ensemble k=" + std::to_string(ensemble.k()) +
                            " but measurements have length " +
                            std::to_string(measurements.k()));
  }
}

inline void check_range(RoundRange rounds, std::size_t available) {
  if (rounds.count == 0) throw EmptyInput("empty round range");
  if (rounds.end() > available) {
    throw InvalidParameter("round range [" + std::to_string(rounds.first) +
                           ", " + std::to_string(rounds.end()) +
                           ") exceeds the " + std::to_string(available) +
                           " available rounds");
  }
}

}  // namespace detail

/// v^(r) = A^(r)^T b^(r) for each round in `rounds`.
inline BackProjection back_project(const SensingEnsemble& ensemble,
                                   const MeasurementEnsemble& measurements,
                                   RoundRange rounds) {
  detail::check_pairing(ensemble, measurements);
  detail::check_range(rounds, ensemble.size());
  std::vector<DenseVector> per_round;
  per_round.reserve(rounds.count);
  for (std::size_t r = rounds.first; r < rounds.end(); ++r) {
    per_round.push_back(matvec_transposed(ensemble[r], measurements[r]));
  }
  return BackProjection(std::move(per_round));
}

/// Coordinate-wise median over all rounds of the back-projection.
inline DenseVector coordinate_median(const BackProjection& projection) {
  const std::size_t n = projection.n();
  const std::size_t rounds = projection.rounds();
  DenseVector out(n);
  std::vector<double> scratch(rounds);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < rounds; ++r) scratch[r] = projection[r][i];
    out[i] = median_inplace(scratch);
  }
  return out;
}

/// sigma^2 = median of |b^(r)|^2 over `rounds`.
inline NoiseFloor estimate_noise_floor(const MeasurementEnsemble& measurements,
                                       RoundRange rounds, std::size_t k) {
  detail::check_range(rounds, measurements.size());
  if (k == 0) throw InvalidParameter("estimate_noise_floor: k must be >= 1");
  std::vector<double> norms;
  norms.reserve(rounds.count);
  for (std::size_t r = rounds.first; r < rounds.end(); ++r) {
    norms.push_back(squared_norm(measurements[r]));
  }
  return NoiseFloor::from_sigma2(median_inplace(norms), k);
}

/// z_hat_i = median{ v_i^(r) : r in [0, r0) }, no suppression.
inline RecoveredSignal recover_basic(const SensingEnsemble& ensemble,
                                     const MeasurementEnsemble& measurements,
                                     std::size_t r0) {
  auto projection = back_project(ensemble, measurements, RoundRange::estimation(r0));
  RecoveredSignal out;
  out.values = coordinate_median(projection);
  out.support = nonzero_support(out.values.span());
  out.method = Method::basic;
  return out;
}

/// Zeroes every coordinate with |z_hat_i| < threshold (strict).  A zero
/// threshold suppresses nothing.
inline void suppress_below(DenseVector& values, double threshold) {
  for (double& x : values) {
    if (std::fabs(x) < threshold) x = 0.0;
  }
}

/// Median recovery on rounds [0, r0) followed by noise-floor suppression with
/// the threshold estimated from rounds [r0, 2 r0).
inline RecoveredSignal recover_suppressed(const SensingEnsemble& ensemble,
                                          const MeasurementEnsemble& measurements) {
  const std::size_t r0 = ensemble.r0();
  RecoveredSignal out = recover_basic(ensemble, measurements, r0);
  const NoiseFloor floor =
      estimate_noise_floor(measurements, RoundRange::noise_floor(r0), ensemble.k());
  suppress_below(out.values, floor.threshold);
  out.support = nonzero_support(out.values.span());
  out.method = Method::suppressed;
  return out;
}

/// c_i = |{ r : |v_i^(r)| >= threshold }| (inclusive comparison).
inline std::vector<std::size_t> threshold_counts(const BackProjection& projection,
                                                 double threshold) {
  std::vector<std::size_t> counts(projection.n(), 0);
  for (const auto& v : projection.per_round()) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (std::fabs(v[i]) >= threshold) ++counts[i];
    }
  }
  return counts;
}

/// Majority vote: i is kept when c_i >= ceil(rounds / 2).
inline SupportSet majority_support(const std::vector<std::size_t>& counts,
                                   std::size_t rounds) {
  const std::size_t quorum = (rounds + 1) / 2;
  SupportSet support;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] >= quorum) support.push_back(i);
  }
  return support;
}

/// Support estimate by counting threshold crossings; no medians over
/// coordinates.  Zero measurements (sigma^2 = 0) give the empty set.
inline SupportSet determine_support(const SensingEnsemble& ensemble,
                                    const MeasurementEnsemble& measurements) {
  const std::size_t r0 = ensemble.r0();
  auto projection = back_project(ensemble, measurements, RoundRange::estimation(r0));
  const NoiseFloor floor =
      estimate_noise_floor(measurements, RoundRange::noise_floor(r0), ensemble.k());
  if (floor.sigma2 == 0.0) return {};
  return majority_support(threshold_counts(projection, floor.threshold), r0);
}

}  // namespace randcs

#endif  // RANDCS_RECOVERY_HPP
