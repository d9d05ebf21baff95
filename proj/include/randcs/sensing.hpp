#ifndef RANDCS_SENSING_HPP
#define RANDCS_SENSING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randcs/error.hpp"
#include "randcs/numerics.hpp"
#include "randcs/random.hpp"

namespace randcs {

/// Sorted, duplicate-free list of coordinate indices.
using SupportSet = std::vector<std::size_t>;

inline SupportSet nonzero_support(std::span<const double> values) {
  SupportSet support;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) support.push_back(i);
  }
  return support;
}

/// Ground-truth sparse signal.  The support is always derived from the
/// values, never stored independently.
class Signal {
 public:
  explicit Signal(DenseVector values)
      : values_(std::move(values)), support_(nonzero_support(values_.span())) {}

  const DenseVector& values() const { return values_; }
  const SupportSet& support() const { return support_; }
  std::size_t sparsity() const { return support_.size(); }
  std::size_t dim() const { return values_.dim(); }

  /// Returns c * z.
  Signal scaled(double c) const {
    DenseVector v = values_;
    for (double& x : v) x *= c;
    return Signal(std::move(v));
  }

 private:
  DenseVector values_;
  SupportSet support_;
};

/// Per-coordinate noise variance: sigma_w^2 (theory) or sigma_w^2 / k
/// (experiment).
enum class NoiseMode { theory, experiment };

inline const char* to_string(NoiseMode mode) {
  return mode == NoiseMode::theory ? "theory" : "experiment";
}

inline NoiseMode parse_noise_mode(const std::string& text) {
  if (text == "theory") return NoiseMode::theory;
  if (text == "experiment") return NoiseMode::experiment;
  throw InvalidParameter("unknown noise mode '" + text + "'");
}

/// ceil(2 s ln n), at least 1.
inline std::size_t default_measurements(std::size_t n, std::size_t s) {
  const double k = std::ceil(2.0 * static_cast<double>(s) *
                             std::log(static_cast<double>(n)));
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

/// ceil(ln n), at least 1.
inline std::size_t default_rounds(std::size_t n) {
  const double r0 = std::ceil(std::log(static_cast<double>(n)));
  return r0 < 1.0 ? 1 : static_cast<std::size_t>(r0);
}

/// ceil(1080 ln n): the round count under which the high-probability
/// guarantees are stated.  Far larger than anything the benchmarks use.
inline std::size_t theory_rounds(std::size_t n) {
  const double r0 = std::ceil(1080.0 * std::log(static_cast<double>(n)));
  return r0 < 1.0 ? 1 : static_cast<std::size_t>(r0);
}

struct RecoveryConfig {
  std::size_t n = 0;
  std::size_t s = 0;
  std::optional<std::size_t> k;
  std::optional<std::size_t> r0;
  double sigma_w = 0.1;
  NoiseMode noise_mode = NoiseMode::experiment;
  std::uint64_t master_seed = 0;

  std::size_t measurements() const {
    return k ? *k : default_measurements(n, s);
  }
  std::size_t rounds() const { return r0 ? *r0 : default_rounds(n); }

  void validate() const {
    if (s == 0 || s > n) {
      throw InvalidParameter("config: need 1 <= s <= n (s=" +
                             std::to_string(s) + ", n=" + std::to_string(n) +
                             ")");
    }
    if (measurements() == 0) throw InvalidParameter("config: k must be >= 1");
    if (rounds() == 0) throw InvalidParameter("config: r0 must be >= 1");
    if (!(sigma_w >= 0.0) || !std::isfinite(sigma_w)) {
      throw InvalidParameter("config: sigma_w must be finite and >= 0");
    }
  }
};

/// Stream layout under one master seed.
namespace streams {
inline std::uint64_t matrix(std::size_t round) { return round; }
inline std::uint64_t noise(std::size_t r0, std::size_t round) {
  return 2 * r0 + round;
}
inline constexpr std::uint64_t kSignal =
    std::numeric_limits<std::uint64_t>::max();
}  // namespace streams

/// z in {0,1}^n with exactly s ones at positions chosen uniformly without
/// replacement (partial Fisher-Yates on the signal stream).
inline Signal generate_binary_signal(std::uint64_t seed, std::size_t n,
                                     std::size_t s) {
  if (s == 0 || s > n) {
    throw InvalidParameter("generate_binary_signal: need 1 <= s <= n");
  }
  GaussianStream stream(seed, streams::kSignal);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  DenseVector values(n);
  for (std::size_t i = 0; i < s; ++i) {
    const auto j = i + static_cast<std::size_t>(stream.uniform_below(n - i));
    std::swap(order[i], order[j]);
    values[order[i]] = 1.0;
  }
  return Signal(std::move(values));
}

/// The 2*r0 sensing matrices.  Rounds [0, r0) feed back-projection and
/// rounds [r0, 2*r0) feed the noise-floor estimate.
class SensingEnsemble {
 public:
  SensingEnsemble(std::vector<DenseMatrix> matrices, std::uint64_t seed = 0)
      : matrices_(std::move(matrices)), seed_(seed) {
    if (matrices_.empty() || matrices_.size() % 2 != 0) {
      throw InvalidParameter("ensemble needs a positive even matrix count");
    }
    for (const auto& m : matrices_) {
      if (m.rows() != matrices_.front().rows() ||
          m.cols() != matrices_.front().cols()) {
        throw DimensionMismatch("ensemble matrices differ in shape");
      }
    }
  }

  std::size_t n() const { return matrices_.front().cols(); }
  std::size_t k() const { return matrices_.front().rows(); }
  std::size_t r0() const { return matrices_.size() / 2; }
  std::size_t size() const { return matrices_.size(); }
  std::uint64_t seed() const { return seed_; }

  const DenseMatrix& operator[](std::size_t round) const {
    return matrices_[round];
  }
  const std::vector<DenseMatrix>& matrices() const { return matrices_; }

  friend bool operator==(const SensingEnsemble&,
                         const SensingEnsemble&) = default;

 private:
  std::vector<DenseMatrix> matrices_;
  std::uint64_t seed_;
};

/// Matrix `round` of the ensemble for `seed`: N(0, 1/k) entries from stream
/// `round`.  Baselines call this to get the same first matrix RAND sees.
inline DenseMatrix ensemble_matrix(std::uint64_t seed, std::size_t round,
                                   std::size_t k, std::size_t n) {
  GaussianStream stream(seed, streams::matrix(round));
  return sample_gaussian_matrix(stream, k, n, 1.0 / static_cast<double>(k));
}

inline SensingEnsemble build_ensemble(const RecoveryConfig& config) {
  config.validate();
  const std::size_t k = config.measurements();
  const std::size_t r0 = config.rounds();
  std::vector<DenseMatrix> matrices;
  matrices.reserve(2 * r0);
  for (std::size_t r = 0; r < 2 * r0; ++r) {
    matrices.push_back(ensemble_matrix(config.master_seed, r, k, config.n));
  }
  return SensingEnsemble(std::move(matrices), config.master_seed);
}

class MeasurementEnsemble {
 public:
  MeasurementEnsemble(std::vector<DenseVector> vectors, NoiseMode noise_mode,
                      double sigma_w, std::uint64_t noise_seed = 0)
      : vectors_(std::move(vectors)),
        noise_mode_(noise_mode),
        sigma_w_(sigma_w),
        noise_seed_(noise_seed) {
    if (vectors_.empty()) throw EmptyInput("measurement ensemble is empty");
    for (const auto& b : vectors_) {
      if (b.dim() != vectors_.front().dim()) {
        throw DimensionMismatch("measurement vectors differ in length");
      }
    }
  }

  std::size_t size() const { return vectors_.size(); }
  std::size_t k() const { return vectors_.front().dim(); }
  NoiseMode noise_mode() const { return noise_mode_; }
  double sigma_w() const { return sigma_w_; }
  std::uint64_t noise_seed() const { return noise_seed_; }

  const DenseVector& operator[](std::size_t round) const {
    return vectors_[round];
  }
  const std::vector<DenseVector>& vectors() const { return vectors_; }

  friend bool operator==(const MeasurementEnsemble&,
                         const MeasurementEnsemble&) = default;

 private:
  std::vector<DenseVector> vectors_;
  NoiseMode noise_mode_;
  double sigma_w_;
  std::uint64_t noise_seed_;
};

inline double noise_stddev(double sigma_w, NoiseMode mode, std::size_t k) {
  return mode == NoiseMode::theory
             ? sigma_w
             : sigma_w / std::sqrt(static_cast<double>(k));
}

/// b = A z + w for a single matrix; w drawn from `noise` unless sigma_w is 0.
inline DenseVector measure_one(const DenseMatrix& a, const DenseVector& z,
                               double sigma_w, NoiseMode mode,
                               GaussianStream& noise) {
  DenseVector b = matvec(a, z);
  if (sigma_w > 0.0) {
    const double sd = noise_stddev(sigma_w, mode, a.rows());
    for (double& x : b) x += noise.normal(sd);
  }
  return b;
}

/// b^(r) = A^(r) z + w^(r) for every round; w^(r) uses stream 2*r0 + r of
/// `noise_seed`.
inline MeasurementEnsemble measure(const SensingEnsemble& ensemble,
                                   const Signal& z, double sigma_w,
                                   NoiseMode mode, std::uint64_t noise_seed) {
  if (z.dim() != ensemble.n()) {
    throw DimensionMismatch("measure: signal has dim " +
                            std::to_string(z.dim()) + ", ensemble expects " +
                            std::to_string(ensemble.n()));
  }
  if (!(sigma_w >= 0.0) || !std::isfinite(sigma_w)) {
    throw InvalidParameter("measure: sigma_w must be finite and >= 0");
  }
  std::vector<DenseVector> vectors;
  vectors.reserve(ensemble.size());
  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    GaussianStream noise(noise_seed, streams::noise(ensemble.r0(), r));
    vectors.push_back(measure_one(ensemble[r], z.values(), sigma_w, mode, noise));
  }
  return MeasurementEnsemble(std::move(vectors), mode, sigma_w, noise_seed);
}

}  // namespace randcs

#endif  // RANDCS_SENSING_HPP
