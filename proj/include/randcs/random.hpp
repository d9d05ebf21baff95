#ifndef RANDCS_RANDOM_HPP
#define RANDCS_RANDOM_HPP

// Counter-based random streams.
//
// Every sample is a pure function of (master seed, stream index, position).
// A stream is the counter-based form of SplitMix64 (Steele, Lea & Flood,
// OOPSLA'14): word i is finalize(key + i * gamma), where both the key and the
// odd increment gamma are derived from (master seed, stream index).  Distinct
// streams use distinct increments, so they are not shifted copies of one
// another.  Streams never share state, so any number of them can be created
// independently, in any order, on any thread.
//
// Normal variates use the 128-layer ziggurat of Doornik (2005).  Both the
// generator and the transform are frozen; changing either changes every CSV
// the harness has ever produced.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>

namespace randcs {

/// Stafford's "Mix13" 64-bit finalizer (the SplitMix64 output function).
constexpr std::uint64_t finalize64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

/// One SplitMix64 step applied to x; used to fold integers into seeds.
constexpr std::uint64_t mix64(std::uint64_t x) { return finalize64(x + kGoldenGamma); }

/// Odd increment with enough bit transitions to be a good Weyl step.
constexpr std::uint64_t mix_gamma(std::uint64_t x) {
  x = (x ^ (x >> 33)) * 0xFF51AFD7ED558CCDull;
  x = (x ^ (x >> 33)) * 0xC4CEB9FE1A85EC53ull;
  x = (x ^ (x >> 33)) | 1ull;
  if (std::popcount(x ^ (x >> 1)) < 24) x ^= 0xAAAAAAAAAAAAAAAAull;
  return x;
}

namespace detail {

struct Ziggurat {
  static constexpr int kBlocks = 128;
  static constexpr double kTailStart = 3.442619855899;
  static constexpr double kBlockArea = 9.91256303526217e-3;

  std::array<double, kBlocks + 1> x{};
  std::array<double, kBlocks> ratio{};

  Ziggurat() {
    double f = std::exp(-0.5 * kTailStart * kTailStart);
    x[0] = kBlockArea / f;
    x[1] = kTailStart;
    x[kBlocks] = 0.0;
    for (int i = 2; i < kBlocks; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kBlockArea / x[i - 1] + f));
      f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i < kBlocks; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

inline const Ziggurat kZiggurat{};

}  // namespace detail

/// A reproducible random stream identified by (master_seed, stream_index).
///
/// Copying a stream copies its position; the copy then replays the same
/// sequence.  A stream object is meant to be owned by a single task.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed), stream_index_(stream_index) {
    const std::uint64_t h = mix64(mix64(master_seed) ^ stream_index);
    key_ = finalize64(h);
    gamma_ = mix_gamma(h + kGoldenGamma);
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const { return counter_; }

  std::uint64_t next_u64() { return finalize64(key_ + (++counter_) * gamma_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe to pass to log.
  double uniform_open_zero() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) {
    // Lemire's multiply-and-reject.
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal variate.
  double normal() {
    const auto& zig = detail::kZiggurat;
    const std::uint64_t word = next_u64();
    const auto layer = static_cast<int>(word & 0x7F);
    const double u = 2.0 * (static_cast<double>(word >> 11) * 0x1.0p-53) - 1.0;
    if (std::fabs(u) < zig.ratio[layer]) [[likely]] return u * zig.x[layer];
    return normal_slow(layer, u);
  }

  double normal(double stddev) { return stddev * normal(); }

 private:
  // Rejection step outside the rectangle; redraws until accepted.
  [[gnu::noinline]] double normal_slow(int layer, double u) {
    const auto& zig = detail::kZiggurat;
    for (;;) {
      if (layer == 0) return tail(u < 0.0);
      const double x = u * zig.x[layer];
      const double f0 = std::exp(-0.5 * (zig.x[layer] * zig.x[layer] - x * x));
      const double f1 =
          std::exp(-0.5 * (zig.x[layer + 1] * zig.x[layer + 1] - x * x));
      if (f1 + uniform() * (f0 - f1) < 1.0) return x;
      const std::uint64_t word = next_u64();
      layer = static_cast<int>(word & 0x7F);
      u = 2.0 * (static_cast<double>(word >> 11) * 0x1.0p-53) - 1.0;
      if (std::fabs(u) < zig.ratio[layer]) return u * zig.x[layer];
    }
  }

  double tail(bool negative) {
    constexpr double r = detail::Ziggurat::kTailStart;
    double x, y;
    do {
      x = std::log(uniform_open_zero()) / r;
      y = std::log(uniform_open_zero());
    } while (-2.0 * y < x * x);
    return negative ? x - r : r - x;
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t key_;
  std::uint64_t gamma_;
  std::uint64_t counter_ = 0;
};

}  // namespace randcs

#endif  // RANDCS_RANDOM_HPP
