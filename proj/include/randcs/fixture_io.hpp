#ifndef RANDCS_FIXTURE_IO_HPP
#define RANDCS_FIXTURE_IO_HPP

// Binary fixtures for ensembles and measurements.
//
// Ensemble file:
//   "RCS1" | n | k | r0 | seed              (u64 little-endian each)
//   2*r0 matrices, k x n row-major, IEEE-754 binary64 little-endian
//
// Measurement file:
//   "RCM1" | k | r0 | noise_seed | noise_mode (0 theory, 1 experiment)
//   | sigma_w (binary64)                    (64-bit little-endian fields)
//   2*r0 vectors of k binary64 values

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "randcs/error.hpp"
#include "randcs/sensing.hpp"

namespace randcs::fixture {

inline constexpr std::array<char, 4> kEnsembleMagic{'R', 'C', 'S', '1'};
inline constexpr std::array<char, 4> kMeasurementMagic{'R', 'C', 'M', '1'};

// Guards against absurd headers before allocating.
inline constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 34;

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t value) {
  std::array<unsigned char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

inline void put_f64(std::ostream& out, double value) {
  put_u64(out, std::bit_cast<std::uint64_t>(value));
}

inline std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw FormatError("fixture truncated");
  }
  std::uint64_t value = 0;
  for (int i = 7; i >= 0; --i) value = (value << 8) | bytes[i];
  return value;
}

inline double get_f64(std::istream& in) {
  return std::bit_cast<double>(get_u64(in));
}

inline void expect_magic(std::istream& in, const std::array<char, 4>& magic) {
  std::array<char, 4> got{};
  if (!in.read(got.data(), got.size()) || got != magic) {
    throw FormatError("bad fixture magic, expected " +
                      std::string(magic.data(), magic.size()));
  }
}

inline void expect_end(std::istream& in) {
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after fixture payload");
  }
}

}  // namespace detail

inline void write_ensemble(std::ostream& out, const SensingEnsemble& ensemble) {
  out.write(kEnsembleMagic.data(), kEnsembleMagic.size());
  detail::put_u64(out, ensemble.n());
  detail::put_u64(out, ensemble.k());
  detail::put_u64(out, ensemble.r0());
  detail::put_u64(out, ensemble.seed());
  for (const auto& m : ensemble.matrices()) {
    for (double x : m.entries()) detail::put_f64(out, x);
  }
}

inline SensingEnsemble read_ensemble(std::istream& in) {
  detail::expect_magic(in, kEnsembleMagic);
  const std::uint64_t n = detail::get_u64(in);
  const std::uint64_t k = detail::get_u64(in);
  const std::uint64_t r0 = detail::get_u64(in);
  const std::uint64_t seed = detail::get_u64(in);
  if (n == 0 || k == 0 || r0 == 0) throw FormatError("ensemble header has a zero dimension");
  if (n > kMaxEntries / k || r0 > kMaxEntries || 2 * r0 > kMaxEntries / (n * k)) {
    throw FormatError("ensemble header dimensions too large");
  }
  std::vector<DenseMatrix> matrices;
  matrices.reserve(2 * r0);
  for (std::uint64_t r = 0; r < 2 * r0; ++r) {
    std::vector<double> entries(k * n);
    for (double& x : entries) x = detail::get_f64(in);
    matrices.emplace_back(k, n, std::move(entries));
  }
  detail::expect_end(in);
  return SensingEnsemble(std::move(matrices), seed);
}

inline void write_measurements(std::ostream& out,
                               const MeasurementEnsemble& measurements) {
  if (measurements.size() % 2 != 0) {
    throw InvalidParameter("measurement fixture needs an even round count");
  }
  out.write(kMeasurementMagic.data(), kMeasurementMagic.size());
  detail::put_u64(out, measurements.k());
  detail::put_u64(out, measurements.size() / 2);
  detail::put_u64(out, measurements.noise_seed());
  detail::put_u64(out, measurements.noise_mode() == NoiseMode::theory ? 0 : 1);
  detail::put_f64(out, measurements.sigma_w());
  for (const auto& b : measurements.vectors()) {
    for (double x : b) detail::put_f64(out, x);
  }
}

inline MeasurementEnsemble read_measurements(std::istream& in) {
  detail::expect_magic(in, kMeasurementMagic);
  const std::uint64_t k = detail::get_u64(in);
  const std::uint64_t r0 = detail::get_u64(in);
  const std::uint64_t seed = detail::get_u64(in);
  const std::uint64_t mode = detail::get_u64(in);
  const double sigma_w = detail::get_f64(in);
  if (k == 0 || r0 == 0) throw FormatError("measurement header has a zero dimension");
  if (mode > 1) throw FormatError("measurement header has an unknown noise mode");
  if (r0 > kMaxEntries || 2 * r0 > kMaxEntries / k) throw FormatError("measurement header dimensions too large");
  std::vector<DenseVector> vectors;
  vectors.reserve(2 * r0);
  for (std::uint64_t r = 0; r < 2 * r0; ++r) {
    DenseVector b(k);
    for (double& x : b) x = detail::get_f64(in);
    vectors.push_back(std::move(b));
  }
  detail::expect_end(in);
  return MeasurementEnsemble(std::move(vectors),
                             mode == 0 ? NoiseMode::theory : NoiseMode::experiment,
                             sigma_w, seed);
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace detail

inline void save_ensemble(const std::filesystem::path& path,
                          const SensingEnsemble& ensemble) {
  auto out = detail::open_out(path);
  write_ensemble(out, ensemble);
  detail::finish(out, path);
}

inline SensingEnsemble load_ensemble(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  try {
    return read_ensemble(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void save_measurements(const std::filesystem::path& path,
                              const MeasurementEnsemble& measurements) {
  auto out = detail::open_out(path);
  write_measurements(out, measurements);
  detail::finish(out, path);
}

inline MeasurementEnsemble load_measurements(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  try {
    return read_measurements(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace randcs::fixture

#endif  // RANDCS_FIXTURE_IO_HPP
