#ifndef RANDCS_HARNESS_HPP
#define RANDCS_HARNESS_HPP

// Experiment runner: paired trials over an (n, s) grid, support accuracy,
// solver wall time, and per-cell summaries.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "randcs/baselines.hpp"
#include "randcs/error.hpp"
#include "randcs/random.hpp"
#include "randcs/recovery.hpp"
#include "randcs/sensing.hpp"

namespace randcs {

/// Intersection over union of two sorted index sets; 1 when both are empty.
inline double jaccard(const SupportSet& predicted, const SupportSet& truth) {
  if (predicted.empty() && truth.empty()) return 1.0;
  std::size_t inter = 0;
  auto a = predicted.begin();
  auto b = truth.begin();
  while (a != predicted.end() && b != truth.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++inter;
      ++a;
      ++b;
    }
  }
  const std::size_t uni = predicted.size() + truth.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

inline std::size_t intersection_size(const SupportSet& a, const SupportSet& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

inline Method parse_method(const std::string& name) {
  if (name == "rand") return Method::support;
  if (name == "omp") return Method::omp;
  if (name == "biht") return Method::biht;
  if (name == "nbiht") return Method::nbiht;
  throw InvalidParameter("unknown method '" + name + "' (expected rand, omp, biht or nbiht)");
}

struct ExperimentGrid {
  std::vector<std::size_t> n_values{2000};
  std::vector<double> sparsity_fractions{0.01, 0.02, 0.04, 0.08};
  std::size_t trials = 50;
  std::vector<Method> methods{Method::support, Method::omp, Method::biht, Method::nbiht};
  double sigma_w = 0.1;
  std::uint64_t master_seed = 42;
  NoiseMode noise_mode = NoiseMode::experiment;
  std::optional<std::size_t> k;
  std::optional<std::size_t> r0;
  std::size_t biht_iters = kDefaultIhtIterations;
  std::optional<double> biht_step;  // default_iht_step(k) when unset
  std::size_t workers = 1;

  struct Cell {
    std::size_t n;
    std::size_t s;
  };

  static std::size_t sparsity_for(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  }

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    for (std::size_t n : n_values) {
      for (double f : sparsity_fractions) out.push_back({n, sparsity_for(f, n)});
    }
    return out;
  }

  void validate() const {
    if (trials == 0) throw InvalidParameter("grid: trials must be >= 1");
    if (n_values.empty() || sparsity_fractions.empty() || methods.empty()) {
      throw InvalidParameter("grid: n values, sparsities and methods must be non-empty");
    }
    for (double f : sparsity_fractions) {
      if (!(f > 0.0 && f <= 1.0)) throw InvalidParameter("grid: sparsity fraction outside (0, 1]");
    }
    for (const Cell& c : cells()) {
      if (c.n == 0) throw InvalidParameter("grid: n must be >= 1");
      if (c.s == 0) {
        throw InvalidParameter("grid: sparsity fraction rounds to s = 0 at n = " +
                               std::to_string(c.n));
      }
    }
    if (k && *k == 0) throw InvalidParameter("grid: k must be >= 1");
    if (r0 && *r0 == 0) throw InvalidParameter("grid: r0 must be >= 1");
    if (!(sigma_w >= 0.0)) throw InvalidParameter("grid: sigma_w must be >= 0");
    if (biht_iters == 0) throw InvalidParameter("grid: biht iterations must be >= 1");
    if (biht_step && !(*biht_step > 0.0)) throw InvalidParameter("grid: biht step must be positive");
    if (workers == 0) throw InvalidParameter("grid: workers must be >= 1");
  }

  RecoveryConfig config_for(std::size_t n, std::size_t s, std::uint64_t seed) const {
    RecoveryConfig cfg;
    cfg.n = n;
    cfg.s = s;
    cfg.k = k;
    cfg.r0 = r0;
    cfg.sigma_w = sigma_w;
    cfg.noise_mode = noise_mode;
    cfg.master_seed = seed;
    return cfg;
  }
};

/// Seed shared by every method in one (n, s, trial) cell.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n,
                                std::size_t s, std::size_t trial) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ n);
  h = mix64(h ^ s);
  return mix64(h ^ trial);
}

struct TrialResult {
  Method method = Method::support;
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t k = 0;
  std::size_t r0 = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double wall_time_s = 0.0;
  std::size_t pred_size = 0;
  std::size_t true_size = 0;
  std::size_t inter_size = 0;
  double gen_time_s = 0.0;
  std::size_t iht_iters = 0;  // BIHT/NBIHT rows only
  double iht_step = 0.0;      // BIHT/NBIHT rows only
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// Inputs every method in a cell receives.
struct TrialInputs {
  RecoveryConfig config;
  Signal signal;
};

inline TrialInputs make_trial_inputs(const ExperimentGrid& grid, std::size_t n,
                                     std::size_t s, std::size_t trial) {
  const std::uint64_t seed = trial_seed(grid.master_seed, n, s, trial);
  RecoveryConfig cfg = grid.config_for(n, s, seed);
  cfg.validate();
  return {cfg, generate_binary_signal(seed, n, s)};
}

/// Fills accuracy and set sizes from a predicted support.
inline void score_support(TrialResult& result, const SupportSet& predicted,
                          const SupportSet& truth) {
  result.accuracy = jaccard(predicted, truth);
  result.pred_size = predicted.size();
  result.true_size = truth.size();
  result.inter_size = intersection_size(predicted, truth);
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace detail

/// Recovers the support with `method` on precomputed inputs.  Only the solver
/// call is inside the timed region; generation time is reported separately.
inline TrialResult run_trial(const ExperimentGrid& grid, Method method,
                             const TrialInputs& inputs, std::size_t trial) {
  const RecoveryConfig& cfg = inputs.config;
  TrialResult result;
  result.method = method;
  result.n = cfg.n;
  result.s = cfg.s;
  result.k = cfg.measurements();
  result.r0 = cfg.rounds();
  result.trial = trial;
  result.seed = cfg.master_seed;
  result.true_size = inputs.signal.sparsity();

  try {
    SupportSet predicted;
    auto gen_start = detail::Clock::now();
    if (method == Method::support) {
      const SensingEnsemble ensemble = build_ensemble(cfg);
      const MeasurementEnsemble measurements =
          measure(ensemble, inputs.signal, cfg.sigma_w, cfg.noise_mode, cfg.master_seed);
      result.gen_time_s = detail::seconds_since(gen_start);
      const auto start = detail::Clock::now();
      predicted = determine_support(ensemble, measurements);
      result.wall_time_s = detail::seconds_since(start);
    } else {
      // Round 0 of the RAND ensemble, so all methods share the first matrix.
      const DenseMatrix a = ensemble_matrix(cfg.master_seed, 0, result.k, cfg.n);
      if (method == Method::omp) {
        GaussianStream noise(cfg.master_seed, streams::noise(result.r0, 0));
        const DenseVector b =
            measure_one(a, inputs.signal.values(), cfg.sigma_w, cfg.noise_mode, noise);
        result.gen_time_s = detail::seconds_since(gen_start);
        const auto start = detail::Clock::now();
        predicted = omp(a, b, cfg.s).support;
        result.wall_time_s = detail::seconds_since(start);
      } else if (method == Method::biht || method == Method::nbiht) {
        const OneBitMeasurements signs = sign_quantize(a, inputs.signal);
        result.iht_iters = grid.biht_iters;
        result.iht_step = grid.biht_step ? *grid.biht_step : default_iht_step(result.k);
        result.gen_time_s = detail::seconds_since(gen_start);
        const auto start = detail::Clock::now();
        predicted = method == Method::biht
                        ? biht(a, signs, cfg.s, grid.biht_iters, result.iht_step).support
                        : nbiht(a, signs, cfg.s, grid.biht_iters, result.iht_step).support;
        result.wall_time_s = detail::seconds_since(start);
      } else {
        throw InvalidParameter(std::string("method not available in the harness: ") +
                               to_string(method));
      }
    }
    score_support(result, predicted, inputs.signal.support());
  } catch (const std::exception& e) {
    result.error = e.what();
    result.accuracy = std::numeric_limits<double>::quiet_NaN();
    result.pred_size = 0;
    result.inter_size = 0;
  }
  return result;
}

inline TrialResult run_trial(const ExperimentGrid& grid, Method method, std::size_t n,
                             std::size_t s, std::size_t trial) {
  return run_trial(grid, method, make_trial_inputs(grid, n, s, trial), trial);
}

struct SummaryRow {
  Method method = Method::support;
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double mean_accuracy = 0.0;
  double var_accuracy = 0.0;  // unbiased (N - 1)
  double mean_time_s = 0.0;
  double speedup = 1.0;  // mean_time(method) / mean_time(rand); NaN without rand
};

/// Groups results by (n, s, method) in first-seen order and fills speedups.
inline std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results) {
  std::vector<SummaryRow> rows;
  std::map<std::tuple<std::size_t, std::size_t, Method>, std::size_t> index;
  std::vector<std::vector<const TrialResult*>> groups;
  for (const auto& r : results) {
    const auto key = std::make_tuple(r.n, r.s, r.method);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back({r.method, r.n, r.s});
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t g = 0; g < rows.size(); ++g) {
    SummaryRow& row = rows[g];
    row.trials = groups[g].size();
    double sum_r = 0.0, sum_t = 0.0;
    std::size_t ok = 0;
    for (const TrialResult* r : groups[g]) {
      if (!r->ok()) {
        ++row.failures;
        continue;
      }
      ++ok;
      sum_r += r->accuracy;
      sum_t += r->wall_time_s;
    }
    if (ok == 0) {
      row.mean_accuracy = row.var_accuracy = row.mean_time_s = nan;
      continue;
    }
    row.mean_accuracy = sum_r / static_cast<double>(ok);
    row.mean_time_s = sum_t / static_cast<double>(ok);
    double ss = 0.0;
    for (const TrialResult* r : groups[g]) {
      if (r->ok()) ss += (r->accuracy - row.mean_accuracy) * (r->accuracy - row.mean_accuracy);
    }
    row.var_accuracy = ok > 1 ? ss / static_cast<double>(ok - 1) : 0.0;
  }

  for (SummaryRow& row : rows) {
    auto it = index.find(std::make_tuple(row.n, row.s, Method::support));
    if (it == index.end()) {
      row.speedup = nan;
    } else if (row.method == Method::support) {
      row.speedup = 1.0;
    } else {
      row.speedup = row.mean_time_s / rows[it->second].mean_time_s;
    }
  }
  return rows;
}

/// More than 10% failed trials in any summary row.
inline bool has_excess_failures(const std::vector<SummaryRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const SummaryRow& r) {
    return 10 * r.failures > r.trials;
  });
}

struct GridReport {
  std::vector<TrialResult> results;  // ordered by (cell, method, trial)
  std::vector<SummaryRow> summary;
  bool excess_failures = false;
};

/// Runs every cell x method x trial.  Results land in fixed slots, so the
/// output order and content do not depend on the worker schedule.
inline GridReport run_grid(const ExperimentGrid& grid) {
  grid.validate();
  struct Task {
    ExperimentGrid::Cell cell;
    Method method;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (const auto& cell : grid.cells()) {
    for (Method m : grid.methods) {
      for (std::size_t t = 0; t < grid.trials; ++t) tasks.push_back({cell, m, t});
    }
  }

  GridReport report;
  report.results.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      try {
        report.results[i] =
            run_trial(grid, task.method, task.cell.n, task.cell.s, task.trial);
      } catch (const std::exception& e) {
        // Input generation itself failed; keep the slot as a failure record.
        TrialResult& r = report.results[i];
        r.method = task.method;
        r.n = task.cell.n;
        r.s = task.cell.s;
        r.trial = task.trial;
        r.seed = trial_seed(grid.master_seed, task.cell.n, task.cell.s, task.trial);
        r.accuracy = std::numeric_limits<double>::quiet_NaN();
        r.error = e.what();
      }
    }
  };

  const std::size_t workers = std::min(grid.workers, tasks.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  report.summary = summarize(report.results);
  report.excess_failures = has_excess_failures(report.summary);
  return report;
}

}  // namespace randcs

#endif  // RANDCS_HARNESS_HPP
