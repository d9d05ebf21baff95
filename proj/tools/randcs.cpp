// randcs: benchmark runner and fixture-driven recovery.
//
//   randcs bench    --n 2000,4000 --sparsity-pct 1,2,4,8 --trials 50 ...
//   randcs simulate --n 256 --s 4 --ensemble E.bin --measurements M.bin
//   randcs recover  --ensemble E.bin --measurements M.bin --algorithm support
//
// Exit codes: 0 success, 1 usage or input error, 2 excess trial failures.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "randcs/randcs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailures = 2;

struct BenchOptions {
  std::vector<std::size_t> n_values{2000};
  std::vector<double> sparsity_pct{1, 2, 4, 8};
  std::size_t trials = 50;
  std::vector<std::string> methods{"rand", "omp", "biht", "nbiht"};
  double sigma_w = 0.1;
  std::string noise_mode = "experiment";
  std::uint64_t seed = 42;
  std::string out = "results.csv";
  std::string summary = "summary.txt";
  std::optional<std::size_t> k;
  std::optional<std::size_t> r0;
  std::size_t biht_iters = randcs::kDefaultIhtIterations;
  std::optional<double> biht_step;
  std::size_t workers = 1;
};

struct SimulateOptions {
  std::size_t n = 0;
  std::size_t s = 0;
  std::optional<std::size_t> k;
  std::optional<std::size_t> r0;
  double sigma_w = 0.1;
  std::string noise_mode = "experiment";
  std::uint64_t seed = 42;
  std::string ensemble;
  std::string measurements;
  std::string signal;
};

struct RecoverOptions {
  std::string ensemble;
  std::string measurements;
  std::string algorithm = "support";
  std::string out;
};

int run_bench(const BenchOptions& opt) {
  randcs::ExperimentGrid grid;
  grid.n_values = opt.n_values;
  grid.sparsity_fractions.clear();
  for (double pct : opt.sparsity_pct) grid.sparsity_fractions.push_back(pct / 100.0);
  grid.trials = opt.trials;
  grid.methods.clear();
  for (const auto& m : opt.methods) grid.methods.push_back(randcs::parse_method(m));
  grid.sigma_w = opt.sigma_w;
  grid.noise_mode = randcs::parse_noise_mode(opt.noise_mode);
  grid.master_seed = opt.seed;
  grid.k = opt.k;
  grid.r0 = opt.r0;
  grid.biht_iters = opt.biht_iters;
  grid.biht_step = opt.biht_step;
  grid.workers = opt.workers;
  grid.validate();

  const randcs::GridReport report = randcs::run_grid(grid);
  randcs::emit_csv(report.results, opt.out);
  randcs::emit_summary(report.summary, opt.summary, opt.out);
  randcs::write_summary_table(std::cout, report.summary);

  for (const auto& r : report.results) {
    if (!r.ok()) {
      std::cerr << "trial failed: " << randcs::to_string(r.method) << " n=" << r.n
                << " s=" << r.s << " trial=" << r.trial << ": " << r.error << '\n';
    }
  }
  if (report.excess_failures) {
    std::cerr << "error: more than 10% of trials failed in at least one cell\n";
    return kExitFailures;
  }
  return kExitOk;
}

int run_simulate(const SimulateOptions& opt) {
  randcs::RecoveryConfig cfg;
  cfg.n = opt.n;
  cfg.s = opt.s;
  cfg.k = opt.k;
  cfg.r0 = opt.r0;
  cfg.sigma_w = opt.sigma_w;
  cfg.noise_mode = randcs::parse_noise_mode(opt.noise_mode);
  cfg.master_seed = opt.seed;
  cfg.validate();

  const randcs::Signal z = randcs::generate_binary_signal(opt.seed, cfg.n, cfg.s);
  const randcs::SensingEnsemble ensemble = randcs::build_ensemble(cfg);
  const randcs::MeasurementEnsemble measurements =
      randcs::measure(ensemble, z, cfg.sigma_w, cfg.noise_mode, cfg.master_seed);
  randcs::fixture::save_ensemble(opt.ensemble, ensemble);
  randcs::fixture::save_measurements(opt.measurements, measurements);
  if (!opt.signal.empty()) {
    std::ofstream out(opt.signal);
    if (!out) throw randcs::IoError("cannot open '" + opt.signal + "' for writing");
    out << "index\n";
    for (std::size_t i : z.support()) out << i << '\n';
  }
  return kExitOk;
}

int run_recover(const RecoverOptions& opt) {
  const auto ensemble = randcs::fixture::load_ensemble(opt.ensemble);
  const auto measurements = randcs::fixture::load_measurements(opt.measurements);

  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) throw randcs::IoError("cannot open '" + opt.out + "' for writing");
  }
  std::ostream& out = opt.out.empty() ? std::cout : file;

  if (opt.algorithm == "support") {
    out << "index\n";
    for (std::size_t i : randcs::determine_support(ensemble, measurements)) out << i << '\n';
    return kExitOk;
  }
  const randcs::RecoveredSignal recovered =
      opt.algorithm == "basic"
          ? randcs::recover_basic(ensemble, measurements, ensemble.r0())
          : randcs::recover_suppressed(ensemble, measurements);
  out << "index,value\n";
  for (std::size_t i = 0; i < recovered.values.dim(); ++i) {
    out << i << ',' << randcs::format_double(recovered.values[i]) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimization-free sparse support recovery from random Gaussian measurements"};
  app.require_subcommand(1);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the accuracy/runtime benchmark grid");
  bench_cmd->add_option("--n", bench.n_values, "Signal lengths")->delimiter(',');
  bench_cmd->add_option("--sparsity-pct", bench.sparsity_pct, "Sparsity as percent of n")
      ->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--methods", bench.methods, "Subset of rand,omp,biht,nbiht")
      ->delimiter(',')
      ->check(CLI::IsMember({"rand", "omp", "biht", "nbiht"}));
  bench_cmd->add_option("--sigma-w", bench.sigma_w, "Noise level")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--noise-mode", bench.noise_mode, "theory or experiment")
      ->check(CLI::IsMember({"theory", "experiment"}));
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--out", bench.out, "Per-trial CSV");
  bench_cmd->add_option("--summary", bench.summary, "Summary table (CSV twin written alongside)");
  bench_cmd->add_option("--k", bench.k, "Override measurements per matrix");
  bench_cmd->add_option("--r0", bench.r0, "Override rounds");
  bench_cmd->add_option("--biht-iters", bench.biht_iters, "BIHT/NBIHT iterations")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--biht-step", bench.biht_step, "BIHT/NBIHT step size (default sqrt(k))")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--workers", bench.workers, "Worker threads")->check(CLI::PositiveNumber);

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Write ensemble and measurement fixtures");
  sim_cmd->add_option("--n", sim.n, "Signal length")->required();
  sim_cmd->add_option("--s", sim.s, "Sparsity")->required();
  sim_cmd->add_option("--k", sim.k, "Measurements per matrix");
  sim_cmd->add_option("--r0", sim.r0, "Rounds");
  sim_cmd->add_option("--sigma-w", sim.sigma_w, "Noise level")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--noise-mode", sim.noise_mode, "theory or experiment")
      ->check(CLI::IsMember({"theory", "experiment"}));
  sim_cmd->add_option("--seed", sim.seed, "Seed");
  sim_cmd->add_option("--ensemble", sim.ensemble, "Ensemble output file")->required();
  sim_cmd->add_option("--measurements", sim.measurements, "Measurement output file")->required();
  sim_cmd->add_option("--signal", sim.signal, "Optional true-support output file");

  RecoverOptions rec;
  auto* rec_cmd = app.add_subcommand("recover", "Recover from ensemble/measurement fixtures");
  rec_cmd->add_option("--ensemble", rec.ensemble, "Ensemble fixture")->required();
  rec_cmd->add_option("--measurements", rec.measurements, "Measurement fixture")->required();
  rec_cmd->add_option("--algorithm", rec.algorithm, "basic, suppressed or support")
      ->check(CLI::IsMember({"basic", "suppressed", "support"}));
  rec_cmd->add_option("--out", rec.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bench_cmd) return run_bench(bench);
    if (*sim_cmd) return run_simulate(sim);
    if (*rec_cmd) return run_recover(rec);
  } catch (const randcs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
