#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "randcs/harness.hpp"
#include "randcs/report.hpp"

namespace {

using namespace randcs;

// Reference Jaccard from std::set arithmetic.
double set_jaccard(const SupportSet& a, const SupportSet& b) {
  std::set<std::size_t> sa(a.begin(), a.end()), sb(b.begin(), b.end()), uni = sa;
  uni.insert(sb.begin(), sb.end());
  if (uni.empty()) return 1.0;
  std::size_t inter = 0;
  for (std::size_t x : sa) inter += sb.count(x);
  return double(inter) / double(uni.size());
}

SupportSet random_set(GaussianStream& g, std::size_t universe) {
  SupportSet out;
  const double p = g.uniform();
  for (std::size_t i = 0; i < universe; ++i) {
    if (g.uniform() < p) out.push_back(i);
  }
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("randcs_harness_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TrialResult fabricated(Method m, double time, double r = 1.0) {
  TrialResult t;
  t.method = m;
  t.n = 100;
  t.s = 5;
  t.wall_time_s = time;
  t.accuracy = r;
  return t;
}

ExperimentGrid tiny_grid() {
  ExperimentGrid grid;
  grid.n_values = {300};
  grid.sparsity_fractions = {0.02, 0.04};
  grid.trials = 3;
  return grid;
}

TEST(Jaccard, Examples) {
  EXPECT_EQ(jaccard({1, 2, 3}, {1, 2, 3}), 1.0);
  EXPECT_EQ(jaccard({1, 2}, {3, 4}), 0.0);
  EXPECT_EQ(jaccard({1, 2, 3}, {2, 3, 4}), 0.5);
  EXPECT_EQ(jaccard({}, {}), 1.0);
  EXPECT_EQ(jaccard({}, {7}), 0.0);
}

TEST(Jaccard, MatchesSetOracleAndProperties) {
  GaussianStream g(12, 0);
  for (int t = 0; t < 1000; ++t) {
    const SupportSet a = random_set(g, 1 + g.uniform_below(40));
    const SupportSet b = random_set(g, 1 + g.uniform_below(40));
    const double r = jaccard(a, b);
    EXPECT_EQ(r, set_jaccard(a, b)) << t;
    EXPECT_EQ(r, jaccard(b, a));
    EXPECT_EQ(r == 1.0, a == b);
    EXPECT_EQ(r == 0.0, intersection_size(a, b) == 0 && !(a.empty() && b.empty()));
  }
}

TEST(ParseMethod, NamesAndErrors) {
  EXPECT_EQ(parse_method("rand"), Method::support);
  EXPECT_EQ(parse_method("omp"), Method::omp);
  EXPECT_EQ(parse_method("biht"), Method::biht);
  EXPECT_EQ(parse_method("nbiht"), Method::nbiht);
  EXPECT_THROW(parse_method("gpsr"), InvalidParameter);
  EXPECT_STREQ(to_string(Method::support), "rand");
}

TEST(ExperimentGrid, SparsityRoundingAndValidation) {
  ExperimentGrid grid;
  grid.n_values = {2000, 4000};
  const auto cells = grid.cells();
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0].s, 20u);
  EXPECT_EQ(cells[3].s, 160u);
  EXPECT_EQ(cells[7].s, 320u);
  grid.validate();
  grid.n_values = {10};
  EXPECT_THROW(grid.validate(), InvalidParameter);  // 1% of 10 rounds to 0
  grid = ExperimentGrid{};
  grid.trials = 0;
  EXPECT_THROW(grid.validate(), InvalidParameter);
}

TEST(RunTrial, IdentityFixtureScoresOne) {
  // Hand-built identity ensemble at n = k = 64, two-sparse binary signal.
  constexpr std::size_t n = 64;
  const Signal z = generate_binary_signal(1, n, 2);
  const SensingEnsemble e(std::vector<DenseMatrix>(2 * 3, DenseMatrix::identity(n)));
  const auto b = measure(e, z, 0.0, NoiseMode::theory, 0);
  TrialResult r;
  score_support(r, determine_support(e, b), z.support());
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.pred_size, 2u);
  EXPECT_EQ(r.inter_size, 2u);
}

TEST(RunTrial, RecordsParametersAndBounds) {
  const ExperimentGrid grid = tiny_grid();
  for (Method m : grid.methods) {
    const TrialResult r = run_trial(grid, m, 300, 6, 1);
    ASSERT_TRUE(r.ok()) << r.error;
    EXPECT_EQ(r.method, m);
    EXPECT_EQ(r.k, default_measurements(300, 6));
    EXPECT_EQ(r.r0, default_rounds(300));
    EXPECT_EQ(r.true_size, 6u);
    EXPECT_LE(r.pred_size, 300u);
    EXPECT_LE(r.inter_size, std::min(r.pred_size, r.true_size));
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
    EXPECT_GT(r.wall_time_s, 0.0);
    EXPECT_GE(r.gen_time_s, 0.0);
    if (m == Method::omp || m == Method::biht || m == Method::nbiht) {
      EXPECT_LE(r.pred_size, 6u);
    }
    if (m == Method::biht || m == Method::nbiht) {
      EXPECT_EQ(r.iht_iters, grid.biht_iters);
      EXPECT_EQ(r.iht_step, default_iht_step(r.k));
    }
  }
}

TEST(RunTrial, MethodsArePaired) {
  const ExperimentGrid grid = tiny_grid();
  const TrialInputs a = make_trial_inputs(grid, 300, 6, 2);
  const TrialInputs b = make_trial_inputs(grid, 300, 6, 2);
  EXPECT_EQ(a.signal.values(), b.signal.values());
  EXPECT_EQ(a.config.master_seed, trial_seed(grid.master_seed, 300, 6, 2));
  EXPECT_NE(make_trial_inputs(grid, 300, 6, 3).signal.values(), a.signal.values());
  // The baselines' matrix is round 0 of the rand ensemble.
  EXPECT_EQ(build_ensemble(a.config)[0],
            ensemble_matrix(a.config.master_seed, 0, a.config.measurements(), 300));
}

TEST(RunTrial, ErrorsBecomeFailureRecords) {
  ExperimentGrid grid = tiny_grid();
  grid.k = 3;  // OMP budget s = 6 exceeds k
  const TrialResult r = run_trial(grid, Method::omp, 300, 6, 0);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(std::isnan(r.accuracy));
}

TEST(RunGrid, SingleTrialSingleMethod) {
  ExperimentGrid grid;
  grid.n_values = {200};
  grid.sparsity_fractions = {0.05};
  grid.trials = 1;
  grid.methods = {Method::support};
  const GridReport rep = run_grid(grid);
  ASSERT_EQ(rep.results.size(), 1u);
  ASSERT_EQ(rep.summary.size(), 1u);
  EXPECT_EQ(rep.summary[0].speedup, 1.0);
  EXPECT_FALSE(rep.excess_failures);
}

TEST(RunGrid, OrderingPairingAndWorkerIndependence) {
  ExperimentGrid grid = tiny_grid();
  const GridReport serial = run_grid(grid);
  grid.workers = 4;
  const GridReport parallel = run_grid(grid);
  ASSERT_EQ(serial.results.size(), 2u * 4u * 3u);
  std::size_t idx = 0;
  for (const auto& cell : grid.cells()) {
    for (Method m : grid.methods) {
      for (std::size_t t = 0; t < grid.trials; ++t, ++idx) {
        const TrialResult& a = serial.results[idx];
        const TrialResult& b = parallel.results[idx];
        EXPECT_EQ(a.method, m);
        EXPECT_EQ(a.s, cell.s);
        EXPECT_EQ(a.trial, t);
        EXPECT_EQ(a.seed, b.seed);
        EXPECT_EQ(a.accuracy, b.accuracy);
        EXPECT_EQ(a.pred_size, b.pred_size);
        EXPECT_EQ(a.inter_size, b.inter_size);
        // Every method in a cell/trial saw the same true support size and seed.
        EXPECT_EQ(a.seed, serial.results[idx - (idx % (grid.methods.size() * grid.trials)) + t].seed);
      }
    }
  }
}

TEST(Summary, SpeedupExamples) {
  auto rows = summarize({fabricated(Method::support, 1.0), fabricated(Method::omp, 4.0)});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].speedup, 1.0);
  EXPECT_EQ(rows[1].speedup, 4.0);

  rows = summarize({fabricated(Method::support, 2.5), fabricated(Method::biht, 2.5)});
  EXPECT_EQ(rows[1].speedup, 1.0);

  rows = summarize({fabricated(Method::support, 1.0), fabricated(Method::support, 3.0)});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].speedup, 1.0);
  EXPECT_EQ(rows[0].mean_time_s, 2.0);

  rows = summarize({fabricated(Method::omp, 1.0)});
  EXPECT_TRUE(std::isnan(rows[0].speedup));
}

TEST(Summary, MeanVarianceAndFailures) {
  std::vector<TrialResult> rs{fabricated(Method::support, 1, 1.0), fabricated(Method::support, 1, 0.5),
                              fabricated(Method::support, 1, 0.0)};
  TrialResult failed = fabricated(Method::support, 1, std::nan(""));
  failed.error = "boom";
  rs.push_back(failed);
  const auto rows = summarize(rs);
  EXPECT_EQ(rows[0].trials, 4u);
  EXPECT_EQ(rows[0].failures, 1u);
  EXPECT_EQ(rows[0].mean_accuracy, 0.5);
  EXPECT_EQ(rows[0].var_accuracy, 0.25);  // ((0.5)^2 + 0 + (0.5)^2) / 2
  EXPECT_TRUE(has_excess_failures(rows));
  // 1 failure in 10 is exactly 10%, not excess.
  std::vector<TrialResult> ten(9, fabricated(Method::omp, 1));
  ten.push_back(failed);
  ten.back().method = Method::omp;
  EXPECT_FALSE(has_excess_failures(summarize(ten)));
}

TEST(Csv, EmptyResultsGiveHeaderOnly) {
  const auto p = temp_path("empty.csv");
  emit_csv({}, p);
  EXPECT_EQ(slurp(p),
            "method,n,s,k,r0,trial,seed,R,wall_time_s,pred_size,true_size,inter_size,"
            "gen_time_s,iht_iters,iht_step,error\n");
  EXPECT_TRUE(load_csv(p).empty());
  std::filesystem::remove(p);
}

TEST(Csv, OneResultIsTwoLines) {
  const auto p = temp_path("one.csv");
  emit_csv({fabricated(Method::omp, 0.125)}, p);
  const std::string text = slurp(p);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  std::filesystem::remove(p);
}

TEST(Csv, RoundTripIsBitExact) {
  GaussianStream g(5, 5);
  std::vector<TrialResult> rs;
  for (int i = 0; i < 50; ++i) {
    TrialResult t;
    t.method = static_cast<Method>(i % 6);
    t.n = g.next_u64() % 100000;
    t.s = i;
    t.k = 17 * i;
    t.r0 = i % 9;
    t.trial = i;
    t.seed = g.next_u64();
    t.accuracy = i == 7 ? std::nan("") : g.uniform();
    t.wall_time_s = g.uniform() * 1e-3;
    t.pred_size = i;
    t.true_size = i + 1;
    t.inter_size = i / 2;
    t.gen_time_s = std::ldexp(g.uniform(), -40);
    t.iht_iters = i;
    t.iht_step = std::sqrt(double(i));
    if (i % 10 == 3) t.error = "bad \"thing\", with comma\nand newline";
    rs.push_back(t);
  }
  std::stringstream buf;
  write_trial_csv(buf, rs);
  const auto back = read_trial_csv(buf);
  ASSERT_EQ(back.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(back[i].method, rs[i].method);
    EXPECT_EQ(back[i].n, rs[i].n);
    EXPECT_EQ(back[i].seed, rs[i].seed);
    if (std::isnan(rs[i].accuracy)) {
      EXPECT_TRUE(std::isnan(back[i].accuracy));
    } else {
      EXPECT_EQ(back[i].accuracy, rs[i].accuracy);
    }
    EXPECT_EQ(back[i].wall_time_s, rs[i].wall_time_s);
    EXPECT_EQ(back[i].gen_time_s, rs[i].gen_time_s);
    EXPECT_EQ(back[i].iht_step, rs[i].iht_step);
    EXPECT_EQ(back[i].inter_size, rs[i].inter_size);
    EXPECT_EQ(back[i].error, rs[i].error);
  }
}

TEST(Csv, RejectsMalformedInput) {
  std::stringstream empty;
  EXPECT_THROW(read_trial_csv(empty), FormatError);
  std::stringstream wrong_header("a,b,c\n");
  EXPECT_THROW(read_trial_csv(wrong_header), FormatError);
  std::stringstream short_row(
      "method,n,s,k,r0,trial,seed,R,wall_time_s,pred_size,true_size,inter_size,"
      "gen_time_s,iht_iters,iht_step,error\nrand,1,2\n");
  EXPECT_THROW(read_trial_csv(short_row), FormatError);
  EXPECT_THROW(load_csv("/nonexistent/x.csv"), IoError);
  EXPECT_THROW(emit_csv({}, "/nonexistent/dir/x.csv"), IoError);
}

TEST(Summary, TableAndCsvTwin) {
  const auto p = temp_path("summary.txt");
  const auto rows = summarize({fabricated(Method::support, 1.0), fabricated(Method::omp, 4.0)});
  emit_summary(rows, p);
  const std::string table = slurp(p);
  EXPECT_NE(table.find("speedup"), std::string::npos);
  EXPECT_NE(table.find("4.00"), std::string::npos);
  const std::string twin = slurp(summary_csv_path(p));
  EXPECT_EQ(twin.substr(0, twin.find('\n')),
            "method,n,s,trials,failures,mean_R,var_R,mean_wall_time_s,speedup");
  EXPECT_NE(twin.find("omp,100,5,1,0,1,0,4,4\n"), std::string::npos);
  EXPECT_EQ(summary_csv_path("out/summary.csv"), std::filesystem::path("out/summary.summary.csv"));
  EXPECT_EQ(summary_csv_path("out/run.txt"), std::filesystem::path("out/run.csv"));
  EXPECT_EQ(summary_csv_path("out/run.txt", "out/run.csv"), std::filesystem::path("out/run.summary.csv"));
  std::filesystem::remove(p);
  std::filesystem::remove(summary_csv_path(p));
}

}  // namespace
