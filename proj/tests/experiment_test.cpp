#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "nlstar/experiment.hpp"
#include "nlstar/report.hpp"

using namespace nlstar;

namespace {

ExperimentConfig tiny(NoiseKind kind) {
  ExperimentConfig cfg;
  cfg.noise = kind;
  cfg.p_values = {0.01, 0.001};
  cfg.num_dfas = 3;
  cfg.alpha = 0.02;
  cfg.gamma = 0.05;
  cfg.maxround = 15;
  cfg.max_states = 12;
  cfg.max_alphabet = 4;
  cfg.mu = 0.05;
  cfg.threads = 1;
  return cfg;
}

ExperimentRecord record_with(double d_a_mn, double gain = 1.0) {
  ExperimentRecord r;
  r.d_a_mn.value = d_a_mn;
  r.gain = gain;
  r.gain_class = classify_gain(gain);
  return r;
}

} // namespace

TEST(Gain, DivisionAndZeroDenominator) {
  EXPECT_DOUBLE_EQ(information_gain(0.01, 0.02), 0.5);
  EXPECT_EQ(information_gain(0.01, 0.0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(information_gain(0.0, 0.0), 1.0);
  EXPECT_EQ(information_gain(0.0, 0.3), 0.0);
}

TEST(Gain, ClassBoundaries) {
  EXPECT_EQ(classify_gain(0.0), GainClass::low);
  EXPECT_EQ(classify_gain(0.8999), GainClass::low);
  EXPECT_EQ(classify_gain(0.9), GainClass::medium);
  EXPECT_EQ(classify_gain(1.4999), GainClass::medium);
  EXPECT_EQ(classify_gain(1.5), GainClass::high);
  EXPECT_EQ(classify_gain(std::numeric_limits<double>::infinity()), GainClass::high);
  EXPECT_THROW(classify_gain(-1.0), DomainError);
  EXPECT_THROW(classify_gain(std::nan("")), DomainError);
}

TEST(Stats, SampleStddevAndTrimmedMean) {
  EXPECT_DOUBLE_EQ(sample_stddev({2, 4, 4, 4, 5, 5, 7, 9}), std::sqrt(32.0 / 7.0));
  EXPECT_EQ(sample_stddev({3.0}), 0.0);
  EXPECT_DOUBLE_EQ(trimmed_mean({100.0, 1.0, 2.0, 3.0, -50.0}), 2.0);
  EXPECT_DOUBLE_EQ(trimmed_mean({1.0, 3.0}), 2.0);
}

TEST(Buckets, HalfOpenWithClosedTop) {
  const std::vector<ExperimentRecord> rows{record_with(1.0), record_with(0.025), record_with(0.0249),
                                           record_with(0.005), record_with(0.0005), record_with(0.0004)};
  const auto buckets = bucket_records(rows, input_noise_ranges());
  ASSERT_EQ(buckets.size(), 6u);
  EXPECT_EQ(buckets[0].label, "[0.025,1]");
  EXPECT_EQ(buckets[0].count, 2u);  // 1.0 and 0.025
  EXPECT_EQ(buckets[1].label, "[0.005,0.025)");
  EXPECT_EQ(buckets[1].count, 2u);  // 0.0249 and 0.005
  EXPECT_EQ(buckets[4].count, 1u);  // 0.0005
  EXPECT_EQ(buckets[5].label, "other");
  EXPECT_EQ(buckets[5].count, 1u);  // 0.0004
  std::size_t total = 0;
  for (const auto& b : buckets) total += b.count;
  EXPECT_EQ(total, rows.size());
}

TEST(Buckets, NoOtherBucketWhenEverythingFits) {
  const std::vector<ExperimentRecord> rows{record_with(0.003), record_with(0.0002)};
  EXPECT_EQ(bucket_records(rows, counter_ranges()).size(), counter_ranges().size());
}

TEST(Buckets, OverlapIsConfigError) {
  EXPECT_THROW(bucket_records({}, {{0.0, 0.5}, {0.4, 1.0}}), ConfigError);
  EXPECT_THROW(bucket_records({}, {{0.0, 0.5, true}, {0.5, 1.0}}), ConfigError);
  EXPECT_NO_THROW(bucket_records({}, {{0.0, 0.5}, {0.5, 1.0, true}}));
}

TEST(Buckets, SummaryStatistics) {
  std::vector<ExperimentRecord> rows{record_with(0.01, 0.5), record_with(0.012, 2.0), record_with(0.014, 1.0)};
  rows[0].d_a_ae.value = 0.02;
  rows[1].d_a_ae.value = 0.006;
  rows[2].d_a_ae.value = 0.014;
  const auto b = bucket_records(rows, {{0.005, 0.025}});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_DOUBLE_EQ(b[0].mean_d_a_mn, 0.012);
  EXPECT_DOUBLE_EQ(b[0].mean_gain, 3.5 / 3);
  // squared deviations (in units of 1e-3) sum to 296/3
  EXPECT_NEAR(b[0].stddev_d_a_ae, std::sqrt(148.0 / 3.0) * 1e-3, 1e-12);
  EXPECT_EQ(b[0].n_low, 1u);
  EXPECT_EQ(b[0].n_medium, 1u);
  EXPECT_EQ(b[0].n_high, 1u);
}

TEST(Config, Validation) {
  ExperimentConfig cfg = tiny(NoiseKind::noisy_output);
  cfg.p_values = {1.2};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = tiny(NoiseKind::noisy_output);
  cfg.max_states = 5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = tiny(NoiseKind::counter);
  cfg.p_values.clear();
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.device_count(), 1u);
  EXPECT_EQ(parse_noise_kind("input"), NoiseKind::noisy_input);
  EXPECT_THROW(parse_noise_kind("bogus"), ConfigError);
}

TEST(Config, DeskProfileSampleSize) {
  const auto desk = ExperimentConfig::desk();
  EXPECT_EQ(required_sample_size(desk.alpha, desk.gamma), 105967u);
  const auto paper = ExperimentConfig::paper();
  EXPECT_EQ(required_sample_size(paper.alpha, paper.gamma), 15201805u);
  EXPECT_EQ(paper.maxround, 250u);
  EXPECT_EQ(paper.num_dfas, 50u);
}

TEST(Experiment, SeedsSeparateRolesAndDfas) {
  const ExperimentConfig cfg = tiny(NoiseKind::noisy_output);
  EXPECT_NE(experiment_key(cfg, 0, "noise", 0), experiment_key(cfg, 0, "noise", 1));
  EXPECT_NE(experiment_key(cfg, 0, "noise", 0), experiment_key(cfg, 1, "noise", 0));
  EXPECT_NE(experiment_key(cfg, 0, "distance-A-MN", 0), experiment_key(cfg, 0, "distance-A-AE", 0));
  ExperimentConfig other = cfg;
  other.master_seed = 2;
  EXPECT_NE(generate_dfa(cfg, 0), generate_dfa(other, 0));
  EXPECT_EQ(generate_dfa(cfg, 0), generate_dfa(tiny(NoiseKind::counter), 0));
}

TEST(Experiment, RecordsAreDeterministicAndThreadIndependent) {
  ExperimentConfig cfg = tiny(NoiseKind::noisy_input);
  const std::string first = records_csv(run_experiment(cfg));
  EXPECT_EQ(records_csv(run_experiment(cfg)), first);
  cfg.threads = 3;
  EXPECT_EQ(records_csv(run_experiment(cfg)), first);
}

TEST(Experiment, RecordFieldsAreConsistent) {
  for (auto kind : {NoiseKind::noisy_output, NoiseKind::noisy_input, NoiseKind::counter}) {
    const ExperimentConfig cfg = tiny(kind);
    const auto records = run_experiment(cfg);
    ASSERT_EQ(records.size(), cfg.num_dfas * cfg.device_count());
    for (const auto& r : records) {
      EXPECT_EQ(r.noise, kind);
      EXPECT_EQ(r.p.has_value(), kind != NoiseKind::counter);
      EXPECT_EQ(r.gain, information_gain(r.d_a_mn.value, r.d_a_ae.value));
      EXPECT_EQ(r.gain_class, classify_gain(r.gain));
      EXPECT_LE(r.rounds, cfg.maxround);
      EXPECT_EQ(r.hypothesis_states, r.rounds + 1);
      EXPECT_EQ(r.d_a_mn.sample_size, required_sample_size(cfg.alpha, cfg.gamma));
      EXPECT_FALSE(r.eld.has_value());
      EXPECT_EQ(r.wall_ms, 0.0);
      ASSERT_TRUE(r.hypothesis.has_value());
      EXPECT_TRUE(r.terminated_by != Termination::maxround || r.rounds == cfg.maxround);
    }
    std::size_t total = 0;
    for (const auto& b : summarize_records(cfg, records)) total += b.count;
    EXPECT_EQ(total, records.size());
  }
}

TEST(Experiment, TrajectoryPointsEveryTwentyRounds) {
  ExperimentConfig cfg = tiny(NoiseKind::noisy_output);
  cfg.num_dfas = 1;
  cfg.p_values = {0.01};
  cfg.maxround = 45;
  cfg.max_states = 30;
  cfg.trajectory = true;
  const auto records = run_experiment(cfg);
  for (const auto& r : records) {
    std::size_t expected = 20;
    for (const auto& point : r.trajectory) {
      EXPECT_EQ(point.round, expected);
      expected += 20;
      EXPECT_GE(point.d_a_ae, 0.0);
    }
    EXPECT_EQ(r.trajectory.size(), r.rounds / 20);
  }
}

TEST(Experiment, EldSweepPartitionsRecords) {
  ExperimentConfig cfg = tiny(NoiseKind::noisy_input);
  EXPECT_THROW(eld_sweep(tiny(NoiseKind::noisy_output)), ConfigError);
  const auto result = eld_sweep(cfg);
  std::size_t eld = 0;
  for (const auto& r : result.records) {
    ASSERT_TRUE(r.eld.has_value());
    ASSERT_TRUE(r.hypothesis.has_value());
    EXPECT_EQ(r.hypothesis->alphabet_size(), 3u);
    eld += *r.eld;
  }
  std::size_t eld_total = 0, non_eld_total = 0;
  for (const auto& b : result.eld_table) eld_total += b.count;
  for (const auto& b : result.non_eld_table) non_eld_total += b.count;
  EXPECT_EQ(eld_total, eld);
  EXPECT_EQ(non_eld_total, result.records.size() - eld);
}

TEST(Sweeps, OneCellPerParameterAndP) {
  ExperimentConfig cfg = tiny(NoiseKind::noisy_output);
  cfg.num_dfas = 3;
  const auto mu = mu_sweep(cfg, {0.05, 0.1});
  ASSERT_EQ(mu.size(), 4u);
  EXPECT_EQ(mu[0].parameter, 0.05);
  EXPECT_EQ(mu[3].parameter, 0.1);
  EXPECT_EQ(mu[1].p, 0.001);
  for (const auto& c : mu) EXPECT_EQ(c.count, 3u);
  const auto eps = epsdelta_sweep(cfg, {0.01});
  ASSERT_EQ(eps.size(), 2u);
}

TEST(Report, CsvLayout) {
  ExperimentRecord r = record_with(0.25, 0.5);
  r.dfa_id = 7;
  r.p = 0.01;
  r.d_a_ae.value = 0.5;
  r.d_mn_ae.value = 0.125;
  r.rounds = 12;
  r.terminated_by = Termination::equivalence_pass;
  r.eld = true;
  const std::string csv = records_csv({r});
  EXPECT_EQ(csv, std::string(records_csv_header) + "\n7,output,0.01,0.25,0.5,0.125,0.5,low,12,equivalence,yes,0\n");
  ExperimentRecord c = record_with(0.0, 1.0);
  c.noise = NoiseKind::counter;
  EXPECT_NE(records_csv({c}).find("\n0,counter,,0,0,0,1,medium,0,maxround,,0\n"), std::string::npos);
}

// Byte-exact reference output for a small fixed configuration. Regenerate only
// when a change to the seeding conventions or the learner is intended.
TEST(Report, GoldenRecords) {
  const std::string actual = records_csv(run_experiment(tiny(NoiseKind::noisy_output)));
  std::ifstream in(std::string(NLSTAR_GOLDEN_DIR) + "/records_tiny_output.csv");
  ASSERT_TRUE(in.good()) << "missing golden file; current output:\n" << actual;
  std::ostringstream expected;
  expected << in.rdbuf();
  EXPECT_EQ(actual, expected.str());
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(format_double(0.0005), "0.0005");
  EXPECT_EQ(format_double(0.01), "0.01");
  EXPECT_EQ(format_double(42.0), "42");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(1e-9), "1e-09");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(interval_label(Interval{0.0005, 0.001}), "[0.0005,0.001)");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(x)), x);
}
