#pragma once

// The robustness pipeline: random DFA A, noisy device M_N built from it, learner
// output A_E, and the three distances d(A, M_N), d(A, A_E), d(M_N, A_E).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "nlstar/automaton.hpp"
#include "nlstar/distribution.hpp"
#include "nlstar/format.hpp"
#include "nlstar/lstar.hpp"
#include "nlstar/noise.hpp"
#include "nlstar/structure.hpp"

namespace nlstar {

enum class NoiseKind { noisy_output, noisy_input, counter };

inline const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::noisy_output: return "output";
    case NoiseKind::noisy_input: return "input";
    case NoiseKind::counter: return "counter";
  }
  return "?";
}

inline NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "output" || text == "noisy-output") return NoiseKind::noisy_output;
  if (text == "input" || text == "noisy-input") return NoiseKind::noisy_input;
  if (text == "counter") return NoiseKind::counter;
  throw ConfigError("unknown noise kind '" + std::string(text) + "'");
}

enum class GainClass { low, medium, high };

inline const char* to_string(GainClass c) {
  switch (c) {
    case GainClass::low: return "low";
    case GainClass::medium: return "medium";
    case GainClass::high: return "high";
  }
  return "?";
}

// d(A, M_N) / d(A, A_E). A zero denominator gives +inf, or 1 when both are zero.
inline double information_gain(double d_a_mn, double d_a_ae) {
  if (d_a_ae == 0.0) return d_a_mn == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return d_a_mn / d_a_ae;
}

// low: [0, 0.9), medium: [0.9, 1.5), high: [1.5, ∞].
inline GainClass classify_gain(double gain) {
  if (!(gain >= 0.0)) throw DomainError("information gain must be nonnegative");
  if (gain < 0.9) return GainClass::low;
  if (gain < 1.5) return GainClass::medium;
  return GainClass::high;
}

struct ExperimentConfig {
  NoiseKind noise = NoiseKind::noisy_output;
  std::vector<double> p_values{0.01, 0.005, 0.0025, 0.0015, 0.001};  // ignored for counter
  std::size_t num_dfas = 50;
  double mu = 1e-2;
  double alpha = 5e-4;
  double gamma = 1e-3;
  double epsilon = 0.005;
  double delta = 0.005;
  std::size_t maxround = 250;
  CounterexampleAnalysis analysis = CounterexampleAnalysis::prefix_sift;
  std::uint64_t master_seed = 1;
  bool trajectory = false;
  bool eld_partition = false;
  std::size_t max_states = 50;
  std::size_t max_alphabet = 20;
  // Off by default so that records are byte-identical across runs.
  bool measure_time = false;
  unsigned threads = 0;

  static ExperimentConfig paper() { return {}; }

  // Same pipeline with ~10^5-word distance samples.
  static ExperimentConfig desk() {
    ExperimentConfig cfg;
    cfg.alpha = 5e-3;
    cfg.gamma = 1e-2;
    cfg.num_dfas = 5;
    cfg.maxround = 100;
    return cfg;
  }

  std::size_t device_count() const { return noise == NoiseKind::counter ? 1 : p_values.size(); }

  void validate() const {
    if (num_dfas == 0) throw ConfigError("num_dfas must be positive");
    if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("mu must lie in (0, 1)");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (max_states < 10) throw ConfigError("max_states must be at least 10");
    if (max_alphabet < 3) throw ConfigError("max_alphabet must be at least 3");
    if (noise != NoiseKind::counter) {
      if (p_values.empty()) throw ConfigError("at least one noise probability is required");
      for (double p : p_values) {
        if (!(p >= 0.0 && p < 1.0)) throw ConfigError("noise probabilities must lie in [0, 1)");
      }
    }
  }
};

struct TrajectoryPoint {
  std::size_t round;
  double d_a_ae;
};

struct ExperimentRecord {
  std::size_t dfa_id = 0;
  NoiseKind noise = NoiseKind::noisy_output;
  std::optional<double> p;  // absent for counter devices
  DistanceEstimate d_a_mn;
  DistanceEstimate d_a_ae;
  DistanceEstimate d_mn_ae;
  double gain = 0.0;
  GainClass gain_class = GainClass::low;
  std::size_t rounds = 0;
  Termination terminated_by = Termination::maxround;
  std::optional<bool> eld;
  double wall_ms = 0.0;
  std::size_t hypothesis_states = 0;
  std::size_t membership_queries = 0;
  std::vector<TrajectoryPoint> trajectory;
  std::optional<Dfa> hypothesis;
};

// Per-experiment seed derivation: (master seed, dfa id, role[, device index]).
inline RngKey experiment_key(const ExperimentConfig& cfg, std::size_t dfa_id, std::string_view role) {
  return RngKey(cfg.master_seed, "experiment").child(static_cast<std::uint64_t>(dfa_id)).child(role);
}
inline RngKey experiment_key(const ExperimentConfig& cfg, std::size_t dfa_id, std::string_view role,
                             std::size_t device) {
  return experiment_key(cfg, dfa_id, role).child(static_cast<std::uint64_t>(device));
}

inline Dfa generate_dfa(const ExperimentConfig& cfg, std::size_t dfa_id) {
  return random_dfa(experiment_key(cfg, dfa_id, "dfa-gen"), cfg.max_states, cfg.max_alphabet);
}

using NoisyDevice = std::variant<NoisyOutputOracle, NoisyInputOracle, CounterDfaOracle>;

inline NoisyDevice make_device(const ExperimentConfig& cfg, std::size_t dfa_id, std::size_t device,
                               const Dfa& dfa) {
  const RngKey key = experiment_key(cfg, dfa_id, "noise", device);
  switch (cfg.noise) {
    case NoiseKind::noisy_output: return NoisyOutputOracle(dfa, cfg.p_values.at(device), key);
    case NoiseKind::noisy_input: return NoisyInputOracle(dfa, cfg.p_values.at(device), key);
    case NoiseKind::counter: return CounterDfaOracle(dfa, random_counter_function(key, dfa.alphabet()));
  }
  throw ConfigError("unknown noise kind");
}

inline LearnerConfig learner_config(const ExperimentConfig& cfg, RngKey key) {
  LearnerConfig lc;
  lc.epsilon = cfg.epsilon;
  lc.delta = cfg.delta;
  lc.maxround = cfg.maxround;
  lc.mu = cfg.mu;
  lc.key = key;
  lc.record_trajectory = cfg.trajectory;
  lc.analysis = cfg.analysis;
  return lc;
}

// d(A, A_E) at each snapshot round.
inline std::vector<TrajectoryPoint> trajectory_distances(const ExperimentConfig& cfg, const Dfa& dfa,
                                                         const std::vector<HypothesisSnapshot>& snapshots,
                                                         RngKey key) {
  const MuDistribution dist(cfg.mu, dfa.alphabet());
  std::vector<TrajectoryPoint> out;
  for (const auto& snap : snapshots) {
    const auto d = estimate_distance(dfa, snap.hypothesis, dist, cfg.alpha, cfg.gamma,
                                     key.child(static_cast<std::uint64_t>(snap.round)), {.threads = cfg.threads});
    out.push_back({snap.round, d.value});
  }
  return out;
}

// Learns `oracle` with snapshots every 20 rounds and measures d(A, A_E) at each.
template <LanguageOracle Oracle>
std::vector<TrajectoryPoint> trajectory_run(const ExperimentConfig& cfg, const Dfa& dfa, const Oracle& oracle,
                                            RngKey learner_key, RngKey distance_key) {
  LearnerConfig lc = learner_config(cfg, learner_key);
  lc.record_trajectory = true;
  const auto result = learn(oracle, lc);
  return trajectory_distances(cfg, dfa, result.trajectory, distance_key);
}

// One (DFA, device) cell of the pipeline. The oracle the learner queried is the
// one measured afterwards.
inline ExperimentRecord run_device(const ExperimentConfig& cfg, std::size_t dfa_id, std::size_t device,
                                   const Dfa& dfa, const NoisyDevice& noisy) {
  const auto started = std::chrono::steady_clock::now();
  ExperimentRecord record;
  record.dfa_id = dfa_id;
  record.noise = cfg.noise;
  std::visit(
      [&](const auto& oracle) {
        using Oracle = std::decay_t<decltype(oracle)>;
        if constexpr (std::is_same_v<Oracle, CounterDfaOracle>) {
          record.noise = NoiseKind::counter;
        } else {
          record.noise = std::is_same_v<Oracle, NoisyOutputOracle> ? NoiseKind::noisy_output : NoiseKind::noisy_input;
          record.p = oracle.p();
        }
      },
      noisy);

  const MuDistribution dist(cfg.mu, dfa.alphabet());
  const EstimateOptions options{.threads = cfg.threads};

  std::visit(
      [&](const auto& oracle) {
        const auto result = learn(oracle, learner_config(cfg, experiment_key(cfg, dfa_id, "learner-sampling", device)));
        record.rounds = result.rounds_used;
        record.terminated_by = result.terminated_by;
        record.hypothesis_states = result.hypothesis.num_states();
        record.membership_queries = result.membership_query_count;
        record.d_a_mn = estimate_distance(dfa, oracle, dist, cfg.alpha, cfg.gamma,
                                          experiment_key(cfg, dfa_id, "distance-A-MN", device), options);
        record.d_a_ae = estimate_distance(dfa, result.hypothesis, dist, cfg.alpha, cfg.gamma,
                                          experiment_key(cfg, dfa_id, "distance-A-AE", device), options);
        record.d_mn_ae = estimate_distance(oracle, result.hypothesis, dist, cfg.alpha, cfg.gamma,
                                           experiment_key(cfg, dfa_id, "distance-MN-AE", device), options);
        if (cfg.trajectory) {
          record.trajectory = trajectory_distances(cfg, dfa, result.trajectory,
                                                   experiment_key(cfg, dfa_id, "trajectory", device));
        }
        record.hypothesis = result.hypothesis;
      },
      noisy);

  record.gain = information_gain(record.d_a_mn.value, record.d_a_ae.value);
  record.gain_class = classify_gain(record.gain);
  if (cfg.eld_partition) record.eld = is_equal_length_distinguishing(dfa).has_value();
  if (cfg.measure_time) {
    record.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  }
  return record;
}

inline ExperimentRecord run_single(const ExperimentConfig& cfg, std::size_t dfa_id, std::size_t device,
                                   const Dfa& dfa) {
  return run_device(cfg, dfa_id, device, dfa, make_device(cfg, dfa_id, device, dfa));
}

// Records ordered by DFA id, then device index. Deterministic given the config.
inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ExperimentRecord> records;
  records.reserve(cfg.num_dfas * cfg.device_count());
  for (std::size_t id = 0; id < cfg.num_dfas; ++id) {
    const Dfa dfa = generate_dfa(cfg, id);
    for (std::size_t device = 0; device < cfg.device_count(); ++device) {
      records.push_back(run_single(cfg, id, device, dfa));
    }
  }
  return records;
}

// ---- aggregation ----

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_hi = false;  // [lo, hi] instead of [lo, hi)

  bool contains(double x) const { return x >= lo && (x < hi || (closed_hi && x == hi)); }
};

inline std::string interval_label(const Interval& r) {
  return "[" + format_double(r.lo) + "," + format_double(r.hi) + (r.closed_hi ? "]" : ")");
}

// Buckets of the noisy-input table.
inline std::vector<Interval> input_noise_ranges() {
  return {{0.025, 1.0, true}, {0.005, 0.025}, {0.002, 0.005}, {0.001, 0.002}, {0.0005, 0.001}};
}

// Buckets of the counter table.
inline std::vector<Interval> counter_ranges() {
  return {{0.005, 0.025}, {0.002, 0.005}, {0.001, 0.002}, {0.0005, 0.001}, {0.0001, 0.0005}};
}

struct BucketSummary {
  std::string label;
  Interval range;
  std::size_t count = 0;
  double mean_d_a_mn = 0.0;
  double mean_d_a_ae = 0.0;
  double mean_d_mn_ae = 0.0;
  double mean_gain = 0.0;
  double stddev_d_a_ae = 0.0;  // sample standard deviation (n - 1)
  std::size_t n_low = 0;
  std::size_t n_medium = 0;
  std::size_t n_high = 0;
};

inline double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Mean without the smallest and largest value (plain mean for fewer than 3 values).
inline double trimmed_mean(std::vector<double> xs) {
  if (xs.size() < 3) return mean_of(xs);
  std::sort(xs.begin(), xs.end());
  xs.erase(xs.begin());
  xs.pop_back();
  return mean_of(xs);
}

inline BucketSummary summarize(std::string label, Interval range, const std::vector<const ExperimentRecord*>& rows) {
  BucketSummary s;
  s.label = std::move(label);
  s.range = range;
  s.count = rows.size();
  std::vector<double> mn, ae, mnae, gain;
  for (const auto* r : rows) {
    mn.push_back(r->d_a_mn.value);
    ae.push_back(r->d_a_ae.value);
    mnae.push_back(r->d_mn_ae.value);
    gain.push_back(r->gain);
    switch (r->gain_class) {
      case GainClass::low: ++s.n_low; break;
      case GainClass::medium: ++s.n_medium; break;
      case GainClass::high: ++s.n_high; break;
    }
  }
  s.mean_d_a_mn = mean_of(mn);
  s.mean_d_a_ae = mean_of(ae);
  s.mean_d_mn_ae = mean_of(mnae);
  s.mean_gain = mean_of(gain);
  s.stddev_d_a_ae = sample_stddev(ae);
  return s;
}

// Groups records by measured d(A, M_N). One summary per range, in the given order;
// records outside every range go to a trailing "other" summary (present only
// when nonempty), so counts always add up to the number of records.
inline std::vector<BucketSummary> bucket_records(const std::vector<ExperimentRecord>& records,
                                                 const std::vector<Interval>& ranges) {
  std::vector<Interval> sorted = ranges;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].lo <= sorted[i].hi)) throw ConfigError("bucket range with lo > hi");
    if (i > 0 && (sorted[i].lo < sorted[i - 1].hi || (sorted[i].lo == sorted[i - 1].hi && sorted[i - 1].closed_hi))) {
      throw ConfigError("bucket ranges overlap: " + interval_label(sorted[i - 1]) + " and " + interval_label(sorted[i]));
    }
  }

  std::vector<std::vector<const ExperimentRecord*>> rows(ranges.size());
  std::vector<const ExperimentRecord*> other;
  for (const auto& r : records) {
    bool placed = false;
    for (std::size_t i = 0; i < ranges.size() && !placed; ++i) {
      if (ranges[i].contains(r.d_a_mn.value)) {
        rows[i].push_back(&r);
        placed = true;
      }
    }
    if (!placed) other.push_back(&r);
  }
  std::vector<BucketSummary> out;
  for (std::size_t i = 0; i < ranges.size(); ++i) out.push_back(summarize(interval_label(ranges[i]), ranges[i], rows[i]));
  if (!other.empty()) out.push_back(summarize("other", Interval{0.0, 1.0, true}, other));
  return out;
}

// One summary per noise probability, in first-seen order (noisy-output layout).
inline std::vector<BucketSummary> summarize_by_p(const std::vector<ExperimentRecord>& records) {
  std::vector<double> ps;
  for (const auto& r : records) {
    if (r.p && std::find(ps.begin(), ps.end(), *r.p) == ps.end()) ps.push_back(*r.p);
  }
  std::vector<BucketSummary> out;
  for (double p : ps) {
    std::vector<const ExperimentRecord*> rows;
    for (const auto& r : records) {
      if (r.p && *r.p == p) rows.push_back(&r);
    }
    out.push_back(summarize("p=" + format_double(p), Interval{p, p, true}, rows));
  }
  return out;
}

// Noisy output is keyed by p; the other kinds are bucketed by measured distance.
inline std::vector<BucketSummary> summarize_records(const ExperimentConfig& cfg,
                                                    const std::vector<ExperimentRecord>& records) {
  switch (cfg.noise) {
    case NoiseKind::noisy_output: return summarize_by_p(records);
    case NoiseKind::noisy_input: return bucket_records(records, input_noise_ranges());
    case NoiseKind::counter: return bucket_records(records, counter_ranges());
  }
  return {};
}

// ---- sweeps ----

struct SweepCell {
  double p = 0.0;
  double parameter = 0.0;  // μ or ε = δ
  double mean_gain = 0.0;
  std::size_t count = 0;
};

// Mean gain per (p, μ) over noisy-output experiments, dropping the best and the
// worst record of each cell.
inline std::vector<SweepCell> mu_sweep(ExperimentConfig cfg, const std::vector<double>& mu_values) {
  cfg.noise = NoiseKind::noisy_output;
  std::vector<SweepCell> out;
  for (double mu : mu_values) {
    cfg.mu = mu;
    const auto records = run_experiment(cfg);
    for (double p : cfg.p_values) {
      std::vector<double> gains;
      for (const auto& r : records) {
        if (r.p && *r.p == p) gains.push_back(r.gain);
      }
      out.push_back({p, mu, trimmed_mean(gains), gains.size()});
    }
  }
  return out;
}

// Mean gain per (p, ε = δ) over noisy-output experiments.
inline std::vector<SweepCell> epsdelta_sweep(ExperimentConfig cfg, const std::vector<double>& eps_values) {
  cfg.noise = NoiseKind::noisy_output;
  std::vector<SweepCell> out;
  for (double eps : eps_values) {
    cfg.epsilon = eps;
    cfg.delta = eps;
    const auto records = run_experiment(cfg);
    for (double p : cfg.p_values) {
      std::vector<double> gains;
      for (const auto& r : records) {
        if (r.p && *r.p == p) gains.push_back(r.gain);
      }
      out.push_back({p, eps, mean_of(gains), gains.size()});
    }
  }
  return out;
}

struct EldSweepResult {
  std::vector<ExperimentRecord> records;
  std::vector<BucketSummary> eld_table;
  std::vector<BucketSummary> non_eld_table;
};

// Noisy-input experiments over three-letter DFAs, split by the ELD predicate.
inline EldSweepResult eld_sweep(ExperimentConfig cfg) {
  if (cfg.noise != NoiseKind::noisy_input) throw ConfigError("the ELD sweep is defined for input noise only");
  cfg.max_alphabet = 3;
  cfg.eld_partition = true;
  EldSweepResult out;
  out.records = run_experiment(cfg);
  std::vector<ExperimentRecord> eld, non_eld;
  for (const auto& r : out.records) (r.eld.value_or(false) ? eld : non_eld).push_back(r);
  const std::vector<Interval> ranges{{0.005, 0.025}, {0.002, 0.005}, {0.001, 0.002}, {0.0005, 0.001}};
  out.eld_table = bucket_records(eld, ranges);
  out.non_eld_table = bucket_records(non_eld, ranges);
  return out;
}

} // namespace nlstar
