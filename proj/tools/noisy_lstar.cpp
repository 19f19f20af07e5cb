// Command-line harness: DFA generation, single learning runs, the full
// robustness pipeline, parameter sweeps and the equal-length-distinguishing check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlstar/nlstar.hpp"

namespace fs = std::filesystem;
using namespace nlstar;

namespace {

// Values given on the command line; unset ones fall back to the profile.
struct Flags {
  std::string profile = "paper";
  std::optional<std::string> noise;
  std::vector<double> p_values;
  std::optional<std::size_t> num_dfas;
  std::optional<double> mu, alpha, gamma, epsilon, delta;
  std::optional<std::size_t> maxround;
  std::string analysis = "prefix-sift";
  std::uint64_t seed = 1;
  std::string out = "out";
  unsigned threads = 0;
  bool timing = false;
  bool trajectory = false;
  bool eld = false;
  std::size_t max_states = 50;
  std::size_t max_alphabet = 20;
};

void add_common_flags(CLI::App* app, Flags& f, bool with_noise) {
  app->add_option("--profile", f.profile, "Parameter profile")->check(CLI::IsMember({"paper", "desk"}));
  if (with_noise) {
    app->add_option("--noise", f.noise, "Noise model")->check(CLI::IsMember({"output", "input", "counter"}));
    app->add_option("--p", f.p_values, "Noise probabilities (comma separated)")->delimiter(',');
  }
  app->add_option("--num-dfas", f.num_dfas, "Number of random DFAs");
  app->add_option("--mu", f.mu, "Stop probability of the word distribution");
  app->add_option("--alpha", f.alpha, "Distance estimation error");
  app->add_option("--gamma", f.gamma, "Distance estimation confidence");
  app->add_option("--epsilon", f.epsilon, "PAC error parameter");
  app->add_option("--delta", f.delta, "PAC confidence parameter");
  app->add_option("--maxround", f.maxround, "Maximal number of learning rounds");
  app->add_option("--analysis", f.analysis, "Counterexample analysis")
      ->check(CLI::IsMember({"binary-search", "prefix-sift"}));
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--threads", f.threads, "Worker threads for distance estimation (0: all cores)");
  app->add_option("--max-states", f.max_states, "Upper bound on generated DFA states");
  app->add_option("--max-alphabet", f.max_alphabet, "Upper bound on generated alphabet size");
  app->add_flag("--timing", f.timing, "Fill the wall_ms column (makes output run-dependent)");
}

std::vector<double> default_p_values(NoiseKind kind) {
  if (kind == NoiseKind::noisy_input) return {1e-4, 5e-4, 1e-3, 5e-3};
  return {0.01, 0.005, 0.0025, 0.0015, 0.001};
}

// Number of DFAs the paper-scale runs use per experiment family.
std::size_t paper_num_dfas(const std::string& family, NoiseKind kind) {
  if (family == "sweep-mu") return 22;
  if (family == "sweep-epsdelta") return 35;
  if (family == "eld-sweep") return 45;
  switch (kind) {
    case NoiseKind::noisy_output: return 50;
    case NoiseKind::noisy_input: return 45;
    case NoiseKind::counter: return 160;
  }
  return 50;
}

ExperimentConfig resolve(const Flags& f, const std::string& family, NoiseKind default_noise) {
  ExperimentConfig cfg = f.profile == "desk" ? ExperimentConfig::desk() : ExperimentConfig::paper();
  cfg.noise = f.noise ? parse_noise_kind(*f.noise) : default_noise;
  cfg.p_values = f.p_values.empty() ? default_p_values(cfg.noise) : f.p_values;
  if (f.profile == "paper") cfg.num_dfas = paper_num_dfas(family, cfg.noise);
  if (f.num_dfas) cfg.num_dfas = *f.num_dfas;
  if (f.mu) cfg.mu = *f.mu;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.gamma) cfg.gamma = *f.gamma;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.delta) cfg.delta = *f.delta;
  if (f.maxround) cfg.maxround = *f.maxround;
  cfg.analysis = f.analysis == "binary-search" ? CounterexampleAnalysis::binary_search
                                               : CounterexampleAnalysis::prefix_sift;
  cfg.master_seed = f.seed;
  cfg.threads = f.threads;
  cfg.measure_time = f.timing;
  cfg.trajectory = f.trajectory;
  cfg.eld_partition = f.eld;
  cfg.max_states = f.max_states;
  cfg.max_alphabet = f.max_alphabet;
  cfg.validate();
  return cfg;
}

nlohmann::json config_json(const ExperimentConfig& cfg, const std::string& command, const std::string& profile) {
  nlohmann::json j;
  j["command"] = command;
  j["profile"] = profile;
  j["noise"] = to_string(cfg.noise);
  j["p_values"] = cfg.noise == NoiseKind::counter ? std::vector<double>{} : cfg.p_values;
  j["num_dfas"] = cfg.num_dfas;
  j["mu"] = cfg.mu;
  j["alpha"] = cfg.alpha;
  j["gamma"] = cfg.gamma;
  j["distance_sample_size"] = required_sample_size(cfg.alpha, cfg.gamma);
  j["epsilon"] = cfg.epsilon;
  j["delta"] = cfg.delta;
  j["maxround"] = cfg.maxround;
  j["analysis"] = to_string(cfg.analysis);
  j["seed"] = cfg.master_seed;
  j["trajectory"] = cfg.trajectory;
  j["eld_partition"] = cfg.eld_partition;
  j["max_states"] = cfg.max_states;
  j["max_alphabet"] = cfg.max_alphabet;
  j["timing"] = cfg.measure_time;
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

template <class Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_file(path, buffer.str());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string numbered(const char* prefix, std::size_t id, const char* suffix) {
  std::ostringstream name;
  name << prefix << std::setw(4) << std::setfill('0') << id << suffix;
  return name.str();
}

std::string word_text(const Word& w) {
  if (w.empty()) return "(empty)";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

void write_dfas(const fs::path& dir, const ExperimentConfig& cfg, const std::vector<ExperimentRecord>& records) {
  fs::create_directories(dir / "dfas");
  fs::create_directories(dir / "hypotheses");
  for (std::size_t id = 0; id < cfg.num_dfas; ++id) {
    const Dfa dfa = generate_dfa(cfg, id);
    std::string text = serialize_dfa(dfa);
    if (cfg.noise == NoiseKind::counter) {
      const auto device = make_device(cfg, id, 0, dfa);
      text += serialize_counter(std::get<CounterDfaOracle>(device).counter());
    }
    write_file(dir / "dfas" / numbered("dfa_", id, ".dfa"), text);
  }
  std::size_t device = 0;
  std::size_t last_id = static_cast<std::size_t>(-1);
  for (const auto& r : records) {
    device = r.dfa_id == last_id ? device + 1 : 0;
    last_id = r.dfa_id;
    if (!r.hypothesis) continue;
    write_file(dir / "hypotheses" / (numbered("hyp_", r.dfa_id, "_") + std::to_string(device) + ".dfa"),
               serialize_dfa(*r.hypothesis));
  }
}

void print_summary(const std::vector<BucketSummary>& buckets) {
  std::cout << std::left << std::setw(20) << "group" << std::setw(6) << "#" << std::setw(12) << "d(A,MN)"
            << std::setw(12) << "d(A,AE)" << std::setw(12) << "d(MN,AE)" << std::setw(12) << "gain"
            << "stddev\n";
  for (const auto& b : buckets) {
    std::cout << std::left << std::setw(20) << b.label << std::setw(6) << b.count << std::setw(12)
              << format_double(b.mean_d_a_mn) << std::setw(12) << format_double(b.mean_d_a_ae) << std::setw(12)
              << format_double(b.mean_d_mn_ae) << std::setw(12) << format_double(b.mean_gain)
              << format_double(b.stddev_d_a_ae) << '\n';
  }
}

int cmd_gen(const Flags& f) {
  const ExperimentConfig cfg = resolve(f, "gen", NoiseKind::noisy_output);
  fs::create_directories(f.out);
  for (std::size_t id = 0; id < cfg.num_dfas; ++id) {
    write_file(fs::path(f.out) / numbered("dfa_", id, ".dfa"), serialize_dfa(generate_dfa(cfg, id)));
  }
  std::cout << "wrote " << cfg.num_dfas << " DFAs to " << f.out << '\n';
  return 0;
}

int cmd_learn(const Flags& f, const std::string& dfa_path, std::size_t dfa_id) {
  ExperimentConfig cfg = resolve(f, "learn", NoiseKind::noisy_output);
  if (cfg.p_values.size() > 1 && f.p_values.empty()) cfg.p_values.resize(1);
  if (cfg.p_values.size() != 1 && cfg.noise != NoiseKind::counter) {
    throw ConfigError("learn takes a single --p value");
  }
  std::optional<DeviceFile> file;
  if (!dfa_path.empty()) file = parse_device(read_file(dfa_path));
  const Dfa dfa = file ? file->dfa : generate_dfa(cfg, dfa_id);
  NoisyDevice device = (file && file->counter && cfg.noise == NoiseKind::counter)
                           ? NoisyDevice(CounterDfaOracle(dfa, *file->counter))
                           : make_device(cfg, dfa_id, 0, dfa);
  const ExperimentRecord r = run_device(cfg, dfa_id, 0, dfa, device);

  fs::create_directories(f.out);
  write_file(fs::path(f.out) / "hypothesis.dfa", serialize_dfa(*r.hypothesis));
  if (cfg.trajectory) write_with(fs::path(f.out) / "trajectory.csv", [&](auto& o) { write_trajectory_csv(o, {r}); });
  std::cout << "noise        " << to_string(r.noise) << (r.p ? " p=" + format_double(*r.p) : "") << '\n'
            << "rounds       " << r.rounds << " (" << to_string(r.terminated_by) << ")\n"
            << "states       " << r.hypothesis_states << '\n'
            << "queries      " << r.membership_queries << '\n'
            << "d(A,MN)      " << format_double(r.d_a_mn.value) << '\n'
            << "d(A,AE)      " << format_double(r.d_a_ae.value) << '\n'
            << "d(MN,AE)     " << format_double(r.d_mn_ae.value) << '\n'
            << "gain         " << format_double(r.gain) << " (" << to_string(r.gain_class) << ")\n";
  return 0;
}

int cmd_experiment(const Flags& f) {
  const ExperimentConfig cfg = resolve(f, "experiment", NoiseKind::noisy_output);
  const fs::path dir(f.out);
  fs::create_directories(dir);
  write_file(dir / "config.json", config_json(cfg, "experiment", f.profile).dump(2) + "\n");
  const auto records = run_experiment(cfg);
  const auto summary = summarize_records(cfg, records);
  write_with(dir / "records.csv", [&](auto& o) { write_records_csv(o, records); });
  write_with(dir / "summary.csv", [&](auto& o) { write_summary_csv(o, summary); });
  if (cfg.trajectory) write_with(dir / "trajectory.csv", [&](auto& o) { write_trajectory_csv(o, records); });
  write_dfas(dir, cfg, records);
  print_summary(summary);
  return 0;
}

int cmd_eld(const std::string& dfa_path, const std::string& mode) {
  const Dfa dfa = parse_device(read_file(dfa_path)).dfa;
  const auto witness =
      is_equal_length_distinguishing(dfa, mode == "product-bscc" ? EldMode::product_bscc : EldMode::definition);
  std::cout << "ELD: " << (witness ? "yes" : "no") << '\n';
  if (witness) {
    std::cout << "q1: " << witness->q1 << '\n'
              << "q2: " << witness->q2 << '\n'
              << "w: " << word_text(witness->w) << '\n'
              << "w': " << word_text(witness->w_prime) << '\n';
  }
  return 0;
}

int cmd_sweep(const Flags& f, const std::string& which, std::vector<double> values) {
  ExperimentConfig cfg = resolve(f, which, NoiseKind::noisy_output);
  if (cfg.noise != NoiseKind::noisy_output) throw ConfigError(which + " runs noisy-output experiments only");
  const fs::path dir(f.out);
  fs::create_directories(dir);
  write_file(dir / "config.json", config_json(cfg, which, f.profile).dump(2) + "\n");
  std::vector<SweepCell> cells;
  if (which == "sweep-mu") {
    if (values.empty()) values = {0.001, 0.005, 0.01, 0.05, 0.1};
    cells = mu_sweep(cfg, values);
    write_with(dir / "sweep_mu.csv", [&](auto& o) { write_sweep_csv(o, cells, "mu"); });
  } else {
    if (values.empty()) values = {0.05, 0.01, 0.005, 0.001, 0.0005};
    cells = epsdelta_sweep(cfg, values);
    write_with(dir / "sweep_epsdelta.csv", [&](auto& o) { write_sweep_csv(o, cells, "epsilon_delta"); });
  }
  for (const auto& c : cells) {
    std::cout << "p=" << format_double(c.p) << " " << (which == "sweep-mu" ? "mu=" : "eps=delta=")
              << format_double(c.parameter) << " gain=" << format_double(c.mean_gain) << '\n';
  }
  return 0;
}

int cmd_eld_sweep(const Flags& f) {
  Flags g = f;
  g.noise = "input";
  const ExperimentConfig cfg = resolve(g, "eld-sweep", NoiseKind::noisy_input);
  const fs::path dir(f.out);
  fs::create_directories(dir);
  ExperimentConfig echoed = cfg;
  echoed.max_alphabet = 3;
  echoed.eld_partition = true;
  write_file(dir / "config.json", config_json(echoed, "eld-sweep", f.profile).dump(2) + "\n");
  const auto result = eld_sweep(cfg);
  write_with(dir / "records.csv", [&](auto& o) { write_records_csv(o, result.records); });
  write_with(dir / "summary_eld.csv", [&](auto& o) { write_summary_csv(o, result.eld_table); });
  write_with(dir / "summary_non_eld.csv", [&](auto& o) { write_summary_csv(o, result.non_eld_table); });
  write_dfas(dir, echoed, result.records);
  std::cout << "equal-length-distinguishing\n";
  print_summary(result.eld_table);
  std::cout << "\nnot equal-length-distinguishing\n";
  print_summary(result.non_eld_table);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAC L* learning over noisy DFAs: experiments and structural checks"};
  app.require_subcommand(1);

  Flags flags;
  std::string dfa_path;
  std::size_t dfa_id = 0;
  std::string eld_mode = "definition";
  std::vector<double> sweep_values;

  auto* gen = app.add_subcommand("gen", "Write random DFAs in the text format");
  add_common_flags(gen, flags, false);

  auto* learn_cmd = app.add_subcommand("learn", "Learn one noisy device and report the three distances");
  add_common_flags(learn_cmd, flags, true);
  learn_cmd->add_option("--dfa", dfa_path, "DFA file (a trailing counter line is used with --noise counter)");
  learn_cmd->add_option("--dfa-id", dfa_id, "Generated DFA id when no --dfa is given");
  learn_cmd->add_flag("--trajectory", flags.trajectory, "Measure d(A, A_E) every 20 rounds");

  auto* experiment = app.add_subcommand("experiment", "Full pipeline: records.csv, summary.csv, config.json");
  add_common_flags(experiment, flags, true);
  experiment->add_flag("--trajectory", flags.trajectory, "Measure d(A, A_E) every 20 rounds");
  experiment->add_flag("--eld", flags.eld, "Fill the eld column");

  auto* eld = app.add_subcommand("eld", "Equal-length-distinguishing check");
  eld->add_option("dfa", dfa_path, "DFA file")->required();
  eld->add_option("--mode", eld_mode, "Predicate variant")->check(CLI::IsMember({"definition", "product-bscc"}));

  auto* sweep_mu = app.add_subcommand("sweep-mu", "Mean gain over a grid of p and mu");
  add_common_flags(sweep_mu, flags, true);
  sweep_mu->add_option("--mu-values", sweep_values, "Values of mu (comma separated)")->delimiter(',');

  auto* sweep_eps = app.add_subcommand("sweep-epsdelta", "Mean gain over a grid of p and epsilon = delta");
  add_common_flags(sweep_eps, flags, true);
  sweep_eps->add_option("--eps-values", sweep_values, "Values of epsilon = delta (comma separated)")->delimiter(',');

  auto* eld_sweep_cmd = app.add_subcommand("eld-sweep", "Input-noise experiments split by the ELD predicate");
  add_common_flags(eld_sweep_cmd, flags, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(flags);
    if (learn_cmd->parsed()) return cmd_learn(flags, dfa_path, dfa_id);
    if (experiment->parsed()) return cmd_experiment(flags);
    if (eld->parsed()) return cmd_eld(dfa_path, eld_mode);
    if (sweep_mu->parsed()) return cmd_sweep(flags, "sweep-mu", sweep_values);
    if (sweep_eps->parsed()) return cmd_sweep(flags, "sweep-epsdelta", sweep_values);
    if (eld_sweep_cmd->parsed()) return cmd_eld_sweep(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
