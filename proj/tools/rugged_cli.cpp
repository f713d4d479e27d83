// rugged: command-line driver for single runs, experiment sweeps,
// verification suites and chart rendering.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage or
// configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rugged/chart.hpp"
#include "rugged/errors.hpp"
#include "rugged/expression.hpp"
#include "rugged/harness.hpp"
#include "rugged/landscape.hpp"
#include "rugged/optimizers.hpp"
#include "rugged/oracles.hpp"
#include "rugged/version.hpp"

namespace fs = std::filesystem;
using namespace rugged;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct RunFlags {
  std::string algo;
  long long n = 0;
  std::string noise = "none";
  double variance = 5.0;
  std::string budget = "n^2";
  std::uint64_t seed = 1;
  std::optional<std::string> K;
  bool trace = false;
};

int cmd_run(const RunFlags& f) {
  if (f.n < 2) throw ConfigError("n must be >= 2");
  const auto n = static_cast<std::size_t>(f.n);
  const Algorithm algo = parse_algorithm(f.algo);
  const NoiseSpec noise{f.noise, f.variance};
  const NoiseModel model = noise.model();

  const double budget_value = Expression::parse(f.budget)(static_cast<double>(n));
  if (!std::isfinite(budget_value) || budget_value < 1.0) throw ConfigError("budget must be >= 1");
  RunOptions options;
  options.algorithm = algo;
  options.budget = static_cast<std::uint64_t>(std::llround(budget_value));
  options.trace_noise = f.trace;
  options.trace_marginal_min = f.trace && algo == Algorithm::Cga;
  if (algo == Algorithm::Cga) {
    const std::string rule = f.K.value_or("sqrt(n)*ln(n)");
    const double k = Expression::parse(rule)(static_cast<double>(n));
    if (!std::isfinite(k) || !(k > 0.0)) throw ConfigError("K rule '" + rule + "' does not give K > 0");
    options.K = k;
  }

  const std::uint64_t landscape_seed = derive_seed(f.seed, "landscape", algo, noise.kind, n, 0);
  const std::uint64_t run_seed = derive_seed(f.seed, "run", algo, noise.kind, n, 0);
  const FrozenLandscape landscape(n, model, landscape_seed);
  Rng rng(run_seed);
  const Telemetry tel = run(options, landscape, rng);

  nlohmann::ordered_json j;
  j["algorithm"] = std::string(to_string(algo));
  j["n"] = n;
  j["noise"] = model.describe();
  j["run_seed"] = run_seed;
  j["landscape_seed"] = landscape_seed;
  j["budget"] = options.budget;
  if (options.K) j["K"] = *options.K;
  j["iterations"] = tel.iterations;
  j["evaluations"] = tel.evaluations;
  j["transitions"] = tel.accepted_transitions;
  j["start_ones"] = tel.start_ones;
  j["max_ones"] = tel.max_ones_sampled;
  j["final_ones"] = tel.final_ones;
  j["max_accepted_jump"] = tel.max_accepted_jump;
  j["reached_3n_over_4"] = tel.threshold_iteration.has_value();
  if (algo == Algorithm::Cga) j["min_marginal"] = tel.min_marginal;
  if (f.trace) {
    if (algo == Algorithm::Cga) {
      j["marginal_min_trace"] = tel.marginal_min_trace;
    } else if (algo != Algorithm::Rs) {
      j["noise_trace"] = tel.noise_trace;
    }
  }
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

struct SweepFlags {
  std::optional<std::string> config_path;
  std::string out;
  bool paper_fig1 = false;
  std::optional<std::string> algos;
  std::optional<std::string> n_values;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> n_max;
  std::optional<std::string> budget;
  std::optional<std::string> noise;
  std::optional<double> variance;
  std::optional<std::string> K;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> statistic;
  std::optional<unsigned> threads;
  bool wall_time = false;
  bool progress = false;
};

ExperimentConfig build_sweep_config(const SweepFlags& f) {
  if (f.paper_fig1 && f.config_path) throw ConfigError("--paper-fig1 and --config are mutually exclusive");
  ExperimentConfig c;
  if (f.paper_fig1) {
    c = paper_fig1_preset();
  } else if (f.config_path) {
    std::ifstream in(*f.config_path);
    if (!in) throw ConfigError("cannot read config file '" + *f.config_path + "'");
    c = parse_config(in);
  } else {
    c.algorithms = {Algorithm::Rls, Algorithm::Ea, Algorithm::Cga, Algorithm::Rs};
    c.n_values = {100};
  }
  // Inline flags override the base configuration.
  if (f.algos) c.algorithms = parse_algorithm_list(*f.algos);
  if (f.n_values) c.n_values = parse_n_values(*f.n_values);
  if (f.reps) c.repetitions = *f.reps;
  if (f.budget) c.budget_rule = *f.budget;
  if (f.noise || f.variance) {
    std::vector<std::string> kinds;
    if (f.noise) {
      std::istringstream ss(*f.noise);
      for (std::string k; std::getline(ss, k, ',');) kinds.push_back(k);
    } else {
      for (const auto& ns : c.noises) kinds.push_back(ns.kind);
    }
    const double variance = f.variance.value_or(c.noises.empty() ? 5.0 : c.noises.front().variance);
    c.noises.clear();
    for (const auto& k : kinds) c.noises.push_back({k, variance});
  }
  if (f.K) c.k_rule = *f.K;
  if (f.seed) c.master_seed = *f.seed;
  if (f.statistic) c.statistic = parse_statistic(*f.statistic);
  if (f.threads) c.threads = *f.threads;
  if (f.wall_time) c.record_wall_time = true;
  if (f.n_max) {
    std::erase_if(c.n_values, [&](std::size_t n) { return n > *f.n_max; });
  }
  c.validate();
  return c;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

int cmd_sweep(const SweepFlags& f) {
  const ExperimentConfig config = build_sweep_config(f);
  const fs::path dir(f.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + f.out + "': " + ec.message());
  // Open every output before running so an unwritable directory fails fast.
  auto records_out = open_output(dir / "records.csv");
  auto aggregate_out = open_output(dir / "aggregate.csv");
  auto meta_out = open_output(dir / "metadata.txt");

  std::function<void(std::size_t, std::size_t)> progress;
  if (f.progress) {
    progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\r" << done << "/" << total << std::flush;
      if (done == total) std::cerr << '\n';
    };
  }
  const auto records = run_sweep(config, progress);
  const auto rows = aggregate(records, config.statistic);
  write_records_csv(records_out, records);
  write_aggregate_csv(aggregate_out, rows);
  write_metadata(meta_out, config);
  std::cerr << "wrote " << records.size() << " records and " << rows.size() << " aggregate rows to "
            << dir.string() << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::optional<std::uint64_t> trials, std::uint64_t seed,
               const std::optional<std::string>& out_path) {
  const auto reports = run_suite(suite, trials, seed);
  std::ostringstream text;
  std::size_t passed = 0;
  for (const auto& r : reports) {
    text << to_json_line(r) << '\n';
    if (r.passed()) ++passed;
  }
  if (out_path) {
    auto out = open_output(*out_path);
    out << text.str();
  } else {
    std::cout << text.str();
  }
  std::cerr << passed << "/" << reports.size() << " checks passed\n";
  return passed == reports.size() ? kExitOk : kExitCheckFailed;
}

int cmd_plot(const std::string& in_path, const std::string& out_path, bool include_cga) {
  std::ifstream in(in_path);
  if (!in) throw ConfigError("cannot read '" + in_path + "'");
  const auto rows = read_aggregate_csv(in);
  const std::string svg = render_svg(chart_from_aggregate(rows, include_cga));
  auto out = open_output(out_path);
  out << svg;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rugged OneMax simulation: optimizer runs, sweeps, verification and charts"};
  app.set_version_flag("--version", RUGGED_VERSION);
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Execute a single optimizer run");
  run_cmd->add_option("--algo", run_flags.algo, "rls|ea|cga|rs")->required();
  run_cmd->add_option("--n", run_flags.n, "Dimension (>= 2)")->required();
  run_cmd->add_option("--noise", run_flags.noise, "none|normal|geometric")->capture_default_str();
  run_cmd->add_option("--variance", run_flags.variance, "Noise variance")->capture_default_str();
  run_cmd->add_option("--budget", run_flags.budget, "Iteration budget rule over n")->capture_default_str();
  run_cmd->add_option("--seed", run_flags.seed, "Master seed")->capture_default_str();
  run_cmd->add_option("--K", run_flags.K, "cGA K rule over n (default sqrt(n)*ln(n))");
  run_cmd->add_flag("--trace", run_flags.trace, "Include the accepted-point noise trace (cGA: minimum marginal per iteration)");

  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment sweep and write CSV files");
  sweep_cmd->add_option("--config", sweep_flags.config_path, "Key-value config file");
  sweep_cmd->add_option("--out", sweep_flags.out, "Output directory")->required();
  sweep_cmd->add_flag("--paper-fig1", sweep_flags.paper_fig1, "Preset reproducing the published figure");
  sweep_cmd->add_option("--algos", sweep_flags.algos, "Comma-separated algorithms");
  sweep_cmd->add_option("--n", sweep_flags.n_values, "n values: list or start:stop:step");
  sweep_cmd->add_option("--reps", sweep_flags.reps, "Repetitions per cell");
  sweep_cmd->add_option("--n-max", sweep_flags.n_max, "Drop n values above this");
  sweep_cmd->add_option("--budget", sweep_flags.budget, "Budget rule over n");
  sweep_cmd->add_option("--noise", sweep_flags.noise, "Comma-separated noise models");
  sweep_cmd->add_option("--variance", sweep_flags.variance, "Noise variance");
  sweep_cmd->add_option("--K", sweep_flags.K, "cGA K rule over n");
  sweep_cmd->add_option("--seed", sweep_flags.seed, "Master seed");
  sweep_cmd->add_option("--statistic", sweep_flags.statistic, "max_ones_sampled|final_ones");
  sweep_cmd->add_option("--threads", sweep_flags.threads, "Worker threads (0 = all cores)");
  sweep_cmd->add_flag("--wall-time", sweep_flags.wall_time, "Record wall time (breaks byte reproducibility)");
  sweep_cmd->add_flag("--progress", sweep_flags.progress, "Print a progress counter to stderr");

  std::string suite = "all";
  std::optional<std::uint64_t> trials;
  std::uint64_t verify_seed = 1;
  std::optional<std::string> verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites");
  verify_cmd->add_option("--suite", suite, "lemma1|collision|gaussmin|tails|stagnation|rs-ceiling|all")
      ->capture_default_str();
  verify_cmd->add_option("--trials", trials, "Override the suite's primary sample count");
  verify_cmd->add_option("--seed", verify_seed, "Seed")->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "Write the report here instead of stdout");

  std::string plot_in;
  std::string plot_out;
  bool include_cga = false;
  auto* plot_cmd = app.add_subcommand("plot", "Render an aggregate CSV as an SVG line chart");
  plot_cmd->add_option("--in", plot_in, "aggregate.csv")->required();
  plot_cmd->add_option("--out", plot_out, "chart.svg")->required();
  plot_cmd->add_flag("--include-cga", include_cga, "Also draw cGA series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags);
    if (*sweep_cmd) return cmd_sweep(sweep_flags);
    if (*verify_cmd) return cmd_verify(suite, trials, verify_seed, verify_out);
    if (*plot_cmd) return cmd_plot(plot_in, plot_out, include_cga);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
