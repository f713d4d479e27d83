#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rugged/noise.hpp"
#include "rugged/optimizers.hpp"

namespace rugged {

enum class Statistic { MaxOnesSampled, FinalOnes };

std::string_view to_string(Statistic s);
Statistic parse_statistic(std::string_view name);

/// Noise model named by kind ("none", "normal", "geometric") and variance.
/// Geometric p is derived from the variance.
struct NoiseSpec {
  std::string kind = "normal";
  double variance = 5.0;

  NoiseModel model() const { return noise_with_variance(kind, variance); }
};

struct ExperimentConfig {
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> n_values;
  std::uint64_t repetitions = 1;
  std::string budget_rule = "n^2";
  /// Each noise model is an independent sweep over the same grid.
  std::vector<NoiseSpec> noises{NoiseSpec{}};
  std::string k_rule = "sqrt(n)*ln(n)";
  std::uint64_t master_seed = 1;
  Statistic statistic = Statistic::MaxOnesSampled;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// When false, wall_ms is written as 0 so outputs are byte-reproducible.
  bool record_wall_time = false;

  /// Throws ConfigError on the first invalid field.
  void validate() const;
  std::size_t cell_count() const {
    return algorithms.size() * n_values.size() * repetitions * noises.size();
  }
};

/// The experimental setup behind the published figure: RLS, EA, cGA and RS
/// on n = 100..1000 (step 100), 100 repetitions, budget n^2, normal and
/// geometric noise with variance 5, K = sqrt(n) ln n.
ExperimentConfig paper_fig1_preset();

struct RunRecord {
  std::string algorithm;  // series label: "rls", or "rls/normal" in multi-noise sweeps
  std::size_t n = 0;
  std::uint64_t rep = 0;
  std::uint64_t run_seed = 0;
  std::uint64_t landscape_seed = 0;
  std::uint64_t budget = 0;
  std::uint64_t iterations = 0;
  std::uint64_t transitions = 0;
  std::size_t max_ones = 0;
  std::size_t final_ones = 0;
  double wall_ms = 0.0;
};

/// Seed for one cell: a fixed chain of mix_combine over
/// (master, purpose, algorithm, noise kind, n, rep).
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, Algorithm algorithm,
                          std::string_view noise_kind, std::size_t n, std::uint64_t rep);

std::string series_label(Algorithm algorithm, const NoiseSpec& noise, bool qualify);

/// Executes every (noise, algorithm, n, rep) cell. The result is in
/// canonical order and independent of the number of threads.
std::vector<RunRecord> run_sweep(
    const ExperimentConfig& config,
    const std::function<void(std::size_t done, std::size_t total)>& progress = {});

struct AggregateRow {
  std::string algorithm;
  std::size_t n = 0;
  double mean_pct = 0.0;
  double std_pct = 0.0;
  std::uint64_t reps = 0;
};

/// Mean and sample standard deviation of the statistic as a percentage of n,
/// grouped by (algorithm label, n). Invariant under record permutations.
std::vector<AggregateRow> aggregate(std::span<const RunRecord> records, Statistic statistic);

void write_records_csv(std::ostream& os, std::span<const RunRecord> records);
std::vector<RunRecord> read_records_csv(std::istream& is);
void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows);
/// Throws ConfigError naming missing columns or malformed rows.
std::vector<AggregateRow> read_aggregate_csv(std::istream& is);
/// Sidecar key = value description of the config and artifact version.
void write_metadata(std::ostream& os, const ExperimentConfig& config);

/// Parses the key = value config format (see README).
ExperimentConfig parse_config(std::istream& is);

/// "rls, ea" -> {Rls, Ea}.
std::vector<Algorithm> parse_algorithm_list(const std::string& value);
/// "100, 200" or an inclusive range "100:1000:100".
std::vector<std::size_t> parse_n_values(const std::string& value);

struct HittingTimeRow {
  std::size_t n = 0;
  double K = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t censored = 0;
  double mean_iterations = 0.0;  // over uncensored runs
  double ratio = 0.0;            // mean_iterations / (K sqrt(n) sigma2)
};

struct HittingTimeTable {
  std::vector<HittingTimeRow> rows;
  double loglog_slope = 0.0;   // of mean_iterations against n
  double ratio_spread = 0.0;   // max ratio / min ratio
  std::uint64_t cap_factor = 10;
};

/// cGA iterations until a point with at least n (1 - eps) ones is sampled,
/// on normal noise of variance sigma2 (sigma2 == 0 selects the noiseless
/// landscape; the ratio then uses sigma2 = 1). Runs not hitting within 10 n^2
/// iterations are censored.
HittingTimeTable cga_hitting_time_sweep(std::span<const std::size_t> n_values, double sigma2,
                                        const std::string& k_rule, double target_epsilon,
                                        std::uint64_t reps, std::uint64_t seed);

}  // namespace rugged
