#include "rugged/harness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rugged/errors.hpp"
#include "rugged/expression.hpp"
#include "rugged/landscape.hpp"
#include "rugged/version.hpp"

namespace rugged {

std::string_view to_string(Statistic s) {
  return s == Statistic::MaxOnesSampled ? "max_ones_sampled" : "final_ones";
}

Statistic parse_statistic(std::string_view name) {
  if (name == "max_ones_sampled" || name == "max_ones") return Statistic::MaxOnesSampled;
  if (name == "final_ones") return Statistic::FinalOnes;
  throw ConfigError("unknown statistic '" + std::string(name) + "' (expected max_ones_sampled|final_ones)");
}

namespace {

std::uint64_t evaluate_budget(const Expression& rule, std::size_t n) {
  const double v = rule(static_cast<double>(n));
  if (!std::isfinite(v) || v < 1.0 || v > 1e15) {
    throw ConfigError("budget rule '" + rule.text() + "' gives invalid budget at n=" + std::to_string(n));
  }
  return static_cast<std::uint64_t>(std::llround(v));
}

double evaluate_k(const Expression& rule, std::size_t n) {
  const double v = rule(static_cast<double>(n));
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ConfigError("K rule '" + rule.text() + "' gives non-positive K at n=" + std::to_string(n));
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("algorithms must not be empty");
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  for (auto n : n_values) {
    if (n < 2) throw ConfigError("n must be >= 2 (got " + std::to_string(n) + ")");
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (noises.empty()) throw ConfigError("at least one noise model is required");
  for (const auto& noise : noises) {
    if (noise.kind != "none" && !(noise.variance > 0.0)) {
      throw ConfigError("variance must be > 0 for noise model '" + noise.kind + "'");
    }
    (void)noise.model();
  }
  const auto budget = Expression::parse(budget_rule);
  const auto k = Expression::parse(k_rule);
  for (auto n : n_values) {
    (void)evaluate_budget(budget, n);
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::Cga) != algorithms.end()) {
      (void)evaluate_k(k, n);
    }
  }
}

ExperimentConfig paper_fig1_preset() {
  ExperimentConfig c;
  c.algorithms = {Algorithm::Rls, Algorithm::Ea, Algorithm::Cga, Algorithm::Rs};
  for (std::size_t n = 100; n <= 1000; n += 100) c.n_values.push_back(n);
  c.repetitions = 100;
  c.budget_rule = "n^2";
  c.noises = {NoiseSpec{"normal", 5.0}, NoiseSpec{"geometric", 5.0}};
  c.k_rule = "sqrt(n)*ln(n)";
  c.master_seed = 2023;
  c.statistic = Statistic::MaxOnesSampled;
  return c;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, Algorithm algorithm,
                          std::string_view noise_kind, std::size_t n, std::uint64_t rep) {
  std::uint64_t h = mix_combine(master, fnv1a64(purpose));
  h = mix_combine(h, fnv1a64(to_string(algorithm)));
  h = mix_combine(h, fnv1a64(noise_kind));
  h = mix_combine(h, static_cast<std::uint64_t>(n));
  return mix_combine(h, rep);
}

std::string series_label(Algorithm algorithm, const NoiseSpec& noise, bool qualify) {
  std::string label(to_string(algorithm));
  if (qualify) label += "/" + noise.kind;
  return label;
}

std::vector<RunRecord> run_sweep(
    const ExperimentConfig& config,
    const std::function<void(std::size_t done, std::size_t total)>& progress) {
  config.validate();
  const auto budget_rule = Expression::parse(config.budget_rule);
  const auto k_rule = Expression::parse(config.k_rule);
  const bool qualify = config.noises.size() > 1;

  struct Cell {
    Algorithm algorithm;
    const NoiseSpec* noise;
    std::size_t n;
    std::uint64_t rep;
  };
  std::vector<Cell> cells;
  cells.reserve(config.cell_count());
  for (const auto& noise : config.noises) {
    for (auto a : config.algorithms) {
      for (auto n : config.n_values) {
        for (std::uint64_t r = 0; r < config.repetitions; ++r) cells.push_back({a, &noise, n, r});
      }
    }
  }

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      try {
        RunRecord rec;
        rec.algorithm = series_label(cell.algorithm, *cell.noise, qualify);
        rec.n = cell.n;
        rec.rep = cell.rep;
        rec.landscape_seed =
            derive_seed(config.master_seed, "landscape", cell.algorithm, cell.noise->kind, cell.n, cell.rep);
        rec.run_seed = derive_seed(config.master_seed, "run", cell.algorithm, cell.noise->kind, cell.n, cell.rep);
        rec.budget = evaluate_budget(budget_rule, cell.n);

        RunOptions options;
        options.algorithm = cell.algorithm;
        options.budget = rec.budget;
        if (cell.algorithm == Algorithm::Cga) options.K = evaluate_k(k_rule, cell.n);

        const FrozenLandscape landscape(cell.n, cell.noise->model(), rec.landscape_seed);
        Rng rng(rec.run_seed);
        const auto start = std::chrono::steady_clock::now();
        const Telemetry tel = run(options, landscape, rng);
        const auto stop = std::chrono::steady_clock::now();
        rec.iterations = tel.iterations;
        rec.transitions = tel.accepted_transitions;
        rec.max_ones = tel.max_ones_sampled;
        rec.final_ones = tel.final_ones;
        if (config.record_wall_time) {
          rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        }
        records[i] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cells.size());
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, cells.size());
      }
    }
  };

  unsigned threads = config.threads ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<AggregateRow> aggregate(std::span<const RunRecord> records, Statistic statistic) {
  if (records.empty()) throw ConfigError("cannot aggregate an empty record set");
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
  for (const auto& r : records) {
    const auto value = statistic == Statistic::MaxOnesSampled ? r.max_ones : r.final_ones;
    groups[{r.algorithm, r.n}].push_back(100.0 * static_cast<double>(value) / static_cast<double>(r.n));
  }
  std::vector<AggregateRow> rows;
  for (auto& [key, values] : groups) {
    // Sorting makes the floating-point sums independent of record order.
    std::sort(values.begin(), values.end());
    const Eigen::Map<const Eigen::ArrayXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
    const double mean = v.mean();
    const double var = values.size() > 1 ? (v - mean).square().sum() / static_cast<double>(values.size() - 1) : 0.0;
    rows.push_back({key.first, key.second, mean, std::sqrt(var), values.size()});
  }
  return rows;
}

void write_records_csv(std::ostream& os, std::span<const RunRecord> records) {
  os << "algorithm,n,rep,run_seed,landscape_seed,budget,iterations,transitions,max_ones,final_ones,wall_ms\n";
  for (const auto& r : records) {
    os << r.algorithm << ',' << r.n << ',' << r.rep << ',' << r.run_seed << ',' << r.landscape_seed << ','
       << r.budget << ',' << r.iterations << ',' << r.transitions << ',' << r.max_ones << ','
       << r.final_ones << ',' << std::fixed << std::setprecision(3) << r.wall_ms << '\n';
    os.unsetf(std::ios::floatfield);
  }
}

std::vector<RunRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("records CSV is empty");
  const auto header = split_csv_line(strip_cr(line));
  const std::vector<std::string> expected = {"algorithm",  "n",        "rep",         "run_seed",
                                             "landscape_seed", "budget", "iterations", "transitions",
                                             "max_ones",   "final_ones", "wall_ms"};
  if (header != expected) throw ConfigError("records CSV header does not match the expected schema");
  std::vector<RunRecord> out;
  while (std::getline(is, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != expected.size()) throw ConfigError("malformed records CSV row: " + line);
    RunRecord r;
    try {
      r.algorithm = f[0];
      r.n = std::stoull(f[1]);
      r.rep = std::stoull(f[2]);
      r.run_seed = std::stoull(f[3]);
      r.landscape_seed = std::stoull(f[4]);
      r.budget = std::stoull(f[5]);
      r.iterations = std::stoull(f[6]);
      r.transitions = std::stoull(f[7]);
      r.max_ones = std::stoull(f[8]);
      r.final_ones = std::stoull(f[9]);
      r.wall_ms = std::stod(f[10]);
    } catch (const std::logic_error&) {
      throw ConfigError("malformed records CSV row: " + line);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows) {
  os << "algorithm,n,mean_pct,std_pct,reps\n";
  for (const auto& r : rows) {
    os << r.algorithm << ',' << r.n << ',' << std::fixed << std::setprecision(6) << r.mean_pct << ','
       << r.std_pct << ',' << r.reps << '\n';
    os.unsetf(std::ios::floatfield);
  }
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("aggregate CSV is empty");
  const auto header = split_csv_line(strip_cr(line));
  auto column = [&header](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("aggregate CSV is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_alg = column("algorithm");
  const std::size_t c_n = column("n");
  const std::size_t c_mean = column("mean_pct");
  const std::size_t c_std = column("std_pct");
  const std::size_t c_reps = column("reps");
  std::vector<AggregateRow> out;
  while (std::getline(is, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw ConfigError("malformed aggregate CSV row: " + line);
    AggregateRow r;
    try {
      r.algorithm = f[c_alg];
      r.n = std::stoull(f[c_n]);
      r.mean_pct = std::stod(f[c_mean]);
      r.std_pct = std::stod(f[c_std]);
      r.reps = std::stoull(f[c_reps]);
    } catch (const std::logic_error&) {
      throw ConfigError("malformed aggregate CSV row: " + line);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_metadata(std::ostream& os, const ExperimentConfig& c) {
  os << "# rugged sweep metadata\n";
  os << "version = " << RUGGED_VERSION << '\n';
  os << "algorithms = ";
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) os << (i ? ", " : "") << to_string(c.algorithms[i]);
  os << "\nn_values = ";
  for (std::size_t i = 0; i < c.n_values.size(); ++i) os << (i ? ", " : "") << c.n_values[i];
  os << "\nrepetitions = " << c.repetitions << '\n';
  os << "budget = " << c.budget_rule << '\n';
  os << "noise = ";
  for (std::size_t i = 0; i < c.noises.size(); ++i) os << (i ? ", " : "") << c.noises[i].kind;
  os << '\n';
  os << std::setprecision(17);
  for (const auto& noise : c.noises) {
    os << "# " << noise.kind << ": " << noise.model().describe() << '\n';
  }
  os << "variance = " << (c.noises.empty() ? 0.0 : c.noises.front().variance) << '\n';
  os << "K = " << c.k_rule << '\n';
  os << "seed = " << c.master_seed << '\n';
  os << "statistic = " << to_string(c.statistic) << '\n';
  os << "record_wall_time = " << (c.record_wall_time ? "true" : "false") << '\n';
}

HittingTimeTable cga_hitting_time_sweep(std::span<const std::size_t> n_values, double sigma2,
                                        const std::string& k_rule, double target_epsilon,
                                        std::uint64_t reps, std::uint64_t seed) {
  if (sigma2 < 0.0) throw ConfigError("sigma2 must be >= 0");
  if (!(target_epsilon > 0.0 && target_epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  const auto rule = Expression::parse(k_rule);
  const NoiseModel noise = sigma2 > 0.0 ? NoiseModel::normal(sigma2) : NoiseModel::none();
  const double sigma_scale = sigma2 > 0.0 ? sigma2 : 1.0;

  HittingTimeTable table;
  for (auto n : n_values) {
    const double nd = static_cast<double>(n);
    HittingTimeRow row;
    row.n = n;
    row.K = evaluate_k(rule, n);
    row.reps = reps;
    RunOptions options;
    options.algorithm = Algorithm::Cga;
    options.K = row.K;
    options.budget = table.cap_factor * static_cast<std::uint64_t>(n) * n;
    options.target_ones = static_cast<std::size_t>(std::ceil(nd * (1.0 - target_epsilon) - 1e-9));
    double total = 0.0;
    std::uint64_t hits = 0;
    for (std::uint64_t r = 0; r < reps; ++r) {
      const FrozenLandscape landscape(n, noise, derive_seed(seed, "hit-landscape", Algorithm::Cga, noise.kind(), n, r));
      Rng rng(derive_seed(seed, "hit-run", Algorithm::Cga, noise.kind(), n, r));
      const Telemetry tel = run(options, landscape, rng);
      if (tel.hit_iteration) {
        total += static_cast<double>(*tel.hit_iteration);
        ++hits;
      } else {
        ++row.censored;
      }
    }
    row.mean_iterations = hits ? total / static_cast<double>(hits) : std::nan("");
    row.ratio = row.mean_iterations / (row.K * std::sqrt(nd) * sigma_scale);
    table.rows.push_back(row);
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::vector<const HittingTimeRow*> usable;
  for (const auto& row : table.rows) {
    if (row.mean_iterations > 0.0) {
      usable.push_back(&row);
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
    }
  }
  table.ratio_spread = usable.empty() ? std::nan("") : hi / lo;
  if (usable.size() >= 2) {
    Eigen::MatrixXd design(static_cast<Eigen::Index>(usable.size()), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(usable.size()));
    for (std::size_t i = 0; i < usable.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      design(k, 0) = 1.0;
      design(k, 1) = std::log(static_cast<double>(usable[i]->n));
      y[k] = std::log(usable[i]->mean_iterations);
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
    table.loglog_slope = beta[1];
  }
  return table;
}

}  // namespace rugged
