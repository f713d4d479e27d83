#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "rugged/harness.hpp"

using namespace rugged;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.algorithms = {Algorithm::Rls, Algorithm::Rs};
  c.n_values = {10, 20, 30};
  c.repetitions = 5;
  c.noises = {NoiseSpec{"geometric", 5.0}};
  c.master_seed = 17;
  c.threads = 1;
  return c;
}

std::string records_text(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  write_records_csv(os, records);
  return os.str();
}

}  // namespace

TEST_CASE("sweep cardinality and determinism") {
  auto c = small_config();
  const auto a = run_sweep(c);
  CHECK(a.size() == 30);
  c.threads = 3;
  const auto b = run_sweep(c);
  CHECK(records_text(a) == records_text(b));

  std::set<std::tuple<std::string, std::size_t, std::uint64_t>> keys;
  for (const auto& r : a) keys.emplace(r.algorithm, r.n, r.rep);
  CHECK(keys.size() == a.size());
  for (const auto& r : a) CHECK(r.wall_ms == 0.0);
}

TEST_CASE("records csv round trip") {
  const auto records = run_sweep(small_config());
  std::istringstream in(records_text(records));
  const auto back = read_records_csv(in);
  CHECK(records_text(back) == records_text(records));
  std::istringstream header_only(records_text(records).substr(0, 20));
  CHECK_THROWS_AS(read_records_csv(header_only), ConfigError);
}

TEST_CASE("seeds are distinct across the paper grid") {
  const auto preset = paper_fig1_preset();
  std::set<std::uint64_t> seeds;
  std::size_t cells = 0;
  for (const auto& noise : preset.noises) {
    for (auto algo : preset.algorithms) {
      for (auto n : preset.n_values) {
        for (std::uint64_t rep = 0; rep < preset.repetitions; ++rep) {
          seeds.insert(derive_seed(preset.master_seed, "landscape", algo, noise.kind, n, rep));
          seeds.insert(derive_seed(preset.master_seed, "run", algo, noise.kind, n, rep));
          ++cells;
        }
      }
    }
  }
  CHECK(cells == 8000);
  CHECK(seeds.size() == 2 * cells);
  CHECK(preset.cell_count() == 8000);
}

TEST_CASE("aggregation") {
  SUBCASE("single record") {
    RunRecord r;
    r.algorithm = "rls";
    r.n = 100;
    r.max_ones = 60;
    r.final_ones = 55;
    const std::vector<RunRecord> one{r};
    const auto rows = aggregate(one, Statistic::MaxOnesSampled);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_pct == 60.0);
    CHECK(rows[0].std_pct == 0.0);
    CHECK(aggregate(one, Statistic::FinalOnes)[0].mean_pct == 55.0);
  }
  SUBCASE("permutation invariance") {
    auto records = run_sweep(small_config());
    std::ostringstream a, b;
    write_aggregate_csv(a, aggregate(records, Statistic::MaxOnesSampled));
    std::mt19937 shuffle(3);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(records.begin(), records.end(), shuffle);
      std::ostringstream again;
      write_aggregate_csv(again, aggregate(records, Statistic::MaxOnesSampled));
      CHECK(again.str() == a.str());
    }
    std::istringstream in(a.str());
    const auto rows = read_aggregate_csv(in);
    CHECK(rows.size() == 6);
    for (const auto& r : rows) {
      CHECK(r.mean_pct >= 0.0);
      CHECK(r.mean_pct <= 100.0);
    }
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(aggregate({}, Statistic::MaxOnesSampled), ConfigError);
  }
}

TEST_CASE("aggregate csv schema errors name the column") {
  std::istringstream in("algorithm,n,mean_pct,reps\nrls,100,50,1\n");
  try {
    read_aggregate_csv(in);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("std_pct") != std::string::npos);
  }
}

TEST_CASE("config file parsing") {
  std::istringstream good(
      "# scaled figure\n"
      "algorithms = rls, ea, cga, rs\n"
      "n_values = 100:300:100\n"
      "repetitions = 30\n"
      "budget = n^2\n"
      "noise = normal, geometric\n"
      "variance = 5\n"
      "K = sqrt(n)*ln(n)\n"
      "seed = 9\n"
      "statistic = final_ones\n"
      "threads = 2\n");
  const auto c = parse_config(good);
  CHECK(c.algorithms.size() == 4);
  CHECK(c.n_values == std::vector<std::size_t>{100, 200, 300});
  CHECK(c.repetitions == 30);
  CHECK(c.noises.size() == 2);
  CHECK(c.master_seed == 9);
  CHECK(c.statistic == Statistic::FinalOnes);
  CHECK(c.cell_count() == 720);

  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_config(in);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("algorithms = rls\nn_values = 10\nreptitions = 3\n").find("reptitions") !=
        std::string::npos);
  CHECK(message("algorithms = rls\nn_values = ten\n").find("n_values") != std::string::npos);
  CHECK(message("algorithms = rls, hill\nn_values = 10\n").find("algorithms") != std::string::npos);
  CHECK(message("algorithms = rls\nn_values = 10\nvariance = -1\n").find("variance") !=
        std::string::npos);
  CHECK_FALSE(message("algorithms = rls\nn_values = 10\nseed = 1\nseed = 2\n").empty());
}

TEST_CASE("config validation") {
  auto c = small_config();
  c.repetitions = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.n_values.clear();
  CHECK_THROWS_AS(run_sweep(c), ConfigError);
  c = small_config();
  c.noises = {NoiseSpec{"normal", 0.0}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.budget_rule = "n^";
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("series labels") {
  CHECK(series_label(Algorithm::Ea, NoiseSpec{"normal", 5}, false) == "ea");
  CHECK(series_label(Algorithm::Ea, NoiseSpec{"geometric", 5}, true) == "ea/geometric");
}

TEST_CASE("cga hitting times") {
  const std::vector<std::size_t> ns{32, 64};
  SUBCASE("noiseless runs hit far below n^2") {
    const auto t = cga_hitting_time_sweep(ns, 0.0, "sqrt(n)*ln(n)", 0.1, 5, 1);
    REQUIRE(t.rows.size() == 2);
    for (const auto& r : t.rows) {
      CHECK(r.censored == 0);
      CHECK(r.mean_iterations < 0.25 * static_cast<double>(r.n * r.n));
    }
  }
  SUBCASE("a loose target is hit almost at once") {
    const auto t = cga_hitting_time_sweep(ns, 5.0, "sqrt(n)*ln(n)", 0.999, 5, 1);
    for (const auto& r : t.rows) CHECK(r.mean_iterations <= 1.0);
  }
}
