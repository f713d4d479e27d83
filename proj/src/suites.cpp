#include <cmath>
#include <sstream>

#include "rugged/oracles.hpp"

namespace rugged {
namespace {

std::uint64_t cell_seed(std::uint64_t seed, std::string_view suite, std::uint64_t cell) {
  return mix_combine(mix_combine(seed, fnv1a64(suite)), cell);
}

void lemma1_suite(std::vector<BoundReport>& out, std::uint64_t samples, std::uint64_t seed) {
  std::uint64_t cell = 0;
  for (std::size_t n : {4, 8, 16, 64}) {
    for (double eps : {0.1, 0.25, 0.5}) {
      Rng rng(cell_seed(seed, "lemma1", cell++));
      out.push_back(lemma1_check(n, eps, samples, rng));
    }
  }
}

/// Family used for the duplicate check: the border vector with the
/// largest self-collision probability plus random members of M_eps.
std::vector<MarginalPoint> duplicate_family(std::size_t n, double eps, Rng& rng) {
  std::vector<MarginalPoint> family;
  const double cap = static_cast<double>(n) * (1.0 - eps);
  const auto lower = static_cast<std::size_t>(std::ceil(4.0 * static_cast<double>(n) * eps / 3.0 - 1e-12));
  family.push_back({border_vector(n, lower, cap), eps});
  if (family.back().p.size() == 0) family.back().p = border_vector(n, lower - 1, cap);
  for (int i = 0; i < 3; ++i) family.push_back(sample_marginal_point(n, eps, rng));
  return family;
}

void collision_suite(std::vector<BoundReport>& out, std::uint64_t pairs, std::uint64_t seed) {
  Rng rng(cell_seed(seed, "collision", 0));
  out.push_back(collision_bound_check(12, 0.25, pairs, rng));
  Rng dup_rng(cell_seed(seed, "collision", 1));
  const auto family = duplicate_family(200, 0.25, dup_rng);
  BoundReport dup = duplicate_mc(family, 10000, 100, dup_rng);
  // The expectation here is stronger than the union-bound comparison:
  // no duplicate at all.
  if (dup.mc_estimate != 0.0) dup.verdict = Verdict::Fail;
  out.push_back(std::move(dup));
}

void gaussmin_suite(std::vector<BoundReport>& out, std::uint64_t trials, std::uint64_t seed) {
  std::uint64_t cell = 0;
  for (std::uint64_t n : {10, 100, 1000}) {
    for (double c : {0.0, 0.01, 0.1}) {
      Rng rng(cell_seed(seed, "gaussmin", cell++));
      out.push_back(min_gaussian_mc(n, c, trials, rng));
    }
  }
}

void tails_suite(std::vector<BoundReport>& out, std::uint64_t trials, std::uint64_t seed) {
  // Survival function telescopes: sum_{k<K} P(D=k) + P(D>=K) = 1.
  for (double p : {0.1, 0.35826, 0.5, 0.9}) {
    double mass = 0.0;
    for (int k = 1; k < 200; ++k) mass += geometric_tail(p, k) - geometric_tail(p, k + 1);
    const double total = mass + geometric_tail(p, 200);
    std::ostringstream name;
    name << "tails/telescoping/p=" << p;
    out.push_back({name.str(), 1.0, total, 0.0, 0,
                   std::abs(total - 1.0) <= 1e-12 ? Verdict::Pass : Verdict::Fail, ""});
  }
  // With p = 1/2 the Chernoff bound at t = ln^2 n is at most exp(-3t/80).
  for (double n : {100.0, 1000.0, 10000.0}) {
    const double t = std::pow(std::log(n), 2);
    const double delta = stagnation_delta(t, 0.5);
    const double bound = geometric_sum_lower_tail_bound(t, 0.5, delta);
    const double cap = std::exp(-3.0 * t / 80.0);
    std::ostringstream name;
    name << "tails/chernoff-vs-3t80/n=" << n;
    std::ostringstream note;
    note << "delta=" << delta << " (>= 1/4 required)";
    out.push_back({name.str(), cap, bound, 0.0, 0,
                   bound <= cap && delta >= 0.25 ? Verdict::Pass : Verdict::Fail, note.str()});
  }
  std::uint64_t cell = 0;
  for (double p : {0.5, geometric_p_for_variance(5.0)}) {
    for (std::uint64_t t : {10, 48, 400}) {
      Rng rng(cell_seed(seed, "tails", cell++));
      out.push_back(geometric_sum_mc(t, p, trials, rng));
    }
  }
  // Neighbour tail at the stagnation level m. The exact survival value
  // P(D >= m-1) = (1-p)^(m-2) is 1/p times the expression p(1-p)^(-2)(1-p)^m
  // used in the literature derivation; the closed-form cap
  // e^(1/2) n^(-ln(n)/4) still holds for the exact value.
  {
    const double p = 0.5;
    const double n = 1000.0;
    const double t = std::pow(std::log(n), 2);
    const double m = (t + 1.0) / (2.0 * p) - t / 2.0;
    const double exact = geometric_tail(p, m - 1.0);
    const double printed = p * std::pow(1.0 - p, m - 2.0);
    const double cap = std::exp(0.5) * std::pow(n, -std::log(n) / 4.0);
    std::ostringstream note;
    note.precision(6);
    note << "m=" << m << " exact=(1-p)^(m-2) printed_expression=" << printed
         << " (differs by factor 1/p; exact value used)";
    out.push_back({"tails/neighbour-tail/n=1000/p=0.5", cap, exact, 0.0, 0,
                   exact <= cap ? Verdict::Pass : Verdict::Fail, note.str()});
  }
}

void stagnation_suite(std::vector<BoundReport>& out, std::uint64_t runs, std::uint64_t seed) {
  const std::size_t n = 1000;
  out.push_back(stagnation_experiment(Algorithm::Rls, n, NoiseModel::geometric(0.5), runs,
                                      cell_seed(seed, "stagnation", 0)));
  const double p_ea = 1.0 / (2.0 * std::log(static_cast<double>(n)));
  out.push_back(stagnation_experiment(Algorithm::Ea, n, NoiseModel::geometric(p_ea), runs,
                                      cell_seed(seed, "stagnation", 1)));
  out.push_back(stagnation_experiment(Algorithm::Rls, 100, NoiseModel::none(), runs,
                                      cell_seed(seed, "stagnation", 2)));
}

void rs_ceiling_suite(std::vector<BoundReport>& out, std::uint64_t runs, std::uint64_t seed) {
  out.push_back(rs_ceiling_experiment(1000, 1000000, runs, cell_seed(seed, "rs-ceiling", 0)));
  out.push_back(rs_ceiling_experiment(10, 10240, runs, cell_seed(seed, "rs-ceiling", 1)));
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma1", "collision", "gaussmin", "tails",
                                                 "stagnation", "rs-ceiling", "all"};
  return names;
}

std::vector<BoundReport> run_suite(const std::string& suite, std::optional<std::uint64_t> trials,
                                   std::uint64_t seed) {
  std::vector<BoundReport> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "lemma1") {
    lemma1_suite(out, trials.value_or(1000000), seed);
    known = true;
  }
  if (all || suite == "collision") {
    collision_suite(out, trials.value_or(10000), seed);
    known = true;
  }
  if (all || suite == "gaussmin") {
    gaussmin_suite(out, trials.value_or(1000000), seed);
    known = true;
  }
  if (all || suite == "tails") {
    tails_suite(out, trials.value_or(100000), seed);
    known = true;
  }
  if (all || suite == "stagnation") {
    stagnation_suite(out, trials.value_or(100), seed);
    known = true;
  }
  if (all || suite == "rs-ceiling") {
    rs_ceiling_suite(out, trials.value_or(100), seed);
    known = true;
  }
  if (!known) {
    std::string valid;
    for (const auto& s : suite_names()) valid += (valid.empty() ? "" : "|") + s;
    throw ConfigError("unknown suite '" + suite + "' (valid: " + valid + ")");
  }
  return out;
}

}  // namespace rugged
