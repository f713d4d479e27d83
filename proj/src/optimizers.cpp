#include "rugged/optimizers.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <utility>

#include "rugged/errors.hpp"

namespace rugged {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Rls:
      return "rls";
    case Algorithm::Ea:
      return "ea";
    case Algorithm::Cga:
      return "cga";
    case Algorithm::Rs:
      return "rs";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rls") return Algorithm::Rls;
  if (lower == "ea" || lower == "(1+1)ea" || lower == "1+1ea") return Algorithm::Ea;
  if (lower == "cga") return Algorithm::Cga;
  if (lower == "rs") return Algorithm::Rs;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected rls|ea|cga|rs)");
}

BitString init_balanced_start(std::size_t n, Rng& rng) {
  if (n < 2) throw ConfigError("n must be >= 2");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t k = n / 2;
  BitString x(n);
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(idx[i], idx[j]);
    x.flip(idx[i]);
  }
  return x;
}

StepReport rls_step_at(IncumbentState& state, const FrozenLandscape& landscape,
                       std::size_t position) {
  state.current.flip(position);
  const double fy = landscape.evaluate(state.current);
  StepReport report{state.current.ones(), fy >= state.fitness, false};
  if (report.accepted) {
    state.fitness = fy;
    report.moved = true;
  } else {
    state.current.flip(position);
  }
  return report;
}

StepReport rls_step(IncumbentState& state, const FrozenLandscape& landscape, Rng& rng) {
  const auto position = static_cast<std::size_t>(uniform_index(rng, state.current.size()));
  return rls_step_at(state, landscape, position);
}

FlipCountSampler::FlipCountSampler(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("n must be positive");
  if (n == 1) {
    cdf_ = {0.0, 1.0};
    return;
  }
  const double nd = static_cast<double>(n);
  double pmf = std::pow(1.0 - 1.0 / nd, nd);
  double acc = pmf;
  cdf_.push_back(acc);
  for (std::size_t k = 0; k < n && acc < 1.0 - 1e-17; ++k) {
    // pmf(k+1) / pmf(k) = (n-k) / ((k+1)(n-1)) for p = 1/n.
    pmf *= static_cast<double>(n - k) / (static_cast<double>(k + 1) * (nd - 1.0));
    acc += pmf;
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

std::size_t FlipCountSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  std::size_t k = 0;
  while (k + 1 < cdf_.size() && u >= cdf_[k]) ++k;
  return k;
}

std::vector<std::size_t> sample_distinct_positions(std::size_t n, std::size_t count, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(count);
  if (count * 4 <= n) {
    while (out.size() < count) {
      const auto pos = static_cast<std::size_t>(uniform_index(rng, n));
      if (std::find(out.begin(), out.end(), pos) == out.end()) out.push_back(pos);
    }
    return out;
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(idx[i], idx[j]);
    out.push_back(idx[i]);
  }
  return out;
}

StepReport ea_step_with(IncumbentState& state, const FrozenLandscape& landscape,
                        std::span<const std::size_t> positions) {
  if (positions.empty()) return {state.current.ones(), true, false};
  for (auto pos : positions) state.current.flip(pos);
  const double fy = landscape.evaluate(state.current);
  StepReport report{state.current.ones(), fy >= state.fitness, false};
  if (report.accepted) {
    state.fitness = fy;
    report.moved = true;
  } else {
    for (auto pos : positions) state.current.flip(pos);
  }
  return report;
}

StepReport ea_step(IncumbentState& state, const FrozenLandscape& landscape,
                   const FlipCountSampler& flips, Rng& rng) {
  const std::size_t count = flips(rng);
  const auto positions = sample_distinct_positions(state.current.size(), count, rng);
  return ea_step_with(state, landscape, positions);
}

CgaState::CgaState(std::size_t n, double K) : marginals_(Eigen::ArrayXd::Constant(n, 0.5)), K_(K) {
  if (n == 0) throw ConfigError("n must be positive");
  if (!(K > 0.0) || !std::isfinite(K)) throw ConfigError("cGA requires K > 0");
}

bool CgaState::absorbed() const {
  return ((marginals_ == 0.0) || (marginals_ == 1.0)).all();
}

BitString CgaState::sample(Rng& rng) const {
  const std::size_t n = this->n();
  thread_local std::vector<std::uint64_t> words;
  words.assign(word_count(n), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = marginals_[static_cast<Eigen::Index>(i)];
    bool bit;
    if (p >= 1.0) {
      bit = true;
    } else if (p <= 0.0) {
      bit = false;
    } else {
      bit = bernoulli(rng, p);
    }
    if (bit) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  BitString x(n);
  x.assign_words(words);
  return x;
}

bool CgaState::update(BitString x, double fx, BitString y, double fy) {
  bool swapped = false;
  if (fx < fy) {
    std::swap(x, y);
    swapped = true;
  }
  // Values within this distance of a border are snapped onto it so that
  // absorption is detected despite rounding in repeated +-1/K steps.
  constexpr double kSnap = 1e-12;
  const double step = 1.0 / K_;
  const auto wx = x.words();
  const auto wy = y.words();
  for (std::size_t k = 0; k < wx.size(); ++k) {
    std::uint64_t up = wx[k] & ~wy[k];
    std::uint64_t down = ~wx[k] & wy[k];
    while (up) {
      const auto i = static_cast<Eigen::Index>(64 * k + static_cast<std::size_t>(std::countr_zero(up)));
      double& p = marginals_[i];
      p = p + step;
      if (p > 1.0 - kSnap) p = 1.0;
      up &= up - 1;
    }
    while (down) {
      const auto i = static_cast<Eigen::Index>(64 * k + static_cast<std::size_t>(std::countr_zero(down)));
      double& p = marginals_[i];
      p = p - step;
      if (p < kSnap) p = 0.0;
      down &= down - 1;
    }
  }
  ++t_;
  return swapped;
}

CgaStepReport cga_step(CgaState& state, const FrozenLandscape& landscape, Rng& rng) {
  CgaStepReport r;
  r.x = state.sample(rng);
  r.y = state.sample(rng);
  r.fx = landscape.evaluate(r.x);
  r.fy = landscape.evaluate(r.y);
  r.swapped = state.update(r.x, r.fx, r.y, r.fy);
  if (r.swapped) {
    std::swap(r.x, r.y);
    std::swap(r.fx, r.fy);
  }
  return r;
}

StepReport rs_step(RandomSearchState& state, const FrozenLandscape& landscape, Rng& rng) {
  const std::size_t n = landscape.n();
  thread_local std::vector<std::uint64_t> words;
  words.resize(word_count(n));
  for (auto& w : words) w = rng();
  BitString& x = state.scratch;
  if (x.size() != n) x = BitString(n);
  x.assign_words(words);
  const double f = landscape.evaluate(x);
  StepReport report{x.ones(), false, false};
  if (!state.has_best || f > state.best_fitness) {
    if (state.has_best) ++state.improvements;
    state.best_fitness = f;
    state.has_best = true;
    report.accepted = true;
  }
  state.max_ones = std::max(state.max_ones, x.ones());
  return report;
}

double default_K(std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::sqrt(nd) * std::log(nd);
}

namespace {

struct TelemetryRecorder {
  const RunOptions& options;
  Telemetry& tel;
  double threshold;

  void sampled(std::size_t ones) {
    tel.max_ones_sampled = std::max(tel.max_ones_sampled, ones);
    if (!tel.threshold_iteration && static_cast<double>(ones) > threshold) {
      tel.threshold_iteration = tel.iterations;
    }
  }

  bool target_hit() {
    if (options.target_ones && !tel.hit_iteration && tel.max_ones_sampled >= *options.target_ones) {
      tel.hit_iteration = tel.iterations;
    }
    return tel.hit_iteration.has_value();
  }
};

void run_incumbent(const RunOptions& options, const FrozenLandscape& landscape, Rng& rng,
                   TelemetryRecorder& rec) {
  Telemetry& tel = rec.tel;
  const std::size_t n = landscape.n();
  auto state = IncumbentState::at(init_balanced_start(n, rng), landscape);
  tel.evaluations = 1;
  tel.start_ones = state.current.ones();
  rec.sampled(tel.start_ones);
  if (options.trace_noise) {
    tel.noise_trace.push_back(state.fitness - static_cast<double>(state.current.ones()));
  }
  std::optional<FlipCountSampler> flips;
  if (options.algorithm == Algorithm::Ea) flips.emplace(n);

  if (!rec.target_hit()) {
    for (std::uint64_t it = 0; it < options.budget; ++it) {
      const std::size_t before = state.current.ones();
      const StepReport step = options.algorithm == Algorithm::Rls
                                  ? rls_step(state, landscape, rng)
                                  : ea_step(state, landscape, *flips, rng);
      ++tel.iterations;
      if (step.moved || !step.accepted) ++tel.evaluations;
      rec.sampled(step.candidate_ones);
      if (step.moved) {
        ++tel.accepted_transitions;
        const auto gain = static_cast<std::int64_t>(state.current.ones()) -
                          static_cast<std::int64_t>(before);
        tel.max_accepted_jump = std::max(tel.max_accepted_jump, gain);
        if (options.jump_cap && static_cast<double>(gain) > *options.jump_cap) ++tel.jumps_over_cap;
        if (options.trace_noise) {
          tel.noise_trace.push_back(state.fitness - static_cast<double>(state.current.ones()));
        }
      }
      if (rec.target_hit()) break;
    }
  }
  tel.final_ones = state.current.ones();
}

void run_cga(const RunOptions& options, const FrozenLandscape& landscape, Rng& rng,
             TelemetryRecorder& rec) {
  Telemetry& tel = rec.tel;
  CgaState state(landscape.n(), *options.K);
  tel.start_ones = landscape.n() / 2;
  tel.min_marginal = state.min_marginal();
  double best = 0.0;
  bool has_best = false;
  for (std::uint64_t it = 0; it < options.budget && !state.absorbed(); ++it) {
    const CgaStepReport step = cga_step(state, landscape, rng);
    ++tel.iterations;
    tel.evaluations += 2;
    rec.sampled(step.x.ones());
    rec.sampled(step.y.ones());
    if (!has_best || step.fx > best) {
      if (has_best) ++tel.accepted_transitions;
      best = step.fx;
      has_best = true;
    }
    tel.final_ones = step.x.ones();
    const double m = state.min_marginal();
    tel.min_marginal = std::min(tel.min_marginal, m);
    if (options.trace_marginal_min) tel.marginal_min_trace.push_back(m);
    if (rec.target_hit()) break;
  }
  if (state.absorbed()) {
    tel.final_ones = static_cast<std::size_t>(std::lround(state.marginal_sum()));
  }
}

void run_random_search(const RunOptions& options, const FrozenLandscape& landscape, Rng& rng,
                       TelemetryRecorder& rec) {
  Telemetry& tel = rec.tel;
  RandomSearchState state;
  for (std::uint64_t it = 0; it < options.budget; ++it) {
    const StepReport step = rs_step(state, landscape, rng);
    ++tel.iterations;
    ++tel.evaluations;
    rec.sampled(step.candidate_ones);
    if (step.accepted) tel.final_ones = step.candidate_ones;
    if (rec.target_hit()) break;
  }
  tel.accepted_transitions = state.improvements;
}

}  // namespace

Telemetry run(const RunOptions& options, const FrozenLandscape& landscape, Rng& rng) {
  if (options.budget < 1) throw ConfigError("budget must be >= 1");
  if (options.algorithm == Algorithm::Cga) {
    if (!options.K) throw ConfigError("cGA requires K");
    if (!(*options.K > 0.0)) throw ConfigError("cGA requires K > 0");
  }
  Telemetry tel;
  TelemetryRecorder rec{options, tel,
                        options.ones_threshold.value_or(0.75 * static_cast<double>(landscape.n()))};
  switch (options.algorithm) {
    case Algorithm::Rls:
    case Algorithm::Ea:
      run_incumbent(options, landscape, rng, rec);
      break;
    case Algorithm::Cga:
      run_cga(options, landscape, rng, rec);
      break;
    case Algorithm::Rs:
      run_random_search(options, landscape, rng, rec);
      break;
  }
  return tel;
}

}  // namespace rugged
