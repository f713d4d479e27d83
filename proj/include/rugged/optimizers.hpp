#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rugged/bitstring.hpp"
#include "rugged/landscape.hpp"
#include "rugged/random.hpp"

namespace rugged {

enum class Algorithm { Rls, Ea, Cga, Rs };

std::string_view to_string(Algorithm a);
/// Accepts "rls", "ea", "cga", "rs" (case-insensitive).
Algorithm parse_algorithm(std::string_view name);

/// Counters shared by all optimizers.
struct Telemetry {
  std::uint64_t iterations = 0;
  std::uint64_t evaluations = 0;
  /// RLS/EA: iterations in which the incumbent moved to a different point.
  /// cGA/RS: number of strict improvements of the best fitness seen.
  std::uint64_t accepted_transitions = 0;
  std::size_t start_ones = 0;
  std::size_t max_ones_sampled = 0;
  std::size_t final_ones = 0;
  /// Largest ones gain of a single accepted move (RLS/EA).
  std::int64_t max_accepted_jump = 0;
  /// Accepted moves whose ones gain exceeded RunOptions::jump_cap.
  std::uint64_t jumps_over_cap = 0;
  /// First iteration (1-based) at which a point with more than
  /// RunOptions::ones_threshold ones was sampled.
  std::optional<std::uint64_t> threshold_iteration;
  /// First iteration at which max_ones_sampled >= RunOptions::target_ones.
  std::optional<std::uint64_t> hit_iteration;
  /// Frozen noise of the start point and of every accepted point (RLS/EA).
  std::vector<double> noise_trace;
  /// Minimum marginal after each iteration (cGA).
  std::vector<double> marginal_min_trace;
  double min_marginal = 0.5;
};

struct StepReport {
  std::size_t candidate_ones = 0;
  bool accepted = false;
  /// The incumbent now differs from the previous one.
  bool moved = false;
};

/// Current search point of RLS / (1+1) EA with its cached frozen fitness.
struct IncumbentState {
  BitString current;
  double fitness = 0.0;

  static IncumbentState at(BitString x, const FrozenLandscape& landscape) {
    const double f = landscape.evaluate(x);
    return {std::move(x), f};
  }
};

/// Uniformly random point with exactly floor(n/2) ones. Requires n >= 2.
BitString init_balanced_start(std::size_t n, Rng& rng);

/// Flips bit `position` of the incumbent and applies the f(y) >= f(x) rule.
StepReport rls_step_at(IncumbentState& state, const FrozenLandscape& landscape,
                       std::size_t position);
StepReport rls_step(IncumbentState& state, const FrozenLandscape& landscape, Rng& rng);

/// Binomial(n, 1/n) flip-count sampler for standard bit mutation.
class FlipCountSampler {
 public:
  explicit FlipCountSampler(std::size_t n);
  std::size_t operator()(Rng& rng) const;
  std::size_t n() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<double> cdf_;
};

/// Flips the given distinct positions and applies the f(y) >= f(x) rule.
/// An empty set of positions is accepted without evaluation.
StepReport ea_step_with(IncumbentState& state, const FrozenLandscape& landscape,
                        std::span<const std::size_t> positions);
StepReport ea_step(IncumbentState& state, const FrozenLandscape& landscape,
                   const FlipCountSampler& flips, Rng& rng);

/// Draws `count` distinct positions in [0, n) uniformly.
std::vector<std::size_t> sample_distinct_positions(std::size_t n, std::size_t count, Rng& rng);

/// Marginal vector and step denominator of the compact GA.
class CgaState {
 public:
  CgaState(std::size_t n, double K);

  std::size_t n() const noexcept { return static_cast<std::size_t>(marginals_.size()); }
  double K() const noexcept { return K_; }
  std::uint64_t t() const noexcept { return t_; }
  const Eigen::ArrayXd& marginals() const noexcept { return marginals_; }
  Eigen::ArrayXd& marginals() noexcept { return marginals_; }

  /// Sum of all marginals.
  double marginal_sum() const { return marginals_.sum(); }
  double min_marginal() const { return marginals_.minCoeff(); }
  /// Every marginal is exactly 0 or 1.
  bool absorbed() const;

  BitString sample(Rng& rng) const;

  /// Applies one update from an already evaluated pair and advances t.
  /// Returns true if x and y were swapped.
  bool update(BitString x, double fx, BitString y, double fy);

 private:
  Eigen::ArrayXd marginals_;
  double K_;
  std::uint64_t t_ = 0;
};

struct CgaStepReport {
  BitString x;  // the (weakly) fitter sample after the swap
  BitString y;
  double fx = 0.0;
  double fy = 0.0;
  bool swapped = false;
};

CgaStepReport cga_step(CgaState& state, const FrozenLandscape& landscape, Rng& rng);

/// Best-so-far tracker of Random Search.
struct RandomSearchState {
  double best_fitness = 0.0;
  bool has_best = false;
  std::size_t max_ones = 0;
  std::uint64_t improvements = 0;
  BitString scratch;
};

StepReport rs_step(RandomSearchState& state, const FrozenLandscape& landscape, Rng& rng);

/// Default cGA step denominator sqrt(n) * ln(n).
double default_K(std::size_t n);

struct RunOptions {
  Algorithm algorithm = Algorithm::Rls;
  std::uint64_t budget = 0;
  /// Required for cGA.
  std::optional<double> K;
  /// Stop as soon as a point with at least this many ones is sampled.
  std::optional<std::size_t> target_ones;
  /// "More than 3n/4 ones" event; defaults to 3n/4 when unset.
  std::optional<double> ones_threshold;
  /// Jump-size cap for accepted moves; unset disables the counter.
  std::optional<double> jump_cap;
  bool trace_noise = false;
  bool trace_marginal_min = false;
};

/// Runs `options.budget` iterations (fewer on cGA absorption or when the
/// target is hit). RLS and EA start from init_balanced_start.
Telemetry run(const RunOptions& options, const FrozenLandscape& landscape, Rng& rng);

}  // namespace rugged
