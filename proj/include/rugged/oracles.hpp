#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rugged/errors.hpp"
#include "rugged/noise.hpp"
#include "rugged/optimizers.hpp"
#include "rugged/random.hpp"

namespace rugged {

// ---------------------------------------------------------------------------
// Marginal vectors and the moving-weight inequality
// ---------------------------------------------------------------------------

/// Marginal vector together with the epsilon defining
/// M_eps = { p in [0.25, 1]^n : sum p_i <= n (1 - eps) }.
struct MarginalPoint {
  Eigen::ArrayXd p;
  double epsilon = 0.0;

  std::size_t n() const noexcept { return static_cast<std::size_t>(p.size()); }
  /// Membership in M_eps, with `tol` slack on every constraint.
  bool in_set(double tol = 1e-12) const;
};

/// sum_i (2 p_i q_i - p_i - q_i), for any array expressions of equal length.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar moving_weight_sum(const Eigen::ArrayBase<DerivedP>& p,
                                            const Eigen::ArrayBase<DerivedQ>& q) {
  return (2 * p * q - p - q).sum();
}

/// prod_i (p_i q_i + (1 - p_i)(1 - q_i)): probability that independent
/// samples from p and q coincide.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar exact_collision_probability(const Eigen::ArrayBase<DerivedP>& p,
                                                      const Eigen::ArrayBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  return (p * q + (Scalar(1) - p) * (Scalar(1) - q)).prod();
}

/// Checked moving_weight_sum: both points must lie in M_eps.
double moving_weight_value(const MarginalPoint& p, const MarginalPoint& q);

/// exp(moving_weight_value(p, q)); an upper bound on the exact collision
/// probability via 1 + z <= e^z.
double collision_probability_bound(const MarginalPoint& p, const MarginalPoint& q);

/// Random element of M_eps. Mixes a uniform box draw (shrunk toward 0.25
/// when it violates the sum constraint, half the time onto the boundary
/// sum) with border-structured draws whose entries sit at 0.25 or 1.
MarginalPoint sample_marginal_point(std::size_t n, double eps, Rng& rng);

/// Exact maximum of the moving-weight sum over the border family: p and q
/// sorted alike, with entries at 1, one fractional entry, and the rest at
/// 0.25, both sums on the boundary n (1 - eps). Enumerates every pair of
/// lower-border counts (k, l).
double border_family_max(std::size_t n, double eps);

/// Builds the border-family vector with `lower` entries at 0.25 and sum
/// `total` (one fractional entry absorbs the remainder). Empty when no such
/// vector exists.
Eigen::ArrayXd border_vector(std::size_t n, std::size_t lower, double total);

// ---------------------------------------------------------------------------
// Bound reports
// ---------------------------------------------------------------------------

enum class Verdict { Pass, Fail };

struct BoundReport {
  std::string name;
  double analytic_value = 0.0;
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  std::uint64_t trials = 0;
  Verdict verdict = Verdict::Fail;
  std::string note;

  bool passed() const noexcept { return verdict == Verdict::Pass; }
};

/// One JSON object, no trailing newline.
std::string to_json_line(const BoundReport& report);

/// Samples `samples` pairs from M_eps and compares the sampled maximum
/// against -n eps / 2 and against border_family_max.
BoundReport lemma1_check(std::size_t n, double eps, std::uint64_t samples, Rng& rng);

/// Checks collision_probability_bound >= exact product on random pairs.
BoundReport collision_bound_check(std::size_t n, double eps, std::uint64_t pairs, Rng& rng);

/// Draws `trials` multisets of `multiset_size` bit strings (member j uses
/// family[j % family.size()]) and counts multisets with a duplicate.
/// analytic_value is the union bound C(S, 2) exp(-n eps / 2).
BoundReport duplicate_mc(std::span<const MarginalPoint> family, std::uint64_t multiset_size,
                         std::uint64_t trials, Rng& rng);

// ---------------------------------------------------------------------------
// Minimum of Gaussians
// ---------------------------------------------------------------------------

/// (1/(n+1)) (1 - c (1 + sqrt(2 ln(n+1)) + sqrt(2 ln(1/c)) + c/2)).
/// Returns the c -> 0 limit 1/(n+1) for c == 0.
double min_gaussian_lower_bound(std::uint64_t n, double c);

/// Estimates P(Y_c < min_i Z_i), Y_c ~ N(c,1), Z_i ~ N(0,1): the minimum
/// X_n is simulated by inverse transform of n uniform draws and
/// Phi(X_n - c) averaged over trials. Passes iff estimate - 2 stderr >= the closed-form bound (for c == 0,
/// iff the estimate is within 3 stderr of 1/(n+1)).
BoundReport min_gaussian_mc(std::uint64_t n, double c, std::uint64_t trials, Rng& rng);

// ---------------------------------------------------------------------------
// Geometric tails
// ---------------------------------------------------------------------------

/// P(D >= k) = (1-p)^(k-1) for D ~ Geo(p) on {1, 2, ...}.
double geometric_tail(double p, double k);

/// exp(-delta^2 (t+1) / (2 - 4 delta / 3)).
double geometric_sum_lower_tail_bound(double t, double p, double delta);

/// delta = 1/2 - t p / (2 (t+1)), the choice that turns the event
/// X_t <= ((t+1)/p - t)/2 into sum_{i=0}^t D_i <= (1-delta)(t+1)/p.
double stagnation_delta(double t, double p);

/// Simulates sum_{i=0}^t D_i and estimates P(sum <= (1-delta)(t+1)/p).
BoundReport geometric_sum_mc(std::uint64_t t, double p, std::uint64_t trials, Rng& rng);

// ---------------------------------------------------------------------------
// Optimizer experiments
// ---------------------------------------------------------------------------

struct StagnationSummary {
  std::uint64_t runs = 0;
  std::uint64_t exceed = 0;       // accepted_transitions > ln^2 n
  std::uint64_t big_gain = 0;     // max_ones_sampled - start_ones >= n/8
  double mean_transitions = 0.0;
  std::uint64_t max_transitions = 0;
};

StagnationSummary run_stagnation(Algorithm algorithm, std::size_t n, const NoiseModel& noise,
                                 std::uint64_t runs, std::uint64_t budget, std::uint64_t seed);

/// RLS/EA on a geometric landscape with budget n^2. Passes iff at most 5%
/// of runs exceed ln^2(n) accepted transitions and no run gains n/8 ones.
/// With NoiseModel::none() this is the control: passes iff every run exceeds.
BoundReport stagnation_experiment(Algorithm algorithm, std::size_t n, const NoiseModel& noise,
                                  std::uint64_t runs, std::uint64_t seed);

struct CeilingSummary {
  std::vector<std::size_t> max_ones;  // per run
  double max_statistic = 0.0;         // max_r (max_ones_r - n/2) / sqrt(n ln n)
};

CeilingSummary run_rs_ceiling(std::size_t n, std::uint64_t budget, std::uint64_t runs,
                              std::uint64_t seed);

/// Passes iff the statistic is <= 3. When budget >= 2^n the sampling is
/// essentially exhaustive; the report is flagged out-of-regime and passes.
BoundReport rs_ceiling_experiment(std::size_t n, std::uint64_t budget, std::uint64_t runs,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Suites driven by `rugged verify`
// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names();

/// Runs a named suite ("all" runs every suite). `trials` overrides the
/// suite's primary sample count.
std::vector<BoundReport> run_suite(const std::string& suite, std::optional<std::uint64_t> trials,
                                   std::uint64_t seed);

}  // namespace rugged
