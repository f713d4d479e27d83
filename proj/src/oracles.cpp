#include "rugged/oracles.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "rugged/landscape.hpp"

namespace rugged {
namespace {

void require_same_length(const MarginalPoint& p, const MarginalPoint& q) {
  if (p.n() != q.n()) throw PreconditionError("marginal vectors differ in length");
}

void require_member(const MarginalPoint& p) {
  if (!p.in_set()) throw PreconditionError("marginal vector outside M_eps");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Standard normal quantile: Acklam's rational approximation followed by one
// Halley step against erfc, which brings it to near machine precision.
double normal_quantile(double u) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  double x;
  if (u < lo || u > 1.0 - lo) {
    const double q = std::sqrt(-2.0 * std::log(u < lo ? u : 1.0 - u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    if (u > 1.0 - lo) x = -x;
  } else {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = normal_cdf(x) - u;
  const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - step / (1.0 + 0.5 * x * step);
}

double stderr_of(double fraction, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(trials));
}

BitString sample_from_marginals(const Eigen::ArrayXd& p, Rng& rng) {
  const auto n = static_cast<std::size_t>(p.size());
  std::vector<std::uint64_t> words(word_count(n), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = p[static_cast<Eigen::Index>(i)];
    if (pi >= 1.0 || (pi > 0.0 && bernoulli(rng, pi))) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  BitString x(n);
  x.assign_words(words);
  return x;
}

}  // namespace

bool MarginalPoint::in_set(double tol) const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) return false;
  if (p.size() == 0) return false;
  if ((p < 0.25 - tol).any() || (p > 1.0 + tol).any()) return false;
  const double bound = static_cast<double>(p.size()) * (1.0 - epsilon);
  return p.sum() <= bound + tol * static_cast<double>(p.size());
}

double moving_weight_value(const MarginalPoint& p, const MarginalPoint& q) {
  require_same_length(p, q);
  require_member(p);
  require_member(q);
  return moving_weight_sum(p.p, q.p);
}

double collision_probability_bound(const MarginalPoint& p, const MarginalPoint& q) {
  return std::exp(moving_weight_value(p, q));
}

MarginalPoint sample_marginal_point(std::size_t n, double eps, Rng& rng) {
  if (n == 0) throw PreconditionError("n must be positive");
  if (!(eps > 0.0 && eps <= 0.75)) throw PreconditionError("M_eps is empty unless 0 < eps <= 3/4");
  const double nd = static_cast<double>(n);
  const double cap = nd * (1.0 - eps);
  const double floor_sum = 0.25 * nd;
  MarginalPoint m{Eigen::ArrayXd(static_cast<Eigen::Index>(n)), eps};

  if (bernoulli(rng, 0.5)) {
    for (Eigen::Index i = 0; i < m.p.size(); ++i) m.p[i] = 0.25 + 0.75 * uniform01(rng);
  } else {
    // Border structure: each entry at 0.25 or 1.
    const double frac_low = uniform01(rng);
    for (Eigen::Index i = 0; i < m.p.size(); ++i) m.p[i] = bernoulli(rng, frac_low) ? 0.25 : 1.0;
  }
  const double sum = m.p.sum();
  if (sum > cap) {
    const double target = bernoulli(rng, 0.5) ? cap : floor_sum + (cap - floor_sum) * uniform01(rng);
    const double scale = sum > floor_sum ? (target - floor_sum) / (sum - floor_sum) : 0.0;
    m.p = 0.25 + (m.p - 0.25) * scale;
    m.p = m.p.max(0.25).min(1.0);
  }
  return m;
}

Eigen::ArrayXd border_vector(std::size_t n, std::size_t lower, double total) {
  const double nd = static_cast<double>(n);
  Eigen::ArrayXd v = Eigen::ArrayXd::Ones(static_cast<Eigen::Index>(n));
  if (lower >= n) {
    if (std::abs(total - 0.25 * nd) > 1e-12) return {};
    v.setConstant(0.25);
    return v;
  }
  const double r = total - static_cast<double>(n - lower - 1) - 0.25 * static_cast<double>(lower);
  if (r < 0.25 - 1e-12 || r > 1.0 + 1e-12) return {};
  const auto frac = static_cast<Eigen::Index>(n - lower - 1);
  v[frac] = std::clamp(r, 0.25, 1.0);
  v.tail(static_cast<Eigen::Index>(lower)).setConstant(0.25);
  return v;
}

double border_family_max(std::size_t n, double eps) {
  const double nd = static_cast<double>(n);
  const double cap = nd * (1.0 - eps);
  // Vertices of {p in [0.25,1]^n : sum p <= cap}, sorted descending:
  // all entries on a border with sum <= cap, or sum == cap with one
  // fractional entry. The moving-weight sum is bilinear, so its maximum
  // over M_eps^2 is attained at a pair of vertices, and by rearrangement
  // at a pair sorted alike.
  std::vector<Eigen::ArrayXd> vertices;
  for (std::size_t k = 0; k <= n; ++k) {
    const double pure = nd - 0.75 * static_cast<double>(k);
    if (pure <= cap + 1e-12) {
      if (auto v = border_vector(n, k, pure); v.size() > 0) vertices.push_back(std::move(v));
    }
    if (k < n) {
      if (auto v = border_vector(n, k, cap); v.size() > 0) vertices.push_back(std::move(v));
    }
  }
  if (vertices.empty()) throw PreconditionError("M_eps is empty");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : vertices) {
    for (const auto& q : vertices) best = std::max(best, moving_weight_sum(p, q));
  }
  return best;
}

std::string to_json_line(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["analytic_value"] = r.analytic_value;
  j["mc_estimate"] = r.mc_estimate;
  j["mc_stderr"] = r.mc_stderr;
  j["trials"] = r.trials;
  j["verdict"] = r.passed() ? "pass" : "fail";
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

BoundReport lemma1_check(std::size_t n, double eps, std::uint64_t samples, Rng& rng) {
  const double claim = -static_cast<double>(n) * eps / 2.0;
  const double exact_max = border_family_max(n, eps);
  double sampled_max = -std::numeric_limits<double>::infinity();
  std::uint64_t violations = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const MarginalPoint p = sample_marginal_point(n, eps, rng);
    // Every eighth pair reuses p to probe the aligned maximizing structure.
    const MarginalPoint q = (s % 8 == 7) ? p : sample_marginal_point(n, eps, rng);
    const double v = moving_weight_value(p, q);
    sampled_max = std::max(sampled_max, v);
    if (v > claim + 1e-12) ++violations;
  }
  std::ostringstream name;
  name << "lemma1/n=" << n << "/eps=" << eps;
  std::ostringstream note;
  note.precision(12);
  note << "claim=" << claim << " violations=" << violations;
  const bool ok = violations == 0 && sampled_max <= exact_max + 1e-9 && exact_max <= claim + 1e-9;
  return {name.str(), exact_max, sampled_max, 0.0, samples, ok ? Verdict::Pass : Verdict::Fail,
          note.str()};
}

BoundReport collision_bound_check(std::size_t n, double eps, std::uint64_t pairs, Rng& rng) {
  double min_gap = std::numeric_limits<double>::infinity();
  std::uint64_t violations = 0;
  for (std::uint64_t s = 0; s < pairs; ++s) {
    const MarginalPoint p = sample_marginal_point(n, eps, rng);
    const MarginalPoint q = sample_marginal_point(n, eps, rng);
    const double exact = exact_collision_probability(p.p, q.p);
    const double bound = collision_probability_bound(p, q);
    min_gap = std::min(min_gap, bound - exact);
    if (bound < exact) ++violations;
  }
  std::ostringstream name;
  name << "collision-bound/n=" << n << "/eps=" << eps;
  const double frac = pairs ? static_cast<double>(violations) / static_cast<double>(pairs) : 0.0;
  return {name.str(), min_gap, frac, stderr_of(frac, pairs), pairs,
          violations == 0 ? Verdict::Pass : Verdict::Fail, "analytic_value=min(bound-exact)"};
}

BoundReport duplicate_mc(std::span<const MarginalPoint> family, std::uint64_t multiset_size,
                         std::uint64_t trials, Rng& rng) {
  if (family.empty()) throw PreconditionError("marginal family is empty");
  const std::size_t n = family.front().n();
  double min_eps = 1.0;
  for (const auto& m : family) {
    if (m.n() != n) throw PreconditionError("marginal vectors differ in length");
    require_member(m);
    min_eps = std::min(min_eps, m.epsilon);
  }
  const double s = static_cast<double>(multiset_size);
  const double union_bound = s * (s - 1.0) / 2.0 * std::exp(-static_cast<double>(n) * min_eps / 2.0);

  std::uint64_t with_duplicate = 0;
  std::vector<std::vector<std::uint64_t>> members;
  members.reserve(multiset_size);
  for (std::uint64_t t = 0; t < trials; ++t) {
    members.clear();
    for (std::uint64_t j = 0; j < multiset_size; ++j) {
      const BitString x = sample_from_marginals(family[j % family.size()].p, rng);
      members.emplace_back(x.words().begin(), x.words().end());
    }
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end()) ++with_duplicate;
  }
  const double frac = trials ? static_cast<double>(with_duplicate) / static_cast<double>(trials) : 0.0;
  const double se = stderr_of(frac, trials);
  std::ostringstream name;
  name << "duplicates/n=" << n << "/eps=" << min_eps << "/S=" << multiset_size;
  std::ostringstream note;
  note << "multisets_with_duplicate=" << with_duplicate;
  return {name.str(), union_bound, frac, se, trials,
          frac - 2.0 * se <= union_bound ? Verdict::Pass : Verdict::Fail, note.str()};
}

double min_gaussian_lower_bound(std::uint64_t n, double c) {
  if (n < 1) throw PreconditionError("n must be >= 1");
  if (c < 0.0) throw PreconditionError("c must be > 0");
  const double np1 = static_cast<double>(n) + 1.0;
  if (c == 0.0) return 1.0 / np1;
  const double bracket = 1.0 + std::sqrt(2.0 * std::log(np1)) + std::sqrt(2.0 * std::log(1.0 / c)) + c / 2.0;
  return (1.0 - c * bracket) / np1;
}

BoundReport min_gaussian_mc(std::uint64_t n, double c, std::uint64_t trials, Rng& rng) {
  const double bound = min_gaussian_lower_bound(n, c);
  // Conditional Monte Carlo. The Z_i are drawn by inverse transform; since
  // the quantile is monotone only the smallest uniform has to be mapped, so
  // X_n = quantile(min U_i). The indicator of {Y_c < X_n} is then replaced
  // by its conditional expectation Phi(X_n - c): same mean, per-trial
  // variance of order 1/n^2 instead of 1/n.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t w = ~std::uint64_t{0};
    for (std::uint64_t i = 0; i < n; ++i) w = std::min(w, rng());
    // Midpoint of the 2^-53 cell keeps the uniform strictly inside (0, 1).
    const double u = to_unit_interval(w) + 0x1.0p-54;
    const double g = normal_cdf(normal_quantile(u) - c);
    sum += g;
    sum_sq += g * g;
  }
  const double T = static_cast<double>(trials);
  const double est = trials ? sum / T : 0.0;
  const double var = trials > 1 ? std::max(0.0, (sum_sq - T * est * est) / (T - 1.0)) : 0.0;
  const double se = trials ? std::sqrt(var / T) : 0.0;
  std::ostringstream name;
  name << "gaussmin/n=" << n << "/c=" << c;
  bool ok;
  std::string note;
  if (c == 0.0) {
    ok = std::abs(est - bound) <= 3.0 * se;
    note = "symmetry cell: |mc - 1/(n+1)| <= 3 stderr";
  } else {
    ok = est - 2.0 * se >= bound;
    note = "mc - 2 stderr >= bound";
  }
  return {name.str(), bound, est, se, trials, ok ? Verdict::Pass : Verdict::Fail, note};
}

double geometric_tail(double p, double k) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("geometric_tail requires 0 < p < 1");
  if (!(k >= 1.0)) throw PreconditionError("geometric_tail requires k >= 1");
  return std::pow(1.0 - p, k - 1.0);
}

double geometric_sum_lower_tail_bound(double t, double p, double delta) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("bound requires 0 < p < 1");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("bound requires 0 < delta < 1");
  if (!(t >= 0.0)) throw PreconditionError("bound requires t >= 0");
  return std::exp(-delta * delta * (t + 1.0) / (2.0 - 4.0 * delta / 3.0));
}

double stagnation_delta(double t, double p) { return 0.5 - t * p / (2.0 * (t + 1.0)); }

BoundReport geometric_sum_mc(std::uint64_t t, double p, std::uint64_t trials, Rng& rng) {
  const double td = static_cast<double>(t);
  const double delta = stagnation_delta(td, p);
  const double bound = geometric_sum_lower_tail_bound(td, p, delta);
  const double threshold = (1.0 - delta) * (td + 1.0) / p;
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < trials; ++s) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i <= t; ++i) sum += static_cast<double>(sample_geometric(p, rng));
    if (sum <= threshold) ++hits;
  }
  const double est = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
  const double se = stderr_of(est, trials);
  std::ostringstream name;
  name << "tails/geometric-sum/t=" << t << "/p=" << p;
  std::ostringstream note;
  note.precision(6);
  note << "delta=" << delta << " threshold=" << threshold;
  return {name.str(), bound, est, se, trials, est - 2.0 * se <= bound ? Verdict::Pass : Verdict::Fail,
          note.str()};
}

StagnationSummary run_stagnation(Algorithm algorithm, std::size_t n, const NoiseModel& noise,
                                 std::uint64_t runs, std::uint64_t budget, std::uint64_t seed) {
  const double ln_n = std::log(static_cast<double>(n));
  const double limit = ln_n * ln_n;
  StagnationSummary s;
  s.runs = runs;
  double total = 0.0;
  for (std::uint64_t r = 0; r < runs; ++r) {
    const FrozenLandscape landscape(n, noise, mix_combine(mix_combine(seed, fnv1a64("landscape")), r));
    Rng rng(mix_combine(mix_combine(seed, fnv1a64("run")), r));
    RunOptions options;
    options.algorithm = algorithm;
    options.budget = budget;
    const Telemetry tel = run(options, landscape, rng);
    if (static_cast<double>(tel.accepted_transitions) > limit) ++s.exceed;
    if (tel.max_ones_sampled >= tel.start_ones + (n + 7) / 8) ++s.big_gain;
    total += static_cast<double>(tel.accepted_transitions);
    s.max_transitions = std::max(s.max_transitions, tel.accepted_transitions);
  }
  s.mean_transitions = runs ? total / static_cast<double>(runs) : 0.0;
  return s;
}

BoundReport stagnation_experiment(Algorithm algorithm, std::size_t n, const NoiseModel& noise,
                                  std::uint64_t runs, std::uint64_t seed) {
  if (algorithm != Algorithm::Rls && algorithm != Algorithm::Ea) {
    throw PreconditionError("stagnation experiment is defined for RLS and the (1+1) EA");
  }
  const double ln_n = std::log(static_cast<double>(n));
  const bool control = noise.is_none();
  if (!control) {
    const auto* g = std::get_if<GeometricNoise>(&noise.variant());
    if (!g) throw PreconditionError("stagnation experiment requires geometric noise");
    const double p_max = algorithm == Algorithm::Rls ? 0.5 : 1.0 / (2.0 * ln_n);
    if (g->p > p_max + 1e-15) throw PreconditionError("geometric p too large for this algorithm");
  }
  const std::uint64_t budget = static_cast<std::uint64_t>(n) * n;
  const StagnationSummary s = run_stagnation(algorithm, n, noise, runs, budget, seed);
  const double frac = runs ? static_cast<double>(s.exceed) / static_cast<double>(runs) : 0.0;
  std::ostringstream name;
  name << "stagnation/" << to_string(algorithm) << "/n=" << n << "/" << noise.describe();
  std::ostringstream note;
  note.precision(6);
  note << "threshold=ln^2(n) exceed=" << s.exceed << " gain_ge_n/8=" << s.big_gain
       << " mean_transitions=" << s.mean_transitions << " max_transitions=" << s.max_transitions;
  bool ok;
  if (control) {
    ok = s.exceed == runs;
    note << " (noiseless control: every run should exceed)";
  } else {
    ok = frac <= 0.05 && s.big_gain == 0;
  }
  return {name.str(), ln_n * ln_n, frac, stderr_of(frac, runs), runs,
          ok ? Verdict::Pass : Verdict::Fail, note.str()};
}

CeilingSummary run_rs_ceiling(std::size_t n, std::uint64_t budget, std::uint64_t runs,
                              std::uint64_t seed) {
  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(nd * std::log(nd));
  CeilingSummary c;
  c.max_statistic = -std::numeric_limits<double>::infinity();
  // The ones count of sampled points does not depend on the distortion,
  // so the noiseless landscape is used.
  for (std::uint64_t r = 0; r < runs; ++r) {
    const FrozenLandscape landscape(n, NoiseModel::none(), mix_combine(seed, r));
    Rng rng(mix_combine(mix_combine(seed, fnv1a64("rs-run")), r));
    RunOptions options;
    options.algorithm = Algorithm::Rs;
    options.budget = budget;
    const Telemetry tel = run(options, landscape, rng);
    c.max_ones.push_back(tel.max_ones_sampled);
    c.max_statistic = std::max(c.max_statistic, (static_cast<double>(tel.max_ones_sampled) - nd / 2.0) / scale);
  }
  return c;
}

BoundReport rs_ceiling_experiment(std::size_t n, std::uint64_t budget, std::uint64_t runs,
                                  std::uint64_t seed) {
  const CeilingSummary c = run_rs_ceiling(n, budget, runs, seed);
  const bool exhaustive = n < 64 && budget >= (std::uint64_t{1} << n);
  std::ostringstream name;
  name << "rs-ceiling/n=" << n << "/budget=" << budget;
  std::string note = "statistic=max_r (max_ones - n/2)/sqrt(n ln n), pass iff <= 3";
  bool ok = c.max_statistic <= 3.0;
  if (exhaustive) {
    note = "out-of-regime: budget >= 2^n, sampling is near-exhaustive";
    ok = true;
  }
  return {name.str(), 3.0, c.max_statistic, 0.0, runs, ok ? Verdict::Pass : Verdict::Fail, note};
}

}  // namespace rugged
