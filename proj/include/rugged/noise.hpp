#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>

#include "rugged/errors.hpp"
#include "rugged/random.hpp"

namespace rugged {

struct NoNoise {};

struct NormalNoise {
  double sigma2;
};

/// Trials to first success: support {1, 2, ...}, P(D >= k) = (1-p)^(k-1).
struct GeometricNoise {
  double p;
};

/// Distortion distribution D. Construct through the factory functions,
/// which enforce sigma2 > 0 and 0 < p < 1.
class NoiseModel {
 public:
  using Variant = std::variant<NoNoise, NormalNoise, GeometricNoise>;

  NoiseModel() = default;

  static NoiseModel none() { return NoiseModel(NoNoise{}); }
  static NoiseModel normal(double sigma2);
  static NoiseModel geometric(double p);

  const Variant& variant() const noexcept { return v_; }
  bool is_none() const noexcept { return std::holds_alternative<NoNoise>(v_); }

  double mean() const;
  double variance() const;
  /// P(D <= x).
  double cdf(double x) const;
  /// "none", "normal" or "geometric".
  std::string kind() const;
  std::string describe() const;

  template <class Gen>
  double sample(Gen& gen) const;

 private:
  explicit NoiseModel(Variant v) : v_(v) {}
  Variant v_{NoNoise{}};
};

/// Marsaglia's polar method; the first of the two generated deviates is
/// returned and the second discarded, so one call consumes a fixed-law
/// number of words from `gen`.
template <class Gen>
double standard_normal(Gen& gen) {
  for (;;) {
    const double u = 2.0 * uniform01(gen) - 1.0;
    const double v = 2.0 * uniform01(gen) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

template <class Gen>
double sample_normal(double sigma2, Gen& gen) {
  if (!(sigma2 > 0.0)) throw ConfigError("normal noise requires sigma2 > 0");
  return std::sqrt(sigma2) * standard_normal(gen);
}

/// Inverse transform from one uniform draw: 1 + floor(ln U / ln(1-p)).
template <class Gen>
std::int64_t sample_geometric(double p, Gen& gen) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("geometric noise requires 0 < p < 1");
  const double u = 1.0 - uniform01(gen);  // (0, 1]
  const double k = std::floor(std::log(u) / std::log1p(-p));
  return 1 + static_cast<std::int64_t>(k);
}

template <class Gen>
double NoiseModel::sample(Gen& gen) const {
  if (const auto* n = std::get_if<NormalNoise>(&v_)) return sample_normal(n->sigma2, gen);
  if (const auto* g = std::get_if<GeometricNoise>(&v_)) {
    return static_cast<double>(sample_geometric(g->p, gen));
  }
  return 0.0;
}

/// The unique p in (0,1) with (1-p)/p^2 = v.
double geometric_p_for_variance(double v);

/// Builds the noise model of the given kind with the given variance.
NoiseModel noise_with_variance(const std::string& kind, double variance);

}  // namespace rugged
