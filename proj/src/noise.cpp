#include "rugged/noise.hpp"

#include <sstream>

namespace rugged {

NoiseModel NoiseModel::normal(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ConfigError("normal noise requires sigma2 > 0");
  }
  return NoiseModel(NormalNoise{sigma2});
}

NoiseModel NoiseModel::geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("geometric noise requires 0 < p < 1");
  return NoiseModel(GeometricNoise{p});
}

double NoiseModel::mean() const {
  if (const auto* g = std::get_if<GeometricNoise>(&v_)) return 1.0 / g->p;
  return 0.0;
}

double NoiseModel::variance() const {
  if (const auto* n = std::get_if<NormalNoise>(&v_)) return n->sigma2;
  if (const auto* g = std::get_if<GeometricNoise>(&v_)) return (1.0 - g->p) / (g->p * g->p);
  return 0.0;
}

double NoiseModel::cdf(double x) const {
  if (const auto* n = std::get_if<NormalNoise>(&v_)) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * n->sigma2));
  }
  if (const auto* g = std::get_if<GeometricNoise>(&v_)) {
    if (x < 1.0) return 0.0;
    return 1.0 - std::pow(1.0 - g->p, std::floor(x));
  }
  return x < 0.0 ? 0.0 : 1.0;
}

std::string NoiseModel::kind() const {
  if (std::holds_alternative<NormalNoise>(v_)) return "normal";
  if (std::holds_alternative<GeometricNoise>(v_)) return "geometric";
  return "none";
}

std::string NoiseModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* n = std::get_if<NormalNoise>(&v_)) {
    os << "normal(sigma2=" << n->sigma2 << ")";
  } else if (const auto* g = std::get_if<GeometricNoise>(&v_)) {
    os << "geometric(p=" << g->p << ")";
  } else {
    os << "none";
  }
  return os.str();
}

double geometric_p_for_variance(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("variance must be > 0");
  // Root of v p^2 + p - 1 = 0 in (0,1), written to avoid cancellation.
  return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * v));
}

NoiseModel noise_with_variance(const std::string& kind, double variance) {
  if (kind == "none") return NoiseModel::none();
  if (kind == "normal") return NoiseModel::normal(variance);
  if (kind == "geometric") return NoiseModel::geometric(geometric_p_for_variance(variance));
  throw ConfigError("unknown noise model '" + kind + "' (expected none|normal|geometric)");
}

}  // namespace rugged
