#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "rugged/bitstring.hpp"
#include "rugged/landscape.hpp"
#include "rugged/noise.hpp"

using namespace rugged;

namespace {

BitString random_point(std::size_t n, Rng& rng) {
  BitString x(n);
  for (std::size_t i = 0; i < n; ++i) x.set(i, bernoulli(rng, 0.5));
  return x;
}

struct Moments {
  double mean;
  double variance;
};

Moments moments(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double d : v) ss += (d - m) * (d - m);
  return {m, ss / static_cast<double>(v.size() - 1)};
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("onemax counts one bits") {
  CHECK(onemax(BitString(8)) == 0);
  CHECK(onemax(BitString::from_string("11111111")) == 8);
  CHECK(onemax(BitString::from_string("10110010")) == 4);
}

TEST_CASE("bitstring keeps its popcount through mutation") {
  BitString x = BitString::from_string("0000000000");
  x.flip(3);
  x.set(7, true);
  x.set(7, true);
  CHECK(x.ones() == 2);
  x.flip(3);
  CHECK(x.ones() == 1);
  CHECK(x.to_string() == "0000000100");

  // Bits beyond size() are masked so the encoding stays canonical.
  BitString y(70);
  const std::uint64_t words[] = {~0ULL, ~0ULL};
  y.assign_words(words);
  CHECK(y.ones() == 70);
  CHECK(y.words()[1] == 0x3FULL);
  CHECK(hamming_distance(y, BitString(70)) == 70);
}

TEST_CASE("noiseless landscape reduces to onemax") {
  FrozenLandscape L(4, NoiseModel::none(), 9);
  const auto x = BitString::from_string("1110");
  CHECK(L.frozen_noise(x) == 0.0);
  CHECK(L.evaluate(x) == 3.0);
}

TEST_CASE("frozen noise is a pure function of seed and point") {
  FrozenLandscape L(100, NoiseModel::normal(5.0), 42);
  FrozenLandscape same(100, NoiseModel::normal(5.0), 42);
  FrozenLandscape other(100, NoiseModel::normal(5.0), 43);
  Rng rng(1);
  int differ = 0;
  for (int k = 0; k < 200; ++k) {
    const auto x = random_point(100, rng);
    const double a = L.evaluate(x) - onemax(x);
    CHECK(L.evaluate(x) - onemax(x) == a);
    CHECK(same.frozen_noise(x) == L.frozen_noise(x));
    differ += other.frozen_noise(x) != L.frozen_noise(x);
  }
  CHECK(differ == 200);
}

TEST_CASE("digest depends on length as well as bits") {
  FrozenLandscape a(5, NoiseModel::normal(1.0), 3);
  FrozenLandscape b(6, NoiseModel::normal(1.0), 3);
  CHECK(a.digest(BitString(5)) != b.digest(BitString(6)));
  CHECK(a.digest(BitString::from_string("10000")) != a.digest(BitString::from_string("01000")));
}

TEST_CASE("frozen normal noise has the target moments and law") {
  constexpr int kPoints = 100000;
  FrozenLandscape L(100, NoiseModel::normal(5.0), 2024);
  Rng rng(5);
  std::vector<double> frozen, direct;
  frozen.reserve(kPoints);
  direct.reserve(kPoints);
  for (int k = 0; k < kPoints; ++k) frozen.push_back(L.frozen_noise(random_point(100, rng)));
  Rng iid(6);
  for (int k = 0; k < kPoints; ++k) direct.push_back(sample_normal(5.0, iid));

  const auto m = moments(frozen);
  CHECK(std::abs(m.mean) <= 0.05);
  CHECK(std::abs(m.variance - 5.0) <= 0.3);

  // 1% critical value of the two-sample KS test for equal sample sizes.
  const double critical = 1.628 * std::sqrt(2.0 / kPoints);
  CHECK(ks_statistic(frozen, direct) < critical);
}

TEST_CASE("noise of Hamming neighbours is uncorrelated") {
  constexpr int kPairs = 100000;
  FrozenLandscape L(64, NoiseModel::normal(5.0), 77);
  Rng rng(8);
  std::vector<double> a, b;
  for (int k = 0; k < kPairs; ++k) {
    auto x = random_point(64, rng);
    a.push_back(L.frozen_noise(x));
    x.flip(uniform_index(rng, 64));
    b.push_back(L.frozen_noise(x));
  }
  const auto ma = moments(a), mb = moments(b);
  double cov = 0.0;
  for (int k = 0; k < kPairs; ++k) cov += (a[k] - ma.mean) * (b[k] - mb.mean);
  cov /= kPairs - 1;
  CHECK(std::abs(cov / std::sqrt(ma.variance * mb.variance)) < 0.01);
}

TEST_CASE("geometric landscape noise lies on the positive integers") {
  FrozenLandscape L(30, NoiseModel::geometric(0.5), 11);
  Rng rng(2);
  for (int k = 0; k < 5000; ++k) {
    const auto x = random_point(30, rng);
    const double d = L.evaluate(x) - onemax(x);
    REQUIRE(d >= 1.0);
    REQUIRE(d == std::floor(d));
  }
}

TEST_CASE("geometric sampling") {
  Rng rng(13);
  SUBCASE("mean is 1/p") {
    double sum = 0.0;
    for (int k = 0; k < 1000000; ++k) sum += static_cast<double>(sample_geometric(0.5, rng));
    CHECK(std::abs(sum / 1e6 - 2.0) <= 0.01);
  }
  SUBCASE("p near one almost always gives 1") {
    int ones = 0;
    for (int k = 0; k < 10000; ++k) ones += sample_geometric(1.0 - 1e-9, rng) == 1;
    CHECK(ones == 10000);
  }
  SUBCASE("parameter range") {
    CHECK_THROWS_AS(sample_geometric(0.0, rng), ConfigError);
    CHECK_THROWS_AS(sample_geometric(1.0, rng), ConfigError);
    CHECK_THROWS_AS(NoiseModel::geometric(1.5), ConfigError);
  }
}

TEST_CASE("normal sampling variance") {
  Rng rng(17);
  std::vector<double> v(1000000);
  for (auto& d : v) d = sample_normal(5.0, rng);
  CHECK(std::abs(moments(v).variance - 5.0) <= 0.05);
  CHECK_THROWS_AS(sample_normal(0.0, rng), ConfigError);
  CHECK_THROWS_AS(NoiseModel::normal(-1.0), ConfigError);
}

TEST_CASE("geometric parameter for a target variance") {
  CHECK(geometric_p_for_variance(2.0) == doctest::Approx(0.5).epsilon(1e-15));
  const double p = geometric_p_for_variance(5.0);
  CHECK(p == doctest::Approx(0.3583).epsilon(1e-4));
  CHECK(5 * p * p + p - 1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(geometric_p_for_variance(1e12) < 1e-5);
  CHECK_THROWS_AS(geometric_p_for_variance(0.0), ConfigError);
  CHECK(noise_with_variance("geometric", 5.0).variance() == doctest::Approx(5.0));
  CHECK_THROWS_AS(noise_with_variance("cauchy", 1.0), ConfigError);
}

TEST_CASE("noise model cdf and tails") {
  const auto g = NoiseModel::geometric(0.25);
  CHECK(g.mean() == doctest::Approx(4.0));
  CHECK(g.cdf(0.5) == 0.0);
  CHECK(g.cdf(1.0) == doctest::Approx(0.25));
  CHECK(g.cdf(3.0) == doctest::Approx(1.0 - std::pow(0.75, 3)));
  const auto n = NoiseModel::normal(4.0);
  CHECK(n.cdf(0.0) == doctest::Approx(0.5));
  CHECK(n.cdf(2.0) == doctest::Approx(0.841344746).epsilon(1e-8));
}
