#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/roughness.hpp"

using namespace casimir;

namespace {

HeightMap gaussian_map(double sigma, std::size_t n, std::uint32_t seed) {
  HeightMap map;
  map.rows = map.cols = n;
  map.pitch = 10e-6 / static_cast<double>(n);
  map.heights.resize(n * n);
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  for (auto& h : map.heights) h = dist(rng);
  return map;
}

RoughnessProfile symmetric_profile(std::mt19937& rng, int pairs) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> half;  // (delta, weight)
  double wsum = 0.0;
  for (int i = 0; i < pairs; ++i) {
    half.emplace_back(1e-9 + 19e-9 * u(rng), 0.05 + u(rng));
    wsum += 2.0 * half.back().second;
  }
  std::sort(half.begin(), half.end());
  RoughnessProfile p;
  for (int i = pairs - 1; i >= 0; --i)
    p.bins.push_back({-half[i].first, half[i].second / wsum});
  for (int i = 0; i < pairs; ++i)
    p.bins.push_back({half[i].first, half[i].second / wsum});
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("roughness");

TEST_CASE("constant map collapses to the smooth profile") {
  HeightMap map{std::vector<double>(64, 3.5e-9), 8, 8, 1e-7};
  const auto p = histogram_from_heightmap(map, 16);
  REQUIRE(p.bins.size() == 1);
  CHECK(p.bins[0].delta == 0.0);
  CHECK(p.bins[0].weight == 1.0);
}

TEST_CASE("two-level map centers on +-10 nm") {
  HeightMap map;
  map.rows = 2;
  map.cols = 8;
  map.pitch = 1e-7;
  map.heights.assign(8, 0.0);
  map.heights.insert(map.heights.end(), 8, 20e-9);
  const auto p = histogram_from_heightmap(map, 2);
  REQUIRE(p.bins.size() == 2);
  CHECK(p.bins[0].delta == doctest::Approx(-10e-9).epsilon(1e-12));
  CHECK(p.bins[0].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.bins[1].delta == doctest::Approx(10e-9).epsilon(1e-12));
  CHECK(p.bins[1].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("gaussian map reproduces its variance") {
  const auto map = gaussian_map(5e-9, 512, 12345);
  const auto p = histogram_from_heightmap(map, 32);
  CHECK_NOTHROW(p.validate());
  double var = 0.0;
  for (const auto& b : p.bins) var += b.weight * b.delta * b.delta;
  CHECK(var == doctest::Approx(25e-18).epsilon(0.05));
}

TEST_CASE("histogram profiles are mean-centered to machine precision") {
  const auto map = gaussian_map(3e-9, 128, 777);
  for (std::size_t bins : {1, 7, 32}) {
    const auto p = histogram_from_heightmap(map, bins);
    double mean = 0.0, wsum = 0.0;
    for (const auto& b : p.bins) {
      mean += b.weight * b.delta;
      wsum += b.weight;
    }
    CHECK(std::fabs(mean) < 1e-15);
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("degenerate profiles leave the force unchanged") {
  auto base = [](double d) { return 1e-28 / (d * d * d); };
  const auto smooth = RoughnessProfile::smooth();
  const double d = 1e-7;
  CHECK(corrected_force(base, smooth, smooth, d) == base(d));
}

TEST_CASE("two-bin profile over a cubic law gives the 1.0615 enhancement") {
  auto base = [](double d) { return 1.0 / (d * d * d); };
  RoughnessProfile two;
  two.bins = {{-10e-9, 0.5}, {10e-9, 0.5}};
  const auto smooth = RoughnessProfile::smooth();
  const double d = 100e-9;
  const double factor = corrected_force(base, two, smooth, d) / base(d);
  CHECK(factor == doctest::Approx(1.0615).epsilon(1e-4));
  // Exact two-term sum.
  const double exact = 0.5 * std::pow(10.0 / 9.0, 3.0) +
                       0.5 * std::pow(10.0 / 11.0, 3.0);
  CHECK(factor == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("the correction grows as the separation shrinks") {
  auto base = [](double d) { return 1.0 / (d * d * d); };
  RoughnessProfile rough;
  rough.bins = {{-10e-9, 0.5}, {10e-9, 0.5}};
  const auto smooth = RoughnessProfile::smooth();
  double prev = 1.0;
  for (double d = 300e-9; d > 20e-9; d /= 1.5) {
    const double factor = corrected_force(base, rough, smooth, d) / base(d);
    CHECK(factor > prev);
    prev = factor;
  }
  // Tens of percent at the shortest separations.
  CHECK(prev > 1.2);
}

TEST_CASE("property: symmetric roughness always strengthens a convex law") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto smooth = RoughnessProfile::smooth();
  for (int trial = 0; trial < 100; ++trial) {
    const auto profile = symmetric_profile(rng, 1 + trial % 4);
    const double n = 1.0 + 4.0 * u(rng);
    auto base = [n](double d) { return std::pow(1e-7 / d, n); };
    const double d = 150e-9;
    const double corrected = corrected_force(base, profile, smooth, d);
    CHECK(corrected > base(d) * (1.0 + 1e-9));
  }
}

TEST_CASE("swapping which surface is rough does not change the sum") {
  std::mt19937 rng(5);
  const auto a = symmetric_profile(rng, 3);
  const auto b = symmetric_profile(rng, 2);
  auto base = [](double d) { return 1.0 / (d * d * d); };
  const double d = 120e-9;
  CHECK(corrected_force(base, a, b, d) ==
        doctest::Approx(corrected_force(base, b, a, d)).epsilon(1e-12));
}

TEST_CASE("bin refinement moves the corrected force by less than 1%") {
  const auto map = gaussian_map(5e-9, 256, 99);
  auto base = [](double d) { return 1.0 / (d * d * d); };
  const auto smooth = RoughnessProfile::smooth();
  const double d = 100e-9;
  const double coarse =
      corrected_force(base, histogram_from_heightmap(map, 16), smooth, d);
  const double fine =
      corrected_force(base, histogram_from_heightmap(map, 64), smooth, d);
  CHECK(std::fabs(coarse - fine) / std::fabs(fine) < 0.01);
}

TEST_CASE("interpenetration reports the offending bin pair") {
  auto base = [](double d) { return 1.0 / (d * d * d); };
  RoughnessProfile deep;
  deep.bins = {{-60e-9, 0.5}, {60e-9, 0.5}};
  const auto smooth = RoughnessProfile::smooth();
  try {
    corrected_force(base, deep, smooth, 50e-9);
    FAIL("expected domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("bin") != std::string::npos);
  }
}

TEST_CASE("profile validation rejects broken histograms") {
  RoughnessProfile p;
  p.bins = {{-1e-9, 0.6}, {1e-9, 0.6}};  // weights sum to 1.2
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.bins = {{1e-9, 1.0}};  // mean not zero
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.bins = {};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("spline interpolator reproduces a cubic law between knots") {
  std::vector<double> d, f;
  for (double x = 4e-8; x < 4e-7; x *= 1.07) {
    d.push_back(x);
    f.push_back(1.0 / (x * x * x));
  }
  const ForceCurveInterpolator interp(d, f);
  for (double x = 6e-8; x < 3e-7; x *= 1.13) {
    CHECK(interp(x) == doctest::Approx(1.0 / (x * x * x)).epsilon(1e-4));
  }
  CHECK_THROWS_AS(interp(1e-8), std::out_of_range);
  CHECK_THROWS_AS(interp(1e-6), std::out_of_range);
}

TEST_SUITE_END();
