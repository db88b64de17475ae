#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/stack.hpp"
#include "test_oracles.hpp"

using namespace casimir;
using casimir::testing::matrix_oracle;

TEST_SUITE_BEGIN("stack");

TEST_CASE("s_factor hand values") {
  CHECK(s_factor(1.0, 1.0, 2.0) == 2.0);
  CHECK(s_factor(2.0, 1.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s_factor(1.0, 1.0, 1.0) == 1.0);
}

TEST_CASE("fresnel deltas: identical media reflect nothing") {
  const auto d = fresnel_deltas(3.0, 1.7, 3.0, 1.7);
  CHECK(d.delta1 == 0.0);
  CHECK(d.delta2 == 0.0);
}

TEST_CASE("fresnel deltas: gap over eps = 2 half-space at p = 1") {
  const double s1 = std::sqrt(2.0);
  const auto d = fresnel_deltas(1.0, 1.0, 2.0, s1);
  CHECK(d.delta2 == doctest::Approx((s1 - 1.0) / (s1 + 1.0)).epsilon(1e-15));
  CHECK(d.delta2 == doctest::Approx(0.17157).epsilon(1e-4));
  CHECK(d.delta1 == doctest::Approx((s1 - 2.0) / (s1 + 2.0)).epsilon(1e-15));
  CHECK(d.delta1 == doctest::Approx(-0.17157).epsilon(1e-4));
}

TEST_CASE("property: fresnel deltas are antisymmetric under index swap") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double ej = 1.0 + 50.0 * u(rng), ek = 1.0 + 50.0 * u(rng);
    const double sj = 1.0 + 10.0 * u(rng), sk = 1.0 + 10.0 * u(rng);
    const auto jk = fresnel_deltas(ej, sj, ek, sk);
    const auto kj = fresnel_deltas(ek, sk, ej, sj);
    CHECK(jk.delta1 == doctest::Approx(-kj.delta1).epsilon(1e-14));
    CHECK(jk.delta2 == doctest::Approx(-kj.delta2).epsilon(1e-14));
  }
}

TEST_CASE("bare half-space reduces to the fresnel deltas") {
  LayerStack stack{DielectricModel::constant(2.0), {}};
  const auto d = effective_deltas(stack, {1e15, 1.0, 1e-7, 1.0});
  CHECK(d.delta1 == doctest::Approx(-0.17157).epsilon(1e-4));
  CHECK(d.delta2 == doctest::Approx(0.17157).epsilon(1e-4));
}

TEST_CASE("vanishing film thickness leaves the stack unchanged") {
  const auto drude = DielectricModel::drude({9e15, 1e14});
  LayerStack bare{DielectricModel::constant(2.4), {}};
  LayerStack dressed{DielectricModel::constant(2.4), {{drude, 1e-18}}};
  const IntegrandPoint pt{2e15, 1.7, 1e-7, 1.0};
  const auto a = effective_deltas(bare, pt);
  const auto b = effective_deltas(dressed, pt);
  CHECK(std::fabs(a.delta1 - b.delta1) < 1e-9);
  CHECK(std::fabs(a.delta2 - b.delta2) < 1e-9);
}

TEST_CASE("opaque film behaves as a bulk half-space of the coating") {
  const auto drude = DielectricModel::drude({9e15, 1e14});
  LayerStack bulk{drude, {}};
  LayerStack coated{DielectricModel::constant(2.4), {{drude, 1e-6}}};
  for (double xi : {1e14, 1e15, 1e16}) {
    const IntegrandPoint pt{xi, 1.3, 1e-7, 1.0};
    const auto a = effective_deltas(bulk, pt);
    const auto b = effective_deltas(coated, pt);
    CHECK(std::fabs(a.delta1 - b.delta1) < 1e-9);
    CHECK(std::fabs(a.delta2 - b.delta2) < 1e-9);
  }
}

TEST_CASE("two-layer recursion matches the directly coded composition") {
  // delta*_{51} = (d54 + d41 e) / (1 + d54 d41 e), then the same fold with
  // the gap interface; identical arithmetic, so identical bits.
  const double xi = 1.7e15, p = 1.9, d = 1.2e-7, eps3 = 1.0;
  const auto sub = DielectricModel::constant(2.53);     // 1
  const auto adhesion = DielectricModel::drude({4e15, 7e13});  // 4
  const auto coat = DielectricModel::drude({8e15, 2e13});      // 5
  const double t4 = 2.9e-9, t5 = 9.2e-9;

  const double e1 = sub.eps_at_imaginary(xi);
  const double e4 = adhesion.eps_at_imaginary(xi);
  const double e5 = coat.eps_at_imaginary(xi);
  const double s1 = s_factor(e1, eps3, p);
  const double s4 = s_factor(e4, eps3, p);
  const double s5 = s_factor(e5, eps3, p);
  const double s3 = p;

  const double coeff = 2.0 * xi * std::sqrt(eps3) / constants::c;
  const double ef4 = std::exp(-coeff * t4 * s4);
  const double ef5 = std::exp(-coeff * t5 * s5);

  const auto d54 = fresnel_deltas(e5, s5, e4, s4);
  const auto d41 = fresnel_deltas(e4, s4, e1, s1);
  const auto d35 = fresnel_deltas(eps3, s3, e5, s5);

  DeltaPair star;
  star.delta1 = (d54.delta1 + d41.delta1 * ef4) /
                (1.0 + d54.delta1 * d41.delta1 * ef4);
  star.delta2 = (d54.delta2 + d41.delta2 * ef4) /
                (1.0 + d54.delta2 * d41.delta2 * ef4);
  DeltaPair expected;
  expected.delta1 = (d35.delta1 + star.delta1 * ef5) /
                    (1.0 + d35.delta1 * star.delta1 * ef5);
  expected.delta2 = (d35.delta2 + star.delta2 * ef5) /
                    (1.0 + d35.delta2 * star.delta2 * ef5);

  LayerStack stack{sub, {{adhesion, t4}, {coat, t5}}};
  const auto got = effective_deltas(stack, {xi, p, d, eps3});
  CHECK(got.delta1 == expected.delta1);
  CHECK(got.delta2 == expected.delta2);
}

namespace {

DielectricModel random_material(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < 0.5)
    return DielectricModel::constant(1.0 + 20.0 * u(rng));
  return DielectricModel::drude(
      {1e15 * std::pow(30.0, u(rng)), 1e13 * std::pow(100.0, u(rng))});
}

}  // namespace

TEST_CASE("oracle: effective deltas equal the matrix method on random stacks") {
  std::mt19937 rng(20240201);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    LayerStack stack{random_material(rng), {}};
    const int n_films = static_cast<int>(3.999 * u(rng));
    for (int i = 0; i < n_films; ++i) {
      stack.films.push_back(
          {random_material(rng), 1e-10 * std::pow(3000.0, u(rng))});
    }
    IntegrandPoint pt;
    pt.xi = 1e13 * std::pow(5e3, u(rng));
    pt.p = 1.0 + 100.0 * u(rng) * u(rng);
    pt.d = 1e-8 * std::pow(100.0, u(rng));
    pt.eps3 = u(rng) < 0.8 ? 1.0 : 1.0 + 2.0 * u(rng);

    const auto got = effective_deltas(stack, pt);
    const auto expected = matrix_oracle(stack, pt);
    CHECK(std::fabs(got.delta1 - expected.delta1) < 1e-10);
    CHECK(std::fabs(got.delta2 - expected.delta2) < 1e-10);
  }
}

TEST_CASE("property: passivity bounds both polarizations") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    LayerStack stack{random_material(rng), {}};
    const int n_films = static_cast<int>(2.999 * u(rng));
    for (int i = 0; i < n_films; ++i)
      stack.films.push_back(
          {random_material(rng), 1e-10 * std::pow(1000.0, u(rng))});
    const IntegrandPoint pt{1e13 * std::pow(1e4, u(rng)),
                            1.0 + 30.0 * u(rng), 1e-7, 1.0};
    const auto d = effective_deltas(stack, pt);
    CHECK(std::fabs(d.delta1) <= 1.0 + 1e-12);
    CHECK(std::fabs(d.delta2) <= 1.0 + 1e-12);
  }
}

TEST_CASE("property: metal coating reflectivity grows with thickness") {
  const auto metal = DielectricModel::drude({8e15, 2e13});
  const IntegrandPoint base{1.5e15, 1.4, 1e-7, 1.0};
  double prev1 = 0.0, prev2 = 0.0;
  bool first = true;
  for (double t = 1e-9; t < 1e-6; t *= 1.6) {
    LayerStack stack{DielectricModel::constant(2.4), {{metal, t}}};
    const auto d = effective_deltas(stack, base);
    if (!first) {
      CHECK(std::fabs(d.delta1) >= prev1 - 1e-12);
      CHECK(std::fabs(d.delta2) >= prev2 - 1e-12);
    }
    prev1 = std::fabs(d.delta1);
    prev2 = std::fabs(d.delta2);
    first = false;
  }
}

TEST_CASE("composition consistency for a three-film stack") {
  // Folding [inner, middle] into an effective reflection and then adding
  // the outer film must equal the full recursion.
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sub = random_material(rng);
    const auto l0 = random_material(rng);
    const auto l1 = random_material(rng);
    const auto l2 = random_material(rng);
    const double t0 = 1e-9 * std::pow(100.0, u(rng));
    const double t1 = 1e-9 * std::pow(100.0, u(rng));
    const double t2 = 1e-9 * std::pow(100.0, u(rng));
    const IntegrandPoint pt{2e15, 1.0 + 3.0 * u(rng), 1e-7, 1.0};

    LayerStack full{sub, {{l0, t0}, {l1, t1}, {l2, t2}}};
    const auto got = effective_deltas(full, pt);

    // Manual: r(inner two) at the l2|l1 interface, then fold across l2.
    const double e_sub = sub.eps_at_imaginary(pt.xi);
    const double e0 = l0.eps_at_imaginary(pt.xi);
    const double e1 = l1.eps_at_imaginary(pt.xi);
    const double e2 = l2.eps_at_imaginary(pt.xi);
    const double s_sub = s_factor(e_sub, pt.eps3, pt.p);
    const double s0 = s_factor(e0, pt.eps3, pt.p);
    const double s1 = s_factor(e1, pt.eps3, pt.p);
    const double s2 = s_factor(e2, pt.eps3, pt.p);
    const double coeff = 2.0 * pt.xi * std::sqrt(pt.eps3) / constants::c;
    auto fold = [](DeltaPair up, DeltaPair lo, double e) {
      return DeltaPair{
          (up.delta1 + lo.delta1 * e) / (1.0 + up.delta1 * lo.delta1 * e),
          (up.delta2 + lo.delta2 * e) / (1.0 + up.delta2 * lo.delta2 * e)};
    };
    DeltaPair r = fresnel_deltas(e0, s0, e_sub, s_sub);
    r = fold(fresnel_deltas(e1, s1, e0, s0), r, std::exp(-coeff * t0 * s0));
    r = fold(fresnel_deltas(e2, s2, e1, s1), r, std::exp(-coeff * t1 * s1));
    r = fold(fresnel_deltas(pt.eps3, pt.p, e2, s2),
             r, std::exp(-coeff * t2 * s2));

    CHECK(got.delta1 == doctest::Approx(r.delta1).epsilon(1e-14));
    CHECK(got.delta2 == doctest::Approx(r.delta2).epsilon(1e-14));
  }
}

TEST_CASE("invalid integration points are rejected") {
  LayerStack stack{DielectricModel::vacuum(), {}};
  CHECK_THROWS_AS(effective_deltas(stack, {0.0, 1.0, 1e-7, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(effective_deltas(stack, {1e15, 0.5, 1e-7, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(effective_deltas(stack, {1e15, 1.0, -1e-7, 1.0}),
                  std::invalid_argument);
}

TEST_SUITE_END();
