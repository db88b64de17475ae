#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <functional>
#include <random>
#include <vector>

#include "casimir/dielectric.hpp"
#include "test_oracles.hpp"

using namespace casimir;
using namespace casimir::testing;

TEST_SUITE_BEGIN("dielectric");

TEST_CASE("vacuum identity") {
  CHECK(DielectricModel::vacuum().eps_at_imaginary(1e15) == 1.0);
  CHECK(DielectricModel::vacuum().eps_at_imaginary(0.0) == 1.0);
}

TEST_CASE("drude imaginary-axis value") {
  const auto m = DielectricModel::drude({1e16, 1e14});
  CHECK(m.eps_at_imaginary(1e15) ==
        doctest::Approx(1.0 + 1e32 / (1e15 * 1.1e15)).epsilon(1e-14));
  CHECK(m.eps_at_imaginary(1e15) == doctest::Approx(91.909).epsilon(1e-4));
}

TEST_CASE("drude diverges at xi = 0") {
  const auto m = DielectricModel::drude({1e16, 1e14});
  CHECK_THROWS_AS(m.eps_at_imaginary(0.0), std::domain_error);
}

TEST_CASE("single undamped oscillator at resonance frequency") {
  const auto m = DielectricModel::oscillators({{{1.0, 1e16, 0.0}}});
  CHECK(m.eps_at_imaginary(1e16) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("constructor rejections") {
  CHECK_THROWS_AS(DielectricModel::constant(0.5), std::invalid_argument);
  const DrudeParams bad_drude{-1.0, 1e14};
  CHECK_THROWS_AS(DielectricModel::drude(bad_drude), std::invalid_argument);
  const OscillatorParams bad_osc{{{0.0, 1e16, 0.0}}};
  CHECK_THROWS_AS(DielectricModel::oscillators(bad_osc),
                  std::invalid_argument);
  const std::vector<OpticalRow> empty;
  const std::vector<OpticalRow> unsorted{{1e15, 0.1}, {1e14, 0.2}};
  const std::vector<OpticalRow> negative{{1e15, -0.1}};
  const Extrapolation none;
  CHECK_THROWS_AS(OpticalTable(empty, none), std::invalid_argument);
  CHECK_THROWS_AS(OpticalTable(unsorted, none), std::invalid_argument);
  CHECK_THROWS_AS(OpticalTable(negative, none), std::invalid_argument);
}

TEST_CASE("sum adds susceptibilities") {
  const auto m = DielectricModel::sum(
      {DielectricModel::constant(2.0),
       DielectricModel::oscillators({{{1.0, 1e16, 0.0}}})});
  CHECK(m.eps_at_imaginary(1e16) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("kk of a zero-absorption table is vacuum") {
  OpticalTable t(sample_table(1e12, 1e18, 64, [](double) { return 0.0; }),
                 {});
  CHECK(kk_transform(t, 1e13) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kk_transform(t, 1e16) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kk of a densely sampled drude spectrum matches the analytic form") {
  const double wp = 1e16, g = 1e14;
  OpticalTable t(sample_table(1e10, 1e20, 10000,
                              [&](double x) { return drude_im_eps(x, wp, g); }),
                 {});
  const double got = kk_transform(t, 1e15);
  CHECK(got == doctest::Approx(drude_imag_axis(1e15, wp, g)).epsilon(1e-3));
  CHECK(got == doctest::Approx(91.909).epsilon(1e-3));
}

TEST_CASE("kk of a narrow lorentz line matches the oscillator form") {
  const double s = 1.0, w0 = 1e16, g = 0.01 * w0;
  OpticalTable t(sample_table(1e10, 1e20, 20000,
                              [&](double x) {
                                return lorentz_im_eps(x, s, w0, g);
                              }),
                 {});
  for (double xi : {1e15, 1e16, 3e16}) {
    // Narrow-line limit: the undamped form S w0^2/(w0^2+xi^2).
    const double undamped = 1.0 + s * w0 * w0 / (w0 * w0 + xi * xi);
    CHECK(kk_transform(t, xi) == doctest::Approx(undamped).epsilon(5e-3));
  }
}

TEST_CASE("property: random drude/lorentz tables reproduce closed forms") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const bool drude = trial % 2 == 0;
    if (drude) {
      const double wp = 1e15 * std::pow(20.0, u(rng));
      const double g = 1e13 * std::pow(50.0, u(rng));
      OpticalTable t(
          sample_table(1e9, 1e21, 8000,
                       [&](double x) { return drude_im_eps(x, wp, g); }),
          {});
      for (double xi : {1e13, 1e14, 1e15, 1e16}) {
        CHECK(kk_transform(t, xi) ==
              doctest::Approx(drude_imag_axis(xi, wp, g)).epsilon(3e-3));
      }
    } else {
      const double s = 0.5 + 2.5 * u(rng);
      const double w0 = 5e14 * std::pow(100.0, u(rng));
      const double g = 0.1 * w0;
      OpticalTable t(
          sample_table(1e9, 1e21, 8000,
                       [&](double x) { return lorentz_im_eps(x, s, w0, g); }),
          {});
      for (double xi : {1e14, 1e15, 1e16}) {
        CHECK(kk_transform(t, xi) ==
              doctest::Approx(lorentz_imag_axis(xi, s, w0, g)).epsilon(3e-3));
      }
    }
  }
}

TEST_CASE("doubling table density moves kk output by less than the tolerance") {
  const double wp = 1e16, g = 1e14;
  auto im = [&](double x) { return drude_im_eps(x, wp, g); };
  OpticalTable coarse(sample_table(1e10, 1e20, 20000, im), {});
  OpticalTable fine(sample_table(1e10, 1e20, 40000, im), {});
  for (double xi : {1e14, 1e15, 1e16}) {
    const double a = kk_transform(coarse, xi);
    const double b = kk_transform(fine, xi);
    CHECK(std::fabs(a - b) / std::fabs(b) < 1e-6);
  }
}

TEST_CASE("drude tail extends a truncated table") {
  const double wp = 1e16, g = 1e14;
  auto im = [&](double x) { return drude_im_eps(x, wp, g); };
  // Table stops where the spectrum still matters at xi ~ 1e16.
  OpticalTable cut(sample_table(1e10, 3e15, 6000, im),
                   {TailPolicy::drude_tail, wp, g});
  OpticalTable cut_trunc(sample_table(1e10, 3e15, 6000, im), {});
  const double xi = 1e16;
  const double exact = drude_imag_axis(xi, wp, g);
  CHECK(kk_transform(cut, xi) == doctest::Approx(exact).epsilon(1e-3));
  // Without the tail a visible share of the susceptibility is lost.
  const double chi_trunc = kk_transform(cut_trunc, xi) - 1.0;
  CHECK(std::fabs(chi_trunc - (exact - 1.0)) / (exact - 1.0) > 0.01);
}

TEST_CASE("power-law tail continues the last log-log slope") {
  const double wp = 1e16, g = 1e14;
  auto im = [&](double x) { return drude_im_eps(x, wp, g); };
  // Beyond 1e17 the spectrum is already ~ x^-3, which the tail continues.
  OpticalTable cut(sample_table(1e10, 1e17, 6000, im),
                   {TailPolicy::power_law_tail, 0.0, 0.0});
  const double xi = 1e16;
  CHECK(kk_transform(cut, xi) ==
        doctest::Approx(drude_imag_axis(xi, wp, g)).epsilon(1e-3));
}

TEST_CASE("power-law tail with a non-integrable slope is rejected") {
  const std::vector<OpticalRow> rows{{1e14, 1.0}, {1e15, 1.0}};  // slope 0
  const Extrapolation power{TailPolicy::power_law_tail, 0.0, 0.0};
  CHECK_THROWS_AS(OpticalTable(rows, power), std::invalid_argument);
}

TEST_CASE("property: eps is >= 1 and non-increasing for every variant") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DielectricModel> models;
  models.push_back(DielectricModel::vacuum());
  models.push_back(DielectricModel::constant(1.0 + 10.0 * u(rng)));
  for (int i = 0; i < 3; ++i) {
    models.push_back(DielectricModel::drude(
        {1e15 * std::pow(30.0, u(rng)), 1e13 * std::pow(30.0, u(rng))}));
    models.push_back(DielectricModel::oscillators(
        {{{0.2 + 2.0 * u(rng), 1e15 * std::pow(30.0, u(rng)),
           1e13 * u(rng)}}}));
  }
  models.push_back(DielectricModel::sum({models[1], models[2]}));
  models.push_back(DielectricModel::tabulated(OpticalTable(
      sample_table(1e10, 1e20, 2000,
                   [](double x) { return drude_im_eps(x, 5e15, 2e14); }),
      {})));

  for (const auto& m : models) {
    double prev = 1e300;
    for (double xi = 1e12; xi < 1e19; xi *= 2.7) {
      const double eps = m.eps_at_imaginary(xi);
      CHECK(eps >= 1.0);
      CHECK(eps <= prev * (1.0 + 1e-12));
      prev = eps;
    }
  }
}

TEST_SUITE_END();
