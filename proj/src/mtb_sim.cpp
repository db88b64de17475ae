#include "casimir/mtb_sim.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include "casimir/constants.hpp"

namespace casimir {

void MtbParams::validate() const {
  if (!(k_s > 0.0) || !(lever_arm > 0.0) || !(c1_true > 0.0) ||
      !(d0_true > 0.0) || !(v0_true > 0.0) || !(noise_sigma_a >= 0.0) ||
      !(radius > 0.0))
    throw std::invalid_argument("mtb params: all quantities must be positive");
}

void SweepPlan::validate() const {
  if (d_pz_values.empty() || v_bias_values.empty())
    throw std::invalid_argument("sweep plan: empty");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string fmt_m(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

double force_gradient(const std::function<double(double)>& force_law,
                      double d) {
  const double h = d / 1000.0;
  return (force_law(d + h) - force_law(d - h)) / (2.0 * h);
}

}  // namespace

std::optional<double> jump_to_contact_distance(
    const MtbParams& params, const std::function<double(double)>& force_law) {
  params.validate();
  const double b2 = params.lever_arm * params.lever_arm;
  auto unstable = [&](double d) {
    return b2 * std::fabs(force_gradient(force_law, d)) >= params.k_s;
  };

  double lo = 1e-9;
  double hi = params.d0_true;
  if (!unstable(lo)) return std::nullopt;  // below the searched range
  if (unstable(hi)) return hi;             // unstable everywhere searched

  for (int iter = 0; iter < 200 && (hi - lo) > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (unstable(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepRecord> simulate_dataset(
    const MtbParams& params, const SweepPlan& plan,
    const std::function<double(double)>& force_law) {
  params.validate();
  plan.validate();

  for (double d_pz : plan.d_pz_values) {
    if (!(d_pz < params.d0_true))
      throw std::invalid_argument(
          "simulate_dataset: d_pz = " + fmt_m(d_pz) +
          " m reaches or passes contact (d0 = " +
          fmt_m(params.d0_true) + " m)");
  }
  const auto jtc = jump_to_contact_distance(params, force_law);
  if (jtc) {
    for (double d_pz : plan.d_pz_values) {
      const double d = params.d0_true - d_pz;
      if (d <= *jtc)
        throw std::invalid_argument(
            "simulate_dataset: planned separation " + fmt_m(d) +
            " m (d_pz = " + fmt_m(d_pz) +
            " m) is at or below the jump-to-contact distance " +
            fmt_m(*jtc) + " m");
    }
  }

  const double es_coeff = constants::eps0 * M_PI * params.radius;
  const double b2_over_k = params.lever_arm * params.lever_arm / params.k_s;

  std::vector<SweepRecord> records;
  records.reserve(plan.d_pz_values.size());
  for (std::size_t k = 0; k < plan.d_pz_values.size(); ++k) {
    const double d_pz = plan.d_pz_values[k];
    const double d_nominal = params.d0_true - d_pz;

    std::mt19937_64 rng(splitmix64(plan.seed ^ splitmix64(k + 1)));
    std::normal_distribution<double> noise(0.0, 1.0);

    SweepRecord rec;
    rec.d_pz = d_pz;
    rec.points.reserve(plan.v_bias_values.size());
    for (double v : plan.v_bias_values) {
      const double vv = (v + params.v0_true) * (v + params.v0_true);
      double d_eff = d_nominal;
      if (params.rotation_correction) {
        // Separation shrinks by lever_arm * theta; iterate to the fixed
        // point of d_eff = d - (b^2/k_s) F_total(d_eff).
        for (int it = 0; it < 100; ++it) {
          const double f_tot =
              es_coeff * vv / d_eff + std::fabs(force_law(d_eff));
          const double next = d_nominal - b2_over_k * f_tot;
          if (!(next > 0.0))
            throw std::invalid_argument(
                "simulate_dataset: rotation pulls the surfaces into contact "
                "at d_pz = " +
                fmt_m(d_pz) + " m, v_bias = " + fmt_m(v) +
                " V");
          if (std::fabs(next - d_eff) < 1e-18) {
            d_eff = next;
            break;
          }
          d_eff = next;
        }
      }
      const double force =
          es_coeff * vv / d_eff + std::fabs(force_law(d_eff));
      const double a =
          params.c1_true * force +
          (params.noise_sigma_a > 0.0 ? params.noise_sigma_a * noise(rng)
                                      : 0.0);
      rec.points.push_back({v, a});
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace casimir
