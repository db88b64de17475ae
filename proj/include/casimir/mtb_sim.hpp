#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "casimir/calibration.hpp"

namespace casimir {

/// Forward-model parameters of the torsional balance. Defaults match a
/// micro-machined seesaw carrying a 100 um sphere with ~10 pN force
/// resolution.
struct MtbParams {
  double k_s = 1e-8;          // torsional spring constant, N m / rad
  double lever_arm = 2.5e-4;  // sphere-to-pivot distance, meters
  double c1_true = 1e9;       // read-out gain, a.u. / N
  double d0_true = 5e-7;      // unextended separation, meters
  double v0_true = 0.2;       // residual voltage, volts
  double noise_sigma_a = 1e-2;  // additive read-out noise, a.u.
  double radius = 1e-4;       // sphere radius, meters
  // When set, the generated separations shrink self-consistently by
  // lever_arm * theta with theta = lever_arm * F / k_s, the plate-rotation
  // systematic the default analysis ignores.
  bool rotation_correction = false;

  void validate() const;
};

struct SweepPlan {
  std::vector<double> d_pz_values;   // meters
  std::vector<double> v_bias_values; // volts
  std::uint64_t seed = 0;

  void validate() const;
};

// Bridge output for each planned (d_pz, v_bias):
//   A = c1 [ eps0 pi R (V + V0)^2 / (d0 - d_pz) + |F_C(d0 - d_pz)| ] + noise
// with Gaussian noise of width noise_sigma_a, deterministic for a given
// seed (per-sweep derived streams). force_law returns the magnitude of the
// injected force at a separation. Refuses plans that reach separations at
// or below the jump-to-contact distance, naming the offending point.
std::vector<SweepRecord> simulate_dataset(
    const MtbParams& params, const SweepPlan& plan,
    const std::function<double(double)>& force_law);

// Largest separation where the force gradient overcomes the restoring
// stiffness: lever_arm^2 |dF/dd| >= k_s, located by bisection; the
// derivative uses a central difference with step d/1000. Returns nullopt
// when no instability exists in the searched range (force too weak).
std::optional<double> jump_to_contact_distance(
    const MtbParams& params, const std::function<double(double)>& force_law);

}  // namespace casimir
