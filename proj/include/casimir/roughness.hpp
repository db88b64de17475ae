#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace casimir {

struct RoughnessBin {
  double delta;   // height displacement from the mean plane, meters
  double weight;  // probability
};

/// Mean-centered histogram of surface height displacements. Weights sum to
/// one and the weighted mean displacement is zero; bins sorted by delta.
struct RoughnessProfile {
  std::vector<RoughnessBin> bins;

  void validate() const;  // throws std::invalid_argument
  // {(0, 1)}: an ideally smooth surface.
  static RoughnessProfile smooth();
  double rms() const;
};

struct HeightMap {
  std::vector<double> heights;  // row-major, meters
  std::size_t rows = 0;
  std::size_t cols = 0;
  double pitch = 0.0;  // meters per pixel (metadata only)
};

// Equal-width bins spanning [min, max] height. Each bin's delta is the mean
// of its member pixels relative to the full-grid mean, so the profile is
// mean-centered to machine precision. A constant map collapses to the
// single bin (0, 1).
RoughnessProfile histogram_from_heightmap(const HeightMap& map,
                                          std::size_t n_bins);

// Probability-weighted average of the smooth-surface force over the joint
// displacement distribution:
//   sum_ij v_i v_j F(d - (delta_i + delta_j)).
// base_force must accept every shifted separation; bin pairs that reach a
// non-positive separation report std::domain_error naming the pair.
double corrected_force(const std::function<double(double)>& base_force,
                       const RoughnessProfile& sphere_profile,
                       const RoughnessProfile& plate_profile, double d);

/// Natural cubic spline through a precomputed force curve, for use as the
/// base evaluator when direct per-distance recomputation is too expensive.
/// The grid must bracket every shifted separation; queries outside the
/// tabulated range throw std::out_of_range.
class ForceCurveInterpolator {
 public:
  ForceCurveInterpolator(std::vector<double> separations,
                         std::vector<double> forces);
  double operator()(double d) const;
  double min_separation() const { return d_.front(); }
  double max_separation() const { return d_.back(); }

 private:
  std::vector<double> d_;
  std::vector<double> f_;
  std::vector<double> second_;  // spline second derivatives
};

}  // namespace casimir
