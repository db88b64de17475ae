#include "casimir/roughness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace casimir {

namespace {

std::string fmt_m(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

}  // namespace

void RoughnessProfile::validate() const {
  if (bins.empty())
    throw std::invalid_argument("roughness profile: no bins");
  double wsum = 0.0, mean = 0.0;
  double prev = -1e300;
  for (const auto& b : bins) {
    if (!(b.weight >= 0.0) || !std::isfinite(b.delta))
      throw std::invalid_argument("roughness profile: bad bin");
    if (!(b.delta >= prev))
      throw std::invalid_argument("roughness profile: bins must be sorted");
    prev = b.delta;
    wsum += b.weight;
    mean += b.weight * b.delta;
  }
  if (std::fabs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("roughness profile: weights must sum to 1");
  if (std::fabs(mean) > 1e-15)
    throw std::invalid_argument("roughness profile: mean displacement != 0");
}

RoughnessProfile RoughnessProfile::smooth() {
  return RoughnessProfile{{{0.0, 1.0}}};
}

double RoughnessProfile::rms() const {
  double m2 = 0.0;
  for (const auto& b : bins) m2 += b.weight * b.delta * b.delta;
  return std::sqrt(m2);
}

RoughnessProfile histogram_from_heightmap(const HeightMap& map,
                                          std::size_t n_bins) {
  if (map.heights.empty() || map.rows * map.cols != map.heights.size())
    throw std::invalid_argument("height map: empty or inconsistent shape");
  if (n_bins < 1)
    throw std::invalid_argument("height map: n_bins must be >= 1");
  for (double h : map.heights)
    if (!std::isfinite(h))
      throw std::invalid_argument("height map: non-finite height");

  const auto [lo_it, hi_it] =
      std::minmax_element(map.heights.begin(), map.heights.end());
  const double lo = *lo_it, hi = *hi_it;
  double mean = 0.0;
  for (double h : map.heights) mean += h;
  mean /= static_cast<double>(map.heights.size());

  if (hi == lo) return RoughnessProfile::smooth();

  std::vector<double> sum(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (double h : map.heights) {
    auto idx = static_cast<std::size_t>((h - lo) / width);
    if (idx >= n_bins) idx = n_bins - 1;  // h == hi
    sum[idx] += h;
    ++count[idx];
  }

  RoughnessProfile profile;
  const double n = static_cast<double>(map.heights.size());
  for (std::size_t i = 0; i < n_bins; ++i) {
    if (count[i] == 0) continue;
    profile.bins.push_back(
        {sum[i] / static_cast<double>(count[i]) - mean,
         static_cast<double>(count[i]) / n});
  }
  return profile;
}

double corrected_force(const std::function<double(double)>& base_force,
                       const RoughnessProfile& sphere_profile,
                       const RoughnessProfile& plate_profile, double d) {
  sphere_profile.validate();
  plate_profile.validate();
  if (!(d > 0.0))
    throw std::invalid_argument("corrected_force: d must be > 0");

  double acc = 0.0;
  for (std::size_t i = 0; i < sphere_profile.bins.size(); ++i) {
    for (std::size_t j = 0; j < plate_profile.bins.size(); ++j) {
      const auto& bi = sphere_profile.bins[i];
      const auto& bj = plate_profile.bins[j];
      const double shifted = d - (bi.delta + bj.delta);
      if (!(shifted > 0.0)) {
        throw std::domain_error(
            "corrected_force: surfaces interpenetrate at sphere bin " +
            std::to_string(i) + " (delta = " + fmt_m(bi.delta) +
            " m), plate bin " + std::to_string(j) +
            " (delta = " + fmt_m(bj.delta) + " m)");
      }
      acc += bi.weight * bj.weight * base_force(shifted);
    }
  }
  return acc;
}

ForceCurveInterpolator::ForceCurveInterpolator(std::vector<double> separations,
                                               std::vector<double> forces)
    : d_(std::move(separations)), f_(std::move(forces)) {
  if (d_.size() != f_.size() || d_.size() < 2)
    throw std::invalid_argument("force interpolator: need >= 2 points");
  for (std::size_t i = 1; i < d_.size(); ++i)
    if (!(d_[i] > d_[i - 1]))
      throw std::invalid_argument(
          "force interpolator: separations must be strictly increasing");

  // Natural cubic spline second derivatives (tridiagonal sweep).
  const std::size_t n = d_.size();
  second_.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (d_[i] - d_[i - 1]) / (d_[i + 1] - d_[i - 1]);
    const double p = sig * second_[i - 1] + 2.0;
    second_[i] = (sig - 1.0) / p;
    const double slope_hi = (f_[i + 1] - f_[i]) / (d_[i + 1] - d_[i]);
    const double slope_lo = (f_[i] - f_[i - 1]) / (d_[i] - d_[i - 1]);
    u[i] = (6.0 * (slope_hi - slope_lo) / (d_[i + 1] - d_[i - 1]) -
            sig * u[i - 1]) /
           p;
  }
  for (std::size_t k = n - 1; k-- > 1;)
    second_[k] = second_[k] * second_[k + 1] + u[k];
  second_[0] = second_[n - 1] = 0.0;
}

double ForceCurveInterpolator::operator()(double d) const {
  if (!(d >= d_.front()) || !(d <= d_.back()))
    throw std::out_of_range(
        "force interpolator: separation " + fmt_m(d) +
        " m outside tabulated range [" + fmt_m(d_.front()) + ", " +
        fmt_m(d_.back()) + "]");
  const auto it = std::upper_bound(d_.begin(), d_.end(), d);
  std::size_t hi = static_cast<std::size_t>(it - d_.begin());
  if (hi == d_.size()) --hi;
  if (hi == 0) ++hi;
  const std::size_t lo = hi - 1;
  const double h = d_[hi] - d_[lo];
  const double a = (d_[hi] - d) / h;
  const double b = (d - d_[lo]) / h;
  return a * f_[lo] + b * f_[hi] +
         ((a * a * a - a) * second_[lo] + (b * b * b - b) * second_[hi]) *
             (h * h) / 6.0;
}

}  // namespace casimir
