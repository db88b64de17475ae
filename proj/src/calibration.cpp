#include "casimir/calibration.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <set>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {

namespace {

std::string fmt_m(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

// Solves the symmetric 3x3 system M x = b by Gaussian elimination with
// partial pivoting. Throws on a singular matrix.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m,
                             std::array<double, 3> b) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (std::fabs(m[piv][col]) < 1e-300)
      throw std::invalid_argument("fit: rank-deficient design");
    std::swap(m[col], m[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return x;
}

}  // namespace

QuadraticFit fit_parabola(const SweepRecord& sweep,
                          const std::vector<double>* weights) {
  const auto& pts = sweep.points;
  if (pts.size() < 5)
    throw std::invalid_argument(
        "fit_parabola: need at least 5 points per sweep");
  if (weights && weights->size() != pts.size())
    throw std::invalid_argument("fit_parabola: weight count mismatch");
  {
    std::set<double> distinct;
    for (const auto& p : pts) distinct.insert(p.v_bias);
    if (distinct.size() != pts.size())
      throw std::invalid_argument("fit_parabola: bias values must be distinct");
  }

  // Center the bias axis for conditioning; basis {1, v, v^2} in v - vbar.
  double vbar = 0.0;
  for (const auto& p : pts) vbar += p.v_bias;
  vbar /= static_cast<double>(pts.size());

  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> rhs{};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    const double v = pts[i].v_bias - vbar;
    const double basis[3] = {1.0, v, v * v};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += w * basis[r] * basis[c];
      rhs[r] += w * basis[r] * pts[i].a;
    }
  }
  const auto coef = solve3(m, rhs);  // a(v) = c0 + c1 v + c2 v^2

  QuadraticFit fit;
  fit.alpha = coef[2];
  if (coef[2] == 0.0)
    throw std::invalid_argument("fit_parabola: zero curvature");
  const double vertex = vbar - coef[1] / (2.0 * coef[2]);
  fit.x0 = -vertex;
  fit.beta = coef[0] - coef[1] * coef[1] / (4.0 * coef[2]);

  double ssr = 0.0, wssr = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = pts[i].v_bias - vbar;
    const double model = coef[0] + coef[1] * v + coef[2] * v * v;
    const double r = pts[i].a - model;
    ssr += r * r;
    wssr += (weights ? (*weights)[i] : 1.0) * r * r;
  }
  fit.residual_rms = std::sqrt(ssr / static_cast<double>(pts.size()));

  // Curvature standard error from the (weighted) normal-equation inverse.
  fit.alpha_err = 0.0;
  if (pts.size() > 3) {
    const double sigma2 = wssr / static_cast<double>(pts.size() - 3);
    const auto col = solve3(m, {0.0, 0.0, 1.0});  // (X^T W X)^-1 e_2
    if (col[2] > 0.0) fit.alpha_err = std::sqrt(sigma2 * col[2]);
  }
  return fit;
}

AlphaCurveFit fit_alpha_curve(
    const std::vector<std::pair<double, double>>& alphas, double radius,
    const std::vector<double>* alpha_sigmas) {
  if (alphas.size() < 2)
    throw std::invalid_argument("fit_alpha_curve: need at least 2 sweeps");
  if (!(radius > 0.0))
    throw std::invalid_argument("fit_alpha_curve: radius must be > 0");
  if (alpha_sigmas && alpha_sigmas->size() != alphas.size())
    throw std::invalid_argument("fit_alpha_curve: sigma count mismatch");
  {
    std::set<double> distinct;
    for (const auto& [z, a] : alphas) {
      distinct.insert(z);
      if (!(a > 0.0))
        throw std::invalid_argument("fit_alpha_curve: alpha must be > 0");
    }
    if (distinct.size() != alphas.size())
      throw std::invalid_argument(
          "fit_alpha_curve: d_pz values must be distinct");
  }
  // Inverse-variance weight in alpha units; positive sigmas required.
  auto weight = [&](std::size_t i) {
    if (!alpha_sigmas) return 1.0;
    const double s = (*alpha_sigmas)[i];
    return s > 0.0 ? 1.0 / (s * s) : 1.0;
  };

  const double k = constants::eps0 * M_PI * radius;
  const std::size_t n = alphas.size();

  // Linear seed: 1/alpha = d0/(c1 k) - d_pz/(c1 k), weighted by the
  // transformed variances sigma_(1/alpha) = sigma_alpha / alpha^2.
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [z, a] = alphas[i];
    const double y = 1.0 / a;
    const double w = alpha_sigmas ? weight(i) * a * a * a * a : 1.0;
    sw += w;
    sx += w * z;
    sy += w * y;
    sxx += w * z * z;
    sxy += w * z * y;
  }
  const double slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / sw;
  if (slope >= 0.0)
    throw std::runtime_error(
        "fit_alpha_curve: inconsistent data, alpha does not increase as the "
        "surfaces approach (non-negative 1/alpha slope)");
  double d0 = -intercept / slope;
  double c1 = -1.0 / (slope * k);
  double max_z = -1e300;
  for (const auto& [z, a] : alphas) max_z = std::max(max_z, z);
  if (!(d0 > max_z) || !(c1 > 0.0))
    throw std::runtime_error(
        "fit_alpha_curve: inconsistent data, fitted d0 does not exceed the "
        "largest piezo extension");

  // One Gauss-Newton step on r_i = alpha_i - c1 k / (d0 - z_i).
  double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [z, a] = alphas[i];
    const double w = weight(i);
    const double sep = d0 - z;
    const double model = c1 * k / sep;
    const double r = a - model;
    const double j0 = c1 * k / (sep * sep);  // d r / d d0
    const double j1 = -k / sep;              // d r / d c1
    jtj00 += w * j0 * j0;
    jtj01 += w * j0 * j1;
    jtj11 += w * j1 * j1;
    jtr0 += w * j0 * r;
    jtr1 += w * j1 * r;
  }
  const double det = jtj00 * jtj11 - jtj01 * jtj01;
  if (std::fabs(det) > 1e-300) {
    const double dd0 = -(jtj11 * jtr0 - jtj01 * jtr1) / det;
    const double dc1 = -(jtj00 * jtr1 - jtj01 * jtr0) / det;
    // Guard against a step that crosses a pole.
    if (d0 + dd0 > max_z && c1 + dc1 > 0.0) {
      d0 += dd0;
      c1 += dc1;
    }
  }

  AlphaCurveFit fit{d0, c1, 0.0, 0.0};
  double wssr = 0.0;
  jtj00 = jtj01 = jtj11 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [z, a] = alphas[i];
    const double w = weight(i);
    const double sep = d0 - z;
    const double r = a - c1 * k / sep;
    wssr += w * r * r;
    const double j0 = c1 * k / (sep * sep);
    const double j1 = -k / sep;
    jtj00 += w * j0 * j0;
    jtj01 += w * j0 * j1;
    jtj11 += w * j1 * j1;
  }
  const double det2 = jtj00 * jtj11 - jtj01 * jtj01;
  if (det2 > 0.0) {
    // With supplied sigmas the covariance is (J^T W J)^-1 directly;
    // otherwise scale by the residual variance.
    double sigma2 = 1.0;
    if (!alpha_sigmas)
      sigma2 = n > 2 ? wssr / static_cast<double>(n - 2) : 0.0;
    fit.d0_err = std::sqrt(sigma2 * jtj11 / det2);
    fit.c1_err = std::sqrt(sigma2 * jtj00 / det2);
  }
  return fit;
}

std::vector<ForceSample> extract_casimir(
    const std::vector<std::pair<double, QuadraticFit>>& fits, double c1,
    double d0) {
  if (!(c1 > 0.0))
    throw std::invalid_argument("extract_casimir: c1 must be > 0");
  std::vector<ForceSample> out;
  out.reserve(fits.size());
  for (const auto& [d_pz, fit] : fits)
    out.push_back({d0 - d_pz, fit.beta / c1});
  std::sort(out.begin(), out.end(),
            [](const ForceSample& a, const ForceSample& b) { return a.d < b.d; });
  return out;
}

CalibrationResult analyze_dataset(const std::vector<SweepRecord>& sweeps,
                                  double radius) {
  if (sweeps.empty())
    throw std::invalid_argument("analyze_dataset: no sweeps");

  CalibrationResult result;
  std::vector<std::pair<double, QuadraticFit>> fits;
  std::vector<std::pair<double, double>> alphas;
  std::vector<double> alpha_sigmas;
  bool sigmas_usable = true;
  fits.reserve(sweeps.size());
  for (std::size_t i = 0; i < sweeps.size(); ++i) {
    const QuadraticFit fit = fit_parabola(sweeps[i]);
    if (fit.alpha <= 0.0)
      result.warnings.push_back("sweep " + std::to_string(i) +
                                ": non-positive curvature alpha");
    fits.emplace_back(sweeps[i].d_pz, fit);
    alphas.emplace_back(sweeps[i].d_pz, fit.alpha);
    alpha_sigmas.push_back(fit.alpha_err);
    sigmas_usable = sigmas_usable && fit.alpha_err > 0.0;
    result.v0_per_sweep.push_back(fit.x0);
  }

  // Propagate per-sweep curvature uncertainties when they exist (noisy
  // data); noiseless fits fall back to residual-scaled errors.
  const AlphaCurveFit cal = fit_alpha_curve(
      alphas, radius, sigmas_usable ? &alpha_sigmas : nullptr);
  result.d0 = cal.d0;
  result.c1 = cal.c1;
  result.d0_err = cal.d0_err;
  result.c1_err = cal.c1_err;

  result.forces = extract_casimir(fits, cal.c1, cal.d0);
  for (const auto& s : result.forces) {
    if (s.f < 0.0)
      result.warnings.push_back("negative apparent force at d = " +
                                fmt_m(s.d) + " m");
  }
  return result;
}

}  // namespace casimir
