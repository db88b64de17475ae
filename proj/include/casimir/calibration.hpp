#pragma once

#include <string>
#include <utility>
#include <vector>

namespace casimir {

struct SweepPoint {
  double v_bias;  // volts
  double a;       // bridge output, arbitrary units
};

/// One bias-voltage sweep at fixed piezo extension.
struct SweepRecord {
  double d_pz;  // piezo extension, meters
  std::vector<SweepPoint> points;
};

/// y = alpha (x + x0)^2 + beta.
struct QuadraticFit {
  double alpha;         // curvature, a.u. / V^2
  double x0;            // vertex offset, volts (equals the residual voltage)
  double beta;          // vertex value, a.u.
  double residual_rms;  // a.u.
  double alpha_err;     // standard error of the curvature, a.u. / V^2
};

// Ordinary least squares in the monomial basis with optional per-point
// weights, then back-substitution to vertex form. Requires >= 5 points with
// distinct bias values; a rank-deficient design is an error.
QuadraticFit fit_parabola(const SweepRecord& sweep,
                          const std::vector<double>* weights = nullptr);

struct AlphaCurveFit {
  double d0;      // meters
  double c1;      // a.u. / newton
  double d0_err;  // standard error, meters (0 when dof = 0)
  double c1_err;  // standard error, a.u./N
};

// Fits alpha = c1 eps0 pi R / (d0 - d_pz): linear regression of 1/alpha
// against d_pz seeds one Gauss-Newton refinement of the nonlinear form.
// alphas holds (d_pz, alpha) pairs, at least two at distinct d_pz. A
// non-negative regression slope means alpha does not grow as the surfaces
// approach and is reported as inconsistent data.
//
// When alpha_sigmas is given (one per point), points are weighted by
// inverse variance and the standard errors propagate those sigmas;
// otherwise the errors are scaled from the fit residuals.
AlphaCurveFit fit_alpha_curve(const std::vector<std::pair<double, double>>& alphas,
                              double radius,
                              const std::vector<double>* alpha_sigmas = nullptr);

struct ForceSample {
  double d;  // separation d0 - d_pz, meters
  double f;  // |F_C|, newtons
};

// |F_C| = beta / c1 per sweep, at d = d0 - d_pz, sorted by d.
std::vector<ForceSample> extract_casimir(
    const std::vector<std::pair<double, QuadraticFit>>& fits, double c1,
    double d0);

struct CalibrationResult {
  double d0 = 0.0;
  double c1 = 0.0;
  double d0_err = 0.0;
  double c1_err = 0.0;
  std::vector<double> v0_per_sweep;  // volts, input sweep order
  std::vector<ForceSample> forces;   // sorted by separation
  std::vector<std::string> warnings;
};

// Full pipeline: per-sweep parabola fits, the alpha(d_pz) calibration, and
// force extraction. Flags non-positive curvatures and negative vertex
// values as warnings without dropping them.
CalibrationResult analyze_dataset(const std::vector<SweepRecord>& sweeps,
                                  double radius);

}  // namespace casimir
