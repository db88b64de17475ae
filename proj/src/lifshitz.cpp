#include "casimir/lifshitz.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>
#include <string>

#include "casimir/constants.hpp"

namespace casimir {

namespace {

std::string fmt_m(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

}  // namespace

void Geometry::validate() const {
  if (!(radius > 0.0))
    throw std::invalid_argument("geometry: radius must be > 0");
  if (!(separation > 0.0))
    throw std::invalid_argument("geometry: separation must be > 0");
}

double ideal_metal_force(double radius, double separation) {
  if (!(radius > 0.0) || !(separation > 0.0))
    throw std::invalid_argument("ideal_metal_force: radius, separation > 0");
  const double pi3 = M_PI * M_PI * M_PI;
  return pi3 * constants::hbar * constants::c * radius /
         (360.0 * separation * separation * separation);
}

namespace {

// G(xi, x) = log(1 - D1 D1' e^-x) + log(1 - D2 D2' e^-x), both terms <= 0
// for media denser than the gap.
double log_terms(const DeltaPair& sphere, const DeltaPair& plate, double emx) {
  const double t1 = std::log1p(-sphere.delta1 * plate.delta1 * emx);
  const double t2 = std::log1p(-sphere.delta2 * plate.delta2 * emx);
  if (t1 > 1e-12 || t2 > 1e-12)
    throw std::domain_error(
        "lifshitz: positive log term (repulsive product); configuration is "
        "outside the supported attractive regime");
  return t1 + t2;
}

}  // namespace

double force_sphere_plate(const LayerStack& sphere, const LayerStack& plate,
                          const DielectricModel& gap, const Geometry& geom,
                          const QuadratureConfig& quad, double* rel_err_out) {
  geom.validate();
  quad.validate();

  const double d = geom.separation;
  const double xi_scale = constants::c / (2.0 * d);

  // eta = 2 d xi / c. The support ends where x0 = eta sqrt(eps3) reaches
  // x_max, and eps3 >= 1, so eta <= x_max always covers it.
  const double xi_max = quad.xi_max > 0.0 ? quad.xi_max : 1e4 * xi_scale;
  const double eta_max = std::min(quad.x_max, xi_max / xi_scale);
  if (!(eta_max > 0.0)) return 0.0;

  // Exponential maps: eta = -ln v with v in [e^-eta_max, 1); the upper end
  // is chopped just short of v = 1 so xi = 0 is never evaluated, even by
  // quadrature nodes that round onto the endpoint. The removed sliver
  // contributes O(1e-12) of the integral.
  const double v_min = std::exp(-eta_max);
  const double v_max = 1.0 - 1e-12;

  EvalBudget budget(quad.max_evals);
  const double inner_tol = quad.rel_tol / 3.0;
  const double outer_tol = quad.rel_tol / 3.0;

  auto outer = [&](double v) -> double {
    const double eta = -std::log(v);
    if (!(eta > 0.0)) return 0.0;
    const double xi = xi_scale * eta;
    const double eps3 = gap.eps_at_imaginary(xi);
    const double x0 = eta * std::sqrt(eps3);
    if (x0 >= quad.x_max) return 0.0;

    const PreparedStack sp = PreparedStack::make(sphere, xi, eps3);
    const PreparedStack pl = PreparedStack::make(plate, xi, eps3);

    // x = x0 - ln u on [x0, x_max] <-> u in [e^-(x_max-x0), 1].
    const double u_min = std::exp(-(quad.x_max - x0));
    auto inner = [&](double u) -> double {
      const double x = x0 - std::log(u);
      const double p = x / x0;
      const double emx = std::exp(-x);
      const double g = log_terms(sp.deltas_at(p), pl.deltas_at(p), emx);
      return x * g / u;
    };
    const IntegralResult in =
        integrate(inner, u_min, 1.0, quad.scheme, inner_tol, budget);
    return in.value / v;
  };

  IntegralResult out;
  try {
    out = integrate(outer, v_min, v_max, quad.scheme, outer_tol, budget);
  } catch (const quadrature_error& e) {
    const double pref = constants::hbar * geom.radius * constants::c /
                        (16.0 * M_PI * d * d * d);
    throw quadrature_error(
        "force_sphere_plate: " + std::string(e.what()),
        IntegralResult{pref * e.partial().value, pref * e.partial().error,
                       budget.used});
  }

  // F = hbar R c / (16 pi d^3) * Int_0^eta_max I_x(eta) deta, attractive.
  const double pref = constants::hbar * geom.radius * constants::c /
                      (16.0 * M_PI * d * d * d);
  const double force = pref * out.value;
  if (rel_err_out) {
    const double denom = std::fabs(out.value);
    *rel_err_out =
        denom > 0.0 ? out.error / denom + inner_tol : 0.0;
  }
  return force;
}

std::vector<ForcePoint> force_curve(const LayerStack& sphere,
                                    const LayerStack& plate,
                                    const DielectricModel& gap, double radius,
                                    const std::vector<double>& separations,
                                    const QuadratureConfig& quad, int jobs) {
  for (std::size_t i = 0; i < separations.size(); ++i) {
    if (!(separations[i] > 0.0))
      throw std::invalid_argument("force_curve: separations must be > 0");
    if (i > 0 && !(separations[i] > separations[i - 1]))
      throw std::invalid_argument("force_curve: separations must be sorted");
  }
  std::vector<ForcePoint> out(separations.size());
  if (separations.empty()) return out;

  auto eval_point = [&](std::size_t i) {
    Geometry g{radius, separations[i]};
    double rel_err = 0.0;
    try {
      const double f = force_sphere_plate(sphere, plate, gap, g, quad,
                                          &rel_err);
      out[i] = ForcePoint{separations[i], f, rel_err};
    } catch (const quadrature_error& e) {
      throw quadrature_error("force_curve: point " + std::to_string(i) +
                                 " (d = " + fmt_m(separations[i]) +
                                 " m): " + e.what(),
                             e.partial());
    }
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < separations.size(); ++i) eval_point(i);
    return out;
  }

  std::vector<std::future<void>> futures;
  futures.reserve(separations.size());
  for (std::size_t i = 0; i < separations.size(); ++i) {
    futures.push_back(std::async(std::launch::async, eval_point, i));
    if (futures.size() >= static_cast<std::size_t>(jobs)) {
      for (auto& f : futures) f.get();
      futures.clear();
    }
  }
  for (auto& f : futures) f.get();
  return out;
}

}  // namespace casimir
