#include "casimir/dielectric.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

// Threshold below which a table is considered to already cover the far
// infrared, making the below-table contribution negligible.
constexpr double kIrCovered = 1e11;  // rad/s

double last_segment_slope(const std::vector<OpticalRow>& rows) {
  const auto& a = rows[rows.size() - 2];
  const auto& b = rows.back();
  if (a.im_eps <= 0.0 || b.im_eps <= 0.0) return 0.0;
  return std::log(b.im_eps / a.im_eps) / std::log(b.omega / a.omega);
}

}  // namespace

OpticalTable::OpticalTable(std::vector<OpticalRow> rows, Extrapolation tail)
    : rows_(std::move(rows)), tail_(tail) {
  if (rows_.empty()) throw std::invalid_argument("optical table: empty");
  double prev = 0.0;
  for (const auto& r : rows_) {
    if (!(r.omega > prev) || !std::isfinite(r.omega))
      throw std::invalid_argument(
          "optical table: omega must be strictly increasing and > 0");
    if (!(r.im_eps >= 0.0) || !std::isfinite(r.im_eps))
      throw std::invalid_argument("optical table: im_eps must be >= 0");
    prev = r.omega;
  }
  switch (tail_.policy) {
    case TailPolicy::truncate:
      break;
    case TailPolicy::drude_tail:
      if (!(tail_.omega_p > 0.0) || !(tail_.gamma > 0.0))
        throw std::invalid_argument(
            "optical table: drude_tail requires omega_p > 0 and gamma > 0");
      break;
    case TailPolicy::power_law_tail: {
      if (rows_.size() < 2)
        throw std::invalid_argument(
            "optical table: power_law_tail needs at least two rows");
      if (rows_.back().im_eps > 0.0 && !(last_segment_slope(rows_) < -1.0))
        throw std::invalid_argument(
            "optical table: power_law_tail slope must be < -1 for an "
            "integrable tail");
      break;
    }
  }
}

namespace {

// Integrates tan(u) * im_eps(xi tan u) over one table segment, with im_eps
// interpolated log-log (linear fallback where a bound vanishes).
double segment_integral(double xa, double ya, double xb, double yb,
                        double xi) {
  if (ya <= 0.0 && yb <= 0.0) return 0.0;
  const bool loglog = ya > 0.0 && yb > 0.0;
  double slope = 0.0;
  if (loglog) slope = std::log(yb / ya) / std::log(xb / xa);

  const double ua = std::atan(xa / xi);
  const double ub = std::atan(xb / xi);
  const int n = (ub - ua) > 0.02 ? 20 : 4;
  const auto& [nodes, weights] = gauss_legendre_nodes(n);
  const double mid = 0.5 * (ua + ub);
  const double half = 0.5 * (ub - ua);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = mid + half * nodes[i];
    const double x = xi * std::tan(u);
    double y;
    if (loglog) {
      y = ya * std::exp(slope * std::log(x / xa));
    } else {
      y = ya + (yb - ya) * (x - xa) / (xb - xa);
    }
    acc += weights[i] * std::tan(u) * y;
  }
  return acc * half;
}

double drude_tail_integral(double x_start, double omega_p, double gamma,
                           double xi) {
  // Int_{x_start}^inf omega_p^2 gamma / ((x^2+gamma^2)(x^2+xi^2)) dx
  const double s = omega_p * omega_p * gamma;
  const double rel = std::fabs(xi - gamma) / std::max(xi, gamma);
  if (rel > 1e-6) {
    const double ig = (M_PI_2 - std::atan(x_start / gamma)) / gamma;
    const double ix = (M_PI_2 - std::atan(x_start / xi)) / xi;
    return s * (ig - ix) / (xi * xi - gamma * gamma);
  }
  // Degenerate xi ~ gamma: Int dx/(x^2+g^2)^2 closed form.
  const double g = 0.5 * (xi + gamma);
  return s * (M_PI / (4.0 * g * g * g) -
              x_start / (2.0 * g * g * (x_start * x_start + g * g)) -
              std::atan(x_start / g) / (2.0 * g * g * g));
}

double power_tail_integral(double x_start, double y_start, double slope,
                           double xi) {
  if (y_start <= 0.0) return 0.0;
  // x = x_start / t maps the tail onto (0, 1]; integrand is smooth there.
  const int n = 24;
  const auto& [nodes, weights] = gauss_legendre_nodes(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (1.0 + nodes[i]);
    const double tp = std::pow(t, -1.0 - slope);
    acc += weights[i] * tp / (x_start * x_start + xi * xi * t * t);
  }
  return acc * 0.5 * y_start * x_start * x_start;
}

}  // namespace

double kk_transform(const OpticalTable& table, double xi) {
  if (!(xi > 0.0))
    throw std::domain_error("kk_transform: xi must be > 0");
  const auto& rows = table.rows();

  double chi = 0.0;  // Int x Im eps / (x^2 + xi^2) dx

  // Below the table: hold x * Im eps constant when the table starts above
  // the far infrared.
  if (rows.front().omega > kIrCovered && rows.front().im_eps > 0.0) {
    const double k = rows.front().omega * rows.front().im_eps;
    chi += k * std::atan(rows.front().omega / xi) / xi;
  }

  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    chi += segment_integral(rows[i].omega, rows[i].im_eps, rows[i + 1].omega,
                            rows[i + 1].im_eps, xi);
  }

  const auto& tail = table.tail();
  switch (tail.policy) {
    case TailPolicy::truncate:
      break;
    case TailPolicy::drude_tail:
      chi += drude_tail_integral(rows.back().omega, tail.omega_p, tail.gamma,
                                 xi);
      break;
    case TailPolicy::power_law_tail:
      chi += power_tail_integral(rows.back().omega, rows.back().im_eps,
                                 last_segment_slope(rows), xi);
      break;
  }

  return 1.0 + 2.0 / M_PI * chi;
}

DielectricModel DielectricModel::vacuum() { return DielectricModel(Vacuum{}); }

DielectricModel DielectricModel::constant(double eps) {
  if (!(eps >= 1.0))
    throw std::invalid_argument("dielectric: constant eps must be >= 1");
  return DielectricModel(Constant{eps});
}

DielectricModel DielectricModel::drude(DrudeParams p) {
  if (!(p.omega_p > 0.0) || !(p.gamma > 0.0))
    throw std::invalid_argument("dielectric: drude needs omega_p, gamma > 0");
  return DielectricModel(p);
}

DielectricModel DielectricModel::oscillators(OscillatorParams p) {
  for (const auto& o : p.oscillators) {
    if (!(o.strength > 0.0) || !(o.omega0 > 0.0) || !(o.gamma >= 0.0))
      throw std::invalid_argument(
          "dielectric: oscillator needs strength > 0, omega0 > 0, gamma >= 0");
  }
  return DielectricModel(std::move(p));
}

DielectricModel DielectricModel::tabulated(OpticalTable t) {
  return DielectricModel(std::move(t));
}

DielectricModel DielectricModel::sum(std::vector<DielectricModel> parts) {
  if (parts.empty())
    throw std::invalid_argument("dielectric: sum needs at least one part");
  return DielectricModel(Sum{std::move(parts)});
}

double DielectricModel::eps_at_imaginary(double xi) const {
  if (!(xi >= 0.0))
    throw std::domain_error("eps_at_imaginary: xi must be >= 0");
  struct Visitor {
    double xi;
    double operator()(const Vacuum&) const { return 1.0; }
    double operator()(const Constant& c) const { return c.eps; }
    double operator()(const DrudeParams& p) const {
      if (xi == 0.0)
        throw std::domain_error(
            "eps_at_imaginary: drude diverges at xi = 0; evaluate at xi > 0");
      return 1.0 + p.omega_p * p.omega_p / (xi * (xi + p.gamma));
    }
    double operator()(const OscillatorParams& p) const {
      double eps = 1.0;
      for (const auto& o : p.oscillators) {
        eps += o.strength * o.omega0 * o.omega0 /
               (o.omega0 * o.omega0 + xi * xi + o.gamma * xi);
      }
      return eps;
    }
    double operator()(const OpticalTable& t) const {
      return kk_transform(t, xi);  // requires xi > 0
    }
    double operator()(const Sum& s) const {
      double eps = 1.0;
      for (const auto& part : s.parts) eps += part.eps_at_imaginary(xi) - 1.0;
      return eps;
    }
  };
  return std::visit(Visitor{xi}, rep_);
}

}  // namespace casimir
