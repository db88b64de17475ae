#include "casimir/stack.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {

double s_factor(double eps_k, double eps3, double p) {
  const double radicand = p * p - 1.0 + eps_k / eps3;
  if (!(radicand >= 0.0))
    throw std::domain_error("s_factor: negative radicand (p < 1?)");
  return std::sqrt(radicand);
}

DeltaPair fresnel_deltas(double eps_j, double s_j, double eps_k, double s_k) {
  const double a = s_k * eps_j;
  const double b = s_j * eps_k;
  return {(a - b) / (a + b), (s_k - s_j) / (s_k + s_j)};
}

PreparedStack PreparedStack::make(const LayerStack& stack, double xi,
                                  double eps3) {
  PreparedStack p;
  p.eps3 = eps3;
  p.eps_substrate = stack.substrate.eps_at_imaginary(xi);
  p.eps_film.reserve(stack.films.size());
  p.phi_coeff.reserve(stack.films.size());
  const double coeff = 2.0 * xi * std::sqrt(eps3) / constants::c;
  for (const auto& film : stack.films) {
    if (!(film.thickness > 0.0))
      throw std::invalid_argument("layer: thickness must be > 0");
    p.eps_film.push_back(film.material.eps_at_imaginary(xi));
    p.phi_coeff.push_back(coeff * film.thickness);
  }
  return p;
}

DeltaPair PreparedStack::deltas_at(double p) const {
  const double s3 = p;  // s_factor(eps3, eps3, p)
  const double s_sub = s_factor(eps_substrate, eps3, p);
  if (eps_film.empty())
    return fresnel_deltas(eps3, s3, eps_substrate, s_sub);

  const std::size_t n = eps_film.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = s_factor(eps_film[i], eps3, p);

  // Innermost interface, then fold outward one film at a time.
  DeltaPair r = fresnel_deltas(eps_film[0], s[0], eps_substrate, s_sub);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(-phi_coeff[i] * s[i]);
    DeltaPair up;
    if (i + 1 < n) {
      up = fresnel_deltas(eps_film[i + 1], s[i + 1], eps_film[i], s[i]);
    } else {
      up = fresnel_deltas(eps3, s3, eps_film[i], s[i]);
    }
    r.delta1 = (up.delta1 + r.delta1 * e) / (1.0 + up.delta1 * r.delta1 * e);
    r.delta2 = (up.delta2 + r.delta2 * e) / (1.0 + up.delta2 * r.delta2 * e);
  }
  return r;
}

DeltaPair effective_deltas(const LayerStack& stack, const IntegrandPoint& pt) {
  if (!(pt.xi > 0.0) || !(pt.p >= 1.0) || !(pt.d > 0.0) || !(pt.eps3 >= 1.0))
    throw std::invalid_argument(
        "effective_deltas: need xi > 0, p >= 1, d > 0, eps3 >= 1");
  return PreparedStack::make(stack, pt.xi, pt.eps3).deltas_at(pt.p);
}

}  // namespace casimir
