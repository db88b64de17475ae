#pragma once

#include <vector>

#include "casimir/dielectric.hpp"

namespace casimir {

/// Reflection amplitudes at a Lifshitz integration point. delta1 is the TM
/// (p) polarization, delta2 the TE (s) polarization. Index convention: the
/// gap medium carries the first subscript everywhere, so delta_{3k} means
/// "looking from the gap into k".
struct DeltaPair {
  double delta1;  // TM
  double delta2;  // TE
};

// s_k = sqrt(p^2 - 1 + eps_k / eps3), the positive root. s3 = p.
double s_factor(double eps_k, double eps3, double p);

// delta1_jk = (s_k eps_j - s_j eps_k) / (s_k eps_j + s_j eps_k)
// delta2_jk = (s_k - s_j) / (s_k + s_j)
// Antisymmetric under swapping (j, k).
DeltaPair fresnel_deltas(double eps_j, double s_j, double eps_k, double s_k);

struct Layer {
  DielectricModel material;
  double thickness;  // meters, > 0
};

/// Semi-infinite substrate plus finite films, innermost (adjacent to the
/// substrate) first. An empty film list is a bare half-space.
struct LayerStack {
  DielectricModel substrate;
  std::vector<Layer> films;
};

struct IntegrandPoint {
  double xi;    // imaginary angular frequency, rad/s, > 0
  double p;     // angle variable, >= 1
  double d;     // surface separation, meters, > 0
  double eps3;  // gap-medium eps(i xi), >= 1
};

/// Per-frequency snapshot of a stack: material responses evaluated once at
/// xi so the angle sweep only costs algebra. phi_coeff[i] * s_i is the
/// decay exponent 2 t_i xi s_i sqrt(eps3) / c across film i.
struct PreparedStack {
  double eps_substrate;
  std::vector<double> eps_film;   // innermost first
  std::vector<double> phi_coeff;  // 2 t_i xi sqrt(eps3) / c
  double eps3;

  static PreparedStack make(const LayerStack& stack, double xi, double eps3);
  DeltaPair deltas_at(double p) const;
};

// Effective reflection amplitudes of the coated stack seen from the gap.
// Bare half-space reduces to fresnel_deltas(gap, substrate); films combine
// from the substrate outward through
//   r' = (delta_up + r e^(-phi)) / (1 + delta_up r e^(-phi)).
DeltaPair effective_deltas(const LayerStack& stack, const IntegrandPoint& pt);

}  // namespace casimir
