#pragma once

#include <vector>

#include "casimir/quadrature.hpp"
#include "casimir/stack.hpp"

namespace casimir {

struct Geometry {
  double radius;      // sphere radius R, meters, > 0
  double separation;  // closest approach d, meters, > 0

  void validate() const;
  // The proximity form assumes d << R; flag configurations beyond d/R = 0.1.
  bool pfa_strained() const { return separation / radius > 0.1; }
};

// |F| = pi^3 hbar c R / (360 d^3), the perfectly reflecting sphere-plate
// closed form. Returns the magnitude.
double ideal_metal_force(double radius, double separation);

// Sphere-plate force at a single separation. Negative means attraction.
// The double integral runs over imaginary frequency and the exponent
// variable x = 2 d xi p sqrt(eps3) / c, both mapped onto finite intervals
// through exponential transforms and integrated with quad.scheme. The
// integrand is truncated beyond quad.x_max and xi beyond quad.xi_max
// (automatic when 0). Each log term is checked to be <= 0.
//
// Throws quadrature_error when quad.max_evals is exhausted.
double force_sphere_plate(const LayerStack& sphere, const LayerStack& plate,
                          const DielectricModel& gap, const Geometry& geom,
                          const QuadratureConfig& quad,
                          double* rel_err_out = nullptr);

struct ForcePoint {
  double separation;  // meters
  double force;       // newtons, signed
  double rel_err;     // estimated relative error
};

// One force_sphere_plate per separation; separations must be positive and
// sorted ascending. Points are independent and evaluated on `jobs` threads;
// output order always matches the input. Failures are reported with the
// offending point index.
std::vector<ForcePoint> force_curve(const LayerStack& sphere,
                                    const LayerStack& plate,
                                    const DielectricModel& gap, double radius,
                                    const std::vector<double>& separations,
                                    const QuadratureConfig& quad,
                                    int jobs = 1);

}  // namespace casimir
