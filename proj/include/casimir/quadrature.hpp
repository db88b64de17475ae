#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace casimir {

enum class QuadScheme { gauss_legendre_mapped, tanh_sinh };

struct QuadratureConfig {
  double rel_tol = 1e-6;
  double xi_max = 0.0;  // rad/s cutoff for the frequency axis; 0 = automatic
  double x_max = 50.0;  // cutoff on the dimensionless exponent variable
  QuadScheme scheme = QuadScheme::gauss_legendre_mapped;
  std::size_t max_evals = 50'000'000;

  // Throws std::invalid_argument when outside the supported ranges
  // (0 < rel_tol < 1e-2, x_max >= 30, xi_max >= 0, max_evals > 0).
  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  std::size_t evals = 0;
};

/// Tolerance not met within the evaluation budget. Carries the best value
/// obtained so far together with its error estimate.
class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(const std::string& what, IntegralResult partial)
      : std::runtime_error(what), partial_(partial) {}
  const IntegralResult& partial() const noexcept { return partial_; }

 private:
  IntegralResult partial_;
};

/// Shared evaluation budget for nested integrals.
struct EvalBudget {
  std::size_t limit;
  std::size_t used = 0;
  explicit EvalBudget(std::size_t limit_) : limit(limit_) {}
  bool available(std::size_t n) const { return used + n <= limit; }
  void charge(std::size_t n) { used += n; }
};

// Integrate f over the finite interval [a, b] to relative tolerance rel_tol.
//
// gauss_legendre_mapped: globally adaptive Gauss-Legendre with Kronrod
// error estimate (7/15 pair), bisecting the worst interval first.
// tanh_sinh: double-exponential rule with level doubling; robust to
// endpoint singularities.
//
// Throws quadrature_error when the budget is exhausted before the
// tolerance is met.
IntegralResult integrate(const std::function<double(double)>& f, double a,
                         double b, QuadScheme scheme, double rel_tol,
                         EvalBudget& budget);

IntegralResult integrate(const std::function<double(double)>& f, double a,
                         double b, QuadScheme scheme, double rel_tol,
                         std::size_t max_evals = 1'000'000);

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre_nodes(int n);

}  // namespace casimir
