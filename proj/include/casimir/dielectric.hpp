#pragma once

#include <variant>
#include <vector>

namespace casimir {

// High-frequency continuation applied above the last table row.
enum class TailPolicy { truncate, drude_tail, power_law_tail };

struct Extrapolation {
  TailPolicy policy = TailPolicy::truncate;
  double omega_p = 0.0;  // rad/s, drude_tail only
  double gamma = 0.0;    // rad/s, drude_tail only
};

struct OpticalRow {
  double omega;   // rad/s, angular frequency on the real axis
  double im_eps;  // Im eps(omega), dimensionless, >= 0
};

/// Tabulated absorption spectrum Im eps(omega) with an extrapolation policy.
/// Rows must be strictly increasing in omega with omega > 0 and im_eps >= 0.
class OpticalTable {
 public:
  OpticalTable(std::vector<OpticalRow> rows, Extrapolation tail);
  const std::vector<OpticalRow>& rows() const { return rows_; }
  const Extrapolation& tail() const { return tail_; }

 private:
  std::vector<OpticalRow> rows_;
  Extrapolation tail_;
};

// eps(i xi) = 1 + (2/pi) Int_0^inf x Im eps(x) / (x^2 + xi^2) dx
//
// The table is interpolated log-log between rows. Below the first row the
// product x * Im eps(x) is held constant when the table starts above
// 1e11 rad/s (the IR continuation appropriate for conductors); tables that
// already reach the far infrared are truncated below. Above the last row
// the extrapolation policy applies. Requires xi > 0.
double kk_transform(const OpticalTable& table, double xi);

struct DrudeParams {
  double omega_p;  // plasma frequency, rad/s, > 0
  double gamma;    // relaxation rate, rad/s, > 0
};

struct OscillatorTerm {
  double strength;  // dimensionless, > 0
  double omega0;    // resonance, rad/s, > 0
  double gamma;     // damping, rad/s, >= 0
};

struct OscillatorParams {
  std::vector<OscillatorTerm> oscillators;
};

/// A material's dielectric function evaluated on the imaginary frequency
/// axis, where it is real, >= 1 and non-increasing.
class DielectricModel {
 public:
  static DielectricModel vacuum();
  static DielectricModel constant(double eps);  // eps >= 1
  static DielectricModel drude(DrudeParams p);
  static DielectricModel oscillators(OscillatorParams p);
  static DielectricModel tabulated(OpticalTable t);
  // 1 + sum of the parts' susceptibilities.
  static DielectricModel sum(std::vector<DielectricModel> parts);

  // eps(i xi) for xi >= 0. The drude variant diverges at xi = 0 and
  // reports std::domain_error there; integration must use open rules.
  double eps_at_imaginary(double xi) const;

 private:
  struct Vacuum {};
  struct Constant {
    double eps;
  };
  struct Sum {
    std::vector<DielectricModel> parts;
  };
  using Rep = std::variant<Vacuum, Constant, DrudeParams, OscillatorParams,
                           OpticalTable, Sum>;
  explicit DielectricModel(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

}  // namespace casimir
