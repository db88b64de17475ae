#pragma once

namespace casimir::constants {

// CODATA 2018, SI units.
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double c = 299792458.0;          // m / s
inline constexpr double eps0 = 8.8541878128e-12;  // F / m

}  // namespace casimir::constants
