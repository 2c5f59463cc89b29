#pragma once

#include <numbers>

namespace nlcavity::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double h = 6.62607015e-34;          // J s
inline constexpr double hbar = h / (2.0 * pi);       // J s
inline constexpr double e = 1.602176634e-19;         // C
inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double c0 = 299792458.0;            // m/s
inline constexpr double phi0 = h / (2.0 * e);        // Wb
inline constexpr double R_Q = h / (4.0 * e * e);     // Ohm

}  // namespace nlcavity::constants
