#pragma once

#include <vector>

namespace nlcavity::numerics {

/// Model S(w) = A * 2g / ((w - w0)^2 + g^2).
struct LorentzianFit {
    double center = 0.0;
    double half_width = 0.0;
    double area = 0.0;
    double residual = 0.0;  ///< RMS(model - S) / RMS(S)
};

[[nodiscard]] double lorentzian(double omega, double center, double half_width, double area);

/// Levenberg-Marquardt fit seeded from the peak sample and a half-maximum scan.
[[nodiscard]] LorentzianFit fit_lorentzian(const std::vector<double>& omega, const std::vector<double>& spectrum);

/// Residual at or above this value marks a spectrum as non-Lorentzian.
inline constexpr double lorentzian_residual_gate = 0.05;

}  // namespace nlcavity::numerics
