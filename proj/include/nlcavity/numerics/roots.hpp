#pragma once

#include <functional>
#include <vector>

#include "nlcavity/numerics/tolerance.hpp"

namespace nlcavity::numerics {

struct CubicRoot {
    double value;
    int multiplicity;
};

/// Real roots of E^3 + c2 E^2 + c1 E + c0, ascending, each listed once.
[[nodiscard]] std::vector<CubicRoot> solve_cubic_real(double c2, double c1, double c0);

/// Normalized discriminant (q/2)^2 + (p/3)^3 of the depressed cubic; negative
/// means three distinct real roots.
[[nodiscard]] double cubic_discriminant(double c2, double c1, double c0);

/// Brent's method on a sign-changing bracket.
[[nodiscard]] double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                                         const Tolerance& tol = {1e-14, 1e-14, 200});

/// Brent's parabolic/golden minimizer on [lo, hi]. Returns the abscissa.
[[nodiscard]] double minimize_bracketed(const std::function<double(double)>& f, double lo, double hi,
                                        double x_tol, int max_iter = 200);

}  // namespace nlcavity::numerics
