#pragma once

#include <functional>

#include "nlcavity/numerics/tolerance.hpp"

namespace nlcavity::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
};

/// Globally adaptive Simpson rule. max_iter bounds the number of bisections.
[[nodiscard]] QuadratureResult integrate_adaptive_ex(const std::function<double(double)>& f, double a,
                                                     double b, const Tolerance& tol = {});

[[nodiscard]] double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                        const Tolerance& tol = {});

}  // namespace nlcavity::numerics
