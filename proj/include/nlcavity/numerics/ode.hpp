#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nlcavity/numerics/tolerance.hpp"

namespace nlcavity::numerics {

/// rhs(t, y, dydt). The output buffer is preallocated to y.size().
using ComplexRhs = std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
};

/// Dormand-Prince 5(4) integration, sampled at every grid point (the first
/// entry is y0 at grid.front()).
[[nodiscard]] std::vector<Eigen::VectorXcd> evolve_ode(const ComplexRhs& rhs, const Eigen::VectorXcd& y0,
                                                       const RealGrid& t_grid,
                                                       const Tolerance& tol = {1e-10, 1e-8, 1000000},
                                                       OdeStats* stats = nullptr);

}  // namespace nlcavity::numerics
