#include "nlcavity/numerics/ode.hpp"

#include <algorithm>
#include <cmath>

#include "nlcavity/errors.hpp"

namespace nlcavity::numerics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

std::vector<Eigen::VectorXcd> evolve_ode(const ComplexRhs& rhs, const Eigen::VectorXcd& y0, const RealGrid& t_grid,
                                         const Tolerance& tol, OdeStats* stats) {
    tol.validate();
    const Eigen::Index n = y0.size();
    std::vector<Eigen::VectorXcd> out;
    out.reserve(t_grid.size());
    out.push_back(y0);
    if (t_grid.size() == 1) return out;

    Eigen::VectorXcd y = y0, y_new(n), tmp(n), err(n);
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);

    double t = t_grid.front();
    rhs(t, y, k1);
    if (!k1.allFinite()) throw DomainError("evolve_ode: rhs not finite at initial state");

    double h = t_grid[1] - t_grid[0];
    {
        const double ymax = std::max(1.0, y.cwiseAbs().maxCoeff());
        const double d1 = k1.cwiseAbs().maxCoeff();
        if (d1 > 0.0) h = std::min(h, 0.01 * ymax / d1);
    }
    OdeStats local;

    for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
        const double t_target = t_grid[gi];
        while (t < t_target) {
            double h_free = h;
            bool last = false;
            if (t + 1.01 * h >= t_target) {
                h = t_target - t;
                last = true;
            }
            if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
                throw StiffnessError("evolve_ode: step size underflow", t);
            }
            tmp = y + h * a21 * k1;
            rhs(t + c2 * h, tmp, k2);
            tmp = y + h * (a31 * k1 + a32 * k2);
            rhs(t + c3 * h, tmp, k3);
            tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs(t + c4 * h, tmp, k4);
            tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs(t + c5 * h, tmp, k5);
            tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs(t + h, tmp, k6);
            y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(t + h, y_new, k7);
            err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double norm = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                const double r = std::abs(err[i]) / sc;
                norm += r * r;
            }
            norm = std::sqrt(norm / static_cast<double>(std::max<Eigen::Index>(n, 1)));
            if (!std::isfinite(norm)) norm = 1e10;

            if (norm <= 1.0) {
                t = last ? t_target : t + h;
                y.swap(y_new);
                k1.swap(k7);
                ++local.accepted;
                const double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
                h = last ? std::max(h_free, h * fac) : h * fac;
            } else {
                ++local.rejected;
                h *= std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.9);
            }
            if (local.accepted + local.rejected > static_cast<long>(tol.max_iter)) {
                throw ConvergenceError("evolve_ode: step budget exhausted", t);
            }
        }
        out.push_back(y);
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace nlcavity::numerics
