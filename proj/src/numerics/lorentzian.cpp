#include "nlcavity/numerics/lorentzian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nlcavity/errors.hpp"

namespace nlcavity::numerics {

double lorentzian(double omega, double center, double half_width, double area) {
    const double d = omega - center;
    return area * 2.0 * half_width / (d * d + half_width * half_width);
}

namespace {

// Crossing of the half-maximum level walking outward from the peak; negative if none.
double half_max_offset(const std::vector<double>& w, const std::vector<double>& s, std::size_t k, int dir) {
    const double half = 0.5 * s[k];
    std::size_t i = k;
    while (true) {
        if ((dir < 0 && i == 0) || (dir > 0 && i + 1 == s.size())) return -1.0;
        const std::size_t j = dir < 0 ? i - 1 : i + 1;
        if (s[j] <= half) {
            const double frac = (s[i] - half) / (s[i] - s[j]);
            return std::abs(w[i] + frac * (w[j] - w[i]) - w[k]);
        }
        i = j;
    }
}

}  // namespace

LorentzianFit fit_lorentzian(const std::vector<double>& omega, const std::vector<double>& spectrum) {
    const std::size_t n = omega.size();
    if (n != spectrum.size()) throw DomainError("fit_lorentzian: abscissa and spectrum lengths differ");
    if (n < 5) throw DomainError("fit_lorentzian: at least 5 samples are required");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(omega[i]) || !std::isfinite(spectrum[i])) throw DomainError("fit_lorentzian: non-finite sample");
        if (!(spectrum[i] > 0.0)) throw DomainError("fit_lorentzian: samples must be positive");
        if (i > 0 && !(omega[i] > omega[i - 1])) throw DomainError("fit_lorentzian: abscissae must increase");
    }
    const auto [mn, mx] = std::minmax_element(spectrum.begin(), spectrum.end());
    if (*mx - *mn <= 1e-12 * *mx) throw FitDegenerateError("fit_lorentzian: spectrum is flat");

    const std::size_t k = static_cast<std::size_t>(mx - spectrum.begin());
    const double peak = *mx;
    const double span = omega.back() - omega.front();
    const double hl = half_max_offset(omega, spectrum, k, -1);
    const double hr = half_max_offset(omega, spectrum, k, +1);
    double g0 = hl > 0 && hr > 0 ? 0.5 * (hl + hr) : std::max(hl, hr);
    if (!(g0 > 0.0)) g0 = 0.25 * span;

    // Parameters in units: center offset and width by g0, area by peak*g0/2.
    const double w_ref = omega[k];
    const double a_ref = 0.5 * peak * g0;
    Eigen::Vector3d x(0.0, 1.0, 1.0);

    auto residuals = [&](const Eigen::Vector3d& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        const double c = w_ref + p[0] * g0, g = std::abs(p[1]) * g0, a = p[2] * a_ref;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = omega[i] - c;
            const double den = d * d + g * g;
            const double model = a * 2.0 * g / den;
            r[static_cast<Eigen::Index>(i)] = (model - spectrum[i]) / peak;
            if (jac) {
                const auto ii = static_cast<Eigen::Index>(i);
                (*jac)(ii, 0) = a * 4.0 * g * d / (den * den) * g0 / peak;
                (*jac)(ii, 1) = (a * 2.0 / den - a * 4.0 * g * g / (den * den)) * g0 * (p[1] < 0 ? -1.0 : 1.0) / peak;
                (*jac)(ii, 2) = 2.0 * g / den * a_ref / peak;
            }
        }
    };

    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::VectorXd r(ni), r_trial(ni);
    Eigen::MatrixXd jac(ni, 3);
    residuals(x, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    for (int iter = 0; iter < 500 && !converged; ++iter) {
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d jtr = jac.transpose() * r;
        if (!(jtj.determinant() > 1e-30 * std::pow(jtj.trace(), 3))) {
            throw FitDegenerateError("fit_lorentzian: normal equations are singular");
        }
        bool improved = false;
        Eigen::Vector3d step;
        for (int inner = 0; inner < 40; ++inner) {
            Eigen::Matrix3d damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal();
            step = damped.ldlt().solve(-jtr);
            const Eigen::Vector3d trial = x + step;
            residuals(trial, r_trial, nullptr);
            const double c_trial = r_trial.squaredNorm();
            if (std::isfinite(c_trial) && c_trial < cost) {
                x = trial;
                const double rel = (cost - c_trial) / std::max(cost, 1e-300);
                cost = c_trial;
                lambda = std::max(lambda / 5.0, 1e-12);
                improved = true;
                converged = rel < 1e-15;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved || step.norm() < 1e-13) break;
        residuals(x, r, &jac);
    }
    residuals(x, r, nullptr);

    double s2 = 0.0;
    for (double v : spectrum) s2 += v * v;
    LorentzianFit fit;
    fit.center = w_ref + x[0] * g0;
    fit.half_width = std::abs(x[1]) * g0;
    fit.area = x[2] * a_ref;
    fit.residual = std::sqrt(r.squaredNorm() / static_cast<double>(n)) * peak / std::sqrt(s2 / static_cast<double>(n));
    return fit;
}

}  // namespace nlcavity::numerics
