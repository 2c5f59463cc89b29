#include "nlcavity/detector/detector.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "nlcavity/constants.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/numerics/lorentzian.hpp"
#include "nlcavity/numerics/quadrature.hpp"
#include "nlcavity/numerics/roots.hpp"

namespace nlcavity::detector {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

double flux_angle(const DetectorParams& p) { return pi * p.Phi_ext; }

double secant(const DetectorParams& p) {
    const double c = std::cos(flux_angle(p));
    if (std::abs(c) < 1e-12) throw DomainError("flux bias at half a flux quantum: secant singularity");
    return 1.0 / c;
}

double bose(double omega, double T) {
    if (T <= 0.0 || omega == 0.0) return 0.0;
    return 1.0 / std::expm1(constants::hbar * std::abs(omega) / (constants::k_B * T));
}

struct Model {
    double gT, gm, wT, wm, KTm, Kd, K;
};

Model model(const DetectorParams& p) {
    const auto c = coupling_constants(p);
    const double gm = p.gamma_bm();
    return {p.gamma_pT(), gm, p.omega_T, p.omega_m, c.K_Tm, c.K_d,
            c.K_d - 2.0 * p.omega_T * p.omega_m * c.K_Tm * c.K_Tm / (p.omega_m * p.omega_m + gm * gm)};
}

/// Mechanical susceptibility factor 1/(y - w_m + i g_m) + 1/(-y - w_m - i g_m).
cplx mech(const Model& m, cplx y) { return 1.0 / (y - m.wm + I * m.gm) + 1.0 / (-y - m.wm - I * m.gm); }

cplx kappa(const Model& m, cplx x) { return std::pow(m.wT * m.KTm, 2) / (4.0 * pi) / (x - m.wT + I * m.gT); }
cplx D_of(const Model& m, cplx x) { return m.wT * m.Kd / (2.0 * pi) / (x - m.wT + I * m.gT); }

struct Blocks {
    cplx P, Q, R, Rp;
};

/// Coupled-response blocks at complex frequency omega, with the mechanical factor M(omega - omega_p) replaced by `mf`.
Blocks blocks(const Model& m, double dw, double a2, cplx omega, cplx mf) {
    const cplx w2 = omega - 2.0 * dw;
    const cplx k1 = kappa(m, omega), k2 = kappa(m, w2);
    const cplx m0 = mech(m, 0.0);
    Blocks b;
    b.P = 1.0 - 2.0 * a2 * (k1 * m0 + k1 * mf + D_of(m, omega));
    b.Q = 1.0 + 2.0 * a2 * (k2 * m0 + k2 * mf + D_of(m, w2));
    b.R = 2.0 * k1 * mf + D_of(m, omega);
    b.Rp = 2.0 * k2 * mf + D_of(m, w2);
    return b;
}

cplx det_of(const Blocks& b, double a2) { return b.P * b.Q + a2 * a2 * b.R * b.Rp; }

double omega_p(const DetectorParams& p, const DrivePoint& d) { return p.omega_T + d.delta_omega; }

double drive_rhs(const DetectorParams& p, const DrivePoint& d) {
    return std::sqrt(2.0 * pi * d.I_0 * d.I_0 * p.Z_p * p.gamma_pT() / (constants::hbar * omega_p(p, d)));
}

double signal_prefactor(const DetectorParams&, const DrivePoint& d, const Model& m) {
    const double g = m.gT;
    return std::pow(d.I_0 * m.KTm * m.wT / g, 2) * g * g / (g * g + d.delta_omega * d.delta_omega);
}

/// pref * cavity factor * |alpha1/c + alpha2/c * ratio|^2 at omega.
double transduction(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega, const Model& m) {
    const double wp = omega_p(p, d), g = m.gT, dw = d.delta_omega;
    const auto rc = response_coeffs(p, d, chi, omega);
    const cplx c = linear_amplitude(p, d);
    const double cav = omega / wp * g * g / (std::pow(omega - wp + dw, 2) + g * g);
    const cplx ratio = (omega - wp + dw + I * g) / (omega - wp - dw + I * g);
    return signal_prefactor(p, d, m) * cav * std::norm(rc.alpha1 / c + rc.alpha2 / c * ratio);
}

double band_integral(const std::function<double(double)>& f, double omega_s, double delta_band) {
    if (!(delta_band > 0.0)) throw DomainError("band width must be positive");
    const numerics::Tolerance tol{1e-300, 1e-10, 20000};
    return numerics::integrate_adaptive(f, omega_s - 0.5 * delta_band, omega_s + 0.5 * delta_band, tol);
}

}  // namespace

void DetectorParams::validate() const {
    for (double v : {Z_p, omega_T, Q_T, omega_m, Q_m, mass, I_c, C_J, loop_inductance}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("detector parameters must be positive and finite");
    }
    if (!(K_d && K_Tm) && !geometry) throw DomainError("detector couplings need direct values or a geometric block");
}

DetectorParams reference_params() {
    DetectorParams p;
    p.omega_T = 2.0 * pi * 5e9;
    p.omega_m = 2.0 * pi * 4e6;
    p.K_d = -3.4e-6;
    p.K_Tm = 1.1e-5;
    return p;
}

double zero_point(const DetectorParams& p) {
    if (!(p.mass > 0.0) || !(p.omega_m > 0.0)) throw DomainError("zero_point: mass and omega_m must be positive");
    return std::sqrt(constants::hbar / (2.0 * p.mass * p.omega_m));
}

InductanceCoeffs inductance_coeffs(const DetectorParams& p) {
    const double sec = secant(p);
    InductanceCoeffs l{};
    l.L00 = constants::phi0 * sec / (4.0 * pi * p.I_c);
    l.L20 = constants::phi0 * sec * sec * sec / (96.0 * pi * p.I_c);
    // NaN without a geometric block: lambda and l_osc are unknown.
    l.L01 = p.geometry ? p.geometry->lambda * p.B_ext * p.geometry->l_osc * sec * std::tan(flux_angle(p)) / (4.0 * p.I_c)
                       : std::numeric_limits<double>::quiet_NaN();
    return l;
}

double k0_half_length(double zeta) {
    if (zeta == 0.0 || !std::isfinite(zeta)) throw DomainError("k0_half_length: zeta must be finite and nonzero");
    const double target = 1.0 / zeta;
    const auto f = [target](double x) { return x * std::tan(x) - target; };
    const double half = 0.5 * pi;
    if (zeta > 0.0) return numerics::find_root_bracketed(f, 0.0, half * (1.0 - 1e-12));
    return numerics::find_root_bracketed(f, half * (1.0 + 1e-12), pi);
}

Couplings coupling_constants(const DetectorParams& p) {
    if (p.K_d && p.K_Tm) return {*p.K_Tm, *p.K_d};
    if (!p.geometry) throw DomainError("coupling_constants: geometric block required");
    const auto& g = *p.geometry;
    if (!(g.LT_l > 0.0) || !(g.CT_l > 0.0)) throw DomainError("coupling_constants: L_T l and C_T l must be positive");
    const double sec = secant(p);
    const double zeta = inductance_coeffs(p).L00 / g.LT_l;
    const double k0l = 2.0 * k0_half_length(zeta);
    const double K_Tm = g.lambda * p.B_ext * g.l_osc * zero_point(p) * std::tan(flux_angle(p)) * sec /
                        (4.0 * g.LT_l * p.I_c);
    const double charging = std::pow(2.0 * constants::e, 2) / (2.0 * g.CT_l);
    const double K_d = -k0l * k0l * zeta * zeta * zeta * charging / (constants::hbar * p.omega_T);
    return {p.K_Tm.value_or(K_Tm), p.K_d.value_or(K_d)};
}

double effective_duffing(const DetectorParams& p) { return model(p).K; }

ValidityReport validity_gates(const DetectorParams& p, double I_0) {
    const double sec = secant(p);
    const double beta_L = 2.0 * pi * p.loop_inductance * p.I_c / constants::phi0;
    return {std::abs(I_0 / p.I_c * sec), std::abs(beta_L * sec)};
}

cplx linear_amplitude(const DetectorParams& p, const DrivePoint& d) {
    const double g = p.gamma_pT();
    return I * std::sqrt(2.0 * pi) / (g - I * d.delta_omega) *
           std::sqrt(d.I_0 * d.I_0 * p.Z_p * g / (constants::hbar * omega_p(p, d)));
}

double mean_field_residual(const DetectorParams& p, const DrivePoint& d, cplx chi) {
    const Model m = model(p);
    const double det = p.omega_T - omega_p(p, d);
    const cplx lhs = (det - I * m.gT) * chi + m.wT / (2.0 * pi) * m.K * chi * std::norm(chi);
    const double rhs = drive_rhs(p, d);
    if (rhs == 0.0) return std::abs(lhs);
    return std::abs(lhs - rhs) / rhs;
}

std::vector<MeanFieldSolution> mean_field(const DetectorParams& p, const DrivePoint& d) {
    p.validate();
    if (d.I_0 < 0.0) throw DomainError("mean_field: drive amplitude must be nonnegative");
    const Model m = model(p);
    const double wp = omega_p(p, d);
    const double det = p.omega_T - wp;
    const double rhs = drive_rhs(p, d);
    if (m.K == 0.0) {
        const cplx chi = rhs / (det - I * m.gT);
        return {{chi, Branch::small, std::norm(chi) / (2.0 * pi)}};
    }
    const double wK = m.wT * m.K;
    const double b2 = d.I_0 * d.I_0 * p.Z_p / (2.0 * constants::hbar * wp);
    const double c2 = 2.0 * det / wK;
    const double c1 = (det * det + m.gT * m.gT) / (wK * wK);
    const double c0 = -2.0 * m.gT * b2 / (wK * wK);
    const auto cubic = [&](double E) { return ((E + c2) * E + c1) * E + c0; };

    std::vector<double> Es;
    for (const auto& r : numerics::solve_cubic_real(c2, c1, c0)) {
        double E = r.value;
        const double scale = std::max({std::abs(E), std::cbrt(std::abs(c0)), 1e-300});
        if (E < -1e-9 * scale) continue;
        E = std::max(E, 0.0);
        // Newton polish on the cubic; skipped at multiple roots where the derivative vanishes.
        for (int it = 0; it < 3; ++it) {
            const double dp = (3.0 * E + 2.0 * c2) * E + c1;
            if (std::abs(dp) < 1e-12 * std::abs(c1)) break;
            const double step = cubic(E) / dp;
            if (!std::isfinite(step)) break;
            E = std::max(E - step, 0.0);
        }
        Es.push_back(E);
    }
    if (Es.empty()) throw ConvergenceError("mean_field: no nonnegative root", std::numeric_limits<double>::quiet_NaN());

    std::vector<MeanFieldSolution> out;
    for (std::size_t i = 0; i < Es.size(); ++i) {
        const cplx chi = rhs / ((det - I * m.gT) + wK * Es[i]);
        Branch b = Branch::small;
        if (Es.size() == 3) b = i == 0 ? Branch::small : (i == 1 ? Branch::unstable : Branch::large);
        else if (Es.size() == 2) b = i == 0 ? Branch::small : Branch::large;
        out.push_back({chi, b, Es[i]});
    }
    return out;
}

MeanFieldSolution select_branch(const std::vector<MeanFieldSolution>& sols, BranchPolicy policy,
                                std::optional<double> previous_E) {
    if (sols.empty()) throw DomainError("select_branch: no solutions");
    switch (policy) {
        case BranchPolicy::small: return sols.front();
        case BranchPolicy::large: return sols.back();
        case BranchPolicy::follow_sweep: {
            if (!previous_E) return sols.front();
            const MeanFieldSolution* best = nullptr;
            for (const auto& s : sols) {
                if (s.branch == Branch::unstable) continue;
                if (!best || std::abs(s.E - *previous_E) < std::abs(best->E - *previous_E)) best = &s;
            }
            return best ? *best : sols.front();
        }
    }
    return sols.front();
}

Onset bistability_onset(const DetectorParams& p) {
    p.validate();
    const Model m = model(p);
    if (m.K == 0.0) throw DomainError("bistability_onset: effective Duffing constant vanishes, no bistability");
    const double g = m.gT;
    const double E_bi = 2.0 * g / (std::sqrt(3.0) * m.wT * std::abs(m.K));
    const double dw_bi = std::sqrt(3.0) * g * (m.K > 0.0 ? 1.0 : -1.0);
    const double wp = m.wT + dw_bi;
    const double I_bi = 2.0 * g * std::sqrt(2.0 * constants::hbar * wp / (3.0 * std::sqrt(3.0) * m.wT * std::abs(m.K) * p.Z_p));
    return {E_bi, dw_bi, I_bi};
}

std::pair<double, double> bistability_boundary(double ratio) {
    if (!(ratio >= 1.0)) throw DomainError("bistability_boundary: detuning ratio must be >= 1");
    const double a = 1.0 + 3.0 / (ratio * ratio);
    const double b = std::pow(1.0 - 1.0 / (ratio * ratio), 1.5);
    const double pre = 0.5 * std::pow(ratio, 1.5);
    return {pre * std::sqrt(a - b), pre * std::sqrt(a + b)};
}

ResponseCoeffs response_coeffs(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega) {
    const Model m = model(p);
    const double a2 = std::norm(chi);
    const auto b = blocks(m, d.delta_omega, a2, omega, mech(m, omega - omega_p(p, d)));
    const cplx det = det_of(b, a2);
    ResponseCoeffs r;
    r.determinant = det;
    r.alpha1 = b.Q * chi / det;
    r.alpha2 = -b.R * a2 * chi / det;
    r.beta1 = b.Q / det;
    r.beta2 = b.R * chi * chi / det;
    const double scale = std::max({std::abs(b.P * b.Q), a2 * a2 * std::abs(b.R * b.Rp), 1.0});
    r.near_singular = std::abs(det) < 1e-14 * scale;
    return r;
}

double signal_density(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega, double bath_T) {
    const Model m = model(p);
    if (m.KTm == 0.0 || d.I_0 == 0.0) return 0.0;
    const double nu = omega - omega_p(p, d);
    const double Lp = 2.0 * m.gm / (std::pow(nu - m.wm, 2) + m.gm * m.gm);
    const double Lm = 2.0 * m.gm / (std::pow(-nu - m.wm, 2) + m.gm * m.gm);
    const double nb = bose(nu, bath_T);
    return transduction(p, d, chi, omega, m) * (Lp + Lm) * (2.0 * nb + 1.0) / (2.0 * pi);
}

double caves_density(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega) {
    const Model m = model(p);
    if (m.KTm == 0.0 || d.I_0 == 0.0) return 0.0;
    const double nu = omega - omega_p(p, d);
    const double Lp = 2.0 * m.gm / (std::pow(nu - m.wm, 2) + m.gm * m.gm);
    const double Lm = 2.0 * m.gm / (std::pow(-nu - m.wm, 2) + m.gm * m.gm);
    return transduction(p, d, chi, omega, m) * (Lp - Lm) / (2.0 * pi);
}

double noise_density(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega) {
    const Model m = model(p);
    const double g = m.gT, dw = d.delta_omega;
    const double nu = omega - omega_p(p, d);
    const auto rc = response_coeffs(p, d, chi, omega);
    const double x = nu + dw;
    const double bracket = std::norm(rc.beta1) + (x * x + g * g) / (std::pow(nu - dw, 2) + g * g) * std::norm(rc.beta2) -
                           rc.beta1.real() + x / g * rc.beta1.imag();
    return constants::hbar * omega * 2.0 * g * g / (x * x + g * g) * bracket / (2.0 * pi) / p.Z_p;
}

double added_noise(const DetectorParams& p, double omega_s, double delta_band) {
    return constants::hbar * omega_s / 2.0 * delta_band / (2.0 * pi) / p.Z_p;
}

double signal_spectrum(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega_s, double delta_band,
                       double bath_T) {
    if (bath_T < 0.0) throw DomainError("signal_spectrum: bath temperature must be nonnegative");
    return band_integral([&](double w) { return signal_density(p, d, chi, w, bath_T); }, omega_s, delta_band);
}

double noise_spectrum(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega_s, double delta_band) {
    return band_integral([&](double w) { return noise_density(p, d, chi, w); }, omega_s, delta_band) +
           added_noise(p, omega_s, delta_band);
}

double caves_bound(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega_s, double delta_band) {
    const double gain = band_integral([&](double w) { return caves_density(p, d, chi, w); }, omega_s, delta_band);
    return std::abs(added_noise(p, omega_s, delta_band) - gain);
}

cplx mechanical_pole(const DetectorParams& p, const DrivePoint& d, cplx chi, int side) {
    const Model m = model(p);
    const double s = side >= 0 ? 1.0 : -1.0;
    const double wp = omega_p(p, d);
    const double a2 = std::norm(chi);
    // det is affine in the mechanical factor M; solve det = 0 for M, then invert
    // M(y) = 2 w_m / ((y + i g_m)^2 - w_m^2) on the requested side.
    const auto update = [&](cplx y) {
        const cplx omega = wp + y;
        const cplx d0 = det_of(blocks(m, d.delta_omega, a2, omega, 0.0), a2);
        const cplx d1 = det_of(blocks(m, d.delta_omega, a2, omega, 1.0), a2);
        const cplx Mstar = -d0 / (d1 - d0);
        cplx root = std::sqrt(m.wm * m.wm + 2.0 * m.wm / Mstar);
        if (root.real() * s < 0.0) root = -root;
        return root - I * m.gm;
    };
    const auto converged = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-9 * std::abs(b); };
    cplx y = s * m.wm - I * m.gm;
    for (int it = 0; it < 30; ++it) {
        const cplx next = update(y);
        if (converged(y, next)) return next;
        y = next;
    }
    // Close to a bifurcation the plain iteration oscillates; fall back to a secant solve of
    // det * ((y + i g_m)^2 - w_m^2) = 0, which removes the bare mechanical poles.
    const auto h = [&](cplx yy) {
        const cplx omega = wp + yy;
        return det_of(blocks(m, d.delta_omega, a2, omega, mech(m, yy)), a2) *
               ((yy + I * m.gm) * (yy + I * m.gm) - m.wm * m.wm);
    };
    cplx y0 = s * m.wm - I * m.gm, y1 = y;
    if (converged(y0, y1)) y1 = y0 * (1.0 + 1e-3);
    cplx f0 = h(y0);
    for (int it = 0; it < 200; ++it) {
        const cplx f1 = h(y1);
        if (f1 == f0) break;
        const cplx y2 = y1 - f1 * (y1 - y0) / (f1 - f0);
        if (converged(y1, y2)) return y2;
        y0 = y1;
        f0 = f1;
        y1 = y2;
    }
    throw ConvergenceError("mechanical_pole: fixed point did not converge", y1.imag());
}

double net_occupation(double R_gamma, double n_thermal, double n_back) {
    if (!(R_gamma > 0.0)) throw InstabilityError("net_occupation: renormalized damping must be positive");
    const double two = (2.0 * n_thermal + 1.0) / R_gamma + (1.0 - 1.0 / R_gamma) * (2.0 * n_back + 1.0);
    return 0.5 * (two - 1.0);
}

namespace {

struct PeakFit {
    numerics::LorentzianFit fit;
    double two_n_back_plus_one = 0.0;
    double noise_residual = 0.0;
};

PeakFit fit_peak(const DetectorParams& p, const DrivePoint& d, cplx chi, double bath_T, cplx pole, double R_gamma_pole) {
    const double wp = omega_p(p, d);
    const auto f = [&](double nu) { return signal_density(p, d, chi, wp + nu, bath_T); };
    const double c0 = pole.real();
    const double g0 = std::abs(pole.imag());

    // Peak and half maximum, seeded from the pole.
    const double peak_nu = numerics::minimize_bracketed([&](double nu) { return -f(nu); }, c0 - 3.0 * g0, c0 + 3.0 * g0,
                                                        1e-6 * g0);
    const double peak = f(peak_nu);
    if (!(peak > 0.0)) throw NonLorentzianError("effective_thermo: signal peak is not positive");
    double h = 0.5 * g0;
    int guard = 0;
    while (f(peak_nu + h) > 0.5 * peak) {
        h *= 2.0;
        if (++guard > 60) throw NonLorentzianError("effective_thermo: no half maximum");
    }
    const double hw = numerics::find_root_bracketed([&](double x) { return f(peak_nu + x) - 0.5 * peak; }, 0.0, h,
                                                    {1e-300, 1e-10, 200});

    const int n = 401;
    std::vector<double> nu(n), S(n), N(n);
    for (int i = 0; i < n; ++i) {
        nu[static_cast<std::size_t>(i)] = peak_nu + hw * (-20.0 + 40.0 * i / (n - 1));
        S[static_cast<std::size_t>(i)] = f(nu[static_cast<std::size_t>(i)]);
        N[static_cast<std::size_t>(i)] = noise_density(p, d, chi, wp + nu[static_cast<std::size_t>(i)]);
    }
    PeakFit out;
    out.fit = numerics::fit_lorentzian(nu, S);

    // Noise: Lorentzian plus dispersive part on a linear background, in the scaled variable.
    const double G = out.fit.half_width, c = out.fit.center;
    Eigen::MatrixXd A(n, 4);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double x = (nu[static_cast<std::size_t>(i)] - c) / G;
        A(i, 0) = 1.0 / (1.0 + x * x);
        A(i, 1) = x / (1.0 + x * x);
        A(i, 2) = 1.0;
        A(i, 3) = x;
        b[i] = N[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd col_scale = A.colwise().norm().cwiseMax(1e-300).cwiseInverse();
    const Eigen::VectorXd sol = (A * col_scale.asDiagonal()).colPivHouseholderQr().solve(b);
    const Eigen::VectorXd coef = col_scale.cwiseProduct(sol);
    const Eigen::VectorXd lor = A.col(0) * coef[0];
    const double lor_rms = lor.norm();
    out.noise_residual = lor_rms > 0.0 ? (A * coef - b).norm() / lor_rms : std::numeric_limits<double>::infinity();

    const double ratio = coef[0] * G / (2.0 * out.fit.area);
    const double n_th = bose(std::abs(c), bath_T);
    out.two_n_back_plus_one = ratio * (2.0 * n_th + 1.0) / (R_gamma_pole - 1.0);
    return out;
}

double gain_from_fit(const DetectorParams& p, const numerics::LorentzianFit& fit, double R_omega, double bath_T) {
    const double n_th = bose(R_omega * p.omega_m, bath_T);
    return 2.0 * pi * fit.area * fit.half_width * p.Z_p * 2.0 * p.mass * R_omega * p.omega_m /
           (constants::hbar * p.gamma_bm() * (2.0 * n_th + 1.0));
}

}  // namespace

EffectiveThermo effective_thermo(const DetectorParams& p, const DrivePoint& d, double bath_T, BranchPolicy policy) {
    if (bath_T < 0.0) throw DomainError("effective_thermo: bath temperature must be nonnegative");
    const auto sols = mean_field(p, d);
    EffectiveThermo t;
    t.mean_field = select_branch(sols, policy);
    const cplx chi = t.mean_field.chi;
    const double gm = p.gamma_bm();

    const cplx pole_p = mechanical_pole(p, d, chi, +1);
    t.R_gamma_pole = -pole_p.imag() / gm;
    if (!(t.R_gamma_pole > 0.0)) throw InstabilityError("effective_thermo: renormalized damping R_gamma <= 0");

    if (model(p).KTm == 0.0 || d.I_0 == 0.0) {
        t.weak_coupling = true;
        t.R_omega = pole_p.real() / p.omega_m;
        t.R_gamma = t.R_gamma_pole;
        t.n_back_plus = t.n_back_minus = std::numeric_limits<double>::quiet_NaN();
        t.n_net = bose(t.R_omega * p.omega_m, bath_T);
        return t;
    }

    const auto plus = fit_peak(p, d, chi, bath_T, pole_p, t.R_gamma_pole);
    t.lorentzian_residual = plus.fit.residual;
    if (t.lorentzian_residual >= numerics::lorentzian_residual_gate)
        throw NonLorentzianError("effective_thermo: Lorentzian residual above gate");
    t.R_omega = plus.fit.center / p.omega_m;
    t.R_gamma = plus.fit.half_width / gm;
    t.noise_residual = plus.noise_residual;
    t.G_plus = gain_from_fit(p, plus.fit, t.R_omega, bath_T);

    t.weak_coupling = std::abs(t.R_gamma_pole - 1.0) < 1e-6;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    t.n_back_plus = t.weak_coupling ? nan : 0.5 * (plus.two_n_back_plus_one - 1.0);

    try {
        const cplx pole_m = mechanical_pole(p, d, chi, -1);
        const auto minus = fit_peak(p, d, chi, bath_T, pole_m, -pole_m.imag() / gm);
        t.G_minus = gain_from_fit(p, minus.fit, -minus.fit.center / p.omega_m, bath_T);
        t.n_back_minus = t.weak_coupling ? nan : 0.5 * (minus.two_n_back_plus_one - 1.0);
    } catch (const Error&) {
        t.G_minus = nan;
        t.n_back_minus = nan;
    }

    const double n_th = bose(t.R_omega * p.omega_m, bath_T);
    t.n_net = t.weak_coupling ? n_th : net_occupation(t.R_gamma, n_th, t.n_back_plus);
    return t;
}

std::vector<CoolingPoint> cooling_curve(const DetectorParams& p, double delta_omega, const std::vector<double>& I_grid,
                                        const std::vector<double>& bath_T_list, BranchPolicy policy) {
    std::vector<CoolingPoint> out;
    out.reserve(I_grid.size() * bath_T_list.size());
    for (double I0 : I_grid) {
        // The detector parameters (R_omega, R_gamma, n_back) come from the zero-bath spectrum;
        // the bath only enters through n(R_omega omega_m).
        std::string failure;
        EffectiveThermo t;
        if (!validity_gates(p, I0).passes()) {
            failure = "validity gate";
        } else {
            try {
                t = effective_thermo(p, {I0, delta_omega}, 0.0, policy);
                if (t.weak_coupling) failure = "weak coupling";
            } catch (const InstabilityError&) {
                failure = "instability";
            } catch (const NonLorentzianError&) {
                failure = "non-Lorentzian";
            } catch (const Error& e) {
                failure = e.what();
            }
        }
        for (double T : bath_T_list) {
            CoolingPoint c;
            c.I_0 = I0;
            c.bath_T = T;
            c.failure = failure;
            c.ok = failure.empty();
            if (c.ok) {
                c.R_gamma = t.R_gamma;
                c.two_n_back_plus_one = t.two_n_back_plus_one();
                c.n_net = net_occupation(t.R_gamma, bose(t.R_omega * p.omega_m, T), t.n_back_plus);
            }
            out.push_back(c);
        }
    }
    return out;
}

HarmonicLimit harmonic_cooling_limit(const DetectorParams& p, double I_0) {
    auto h = p;
    h.K_d = 0.0;
    const auto value = [&](double x) {
        try {
            const auto t = effective_thermo(h, {I_0, -x * p.omega_m}, 0.0);
            return t.weak_coupling ? std::numeric_limits<double>::infinity() : t.two_n_back_plus_one();
        } catch (const ValidityError&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    constexpr int n = 28;
    double best_x = 0.3, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = 0.3 + 2.7 * i / (n - 1);
        const double v = value(x);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    if (!std::isfinite(best)) throw ValidityError("harmonic_cooling_limit: no valid detuning at this drive");
    const double step = 2.7 / (n - 1);
    const double x = numerics::minimize_bracketed(value, std::max(0.3, best_x - step), std::min(3.0, best_x + step), 1e-6);
    const auto t = effective_thermo(h, {I_0, -x * p.omega_m}, 0.0);
    return {-x * p.omega_m, t.two_n_back_plus_one(), t.R_gamma};
}

OperatingPoint operating_point(const DetectorParams& p, const DrivePoint& d, double bath_T, BranchPolicy policy) {
    const auto t = effective_thermo(p, d, bath_T, policy);
    OperatingPoint o;
    o.I_0 = d.I_0;
    o.omega_s = omega_p(p, d) + t.R_omega * p.omega_m;
    o.delta_band = 2.0 * t.R_gamma * p.gamma_bm();
    o.R_gamma = t.R_gamma;
    const cplx chi = t.mean_field.chi;
    o.signal = signal_spectrum(p, d, chi, o.omega_s, o.delta_band, bath_T);
    o.noise = noise_spectrum(p, d, chi, o.omega_s, o.delta_band);
    o.caves = caves_bound(p, d, chi, o.omega_s, o.delta_band);
    return o;
}

}  // namespace nlcavity::detector
