#include "nlcavity/hawking/hawking.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nlcavity/constants.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/numerics/roots.hpp"

namespace nlcavity::hawking {

namespace {

using constants::pi;

constexpr int scan_points = 8001;
constexpr double scan_half_width = 30.0;  // in rise scales

double c_of_flux(const LineParams& p, double phi) {
    return p.a / std::sqrt(junction_inductance(p, 0.0, phi) * p.C_0);
}

}  // namespace

double LineParams::squid_critical_current(double phi_ext) const {
    const double pair = convention == JunctionConvention::squid_pair ? 2.0 : 1.0;
    return pair * I_c * std::cos(pi * phi_ext);
}

double LineParams::plasma_frequency(double phi_ext) const {
    if (!(C_J > 0.0)) throw DomainError("plasma_frequency: C_J must be positive");
    return std::sqrt(2.0 * pi * squid_critical_current(phi_ext) / (2.0 * C_J * constants::phi0));
}

double LineParams::beta_L() const { return 2.0 * pi * loop_inductance * I_c / constants::phi0; }

void LineParams::validate() const {
    if (!(I_c > 0.0 && C_0 > 0.0 && a > 0.0 && N > 0.0 && loop_inductance > 0.0))
        throw DomainError("LineParams: I_c, C_0, a, N and loop_inductance must be positive");
    if (C_J < 0.0 || u < 0.0) throw DomainError("LineParams: C_J and u must be non-negative");
}

LineParams realization_params() {
    LineParams p;
    const double wp = 2.0 * pi * 1e12;
    p.C_J = 2.0 * pi * p.squid_critical_current(0.0) / (2.0 * constants::phi0 * wp * wp);
    p.u = 0.95 * propagation_velocity(p, 0.0);
    return p;
}

FluxPulse realization_pulse(const LineParams& p) {
    const double rate = p.plasma_frequency(0.0) / (2.0 * pi * 10.0);
    return FluxPulse::tanh_step(0.2, rise_scale_for_gradient(p, 0.2, rate));
}

FluxPulse FluxPulse::tanh_step(double amplitude, double rise_scale) {
    FluxPulse f(Shape::tanh_step, amplitude, rise_scale);
    f.validate();
    return f;
}

FluxPulse FluxPulse::gaussian(double amplitude, double rise_scale) {
    FluxPulse f(Shape::gaussian, amplitude, rise_scale);
    f.validate();
    return f;
}

FluxPulse FluxPulse::custom(std::function<double(double)> shape, double amplitude, double rise_scale) {
    if (!shape) throw DomainError("FluxPulse::custom: empty shape");
    FluxPulse f(Shape::custom, amplitude, rise_scale, std::move(shape));
    f.validate();
    return f;
}

double FluxPulse::operator()(double xi) const {
    const double s = xi / rise_scale_;
    switch (shape_) {
        case Shape::tanh_step: return 0.5 * amplitude_ * (1.0 + std::tanh(s));
        case Shape::gaussian: return amplitude_ * std::exp(-0.5 * s * s);
        case Shape::custom: return custom_(xi);
    }
    return 0.0;
}

double FluxPulse::derivative(double xi) const {
    const double s = xi / rise_scale_;
    switch (shape_) {
        case Shape::tanh_step: {
            const double sech = 1.0 / std::cosh(s);
            return 0.5 * amplitude_ * sech * sech / rise_scale_;
        }
        case Shape::gaussian: return -amplitude_ * s / rise_scale_ * std::exp(-0.5 * s * s);
        case Shape::custom: break;
    }
    throw DomainError("FluxPulse::derivative: no analytic derivative for a custom shape");
}

void FluxPulse::validate() const {
    if (!(rise_scale_ > 0.0)) throw DomainError("FluxPulse: rise_scale must be positive");
    if (!(amplitude_ >= 0.0 && amplitude_ < 0.5))
        throw ValidityError("FluxPulse: amplitude must lie in [0, 0.5) flux quanta");
    const double L = scan_half_width * rise_scale_;
    for (int i = 0; i < scan_points; ++i) {
        const double phi = (*this)(-L + 2.0 * L * i / (scan_points - 1));
        if (!(phi >= 0.0 && phi < 0.5)) throw ValidityError("FluxPulse: flux leaves [0, 0.5) flux quanta");
    }
}

double junction_inductance(const LineParams& p, double I, double phi_ext) {
    if (!(phi_ext >= 0.0 && phi_ext < 0.5)) throw ValidityError("junction_inductance: flux outside [0, 0.5)");
    const double Ics = p.squid_critical_current(phi_ext);
    if (std::abs(I) >= Ics) throw ValidityError("junction_inductance: current at or above I_c^s");
    const double x = I / Ics;
    // arcsin(x)/x -> 1 + x^2/6 avoids 0/0 at tiny currents.
    const double ratio = std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 : std::asin(x) / x;
    return constants::phi0 / (2.0 * pi * Ics) * ratio;
}

double propagation_velocity(const LineParams& p, double phi_ext) { return c_of_flux(p, phi_ext); }

double dispersion(const LineParams& p, double k, double phi_ext) {
    if (std::abs(k) * p.a > pi * (1.0 + 1e-12)) throw DomainError("dispersion: k outside the first Brillouin zone");
    const double LC = junction_inductance(p, 0.0, phi_ext) * p.C_0;
    return 2.0 / std::sqrt(LC) * std::abs(std::sin(0.5 * k * p.a));
}

Metric metric_components(const FluxPulse& pulse, const LineParams& p, double xi) {
    const double c = velocity_at(pulse, p, xi);
    return {c * c - p.u * p.u, -p.u, -1.0};
}

double velocity_at(const FluxPulse& pulse, const LineParams& p, double xi) { return c_of_flux(p, pulse(xi)); }

double velocity_gradient(const FluxPulse& pulse, const LineParams& p, double xi) {
    const auto d5 = [&](double h) {
        const auto c = [&](double x) { return velocity_at(pulse, p, x); };
        return (-c(xi + 2 * h) + 8 * c(xi + h) - 8 * c(xi - h) + c(xi - 2 * h)) / (12.0 * h);
    };
    const double h = 0.02 * pulse.rise_scale();
    return (16.0 * d5(0.5 * h) - d5(h)) / 15.0;
}

double velocity_gradient_analytic(const FluxPulse& pulse, const LineParams& p, double xi) {
    const double phi = pulse(xi);
    return -0.5 * pi * c_of_flux(p, phi) * std::tan(pi * phi) * pulse.derivative(xi);
}

Horizons find_horizon(const FluxPulse& pulse, const LineParams& p) {
    p.validate();
    const double L = scan_half_width * pulse.rise_scale();
    const auto g = [&](double xi) { return velocity_at(pulse, p, xi) - p.u; };
    Horizons h;
    double x0 = -L, g0 = g(x0);
    for (int i = 1; i < scan_points; ++i) {
        const double x1 = -L + 2.0 * L * i / (scan_points - 1);
        const double g1 = g(x1);
        if (g0 == 0.0) {
            h.positions.push_back(x0);
        } else if (g0 * g1 < 0.0) {
            h.positions.push_back(numerics::find_root_bracketed(g, x0, x1, {1e-13 * pulse.rise_scale(), 1e-15, 200}));
        }
        x0 = x1;
        g0 = g1;
    }
    if (g0 == 0.0) h.positions.push_back(x0);
    if (h.positions.empty()) throw NoHorizonError("find_horizon: c(xi) never equals u");
    if (h.positions.size() >= 2) {
        h.white_hole_warning = true;
        h.warning = "pulse produces " + std::to_string(h.positions.size()) +
                    " horizons; black-hole and white-hole horizons coexist";
    }
    return h;
}

double black_hole_horizon(const FluxPulse& pulse, const LineParams& p) {
    const auto h = find_horizon(pulse, p);
    if (h.white_hole_warning && !pulse.allow_white_hole) throw ValidityError("black_hole_horizon: " + h.warning);
    for (double x : h.positions)
        if (velocity_gradient(pulse, p, x) < 0.0) return x;
    throw NoHorizonError("black_hole_horizon: no horizon with c falling through u");
}

double temperature_from_gradient(double gradient) {
    return constants::hbar / (2.0 * pi * constants::k_B) * std::abs(gradient);
}

double hawking_temperature(const FluxPulse& pulse, const LineParams& p) {
    return temperature_from_gradient(velocity_gradient(pulse, p, black_hole_horizon(pulse, p)));
}

double radiated_power(double T_H) {
    if (T_H < 0.0) throw DomainError("radiated_power: negative temperature");
    const double kT = constants::k_B * T_H;
    return pi / (12.0 * constants::hbar) * kT * kT;
}

double rise_scale_for_gradient(const LineParams& p, double amplitude, double rate) {
    if (!(rate > 0.0)) throw DomainError("rise_scale_for_gradient: rate must be positive");
    const double c0 = c_of_flux(p, 0.0);
    if (!(p.u > 0.0 && p.u < c0)) throw NoHorizonError("rise_scale_for_gradient: need 0 < u < c(0)");
    const double phi_h = std::acos(std::pow(p.u / c0, 2)) / pi;
    if (phi_h >= amplitude) throw NoHorizonError("rise_scale_for_gradient: amplitude too small for a horizon");
    const double t = 2.0 * phi_h / amplitude - 1.0;
    const double dc_dphi = 0.5 * pi * p.u * std::tan(pi * phi_h);
    return dc_dphi * 0.5 * amplitude * (1.0 - t * t) / rate;
}

double horizon_lifetime(const LineParams& p) {
    if (!(p.u > 0.0)) throw DomainError("horizon_lifetime: u must be positive");
    return p.N * p.a / p.u;
}

double photons_per_pulse(const FluxPulse& pulse, const LineParams& p, const PhotonModel& model) {
    const double T0 = hawking_temperature(pulse, p);
    // Rate P / (k_B T) is linear in T, so the linear decay integrates in closed form.
    const double rate0 = radiated_power(T0) / (constants::k_B * T0);
    const double tau = horizon_lifetime(p);
    if (!model.decay || model.decay_per_1000_cells <= 0.0) return rate0 * tau;
    const double k = model.decay_per_1000_cells / 1000.0;
    const double n_end = std::min(p.N, 1.0 / k);
    return rate0 * (p.a / p.u) * (n_end - 0.5 * k * n_end * n_end);
}

double array_impedance(const LineParams& p, double phi_ext) {
    if (!(phi_ext >= 0.0 && phi_ext < 0.5)) throw ValidityError("array_impedance: flux outside [0, 0.5)");
    const double e2 = constants::e * constants::e;
    return constants::R_Q * std::sqrt(2.0 * pi * e2 / (std::cos(pi * phi_ext) * constants::phi0 * p.C_0 * p.I_c));
}

ValidityGates validity_gates(const FluxPulse& pulse, const LineParams& p) {
    ValidityGates g;
    g.beta_L = p.beta_L();
    const double L = scan_half_width * pulse.rise_scale();
    for (int i = 0; i < scan_points; ++i) g.max_phi = std::max(g.max_phi, pulse(-L + 2.0 * L * i / (scan_points - 1)));
    g.Z_A_over_R_Q = array_impedance(p, g.max_phi) / constants::R_Q;
    return g;
}

}  // namespace nlcavity::hawking
