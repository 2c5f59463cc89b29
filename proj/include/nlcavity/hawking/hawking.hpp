#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nlcavity::hawking {

/// Which critical current the effective junction carries: 2 I_c cos(pi Phi) for a SQUID pair
/// or I_c cos(pi Phi) when each cell is counted as a single junction.
enum class JunctionConvention { squid_pair, single_junction };

struct LineParams {
    double I_c = 2e-6;        ///< A, per junction
    double C_J = 0.0;         ///< F
    double C_0 = 5e-17;       ///< F
    double a = 0.25e-6;       ///< m
    double N = 4800.0;        ///< cells
    double u = 0.0;           ///< m/s
    double loop_inductance = 1e-12;  ///< H, SQUID self-inductance for the beta_L gate
    JunctionConvention convention = JunctionConvention::squid_pair;

    /// I_c^s at the given flux (units of the flux quantum).
    [[nodiscard]] double squid_critical_current(double phi_ext) const;
    /// Effective plasma frequency omega_p^s (rad/s).
    [[nodiscard]] double plasma_frequency(double phi_ext) const;
    /// 2 pi L I_c / Phi_0.
    [[nodiscard]] double beta_L() const;
    void validate() const;
};

/// Parameters of the experimental-realization estimate: C_J puts omega_p^s(0) at 2 pi x 1 THz
/// and u = 0.95 c(0).
[[nodiscard]] LineParams realization_params();

/// Flux bias in the comoving coordinate xi = x - u t, in units of the flux quantum.
class FluxPulse {
public:
    enum class Shape { tanh_step, gaussian, custom };

    /// (A/2)(1 + tanh(xi/w)).
    static FluxPulse tanh_step(double amplitude, double rise_scale);
    /// A exp(-xi^2 / 2w^2). Produces a white-hole horizon as well.
    static FluxPulse gaussian(double amplitude, double rise_scale);
    static FluxPulse custom(std::function<double(double)> shape, double amplitude, double rise_scale);

    [[nodiscard]] double operator()(double xi) const;
    /// Analytic d Phi / d xi. Throws DomainError for custom shapes.
    [[nodiscard]] double derivative(double xi) const;
    [[nodiscard]] Shape shape() const noexcept { return shape_; }
    [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
    [[nodiscard]] double rise_scale() const noexcept { return rise_scale_; }
    /// Throws ValidityError if the flux leaves [0, 0.5).
    void validate() const;

    /// Gaussian or custom pulses must opt in before a horizon pair is accepted.
    bool allow_white_hole = false;

private:
    FluxPulse(Shape s, double A, double w, std::function<double(double)> f = {})
        : shape_(s), amplitude_(A), rise_scale_(w), custom_(std::move(f)) {}
    Shape shape_;
    double amplitude_;
    double rise_scale_;
    std::function<double(double)> custom_;
};

/// Phi_0 arcsin(I / I_c^s) / (2 pi I); the I -> 0 limit is Phi_0 / (2 pi I_c^s).
[[nodiscard]] double junction_inductance(const LineParams& p, double I, double phi_ext);
[[nodiscard]] double propagation_velocity(const LineParams& p, double phi_ext);
[[nodiscard]] double dispersion(const LineParams& p, double k, double phi_ext);

/// Tanh step of amplitude 0.2 whose horizon gradient is omega_p^s(0) / (2 pi 10).
[[nodiscard]] FluxPulse realization_pulse(const LineParams& p);

struct Metric {
    double g_tt, g_tx, g_xx;
};
[[nodiscard]] Metric metric_components(const FluxPulse& pulse, const LineParams& p, double xi);

[[nodiscard]] double velocity_at(const FluxPulse& pulse, const LineParams& p, double xi);
/// Five-point central difference with one Richardson step.
[[nodiscard]] double velocity_gradient(const FluxPulse& pulse, const LineParams& p, double xi);
/// Chain rule through the analytic pulse derivative.
[[nodiscard]] double velocity_gradient_analytic(const FluxPulse& pulse, const LineParams& p, double xi);

struct Horizons {
    std::vector<double> positions;  ///< ascending
    bool white_hole_warning = false;
    std::string warning;
};

/// Roots of c(xi) = u. Throws NoHorizonError when there is none.
[[nodiscard]] Horizons find_horizon(const FluxPulse& pulse, const LineParams& p);

/// Position of the black-hole horizon, where c falls through u in the direction of increasing xi.
/// Throws ValidityError on a horizon pair unless the pulse allows white holes.
[[nodiscard]] double black_hole_horizon(const FluxPulse& pulse, const LineParams& p);

[[nodiscard]] double hawking_temperature(const FluxPulse& pulse, const LineParams& p);
/// (hbar / 2 pi k_B) |dc/dxi|.
[[nodiscard]] double temperature_from_gradient(double gradient);
/// (pi / 12 hbar)(k_B T)^2.
[[nodiscard]] double radiated_power(double T_H);

/// Tanh rise scale that puts |dc/dxi| = rate at the horizon.
[[nodiscard]] double rise_scale_for_gradient(const LineParams& p, double amplitude, double rate);

struct PhotonModel {
    /// Fractional T_H loss per 1000 cells, linear in distance travelled.
    double decay_per_1000_cells = 0.10;
    bool decay = true;
};

[[nodiscard]] double horizon_lifetime(const LineParams& p);
/// Emission rate P / (k_B T_H) integrated over the transit N a / u.
[[nodiscard]] double photons_per_pulse(const FluxPulse& pulse, const LineParams& p, const PhotonModel& model = {});

/// R_Q sqrt(2 pi e^2 sec(pi Phi) / (Phi_0 C_0 I_c)).
[[nodiscard]] double array_impedance(const LineParams& p, double phi_ext);

struct ValidityGates {
    double beta_L = 0.0;
    double Z_A_over_R_Q = 0.0;
    double max_phi = 0.0;
    [[nodiscard]] bool passes(double beta_margin = 10.0) const {
        return beta_L * beta_margin <= 1.0 && Z_A_over_R_Q < 1.0 && max_phi < 0.5;
    }
};
[[nodiscard]] ValidityGates validity_gates(const FluxPulse& pulse, const LineParams& p);

}  // namespace nlcavity::hawking
