#pragma once

#include <vector>

#include "nlcavity/fock/fock.hpp"
#include "nlcavity/numerics/tolerance.hpp"

namespace nlcavity::trilinear {

using fock::cplx;
using fock::DensityMatrix;
using fock::HilbertSpec;
using fock::ModeOperator;
using fock::StateVector;
using numerics::RealGrid;

/// Coupling and mode frequencies for the pump (a), signal (b) and idler (c).
struct TrilinearParams {
    double chi = 1.0;       ///< 1/s; only enters through tau = chi t
    double omega_a = 2.0;   ///< rad/s
    double omega_b = 1.0;
    double omega_c = 1.0;
    HilbertSpec spec;

    /// Degenerate signal and idler, omega_b = omega_c = omega_a / 2.
    static TrilinearParams degenerate(double omega_a, std::vector<int> dims, double chi = 1.0);
    void validate() const;
};

/// Pump amplitudes a_s over Fock index s.
class PumpInitialState {
public:
    explicit PumpInitialState(std::vector<cplx> coefficients);
    static PumpInitialState coherent(cplx alpha, int dim);
    static PumpInitialState number(int s);

    [[nodiscard]] const std::vector<cplx>& coefficients() const noexcept { return a_; }
    [[nodiscard]] std::vector<double> probabilities() const;
    [[nodiscard]] int max_level() const noexcept { return static_cast<int>(a_.size()) - 1; }

private:
    std::vector<cplx> a_;
};

// Parametric tier: classical undepleted pump of amplitude A.

[[nodiscard]] double parametric_occupation(double A, double tau);
/// Two-mode squeezed state on (dim, dim). Throws TruncationError unless tanh^(2 dim)(A tau) < 1e-8.
[[nodiscard]] StateVector parametric_state(double A, double tau, int dim);
/// Kelvin; zero at A tau = 0.
[[nodiscard]] double parametric_temperature(double A, double tau, double omega_b);

// Semiclassical tier.

struct SemiclassicalCurve {
    std::vector<double> tau;
    std::vector<double> N_a;      ///< clamped at zero
    std::vector<double> N_a_raw;  ///< closed form before clamping (dips to beta_minus < 0)
    std::vector<double> theta;
    double beta_plus = 0.0;
    double beta_minus = 0.0;
    double modulus = 0.0;
    int depletion_index = -1;     ///< first grid index where the closed form went negative
};

struct SemiclassicalRoots {
    double beta_plus, beta_minus, modulus;
};

[[nodiscard]] SemiclassicalRoots semiclassical_roots(double N_a0);
[[nodiscard]] SemiclassicalCurve semiclassical_pump(double N_a0, const RealGrid& tau_grid);
[[nodiscard]] std::vector<double> semiclassical_occupation(const SemiclassicalCurve& curve);

// Short-time quantum tier (vacuum signal and idler, k = 1/2 unless stated).

/// f_n(k, s) = sqrt(s! Gamma(2k+n) / (n! (s-n)! Gamma(2k))).
[[nodiscard]] double short_time_f(int n, double k, int s);
/// ln N_s(tau) = ln(e^{1/tau^2} tau^{2s} Gamma(s+1, 1/tau^2)).
[[nodiscard]] double short_time_log_norm(int s, double tau);
/// Normalized branch weights |amplitude|^2 over n = 0..s.
[[nodiscard]] std::vector<double> short_time_weights(int s, double tau, double k = 0.5);

struct ShortTimeBranch {
    int s = 0;
    cplx coefficient;                ///< a_s
    std::vector<double> amplitudes;  ///< on |s-n>_a |n>_b |n>_c, n = 0..s
};

[[nodiscard]] std::vector<ShortTimeBranch> short_time_state(const PumpInitialState& initial, double tau,
                                                            double k = 0.5);
/// Embeds the branches into a three-mode state vector on `spec`.
[[nodiscard]] StateVector short_time_vector(const PumpInitialState& initial, double tau, const HilbertSpec& spec);

struct ShortTimeReduced {
    DensityMatrix rho_pump;
    DensityMatrix rho_signal;
    std::vector<double> pump_diagonal;
};

[[nodiscard]] ShortTimeReduced short_time_reduced(const PumpInitialState& initial, double tau);

/// Diagonal signal state sum_s P_s |s><s|. Throws DomainError unless sum P_s = 1 within 1e-9.
[[nodiscard]] DensityMatrix long_time_signal(const std::vector<double>& P);

// Full quantum tier.

/// H_I / (hbar chi) = i (a b^+ c^+ - a^+ b c).
[[nodiscard]] ModeOperator build_interaction_hamiltonian(const TrilinearParams& params);

struct FullEvolution {
    std::vector<StateVector> states;
    double max_leak = 0.0;  ///< largest top-level population seen on any mode
};

/// Integrates d psi / d tau = (a b^+ c^+ - a^+ b c) psi. Throws TruncationError when
/// a mode's dimension is below ceil(<N_a(0)>) + 2 or the leak exceeds `leak_tol`.
[[nodiscard]] FullEvolution evolve_full(const StateVector& initial, const TrilinearParams& params,
                                        const RealGrid& tau_grid, double leak_tol = 1e-6,
                                        const numerics::Tolerance& tol = {1e-12, 1e-10, 5000000});

struct Observables {
    double N_a = 0.0, N_b = 0.0, N_c = 0.0;
    double N_a_sq = 0.0;   ///< <N_a^2>
    double H_I = 0.0;      ///< <H_I> / (hbar chi)
    double norm = 0.0;
    [[nodiscard]] double factorization_residual() const { return N_a_sq - N_a * N_a; }
};

[[nodiscard]] Observables observe(const StateVector& psi);

/// Product state (pump) (x) |0>_b |0>_c on `spec`.
[[nodiscard]] StateVector pump_product_state(const PumpInitialState& pump, const HilbertSpec& spec);

inline constexpr int default_tau_points = 400;
inline constexpr double default_tau_max = 3.0;

}  // namespace nlcavity::trilinear
