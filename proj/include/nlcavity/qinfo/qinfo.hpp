#pragma once

#include "nlcavity/fock/fock.hpp"

namespace nlcavity::qinfo {

using fock::DensityMatrix;
using fock::StateVector;

/// Eigenvalues below this are treated as zero before taking logarithms.
inline constexpr double eigen_floor = 1e-12;

/// -Tr(rho ln rho) in nats.
[[nodiscard]] double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of a thermal oscillator with mean occupation nbar, in nats.
[[nodiscard]] double thermal_entropy(double nbar);

/// Bose-Einstein occupation at angular frequency omega and temperature T (K).
[[nodiscard]] double bose_occupation(double omega, double temperature);

/// Temperature whose Bose occupation at omega equals nbar. Zero for nbar = 0.
[[nodiscard]] double effective_temperature(double nbar, double omega);

/// Truncated thermal reference state, renormalized; `leak` is the discarded weight.
struct ThermalReference {
    double mean_occupation = 0.0;
    double omega = 0.0;
    int dim = 0;
    double leak = 0.0;
    [[nodiscard]] DensityMatrix state() const;
    [[nodiscard]] double temperature() const { return effective_temperature(mean_occupation, omega); }
};

[[nodiscard]] ThermalReference thermal_reference(double nbar, double omega, int dim);

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)).
[[nodiscard]] double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// <N> of a single-mode state.
[[nodiscard]] double mean_occupation(const DensityMatrix& rho);

/// Thermal entropy at the state's own <N> minus its actual entropy.
[[nodiscard]] double information(const DensityMatrix& rho);

/// Inverse purity of the thermal state with mean nbar, i.e. 2 nbar + 1.
[[nodiscard]] double effective_dimension(double nbar);

/// 1 / Tr(rho^2) evaluated directly.
[[nodiscard]] double inverse_purity(const DensityMatrix& rho);

struct MutualInformation {
    double S_a = 0.0;
    double S_b = 0.0;
    double S_c = 0.0;
    double S_bc = 0.0;
    double I_a_bc = 0.0;  ///< 2 S_a for a pure tripartite state
    double I_b_c = 0.0;   ///< S_b + S_c - S_bc
};

/// Partition mutual informations of a pure three-mode state ordered (a, b, c).
[[nodiscard]] MutualInformation mutual_information_partitions(const StateVector& abc);

struct Squeezing {
    double q_plus = 0.0;
    double q_minus = 0.0;
};

/// q = 4 Var(X) - 1 for X+ = (a + a^+)/2 and X- = (a - a^+)/(2i).
[[nodiscard]] Squeezing squeezing_params(const DensityMatrix& rho);

}  // namespace nlcavity::qinfo
