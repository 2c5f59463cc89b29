#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlcavity::detector {

using cplx = std::complex<double>;

/// Inputs for computing K_Tm and K_d from the line and SQUID geometry.
struct GeometricBlock {
    double lambda = 1.0;  ///< dimensionless loop-geometry factor
    double l_osc = 0.0;   ///< m
    double LT_l = 0.0;    ///< total line inductance L_T l (H)
    double CT_l = 0.0;    ///< total line capacitance C_T l (F)
};

struct DetectorParams {
    double Z_p = 50.0;
    double omega_T = 0.0;
    double Q_T = 300.0;
    double omega_m = 0.0;
    double Q_m = 1e3;
    double mass = 1e-16;
    double I_c = 4.5e-6;
    double C_J = 1e-14;
    double Phi_ext = 0.442;   ///< units of the flux quantum
    double B_ext = 0.05;
    double loop_inductance = 1e-12;  ///< H, enters only the beta_L gate
    std::optional<double> K_d;       ///< direct values take precedence over `geometry`
    std::optional<double> K_Tm;
    std::optional<GeometricBlock> geometry;

    [[nodiscard]] double gamma_pT() const { return omega_T / (2.0 * Q_T); }
    [[nodiscard]] double gamma_bm() const { return omega_m / (2.0 * Q_m); }
    void validate() const;
};

/// Parameter set used for the detection and cooling examples.
[[nodiscard]] DetectorParams reference_params();

struct DrivePoint {
    double I_0 = 0.0;
    double delta_omega = 0.0;  ///< omega_p - omega_T
};

enum class Branch { small, unstable, large };
enum class BranchPolicy { small, large, follow_sweep };

struct MeanFieldSolution {
    cplx chi;
    Branch branch = Branch::small;
    double E = 0.0;  ///< |chi|^2 / (2 pi)
};

struct InductanceCoeffs {
    double L00, L20, L01;
};

struct Couplings {
    double K_Tm, K_d;
};

struct Onset {
    double E_bi, delta_omega_bi, I_bi;
};

struct ResponseCoeffs {
    cplx alpha1, alpha2, beta1, beta2, determinant;
    bool near_singular = false;
};

struct ValidityReport {
    double current_gate = 0.0;  ///< |I/I_c sec(pi Phi)|
    double beta_gate = 0.0;     ///< |beta_L sec(pi Phi)|
    [[nodiscard]] bool passes(double margin = 5.0) const {
        return current_gate * margin <= 1.0 && beta_gate * margin <= 1.0;
    }
};

struct EffectiveThermo {
    double R_omega = 1.0;
    double R_gamma = 1.0;
    double R_gamma_pole = 1.0;  ///< from the complex zero of the response determinant
    double G_plus = 0.0, G_minus = 0.0;
    double n_back_plus = 0.0, n_back_minus = 0.0;
    double n_net = 0.0;
    double lorentzian_residual = 0.0;
    double noise_residual = 0.0;
    bool weak_coupling = false;
    MeanFieldSolution mean_field;
    [[nodiscard]] double two_n_back_plus_one() const { return 2.0 * n_back_plus + 1.0; }
};

[[nodiscard]] double zero_point(const DetectorParams& p);
[[nodiscard]] InductanceCoeffs inductance_coeffs(const DetectorParams& p);
/// Roots x of x tan x = 1/zeta with x = k0 l / 2.
[[nodiscard]] double k0_half_length(double zeta);
[[nodiscard]] Couplings coupling_constants(const DetectorParams& p);
[[nodiscard]] double effective_duffing(const DetectorParams& p);
[[nodiscard]] ValidityReport validity_gates(const DetectorParams& p, double I_0);

/// c of the linear response; the small-drive limit of chi.
[[nodiscard]] cplx linear_amplitude(const DetectorParams& p, const DrivePoint& d);
/// Ascending in E; three entries inside the bistable region.
[[nodiscard]] std::vector<MeanFieldSolution> mean_field(const DetectorParams& p, const DrivePoint& d);
/// |LHS - RHS| / |RHS| of the mean-field equation.
[[nodiscard]] double mean_field_residual(const DetectorParams& p, const DrivePoint& d, cplx chi);
[[nodiscard]] MeanFieldSolution select_branch(const std::vector<MeanFieldSolution>& sols, BranchPolicy policy,
                                              std::optional<double> previous_E = std::nullopt);

[[nodiscard]] Onset bistability_onset(const DetectorParams& p);
/// (I_lower / I_bi, I_upper / I_bi) at Delta omega / Delta omega_bi = ratio.
[[nodiscard]] std::pair<double, double> bistability_boundary(double ratio);

[[nodiscard]] ResponseCoeffs response_coeffs(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega);

// Spectral densities per unit angular frequency, including the 1/(2 pi) measure (A^2 s).
[[nodiscard]] double signal_density(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega,
                                    double bath_T);
[[nodiscard]] double caves_density(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega);
[[nodiscard]] double noise_density(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega);
/// Z_p^-1 (hbar omega_s / 2)(delta omega / 2 pi).
[[nodiscard]] double added_noise(const DetectorParams& p, double omega_s, double delta_band);

// Band-integrated variances (A^2) over [omega_s - delta/2, omega_s + delta/2].
[[nodiscard]] double signal_spectrum(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega_s,
                                     double delta_band, double bath_T);
[[nodiscard]] double noise_spectrum(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega_s,
                                    double delta_band);
[[nodiscard]] double caves_bound(const DetectorParams& p, const DrivePoint& d, cplx chi, double omega_s,
                                 double delta_band);

/// Renormalized mechanical pole y = omega - omega_p on the side sign(side), y ~ R_w w_m - i R_g g_m.
[[nodiscard]] cplx mechanical_pole(const DetectorParams& p, const DrivePoint& d, cplx chi, int side);

/// Lorentzian parametrization of the signal and noise peaks. Throws InstabilityError when the
/// renormalized damping is not positive and NonLorentzianError when the fit residual reaches 0.05.
[[nodiscard]] EffectiveThermo effective_thermo(const DetectorParams& p, const DrivePoint& d, double bath_T,
                                               BranchPolicy policy = BranchPolicy::small);

/// 2 n_net + 1 = R_g^-1 (2 n_th + 1) + (1 - R_g^-1)(2 n_back + 1), returned as n_net.
[[nodiscard]] double net_occupation(double R_gamma, double n_thermal, double n_back);

struct CoolingPoint {
    double I_0 = 0.0;
    double bath_T = 0.0;
    bool ok = false;
    double n_net = 0.0;
    double two_n_back_plus_one = 0.0;
    double R_gamma = 0.0;
    std::string failure;
};

/// One entry per (I, T), T varying fastest. R_gamma and n_back are fitted once per drive at zero bath
/// temperature and n_net follows for each T.
[[nodiscard]] std::vector<CoolingPoint> cooling_curve(const DetectorParams& p, double delta_omega,
                                                      const std::vector<double>& I_grid,
                                                      const std::vector<double>& bath_T_list,
                                                      BranchPolicy policy = BranchPolicy::small);

struct HarmonicLimit {
    double delta_omega = 0.0;
    double two_n_back_plus_one = 0.0;
    double R_gamma = 0.0;
};

/// Smallest 2 n_back + 1 over red detunings in [-3 omega_m, -0.3 omega_m] with K_d = 0, at drive I_0.
[[nodiscard]] HarmonicLimit harmonic_cooling_limit(const DetectorParams& p, double I_0);

/// Detector figures at one operating point with the band centred on the phase-preserving peak.
struct OperatingPoint {
    double I_0 = 0.0;
    double omega_s = 0.0;
    double delta_band = 0.0;
    double signal = 0.0;
    double noise = 0.0;
    double caves = 0.0;
    double R_gamma = 0.0;
};

[[nodiscard]] OperatingPoint operating_point(const DetectorParams& p, const DrivePoint& d, double bath_T = 0.0,
                                             BranchPolicy policy = BranchPolicy::small);

}  // namespace nlcavity::detector
