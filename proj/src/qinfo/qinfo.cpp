#include "nlcavity/qinfo/qinfo.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "nlcavity/constants.hpp"
#include "nlcavity/errors.hpp"

namespace nlcavity::qinfo {

using fock::cplx;
using fock::HilbertSpec;

namespace {

double entropy_of(const Eigen::VectorXd& evals) {
    if (evals.size() > 0 && evals.minCoeff() < -1e-9) throw ValidityError("entropy: eigenvalue below -1e-9");
    double s = 0.0;
    for (double l : evals) {
        if (l > eigen_floor) s -= l * std::log(l);
    }
    return s;
}

void require_single_mode(const DensityMatrix& rho, const char* who) {
    if (rho.spec().modes() != 1) throw DomainError(std::string(who) + ": single-mode state required");
}

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_of(rho.eigenvalues()); }

double thermal_entropy(double nbar) {
    if (nbar < 0.0) throw DomainError("thermal_entropy: nbar must be nonnegative");
    if (nbar == 0.0) return 0.0;
    return (nbar + 1.0) * std::log1p(nbar) - nbar * std::log(nbar);
}

double bose_occupation(double omega, double temperature) {
    if (temperature <= 0.0) return 0.0;
    return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * temperature));
}

double effective_temperature(double nbar, double omega) {
    if (nbar < 0.0) throw DomainError("effective_temperature: nbar must be nonnegative");
    if (nbar == 0.0) return 0.0;
    return constants::hbar * omega / (constants::k_B * std::log1p(1.0 / nbar));
}

ThermalReference thermal_reference(double nbar, double omega, int dim) {
    if (nbar < 0.0) throw DomainError("thermal_reference: nbar must be nonnegative");
    if (dim < 2) throw DomainError("thermal_reference: dim must be >= 2");
    const double ratio = nbar / (nbar + 1.0);
    return {nbar, omega, dim, std::pow(ratio, dim)};
}

DensityMatrix ThermalReference::state() const {
    const double ratio = mean_occupation / (mean_occupation + 1.0);
    std::vector<double> p(static_cast<std::size_t>(dim));
    double sum = 0.0, w = 1.0;
    for (auto& x : p) {
        x = w;
        sum += w;
        w *= ratio;
    }
    for (auto& x : p) x /= sum;
    return DensityMatrix::diagonal(p);
}

namespace {

Eigen::MatrixXcd hermitian_sqrt(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries());
    const Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() < -1e-9) throw ValidityError("fidelity: negative eigenvalue below -1e-9");
    return es.eigenvectors() * lam.cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.size() != sigma.size()) throw DomainError("fidelity: dimension mismatch");
    // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the trace norm of sqrt(rho) sqrt(sigma).
    const Eigen::MatrixXcd prod = hermitian_sqrt(rho) * hermitian_sqrt(sigma);
    const double f = Eigen::JacobiSVD<Eigen::MatrixXcd>(prod).singularValues().sum();
    const double clipped = std::clamp(f, 0.0, 1.0);
    if (std::abs(clipped - f) > 1e-8) throw ValidityError("fidelity: value outside [0, 1] beyond clip tolerance");
    return clipped;
}

double mean_occupation(const DensityMatrix& rho) {
    require_single_mode(rho, "mean_occupation");
    double n = 0.0;
    for (Eigen::Index k = 0; k < rho.size(); ++k) n += static_cast<double>(k) * rho.entries()(k, k).real();
    return n;
}

double information(const DensityMatrix& rho) {
    return thermal_entropy(std::max(0.0, mean_occupation(rho))) - von_neumann_entropy(rho);
}

double effective_dimension(double nbar) {
    if (nbar < 0.0) throw DomainError("effective_dimension: nbar must be nonnegative");
    return 2.0 * nbar + 1.0;
}

double inverse_purity(const DensityMatrix& rho) {
    return 1.0 / (rho.entries() * rho.entries()).trace().real();
}

MutualInformation mutual_information_partitions(const StateVector& abc) {
    if (abc.spec().modes() != 3) throw DomainError("mutual_information_partitions: three modes required");
    MutualInformation mi;
    mi.S_a = von_neumann_entropy(fock::partial_trace(abc, {0}));
    mi.S_b = von_neumann_entropy(fock::partial_trace(abc, {1}));
    mi.S_c = von_neumann_entropy(fock::partial_trace(abc, {2}));
    mi.S_bc = mi.S_a;
    mi.I_a_bc = 2.0 * mi.S_a;
    mi.I_b_c = mi.S_b + mi.S_c - mi.S_bc;
    return mi;
}

Squeezing squeezing_params(const DensityMatrix& rho) {
    require_single_mode(rho, "squeezing_params");
    const Eigen::MatrixXcd& r = rho.entries();
    const Eigen::Index d = rho.size();
    cplx ea = 0.0, ea2 = 0.0;
    double n = 0.0;
    for (Eigen::Index k = 1; k < d; ++k) {
        // <a> = sum_k sqrt(k) rho(k, k-1); <a^2> = sum_k sqrt(k(k-1)) rho(k, k-2).
        ea += std::sqrt(static_cast<double>(k)) * r(k, k - 1);
        if (k >= 2) ea2 += std::sqrt(static_cast<double>(k * (k - 1))) * r(k, k - 2);
        n += static_cast<double>(k) * r(k, k).real();
    }
    // Untruncated commutator: <a a^+> = <N> + 1.
    const double var_plus = 0.25 * (2.0 * ea2.real() + 2.0 * n + 1.0) - ea.real() * ea.real();
    const double var_minus = 0.25 * (-2.0 * ea2.real() + 2.0 * n + 1.0) - ea.imag() * ea.imag();
    return {4.0 * var_plus - 1.0, 4.0 * var_minus - 1.0};
}

}  // namespace nlcavity::qinfo
