#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

namespace nlcavity::fock {

using cplx = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Per-mode truncation dimensions. Row-major layout: the last mode varies fastest.
class HilbertSpec {
public:
    HilbertSpec() = default;
    explicit HilbertSpec(std::vector<int> dims);

    [[nodiscard]] const std::vector<int>& dims() const noexcept { return dims_; }
    [[nodiscard]] int modes() const noexcept { return static_cast<int>(dims_.size()); }
    [[nodiscard]] int dim(int mode) const;
    [[nodiscard]] Eigen::Index total() const noexcept { return total_; }

    [[nodiscard]] Eigen::Index index(const std::vector<int>& levels) const;
    [[nodiscard]] std::vector<int> levels(Eigen::Index index) const;

    bool operator==(const HilbertSpec& other) const { return dims_ == other.dims_; }

private:
    std::vector<int> dims_;
    Eigen::Index total_ = 0;
};

class StateVector {
public:
    /// Validates ||psi|| = 1 within 1e-9 unless `normalize` rescales first.
    StateVector(HilbertSpec spec, Eigen::VectorXcd amplitudes, bool normalize = false);

    [[nodiscard]] const HilbertSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }

    /// Probability weight in the top Fock level of `mode`.
    [[nodiscard]] double boundary_population(int mode) const;
    [[nodiscard]] double max_boundary_population() const;

private:
    HilbertSpec spec_;
    Eigen::VectorXcd amps_;
};

class DensityMatrix {
public:
    /// Validates Hermiticity (1e-10) and unit trace (1e-9).
    DensityMatrix(HilbertSpec spec, Eigen::MatrixXcd entries);

    static DensityMatrix from_state(const StateVector& psi);
    /// Diagonal state with the given probabilities on a single mode.
    static DensityMatrix diagonal(const std::vector<double>& probabilities);

    [[nodiscard]] const HilbertSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const Eigen::MatrixXcd& entries() const noexcept { return rho_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return rho_.rows(); }

    /// Ascending eigenvalues.
    [[nodiscard]] Eigen::VectorXd eigenvalues() const;
    /// Throws ValidityError if an eigenvalue lies below -1e-9.
    void validate_spectrum() const;

private:
    HilbertSpec spec_;
    Eigen::MatrixXcd rho_;
};

enum class OpLabel { annihilation, creation, number, identity, custom };

class ModeOperator {
public:
    ModeOperator(HilbertSpec spec, SparseOp matrix, OpLabel label = OpLabel::custom);

    [[nodiscard]] const HilbertSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const SparseOp& matrix() const noexcept { return m_; }
    [[nodiscard]] OpLabel label() const noexcept { return label_; }

    [[nodiscard]] ModeOperator adjoint() const;
    friend ModeOperator operator*(const ModeOperator& x, const ModeOperator& y);
    friend ModeOperator operator+(const ModeOperator& x, const ModeOperator& y);
    friend ModeOperator operator-(const ModeOperator& x, const ModeOperator& y);
    friend ModeOperator operator*(cplx s, const ModeOperator& x);

private:
    HilbertSpec spec_;
    SparseOp m_;
    OpLabel label_;
};

struct Ladder {
    ModeOperator annihilation;
    ModeOperator creation;
    ModeOperator number;
};

[[nodiscard]] Ladder ladder_ops(int dim);
[[nodiscard]] ModeOperator identity_op(const HilbertSpec& spec);

/// I (x) ... (x) op (x) ... (x) I with op on `mode`.
[[nodiscard]] ModeOperator embed(const ModeOperator& op, int mode, const HilbertSpec& spec);

[[nodiscard]] StateVector fock_state(const HilbertSpec& spec, const std::vector<int>& levels);
[[nodiscard]] StateVector tensor(const StateVector& x, const StateVector& y);

/// Poisson weight beyond the first `dim` levels for mean |alpha|^2.
[[nodiscard]] double coherent_tail(double mean, int dim);
/// Smallest dim whose coherent tail is below `tail_tol`.
[[nodiscard]] int coherent_required_dim(double mean, double tail_tol = 1e-6);

/// Truncated coherent state. Throws TruncationError if the tail exceeds 1e-6.
[[nodiscard]] StateVector coherent_state(cplx alpha, int dim);

[[nodiscard]] DensityMatrix partial_trace(const StateVector& psi, std::vector<int> keep);
[[nodiscard]] DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);

[[nodiscard]] cplx expectation(const StateVector& psi, const ModeOperator& op);
[[nodiscard]] cplx expectation(const DensityMatrix& rho, const ModeOperator& op);

}  // namespace nlcavity::fock
