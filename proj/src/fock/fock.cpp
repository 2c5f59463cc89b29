#include "nlcavity/fock/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "nlcavity/errors.hpp"

namespace nlcavity::fock {

HilbertSpec::HilbertSpec(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DomainError("HilbertSpec: at least one mode is required");
    total_ = 1;
    for (int d : dims_) {
        if (d < 2) throw DomainError("HilbertSpec: every dimension must be >= 2");
        total_ *= d;
    }
}

int HilbertSpec::dim(int mode) const {
    if (mode < 0 || mode >= modes()) throw DomainError("HilbertSpec: mode index out of range");
    return dims_[static_cast<std::size_t>(mode)];
}

Eigen::Index HilbertSpec::index(const std::vector<int>& levels) const {
    if (levels.size() != dims_.size()) throw DomainError("HilbertSpec: level count does not match mode count");
    Eigen::Index idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (levels[k] < 0 || levels[k] >= dims_[k]) throw DomainError("HilbertSpec: level out of range");
        idx = idx * dims_[k] + levels[k];
    }
    return idx;
}

std::vector<int> HilbertSpec::levels(Eigen::Index index) const {
    std::vector<int> out(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        out[k] = static_cast<int>(index % dims_[k]);
        index /= dims_[k];
    }
    return out;
}

StateVector::StateVector(HilbertSpec spec, Eigen::VectorXcd amplitudes, bool normalize)
    : spec_(std::move(spec)), amps_(std::move(amplitudes)) {
    if (amps_.size() != spec_.total()) throw DomainError("StateVector: amplitude count does not match spec");
    if (!amps_.allFinite()) throw DomainError("StateVector: non-finite amplitude");
    if (normalize) {
        const double n = amps_.norm();
        if (!(n > 0.0)) throw DomainError("StateVector: cannot normalize a zero vector");
        amps_ /= n;
    }
    if (std::abs(amps_.norm() - 1.0) > 1e-9) throw DomainError("StateVector: norm differs from 1 by more than 1e-9");
}

double StateVector::boundary_population(int mode) const {
    const int d = spec_.dim(mode);
    double p = 0.0;
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
        if (spec_.levels(i)[static_cast<std::size_t>(mode)] == d - 1) p += std::norm(amps_[i]);
    }
    return p;
}

double StateVector::max_boundary_population() const {
    double worst = 0.0;
    for (int m = 0; m < spec_.modes(); ++m) worst = std::max(worst, boundary_population(m));
    return worst;
}

DensityMatrix::DensityMatrix(HilbertSpec spec, Eigen::MatrixXcd entries) : spec_(std::move(spec)), rho_(std::move(entries)) {
    if (rho_.rows() != spec_.total() || rho_.cols() != spec_.total()) {
        throw DomainError("DensityMatrix: shape does not match spec");
    }
    if (!rho_.allFinite()) throw DomainError("DensityMatrix: non-finite entry");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw ValidityError("DensityMatrix: not Hermitian");
    if (std::abs(rho_.trace() - cplx(1.0, 0.0)) > 1e-9) throw ValidityError("DensityMatrix: trace differs from 1");
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    return DensityMatrix(psi.spec(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& probabilities) {
    const auto n = static_cast<Eigen::Index>(probabilities.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = probabilities[static_cast<std::size_t>(i)];
    return DensityMatrix(HilbertSpec({static_cast<int>(n)}), std::move(m));
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

void DensityMatrix::validate_spectrum() const {
    if (eigenvalues().minCoeff() < -1e-9) throw ValidityError("DensityMatrix: eigenvalue below -1e-9");
}

ModeOperator::ModeOperator(HilbertSpec spec, SparseOp matrix, OpLabel label)
    : spec_(std::move(spec)), m_(std::move(matrix)), label_(label) {
    if (m_.rows() != spec_.total() || m_.cols() != spec_.total()) throw DomainError("ModeOperator: shape mismatch");
    m_.makeCompressed();
}

ModeOperator ModeOperator::adjoint() const {
    OpLabel l = label_;
    if (l == OpLabel::annihilation) l = OpLabel::creation;
    else if (l == OpLabel::creation) l = OpLabel::annihilation;
    return ModeOperator(spec_, SparseOp(m_.adjoint()), l);
}

namespace {

void require_same(const HilbertSpec& a, const HilbertSpec& b) {
    if (!(a == b)) throw DomainError("operator algebra on mismatched Hilbert spaces");
}

}  // namespace

ModeOperator operator*(const ModeOperator& x, const ModeOperator& y) {
    require_same(x.spec_, y.spec_);
    return ModeOperator(x.spec_, SparseOp(x.m_ * y.m_));
}

ModeOperator operator+(const ModeOperator& x, const ModeOperator& y) {
    require_same(x.spec_, y.spec_);
    return ModeOperator(x.spec_, SparseOp(x.m_ + y.m_));
}

ModeOperator operator-(const ModeOperator& x, const ModeOperator& y) {
    require_same(x.spec_, y.spec_);
    return ModeOperator(x.spec_, SparseOp(x.m_ - y.m_));
}

ModeOperator operator*(cplx s, const ModeOperator& x) { return ModeOperator(x.spec_, SparseOp(s * x.m_)); }

Ladder ladder_ops(int dim) {
    if (dim < 2) throw DomainError("ladder_ops: dim must be >= 2");
    const HilbertSpec spec({dim});
    SparseOp a(dim, dim), n(dim, dim);
    std::vector<Eigen::Triplet<cplx>> ta, tn;
    for (int k = 1; k < dim; ++k) ta.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    for (int k = 0; k < dim; ++k) tn.emplace_back(k, k, static_cast<double>(k));
    a.setFromTriplets(ta.begin(), ta.end());
    n.setFromTriplets(tn.begin(), tn.end());
    ModeOperator ann(spec, a, OpLabel::annihilation);
    return {ann, ann.adjoint(), ModeOperator(spec, n, OpLabel::number)};
}

ModeOperator identity_op(const HilbertSpec& spec) {
    SparseOp id(spec.total(), spec.total());
    id.setIdentity();
    return ModeOperator(spec, id, OpLabel::identity);
}

ModeOperator embed(const ModeOperator& op, int mode, const HilbertSpec& spec) {
    if (mode < 0 || mode >= spec.modes()) throw DomainError("embed: mode index out of range");
    if (op.spec().total() != spec.dim(mode)) throw DomainError("embed: operator dimension does not match the mode");
    Eigen::Index left = 1, right = 1;
    for (int k = 0; k < mode; ++k) left *= spec.dim(k);
    for (int k = mode + 1; k < spec.modes(); ++k) right *= spec.dim(k);
    const Eigen::Index d = spec.dim(mode);

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(op.matrix().nonZeros() * left * right));
    for (Eigen::Index r = 0; r < d; ++r) {
        for (SparseOp::InnerIterator it(op.matrix(), r); it; ++it) {
            for (Eigen::Index l = 0; l < left; ++l) {
                for (Eigen::Index q = 0; q < right; ++q) {
                    trip.emplace_back((l * d + it.row()) * right + q, (l * d + it.col()) * right + q, it.value());
                }
            }
        }
    }
    SparseOp m(spec.total(), spec.total());
    m.setFromTriplets(trip.begin(), trip.end());
    return ModeOperator(spec, std::move(m), op.label());
}

StateVector fock_state(const HilbertSpec& spec, const std::vector<int>& levels) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.total());
    v[spec.index(levels)] = 1.0;
    return StateVector(spec, std::move(v));
}

StateVector tensor(const StateVector& x, const StateVector& y) {
    std::vector<int> dims = x.spec().dims();
    dims.insert(dims.end(), y.spec().dims().begin(), y.spec().dims().end());
    const auto& ax = x.amplitudes();
    const auto& ay = y.amplitudes();
    Eigen::VectorXcd v(ax.size() * ay.size());
    for (Eigen::Index i = 0; i < ax.size(); ++i) v.segment(i * ay.size(), ay.size()) = ax[i] * ay;
    return StateVector(HilbertSpec(std::move(dims)), std::move(v), true);
}

double coherent_tail(double mean, int dim) {
    if (mean < 0.0) throw DomainError("coherent_tail: mean must be nonnegative");
    if (mean == 0.0) return 0.0;
    // Sum the Poisson weights from n = dim upward in log space.
    double log_p = -mean + dim * std::log(mean) - std::lgamma(dim + 1.0);
    double tail = 0.0;
    for (int n = dim; n < dim + 100000; ++n) {
        const double p = std::exp(log_p);
        tail += p;
        if (n > mean && p < 1e-18 * std::max(tail, 1e-300)) break;
        log_p += std::log(mean) - std::log(n + 1.0);
    }
    return tail;
}

int coherent_required_dim(double mean, double tail_tol) {
    int d = 2;
    while (coherent_tail(mean, d) >= tail_tol) ++d;
    return d;
}

StateVector coherent_state(cplx alpha, int dim) {
    if (dim < 2) throw DomainError("coherent_state: dim must be >= 2");
    const double mean = std::norm(alpha);
    if (coherent_tail(mean, dim) >= 1e-6) {
        const int need = coherent_required_dim(mean);
        throw TruncationError("coherent_state: truncation tail >= 1e-6; need dim >= " + std::to_string(need), need);
    }
    Eigen::VectorXcd v(dim);
    cplx term = std::exp(-0.5 * mean);
    v[0] = term;
    for (int n = 1; n < dim; ++n) {
        term *= alpha / std::sqrt(static_cast<double>(n));
        v[n] = term;
    }
    return StateVector(HilbertSpec({dim}), std::move(v), true);
}

namespace {

struct Split {
    HilbertSpec kept;
    std::vector<Eigen::Index> k_of;  // full index -> kept index
    std::vector<Eigen::Index> t_of;  // full index -> traced index
    Eigen::Index traced_total = 1;
};

Split split_modes(const HilbertSpec& spec, std::vector<int> keep) {
    if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (int m : keep) {
        if (m < 0 || m >= spec.modes()) throw DomainError("partial_trace: mode index out of range");
    }
    std::vector<int> kdims, tdims;
    std::vector<bool> is_kept(static_cast<std::size_t>(spec.modes()), false);
    for (int m : keep) is_kept[static_cast<std::size_t>(m)] = true;
    for (int m = 0; m < spec.modes(); ++m) (is_kept[static_cast<std::size_t>(m)] ? kdims : tdims).push_back(spec.dim(m));

    Split s{HilbertSpec(kdims), {}, {}, 1};
    for (int d : tdims) s.traced_total *= d;
    const auto n = static_cast<std::size_t>(spec.total());
    s.k_of.resize(n);
    s.t_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto lv = spec.levels(static_cast<Eigen::Index>(i));
        Eigen::Index k = 0, t = 0;
        for (int m = 0; m < spec.modes(); ++m) {
            const auto um = static_cast<std::size_t>(m);
            if (is_kept[um]) k = k * spec.dim(m) + lv[um];
            else t = t * spec.dim(m) + lv[um];
        }
        s.k_of[i] = k;
        s.t_of[i] = t;
    }
    return s;
}

}  // namespace

DensityMatrix partial_trace(const StateVector& psi, std::vector<int> keep) {
    const Split s = split_modes(psi.spec(), std::move(keep));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(s.kept.total(), s.traced_total);
    const auto& a = psi.amplitudes();
    for (std::size_t i = 0; i < s.k_of.size(); ++i) m(s.k_of[i], s.t_of[i]) = a[static_cast<Eigen::Index>(i)];
    Eigen::MatrixXcd rho = m * m.adjoint();
    return DensityMatrix(s.kept, std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
    const Split s = split_modes(rho.spec(), std::move(keep));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(s.kept.total(), s.kept.total());
    const auto n = s.k_of.size();
    // Group full indices by traced index so only matching pairs are visited.
    std::vector<std::vector<std::size_t>> by_t(static_cast<std::size_t>(s.traced_total));
    for (std::size_t i = 0; i < n; ++i) by_t[static_cast<std::size_t>(s.t_of[i])].push_back(i);
    for (const auto& group : by_t) {
        for (std::size_t i : group) {
            for (std::size_t j : group) {
                out(s.k_of[i], s.k_of[j]) += rho.entries()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    return DensityMatrix(s.kept, std::move(out));
}

cplx expectation(const StateVector& psi, const ModeOperator& op) {
    if (!(psi.spec() == op.spec())) throw DomainError("expectation: state and operator spaces differ");
    return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

cplx expectation(const DensityMatrix& rho, const ModeOperator& op) {
    if (!(rho.spec() == op.spec())) throw DomainError("expectation: state and operator spaces differ");
    const Eigen::MatrixXcd prod = op.matrix() * rho.entries();
    return prod.trace();
}

}  // namespace nlcavity::fock
