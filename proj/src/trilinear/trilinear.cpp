#include "nlcavity/trilinear/trilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlcavity/constants.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/numerics/ode.hpp"
#include "nlcavity/numerics/quadrature.hpp"
#include "nlcavity/numerics/special.hpp"

namespace nlcavity::trilinear {

using fock::SparseOp;

TrilinearParams TrilinearParams::degenerate(double omega_a, std::vector<int> dims, double chi) {
    TrilinearParams p;
    p.chi = chi;
    p.omega_a = omega_a;
    p.omega_b = p.omega_c = 0.5 * omega_a;
    p.spec = HilbertSpec(std::move(dims));
    p.validate();
    return p;
}

void TrilinearParams::validate() const {
    if (!(chi > 0.0)) throw DomainError("trilinear: chi must be positive");
    if (!(omega_a > 0.0 && omega_b > 0.0 && omega_c > 0.0)) throw DomainError("trilinear: frequencies must be positive");
    if (std::abs(omega_a - omega_b - omega_c) > 1e-12 * omega_a)
        throw DomainError("trilinear: omega_a must equal omega_b + omega_c");
    if (spec.modes() != 3) throw DomainError("trilinear: three modes required");
}

PumpInitialState::PumpInitialState(std::vector<cplx> coefficients) : a_(std::move(coefficients)) {
    if (a_.empty()) throw DomainError("PumpInitialState: no coefficients");
    double norm = 0.0;
    for (const auto& c : a_) norm += std::norm(c);
    if (std::abs(norm - 1.0) > 1e-9) throw DomainError("PumpInitialState: coefficients not normalized");
}

PumpInitialState PumpInitialState::coherent(cplx alpha, int dim) {
    const auto psi = fock::coherent_state(alpha, dim);
    const auto& v = psi.amplitudes();
    return PumpInitialState(std::vector<cplx>(v.data(), v.data() + v.size()));
}

PumpInitialState PumpInitialState::number(int s) {
    if (s < 0) throw DomainError("PumpInitialState: negative Fock index");
    std::vector<cplx> a(static_cast<std::size_t>(s) + 1, 0.0);
    a.back() = 1.0;
    return PumpInitialState(std::move(a));
}

std::vector<double> PumpInitialState::probabilities() const {
    std::vector<double> p(a_.size());
    std::transform(a_.begin(), a_.end(), p.begin(), [](cplx c) { return std::norm(c); });
    return p;
}

double parametric_occupation(double A, double tau) {
    if (tau < 0.0) throw DomainError("parametric_occupation: tau must be nonnegative");
    const double s = std::sinh(A * tau);
    return s * s;
}

StateVector parametric_state(double A, double tau, int dim) {
    if (dim < 2) throw DomainError("parametric_state: dim must be >= 2");
    const double r = A * tau;
    const double t = std::tanh(r);
    const auto gate = [t](int d) { return std::pow(t * t, d); };
    if (gate(dim) >= 1e-8) {
        int need = dim;
        while (gate(need) >= 1e-8) ++need;
        throw TruncationError("parametric_state: tanh^(2 dim) >= 1e-8", need);
    }
    const HilbertSpec spec({dim, dim});
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.total());
    double amp = 1.0 / std::cosh(r);
    for (int n = 0; n < dim; ++n) {
        v[spec.index({n, n})] = amp;
        amp *= t;
    }
    return StateVector(spec, v, true);
}

double parametric_temperature(double A, double tau, double omega_b) {
    const double r = A * tau;
    if (r == 0.0) return 0.0;
    const double ln_coth = std::log(1.0 / std::tanh(std::abs(r)));
    return constants::hbar * omega_b / (2.0 * constants::k_B * ln_coth);
}

SemiclassicalRoots semiclassical_roots(double N_a0) {
    if (N_a0 < 0.0) throw DomainError("semiclassical: N_a(0) must be nonnegative");
    const double root = std::sqrt(1.0 + 12.0 * N_a0 + 4.0 * N_a0 * N_a0);
    const double bp = 0.25 * (1.0 + 2.0 * N_a0 + root);
    const double bm = 0.25 * (1.0 + 2.0 * N_a0 - root);
    return {bp, bm, (N_a0 - bm) / (bp - bm)};
}

SemiclassicalCurve semiclassical_pump(double N_a0, const RealGrid& tau_grid) {
    const auto roots = semiclassical_roots(N_a0);
    SemiclassicalCurve c;
    c.beta_plus = roots.beta_plus;
    c.beta_minus = roots.beta_minus;
    c.modulus = roots.modulus;
    const double k = std::sqrt(roots.beta_plus - roots.beta_minus);
    const auto raw = [&](double t) {
        const double dn = numerics::jacobi_dn(k * t, roots.modulus);
        return roots.beta_plus + (N_a0 - roots.beta_plus) / (dn * dn);
    };
    const auto rate = [&](double t) { return std::sqrt(std::max(raw(t), 0.0)); };

    c.tau = tau_grid.points();
    const std::size_t n = c.tau.size();
    c.N_a.resize(n);
    c.N_a_raw.resize(n);
    c.theta.resize(n);
    double theta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (c.tau[i] < 0.0) throw DomainError("semiclassical_pump: tau must be nonnegative");
        if (i > 0) theta += numerics::integrate_adaptive(rate, c.tau[i - 1], c.tau[i], {1e-12, 1e-10, 20000});
        else if (c.tau[0] > 0.0) theta = numerics::integrate_adaptive(rate, 0.0, c.tau[0], {1e-12, 1e-10, 20000});
        c.N_a_raw[i] = raw(c.tau[i]);
        c.N_a[i] = std::max(c.N_a_raw[i], 0.0);
        if (c.N_a_raw[i] < 0.0 && c.depletion_index < 0) c.depletion_index = static_cast<int>(i);
        c.theta[i] = theta;
    }
    return c;
}

std::vector<double> semiclassical_occupation(const SemiclassicalCurve& curve) {
    std::vector<double> nb(curve.theta.size());
    std::transform(curve.theta.begin(), curve.theta.end(), nb.begin(), [](double th) {
        const double s = std::sinh(th);
        return s * s;
    });
    return nb;
}

namespace {

double log_f_sq(int n, double k, int s) {
    return std::lgamma(s + 1.0) + std::lgamma(2.0 * k + n) - std::lgamma(n + 1.0) - std::lgamma(s - n + 1.0) -
           std::lgamma(2.0 * k);
}

}  // namespace

double short_time_f(int n, double k, int s) {
    if (n < 0 || n > s || !(k > 0.0)) throw DomainError("short_time_f: need 0 <= n <= s and k > 0");
    return std::exp(0.5 * log_f_sq(n, k, s));
}

double short_time_log_norm(int s, double tau) {
    if (s < 0 || !(tau > 0.0)) throw DomainError("short_time_log_norm: need s >= 0 and tau > 0");
    return 2.0 * s * std::log(tau) + numerics::log_scaled_upper_gamma(s + 1.0, 1.0 / (tau * tau));
}

std::vector<double> short_time_weights(int s, double tau, double k) {
    if (s < 0 || tau < 0.0 || !(k > 0.0)) throw DomainError("short_time_weights: need s >= 0, tau >= 0, k > 0");
    std::vector<double> w(static_cast<std::size_t>(s) + 1, 0.0);
    if (tau == 0.0) {
        w[0] = 1.0;
        return w;
    }
    std::vector<double> lw(w.size());
    const double lt = std::log(tau);
    for (int n = 0; n <= s; ++n) lw[static_cast<std::size_t>(n)] = log_f_sq(n, k, s) + 2.0 * n * lt;
    double lnorm;
    if (k == 0.5) {
        lnorm = short_time_log_norm(s, tau);
    } else {
        const double mx = *std::max_element(lw.begin(), lw.end());
        double sum = 0.0;
        for (double x : lw) sum += std::exp(x - mx);
        lnorm = mx + std::log(sum);
    }
    for (std::size_t n = 0; n < w.size(); ++n) w[n] = std::exp(lw[n] - lnorm);
    return w;
}

std::vector<ShortTimeBranch> short_time_state(const PumpInitialState& initial, double tau, double k) {
    std::vector<ShortTimeBranch> out;
    const auto& a = initial.coefficients();
    for (int s = 0; s <= initial.max_level(); ++s) {
        const cplx as = a[static_cast<std::size_t>(s)];
        if (as == cplx(0.0)) continue;
        ShortTimeBranch b;
        b.s = s;
        b.coefficient = as;
        b.amplitudes = short_time_weights(s, tau, k);
        for (double& x : b.amplitudes) x = std::sqrt(x);
        out.push_back(std::move(b));
    }
    return out;
}

StateVector short_time_vector(const PumpInitialState& initial, double tau, const HilbertSpec& spec) {
    if (spec.modes() != 3) throw DomainError("short_time_vector: three modes required");
    const int need = initial.max_level() + 1;
    for (int m = 0; m < 3; ++m)
        if (spec.dim(m) < need) throw TruncationError("short_time_vector: dimension below pump support", need);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.total());
    for (const auto& b : short_time_state(initial, tau)) {
        for (int n = 0; n <= b.s; ++n)
            v[spec.index({b.s - n, n, n})] += b.coefficient * b.amplitudes[static_cast<std::size_t>(n)];
    }
    return StateVector(spec, v);
}

ShortTimeReduced short_time_reduced(const PumpInitialState& initial, double tau) {
    const int dim = std::max(initial.max_level() + 1, 2);
    const auto branches = short_time_state(initial, tau);
    Eigen::MatrixXcd ra = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<double> pb(static_cast<std::size_t>(dim), 0.0);
    for (const auto& bs : branches) {
        const double ps = std::norm(bs.coefficient);
        for (int i = 0; i <= bs.s; ++i) pb[static_cast<std::size_t>(i)] += ps * std::pow(bs.amplitudes[static_cast<std::size_t>(i)], 2);
        for (const auto& br : branches) {
            const cplx c = bs.coefficient * std::conj(br.coefficient);
            for (int i = 0; i <= std::min(bs.s, br.s); ++i)
                ra(bs.s - i, br.s - i) += c * bs.amplitudes[static_cast<std::size_t>(i)] * br.amplitudes[static_cast<std::size_t>(i)];
        }
    }
    std::vector<double> diag(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) diag[static_cast<std::size_t>(i)] = ra(i, i).real();
    return {DensityMatrix(HilbertSpec({dim}), ra), DensityMatrix::diagonal(pb), diag};
}

DensityMatrix long_time_signal(const std::vector<double>& P) {
    if (P.empty()) throw DomainError("long_time_signal: empty distribution");
    double sum = 0.0;
    for (double p : P) {
        if (p < 0.0) throw DomainError("long_time_signal: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("long_time_signal: probabilities do not sum to 1");
    std::vector<double> q = P;
    if (q.size() < 2) q.push_back(0.0);
    return DensityMatrix::diagonal(q);
}

namespace {

/// Anti-Hermitian generator a b^+ c^+ - a^+ b c.
SparseOp generator(const HilbertSpec& spec) {
    const auto a = fock::embed(fock::ladder_ops(spec.dim(0)).annihilation, 0, spec);
    const auto bd = fock::embed(fock::ladder_ops(spec.dim(1)).creation, 1, spec);
    const auto cd = fock::embed(fock::ladder_ops(spec.dim(2)).creation, 2, spec);
    const auto fwd = a * bd * cd;
    SparseOp g = (fwd - fwd.adjoint()).matrix();
    g.makeCompressed();
    return g;
}

}  // namespace

ModeOperator build_interaction_hamiltonian(const TrilinearParams& params) {
    params.validate();
    return ModeOperator(params.spec, cplx(0.0, 1.0) * generator(params.spec));
}

Observables observe(const StateVector& psi) {
    const auto& spec = psi.spec();
    if (spec.modes() != 3) throw DomainError("observe: three modes required");
    const int da = spec.dim(0), db = spec.dim(1), dc = spec.dim(2);
    const auto& v = psi.amplitudes();
    Observables o;
    cplx x = 0.0;  // <a b^+ c^+>
    for (int la = 0; la < da; ++la)
        for (int lb = 0; lb < db; ++lb)
            for (int lc = 0; lc < dc; ++lc) {
                const Eigen::Index i = (static_cast<Eigen::Index>(la) * db + lb) * dc + lc;
                const double p = std::norm(v[i]);
                o.norm += p;
                o.N_a += la * p;
                o.N_a_sq += static_cast<double>(la) * la * p;
                o.N_b += lb * p;
                o.N_c += lc * p;
                if (la >= 1 && lb + 1 < db && lc + 1 < dc) {
                    const Eigen::Index j = (static_cast<Eigen::Index>(la - 1) * db + lb + 1) * dc + lc + 1;
                    x += std::conj(v[j]) * std::sqrt(static_cast<double>(la) * (lb + 1) * (lc + 1)) * v[i];
                }
            }
    o.H_I = -2.0 * x.imag();
    return o;
}

StateVector pump_product_state(const PumpInitialState& pump, const HilbertSpec& spec) {
    if (spec.modes() != 3) throw DomainError("pump_product_state: three modes required");
    if (pump.max_level() >= spec.dim(0))
        throw TruncationError("pump_product_state: pump dimension too small", pump.max_level() + 1);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spec.total());
    for (int s = 0; s <= pump.max_level(); ++s) v[spec.index({s, 0, 0})] = pump.coefficients()[static_cast<std::size_t>(s)];
    return StateVector(spec, v);
}

FullEvolution evolve_full(const StateVector& initial, const TrilinearParams& params, const RealGrid& tau_grid,
                          double leak_tol, const numerics::Tolerance& tol) {
    params.validate();
    if (!(initial.spec() == params.spec)) throw DomainError("evolve_full: state and params disagree on dimensions");
    const int need = static_cast<int>(std::ceil(observe(initial).N_a - 1e-9)) + 2;
    for (int m = 0; m < 3; ++m)
        if (params.spec.dim(m) < need)
            throw TruncationError("evolve_full: dimension below ceil(N_a(0)) + 2 on mode " + std::to_string(m), need);

    const SparseOp g = generator(params.spec);
    const numerics::ComplexRhs rhs = [&g](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        dy.noalias() = g * y;
    };
    const auto traj = numerics::evolve_ode(rhs, initial.amplitudes(), tau_grid, tol);

    FullEvolution out;
    out.states.reserve(traj.size());
    for (const auto& y : traj) {
        out.states.emplace_back(params.spec, y, true);
        out.max_leak = std::max(out.max_leak, out.states.back().max_boundary_population());
    }
    if (out.max_leak > leak_tol) {
        int largest = *std::max_element(params.spec.dims().begin(), params.spec.dims().end());
        throw TruncationError("evolve_full: top-level population " + std::to_string(out.max_leak) + " exceeds tolerance",
                              largest + 5);
    }
    return out;
}

}  // namespace nlcavity::trilinear
