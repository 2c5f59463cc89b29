#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "nlcavity/constants.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/qinfo/qinfo.hpp"
#include "nlcavity/trilinear/trilinear.hpp"

using namespace nlcavity;
using namespace nlcavity::trilinear;

namespace {

double overlap_sq(const StateVector& x, const StateVector& y) {
    return std::norm(x.amplitudes().dot(y.amplitudes()));
}

// Direct falling-factorial sum for the short-time normalization.
double falling_sum(int s, double tau) {
    double sum = 0.0, term = 1.0;
    for (int n = 0; n <= s; ++n) {
        sum += term;
        term *= (s - n) * tau * tau;
    }
    return sum;
}

}  // namespace

TEST_CASE("single pump quantum: expm oracle and sin^2 tau") {
    const auto params = TrilinearParams::degenerate(2.0, {3, 3, 3});
    const auto psi0 = fock::fock_state(params.spec, {1, 0, 0});
    const auto grid = RealGrid::linspace(0.0, 3.0, 31);
    const auto run = evolve_full(psi0, params, grid);

    const Eigen::MatrixXcd h = Eigen::MatrixXcd(build_interaction_hamiltonian(params).matrix());
    CHECK((h - h.adjoint()).norm() < 1e-14);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const Eigen::MatrixXcd u = (cplx(0.0, -1.0) * t * h).exp();
        const Eigen::VectorXcd oracle = u * psi0.amplitudes();
        CHECK((run.states[i].amplitudes() - oracle).norm() < 1e-8);
        CHECK(std::abs(observe(run.states[i]).N_b - std::pow(std::sin(t), 2)) < 1e-8);
    }
    CHECK(run.max_leak == 0.0);
}

TEST_CASE("evolve_full preconditions and leak gate") {
    const auto small = TrilinearParams::degenerate(2.0, {6, 3, 3});
    CHECK_THROWS_AS((void)evolve_full(fock::fock_state(small.spec, {4, 0, 0}), small, RealGrid::linspace(0, 1, 3)),
                    TruncationError);
    // Pump 4 with signal truncated to exactly ceil + 2 = 6 fits; level 5 is never reached.
    const auto ok = TrilinearParams::degenerate(2.0, {6, 6, 6});
    CHECK_NOTHROW((void)evolve_full(fock::fock_state(ok.spec, {4, 0, 0}), ok, RealGrid::linspace(0, 2, 5)));
    // A coherent pump with a heavy tail pushes weight into the top signal level.
    const auto tight = TrilinearParams::degenerate(2.0, {30, 11, 11});
    const auto pump = PumpInitialState::coherent(3.0, 30);
    CHECK_THROWS_AS((void)evolve_full(pump_product_state(pump, tight.spec), tight, RealGrid::linspace(0, 3, 7)),
                    TruncationError);
}

TEST_CASE("property: Manley-Rowe quantities and <H_I> are conserved") {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> nd;
    const auto params = TrilinearParams::degenerate(2.0, {6, 8, 8});
    const auto grid = RealGrid::linspace(0.0, 3.0, 13);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<cplx> a(5);
        for (auto& c : a) c = {nd(rng), nd(rng)};
        double n = 0.0;
        for (auto& c : a) n += std::norm(c);
        for (auto& c : a) c /= std::sqrt(n);
        const auto run = evolve_full(pump_product_state(PumpInitialState(a), params.spec), params, grid);
        const auto o0 = observe(run.states.front());
        for (const auto& psi : run.states) {
            const auto o = observe(psi);
            CHECK(std::abs(o.norm - 1.0) < 1e-9);
            CHECK(std::abs((o.N_a + o.N_b) - (o0.N_a + o0.N_b)) < 1e-8);
            CHECK(std::abs((o.N_a + o.N_c) - (o0.N_a + o0.N_c)) < 1e-8);
            CHECK(std::abs(o.N_b - o.N_c) < 1e-8);
            CHECK(std::abs(o.H_I - o0.H_I) < 1e-8);
        }
    }
}

TEST_CASE("observe agrees with operator expectation values") {
    std::mt19937_64 rng(73);
    std::normal_distribution<double> nd;
    const HilbertSpec spec({4, 3, 5});
    Eigen::VectorXcd v(spec.total());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {nd(rng), nd(rng)};
    const StateVector psi(spec, v, true);
    const auto o = observe(psi);
    TrilinearParams p;
    p.spec = spec;
    CHECK(std::abs(o.H_I - fock::expectation(psi, build_interaction_hamiltonian(p)).real()) < 1e-12);
    const auto na = fock::embed(fock::ladder_ops(4).number, 0, spec);
    CHECK(std::abs(o.N_a - fock::expectation(psi, na).real()) < 1e-12);
    CHECK(std::abs(o.N_a_sq - fock::expectation(psi, na * na).real()) < 1e-12);
}

TEST_CASE("short-time normalization identity") {
    for (int s : {0, 1, 4, 9, 20, 35}) {
        for (double tau : {0.01, 0.1, 0.5, 1.0, 3.0}) {
            const double direct = std::log(falling_sum(s, tau));
            CHECK(std::abs(short_time_log_norm(s, tau) - direct) < 1e-11 * std::max(1.0, std::abs(direct)));
        }
    }
    // f_n(1/2, s)^2 reduces to the falling factorial s!/(s-n)!.
    CHECK(short_time_f(3, 0.5, 9) == doctest::Approx(std::sqrt(9.0 * 8.0 * 7.0)).epsilon(1e-13));
    CHECK(short_time_f(0, 0.5, 5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)short_time_f(6, 0.5, 5), DomainError);
}

TEST_CASE("property: short-time weights are a distribution and tau = 0 is the initial state") {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int s = static_cast<int>(rng() % 40);
        const double tau = ut(rng);
        const double k = (trial % 4 == 0) ? 1.5 : 0.5;
        const auto w = short_time_weights(s, tau, k);
        double sum = 0.0;
        for (double x : w) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
    const auto w0 = short_time_weights(9, 0.0);
    CHECK(w0[0] == 1.0);
    const auto pump = PumpInitialState::coherent(2.0, 20);
    const auto red = short_time_reduced(pump, 0.0);
    CHECK(std::abs(red.rho_signal.entries()(0, 0).real() - 1.0) < 1e-12);
}

TEST_CASE("short-time state agrees with full evolution at small tau") {
    const int M = 9;
    const auto params = TrilinearParams::degenerate(2.0, {M + 2, M + 2, M + 2});
    const double tau_max = 0.1 / std::sqrt(0.5 * M);
    const auto grid = RealGrid::linspace(0.0, tau_max, 5);
    const auto pump = PumpInitialState::number(M);
    const auto run = evolve_full(pump_product_state(pump, params.spec), params, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto st = short_time_vector(pump, grid[i], params.spec);
        CHECK(overlap_sq(st, run.states[i]) > 1.0 - 1e-3);
    }
}

TEST_CASE("short-time reduced states") {
    const auto pump = PumpInitialState::coherent(2.0, 20);
    const double tau = 0.3;
    const auto red = short_time_reduced(pump, tau);
    // Oracle: trace the embedded three-mode vector.
    const HilbertSpec spec({20, 20, 20});
    const auto full = short_time_vector(pump, tau, spec);
    const auto ra = fock::partial_trace(full, {0});
    const auto rb = fock::partial_trace(full, {1});
    CHECK((ra.entries() - red.rho_pump.entries()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rb.entries() - red.rho_signal.entries()).cwiseAbs().maxCoeff() < 1e-12);
    for (std::size_t i = 0; i < red.pump_diagonal.size(); ++i)
        CHECK(red.pump_diagonal[i] == doctest::Approx(ra.entries()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real()));
}

TEST_CASE("long-time signal limit") {
    const auto pump = PumpInitialState::coherent(3.0, 30);
    const auto P = pump.probabilities();
    const auto limit = long_time_signal(P);
    const auto red = short_time_reduced(pump, 100.0);
    CHECK(qinfo::fidelity(limit, red.rho_signal) > 1.0 - 1e-3);
    for (std::size_t s = 0; s < P.size(); ++s)
        CHECK(limit.entries()(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real() == P[s]);
    CHECK_THROWS_AS((void)long_time_signal({0.5, 0.4}), DomainError);
}

TEST_CASE("parametric tier") {
    CHECK(parametric_occupation(3.0, 0.0) == 0.0);
    CHECK(parametric_occupation(3.0, 0.5) == doctest::Approx(std::pow(std::sinh(1.5), 2)).epsilon(1e-15));
    // T = hbar w / (2 k_B ln coth(A tau)); ln coth(1.5) = 0.0996613...
    const double w = 1e10;
    const double unit = constants::hbar * w / constants::k_B;
    CHECK(parametric_temperature(3.0, 0.5, w) / unit == doctest::Approx(5.0171).epsilon(1e-4));
    CHECK(parametric_temperature(3.0, 0.0, w) == 0.0);

    const auto sq = parametric_state(1.0, 0.5, 60);
    const auto rb = fock::partial_trace(sq, {0});
    CHECK(qinfo::mean_occupation(rb) == doctest::Approx(parametric_occupation(1.0, 0.5)).epsilon(1e-7));
    // Signal of a two-mode squeezed vacuum is thermal at the same occupation.
    const double nb = parametric_occupation(1.0, 0.5);
    CHECK(qinfo::fidelity(rb, qinfo::thermal_reference(nb, w, 60).state()) > 1.0 - 1e-8);
    CHECK(parametric_temperature(1.0, 0.5, w) ==
          doctest::Approx(qinfo::effective_temperature(nb, w)).epsilon(1e-12));
    try {
        (void)parametric_state(3.0, 1.0, 30);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(std::pow(std::tanh(3.0), 2 * e.required_dim()) < 1e-8);
    }
}

TEST_CASE("parametric tier matches the full model for a strong short pump") {
    const double N0 = 25.0;
    const int pump_dim = fock::coherent_required_dim(N0) + 1;
    const auto params = TrilinearParams::degenerate(2.0, {pump_dim, 27, 27});
    const auto pump = PumpInitialState::coherent(5.0, pump_dim);
    const auto grid = RealGrid::linspace(0.0, 0.1, 5);
    const auto run = evolve_full(pump_product_state(pump, params.spec), params, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double full = observe(run.states[i]).N_b;
        const double para = parametric_occupation(std::sqrt(N0), grid[i]);
        CHECK(std::abs(full / para - 1.0) < 0.10);
    }
}

TEST_CASE("semiclassical roots and curve") {
    const auto r = semiclassical_roots(9.0);
    // Roots of 2 b^2 - (1 + 2 N0) b - N0 = 0 at N0 = 9.
    CHECK(2 * r.beta_plus * r.beta_plus - 19.0 * r.beta_plus - 9.0 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(2 * r.beta_minus * r.beta_minus - 19.0 * r.beta_minus - 9.0 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(r.beta_plus == doctest::Approx(9.952).epsilon(1e-4));
    CHECK(r.beta_minus == doctest::Approx(-0.4522).epsilon(1e-4));
    CHECK(r.modulus == doctest::Approx(0.9085).epsilon(1e-4));

    const auto grid = RealGrid::linspace(0.0, 3.0, 400);
    const auto c = semiclassical_pump(9.0, grid);
    CHECK(c.N_a.front() == doctest::Approx(9.0).epsilon(1e-14));
    for (std::size_t i = 0; i < c.N_a.size(); ++i) {
        CHECK(c.N_a[i] >= 0.0);
        CHECK(c.N_a[i] <= 9.0 + 1e-12);
        if (i > 0) CHECK(c.theta[i] >= c.theta[i - 1]);
    }
    CHECK(c.depletion_index > 0);
    const double raw_min = *std::min_element(c.N_a_raw.begin(), c.N_a_raw.end());
    CHECK(raw_min >= r.beta_minus - 1e-9);

    // Early times: undepleted pump, theta ~ sqrt(N0) tau.
    const auto nb = semiclassical_occupation(c);
    CHECK(nb[1] / parametric_occupation(3.0, grid[1]) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(semiclassical_pump(0.0, grid).N_a.back() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(PumpInitialState({0.5, 0.5}), DomainError);
    TrilinearParams p;
    p.spec = HilbertSpec({3, 3, 3});
    p.omega_b = 0.7;
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK_THROWS_AS((void)parametric_occupation(1.0, -0.1), DomainError);
}
