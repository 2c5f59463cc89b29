#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlcavity/constants.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/qinfo/qinfo.hpp"

using namespace nlcavity;
using namespace nlcavity::qinfo;
using fock::cplx;
using fock::HilbertSpec;

namespace {

// Thermal entropy in its temperature form, with x = hbar w / (k_B T) from the Bose relation.
double thermal_entropy_temperature_form(double nbar) {
    const double x = std::log1p(1.0 / nbar);
    return -std::log(1.0 - std::exp(-x)) - x / (1.0 - std::exp(x));
}

DensityMatrix thermal_dm(double nbar, int dim) { return thermal_reference(nbar, 1.0, dim).state(); }

DensityMatrix random_mixed(int dim, int rank, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd g(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = {nd(rng), nd(rng)};
    Eigen::MatrixXcd r = g * g.adjoint();
    r /= r.trace();
    return DensityMatrix(HilbertSpec({dim}), r);
}

}  // namespace

TEST_CASE("thermal entropy identity against the temperature form") {
    for (double n : {0.01, 0.5, 1.0, 4.5, 9.0, 120.0}) {
        CHECK(std::abs(thermal_entropy(n) - thermal_entropy_temperature_form(n)) < 1e-12 * std::max(1.0, thermal_entropy(n)));
    }
    CHECK(thermal_entropy(0.0) == 0.0);
    CHECK(thermal_entropy(1.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("von Neumann entropy examples") {
    const auto pure = DensityMatrix::from_state(fock::coherent_state(cplx(1.2, -0.4), 20));
    CHECK(std::abs(von_neumann_entropy(pure)) < 1e-9);
    for (int d : {2, 5, 17}) {
        const DensityMatrix mixed(HilbertSpec({d}), Eigen::MatrixXcd::Identity(d, d) / d);
        CHECK(von_neumann_entropy(mixed) == doctest::Approx(std::log(d)).epsilon(1e-13));
    }
    for (double n : {0.5, 4.5, 9.0}) {
        const int dim = 400;
        CHECK(std::abs(von_neumann_entropy(thermal_dm(n, dim)) - thermal_entropy(n)) < 1e-6);
    }
}

TEST_CASE("effective temperature and Bose occupation are inverse") {
    const double w = 2 * std::numbers::pi * 5e9;
    CHECK(effective_temperature(1.0, w) ==
          doctest::Approx(constants::hbar * w / (constants::k_B * std::log(2.0))).epsilon(1e-14));
    for (double n : {1e-3, 0.2, 1.0, 7.0, 1e4}) {
        CHECK(std::abs(bose_occupation(w, effective_temperature(n, w)) - n) < 1e-12 * std::max(1.0, n));
    }
    const double big = 1e6;
    CHECK(effective_temperature(big, w) / (big * constants::hbar * w / constants::k_B) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(effective_temperature(0.0, w) == 0.0);
}

TEST_CASE("fidelity examples") {
    std::mt19937_64 rng(2);
    const auto rho = random_mixed(6, 3, rng);
    CHECK(std::abs(fidelity(rho, rho) - 1.0) < 1e-8);

    const std::vector<double> p{0.5, 0.3, 0.2, 0.0}, q{0.1, 0.2, 0.3, 0.4};
    double bhat = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) bhat += std::sqrt(p[i] * q[i]);
    CHECK(fidelity(DensityMatrix::diagonal(p), DensityMatrix::diagonal(q)) == doctest::Approx(bhat).epsilon(1e-10));

    const auto vac = DensityMatrix::from_state(fock::fock_state(HilbertSpec({200}), {0}));
    CHECK(fidelity(vac, thermal_dm(1.0, 200)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK_THROWS_AS((void)fidelity(vac, thermal_dm(1.0, 10)), DomainError);
}

TEST_CASE("property: fidelity is symmetric and bounded") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 7);
        const auto a = random_mixed(dim, 1 + static_cast<int>(rng() % static_cast<unsigned>(dim)), rng);
        const auto b = random_mixed(dim, 1 + static_cast<int>(rng() % static_cast<unsigned>(dim)), rng);
        const double fab = fidelity(a, b), fba = fidelity(b, a);
        CHECK(std::abs(fab - fba) < 1e-8);
        CHECK(fab >= 0.0);
        CHECK(fab < 1.0 - 1e-6);
        CHECK(std::abs(fidelity(a, a) - 1.0) < 1e-8);
    }
}

TEST_CASE("information examples") {
    CHECK(std::abs(information(thermal_dm(2.0, 600))) < 1e-8);
    const auto f9 = DensityMatrix::from_state(fock::fock_state(HilbertSpec({12}), {9}));
    CHECK(information(f9) == doctest::Approx(thermal_entropy(9.0)).epsilon(1e-12));
    CHECK(information(f9) == doctest::Approx(3.2508297339144826).epsilon(1e-12));
}

TEST_CASE("effective dimension equals inverse thermal purity") {
    CHECK(effective_dimension(0.0) == 1.0);
    CHECK(std::abs(effective_dimension(4.5) - 10.0) < 1e-9);
    for (double n : {0.3, 4.5, 9.0}) {
        // Geometric series sum p_n^2 over a long truncation.
        const double r = n / (n + 1);
        double s = 0.0, w = 1.0 / (n + 1);
        for (int k = 0; k < 5000; ++k) {
            s += w * w;
            w *= r;
        }
        CHECK(std::abs(1.0 / s - effective_dimension(n)) < 1e-9);
        CHECK(std::abs(inverse_purity(thermal_dm(n, 800)) - effective_dimension(n)) < 1e-9);
    }
}

TEST_CASE("squeezing examples") {
    const auto vac = DensityMatrix::from_state(fock::fock_state(HilbertSpec({5}), {0}));
    const auto sv = squeezing_params(vac);
    CHECK(std::abs(sv.q_plus) < 1e-15);
    CHECK(std::abs(sv.q_minus) < 1e-15);

    for (cplx alpha : {cplx(3.0, 0.0), cplx(0.0, 3.0), cplx(1.5, -2.0)}) {
        const auto c = DensityMatrix::from_state(fock::coherent_state(alpha, 40));
        const auto s = squeezing_params(c);
        CHECK(std::abs(s.q_plus) < 1e-5);
        CHECK(std::abs(s.q_minus) < 1e-5);
    }
    const auto one = DensityMatrix::from_state(fock::fock_state(HilbertSpec({4}), {1}));
    const auto s1 = squeezing_params(one);
    CHECK(s1.q_plus == doctest::Approx(2.0));
    CHECK(s1.q_minus == doctest::Approx(2.0));
}

TEST_CASE("property: entropy bounded by log dimension and uncertainty relation holds") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 10);
        const auto r = random_mixed(dim, 1 + static_cast<int>(rng() % static_cast<unsigned>(dim)), rng);
        const double s = von_neumann_entropy(r);
        CHECK(s >= -1e-12);
        CHECK(s <= std::log(dim) + 1e-12);
        const auto q = squeezing_params(r);
        CHECK((q.q_plus + 1.0) * (q.q_minus + 1.0) >= 1.0 - 1e-8);
    }
}

TEST_CASE("mutual information examples") {
    const HilbertSpec spec({10, 4, 4});
    const auto prod = fock::fock_state(spec, {9, 0, 0});
    const auto mi0 = mutual_information_partitions(prod);
    CHECK(std::abs(mi0.I_a_bc) < 1e-12);
    CHECK(std::abs(mi0.I_b_c) < 1e-12);

    // Two-path check of S_a: trace over bc versus the a|bc Schmidt spectrum (SVD).
    std::mt19937_64 rng(47);
    std::normal_distribution<double> nd;
    const HilbertSpec small({3, 3, 2});
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXcd v(small.total());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {nd(rng), nd(rng)};
        const StateVector psi(small, v, true);
        const auto mi = mutual_information_partitions(psi);
        Eigen::MatrixXcd m(3, 6);
        for (Eigen::Index i = 0; i < 18; ++i) m(i / 6, i % 6) = psi.amplitudes()[i];
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        double s = 0.0;
        for (double sv : svd.singularValues()) {
            const double p = sv * sv;
            if (p > 1e-15) s -= p * std::log(p);
        }
        CHECK(std::abs(mi.S_a - s) < 1e-8);
        CHECK(std::abs(von_neumann_entropy(fock::partial_trace(psi, {1, 2})) - mi.S_a) < 1e-8);
    }

    // Two-mode squeezed pair with the pump factored out: I_b-c = 2 S_b = 2 S_th(sinh^2 r).
    const int d = 40;
    const double r = 0.6;
    const HilbertSpec tri({2, d, d});
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(tri.total());
    for (int n = 0; n < d; ++n) v[tri.index({0, n, n})] = std::pow(std::tanh(r), n) / std::cosh(r);
    const StateVector sq(tri, v, true);
    const auto mi = mutual_information_partitions(sq);
    const double expect = 2.0 * thermal_entropy(std::sinh(r) * std::sinh(r));
    CHECK(std::abs(mi.I_b_c - expect) < 1e-8);
    CHECK(std::abs(mi.I_b_c - (2.0 * mi.S_b - mi.S_a)) < 1e-10);
}
