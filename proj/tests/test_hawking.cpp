#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlcavity/constants.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/hawking/hawking.hpp"

using namespace nlcavity;
using namespace nlcavity::hawking;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("junction inductance") {
    const auto p = realization_params();
    CHECK(junction_inductance(p, 0.0, 0.0) == doctest::Approx(8.228e-11).epsilon(1e-3));
    CHECK(junction_inductance(p, 0.0, 0.0) == doctest::Approx(constants::phi0 / (2.0 * pi * 4e-6)).epsilon(1e-14));
    // Continuity of the small-current branch.
    const double Ics = p.squid_critical_current(0.0);
    CHECK(junction_inductance(p, 0.99e-4 * Ics, 0.0) ==
          doctest::Approx(junction_inductance(p, 1.01e-4 * Ics, 0.0)).epsilon(1e-8));
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double L = junction_inductance(p, 0.0199 * i * p.squid_critical_current(0.1), 0.1);
        CHECK(L > prev);
        prev = L;
    }
    CHECK(junction_inductance(p, -0.3 * Ics, 0.0) == junction_inductance(p, 0.3 * Ics, 0.0));
    CHECK(p.squid_critical_current(1.0 / 3.0) == doctest::Approx(p.I_c).epsilon(1e-14));
    CHECK_THROWS_AS((void)junction_inductance(p, Ics, 0.0), ValidityError);
    CHECK_THROWS_AS((void)junction_inductance(p, 0.0, 0.5), ValidityError);
}

TEST_CASE("propagation velocity") {
    auto p = realization_params();
    const double c = propagation_velocity(p, 0.0);
    CHECK(c == doctest::Approx(3.898e6).epsilon(1e-3));
    CHECK(constants::c0 / c > 100.0 / 1.5);
    CHECK(constants::c0 / c < 150.0);
    double prev = c;
    for (double phi = 0.01; phi < 0.5; phi += 0.01) {
        const double v = propagation_velocity(p, phi);
        CHECK(v < prev);
        prev = v;
    }
    auto q = p;
    q.C_0 *= 2.0;
    CHECK(propagation_velocity(q, 0.2) == doctest::Approx(propagation_velocity(p, 0.2) / std::sqrt(2.0)).epsilon(1e-14));
    q = p;
    q.convention = JunctionConvention::single_junction;
    CHECK(propagation_velocity(q, 0.0) == doctest::Approx(c / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(constants::c0 / propagation_velocity(q, 0.0) == doctest::Approx(108.8).epsilon(2e-3));
}

TEST_CASE("dispersion") {
    const auto p = realization_params();
    CHECK(dispersion(p, 0.0, 0.1) == 0.0);
    const double LC = junction_inductance(p, 0.0, 0.1) * p.C_0;
    CHECK(dispersion(p, pi / p.a, 0.1) == doctest::Approx(2.0 / std::sqrt(LC)).epsilon(1e-14));
    CHECK_THROWS_AS((void)dispersion(p, 1.01 * pi / p.a, 0.1), DomainError);
    for (double phi = 0.0; phi <= 0.45; phi += 0.05) {
        const double c = propagation_velocity(p, phi);
        for (double ka = 1e-3; ka < 0.3; ka += 0.01) {
            const double k = ka / p.a;
            const double r = dispersion(p, k, phi) / (c * k);
            CHECK(std::abs(r - 1.0) < ka * ka / 20.0);
            CHECK(std::abs(r - 1.0) <= ka * ka / 24.0 + 1e-14);
        }
    }
}

TEST_CASE("realization pulse and metric") {
    const auto p = realization_params();
    const auto pulse = realization_pulse(p);
    const double c0 = propagation_velocity(p, 0.0);
    CHECK(p.u == doctest::Approx(0.95 * c0).epsilon(1e-15));
    CHECK(p.plasma_frequency(0.0) == doctest::Approx(2.0 * pi * 1e12).epsilon(1e-12));

    const double L = 30.0 * pulse.rise_scale();
    const auto far = metric_components(pulse, p, -L);
    CHECK(far.g_tt == doctest::Approx(c0 * c0 * (1.0 - 0.95 * 0.95)).epsilon(1e-9));
    CHECK(far.g_tt > 0.0);
    CHECK(far.g_tx == -p.u);
    CHECK(far.g_xx == -1.0);
    const auto deep = metric_components(pulse, p, L);
    CHECK(propagation_velocity(p, 0.2) < p.u);
    CHECK(deep.g_tt < 0.0);

    const auto h = find_horizon(pulse, p);
    REQUIRE(h.positions.size() == 1);
    CHECK_FALSE(h.white_hole_warning);
    CHECK(std::abs(metric_components(pulse, p, h.positions[0]).g_tt) < 1e-10 * p.u * p.u);
}

TEST_CASE("horizon search") {
    auto p = realization_params();
    const auto step = FluxPulse::tanh_step(0.2, 1e-5);
    p.u = 1.01 * propagation_velocity(p, 0.0);
    CHECK_THROWS_AS((void)find_horizon(step, p), NoHorizonError);
    p = realization_params();
    CHECK_THROWS_AS((void)find_horizon(FluxPulse::tanh_step(0.0, 1e-5), p), NoHorizonError);
    CHECK_THROWS_AS((void)FluxPulse::tanh_step(0.5, 1e-5), ValidityError);

    auto g = FluxPulse::gaussian(0.2, 1e-5);
    const auto h = find_horizon(g, p);
    REQUIRE(h.positions.size() == 2);
    CHECK(h.white_hole_warning);
    CHECK(h.positions[0] == doctest::Approx(-h.positions[1]).epsilon(1e-8));
    CHECK_THROWS_AS((void)black_hole_horizon(g, p), ValidityError);
    g.allow_white_hole = true;
    CHECK(black_hole_horizon(g, p) == doctest::Approx(h.positions[0]));
    CHECK(hawking_temperature(g, p) > 0.0);

    const auto custom = FluxPulse::custom([](double x) { return 0.1 * (1.0 + std::tanh(x / 2e-5)); }, 0.2, 2e-5);
    CHECK(find_horizon(custom, p).positions.size() == 1);
    CHECK_THROWS_AS((void)custom.derivative(0.0), DomainError);
}

TEST_CASE("Hawking temperature") {
    const auto p = realization_params();
    const auto pulse = realization_pulse(p);
    const double xh = black_hole_horizon(pulse, p);
    CHECK(std::abs(velocity_gradient(pulse, p, xh)) == doctest::Approx(1e11).epsilon(1e-8));
    CHECK(hawking_temperature(pulse, p) == doctest::Approx(0.12157).epsilon(1e-4));
    CHECK(temperature_from_gradient(-1e11) == temperature_from_gradient(1e11));

    const auto steeper = FluxPulse::tanh_step(0.2, 0.5 * pulse.rise_scale());
    CHECK(hawking_temperature(steeper, p) == doctest::Approx(2.0 * hawking_temperature(pulse, p)).epsilon(1e-9));
}

TEST_CASE("property: finite-difference gradient matches the analytic chain rule") {
    auto p = realization_params();
    std::mt19937_64 rng(307);
    std::uniform_real_distribution<double> ua(0.1, 0.45), uw(1e-7, 1e-4), us(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double w = uw(rng);
        const auto pulse = (trial % 2) ? FluxPulse::tanh_step(ua(rng), w) : FluxPulse::gaussian(ua(rng), w);
        const double xi = us(rng) * w;
        const double a = velocity_gradient_analytic(pulse, p, xi);
        const double n = velocity_gradient(pulse, p, xi);
        CHECK(std::abs(n - a) <= 1e-6 * std::abs(a) + 1e-9 * propagation_velocity(p, 0.0) / w);
    }
    // At the horizon specifically.
    const auto pulse = realization_pulse(p);
    const double xh = black_hole_horizon(pulse, p);
    CHECK(velocity_gradient(pulse, p, xh) == doctest::Approx(velocity_gradient_analytic(pulse, p, xh)).epsilon(1e-6));
}

TEST_CASE("radiated power") {
    CHECK(radiated_power(0.0) == 0.0);
    CHECK(radiated_power(0.12) == doctest::Approx(6.8e-15).epsilon(0.01));
    CHECK(radiated_power(0.24) / radiated_power(0.12) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)radiated_power(-1.0), DomainError);
}

TEST_CASE("photons per pulse") {
    auto p = realization_params();
    const auto pulse = realization_pulse(p);
    CHECK(horizon_lifetime(p) == doctest::Approx(3.24e-10).epsilon(2e-3));
    const double with = photons_per_pulse(pulse, p);
    const double without = photons_per_pulse(pulse, p, {0.1, false});
    CHECK(with == doctest::Approx(1.03).epsilon(0.01));
    CHECK(without == doctest::Approx(1.35).epsilon(0.01));
    CHECK(with < without);
    CHECK(with == doctest::Approx(without * (1.0 - 0.05 * 4.8)).epsilon(1e-12));

    for (double N : {300.0, 1200.0, 9600.0}) {
        auto q = p;
        q.N = N;
        CHECK(photons_per_pulse(pulse, q, {0.1, false}) / without == doctest::Approx(N / 4800.0).epsilon(0.01));
    }
    // Past full decay the count saturates.
    auto longer = p;
    longer.N = 20000.0;
    auto longest = p;
    longest.N = 40000.0;
    CHECK(photons_per_pulse(pulse, longer) == doctest::Approx(photons_per_pulse(pulse, longest)).epsilon(1e-14));
}

TEST_CASE("array impedance and validity gates") {
    auto p = realization_params();
    CHECK(array_impedance(p, 0.0) / constants::R_Q == doctest::Approx(0.883).epsilon(1e-3));
    CHECK(constants::R_Q == doctest::Approx(6453.2).epsilon(1e-4));
    double prev = 0.0;
    for (double phi = 0.0; phi < 0.5; phi += 0.02) {
        const double z = array_impedance(p, phi);
        CHECK(z > prev);
        prev = z;
    }
    CHECK(array_impedance(p, 0.4999) / constants::R_Q > 20.0);
    auto q = p;
    q.C_0 *= 4.0;
    CHECK(array_impedance(q, 0.1) == doctest::Approx(0.5 * array_impedance(p, 0.1)).epsilon(1e-14));

    const auto g = validity_gates(realization_pulse(p), p);
    CHECK(g.beta_L == doctest::Approx(6.08e-3).epsilon(1e-3));
    CHECK(g.max_phi == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(g.Z_A_over_R_Q < 1.0);
    CHECK(g.passes());
}
