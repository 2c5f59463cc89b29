#include "nlcavity/errors.hpp"
#include "nlcavity/cli/config.hpp"

namespace nlcavity::cli {

namespace {

void detector_block(ScenarioConfig& c, double Q_T, double Q_m) {
    c.set("detector", "Z_p", 50.0);
    c.set("detector", "omega_T_hz", 5e9);
    c.set("detector", "Q_T", Q_T);
    c.set("detector", "omega_m_hz", 4e6);
    c.set("detector", "Q_m", Q_m);
    c.set("detector", "mass", 1e-16);
    c.set("detector", "I_c", 4.5e-6);
    c.set("detector", "C_J", 1e-14);
    c.set("detector", "Phi_ext", 0.442);
    c.set("detector", "B_ext", 0.05);
    c.set("detector", "loop_inductance", 1e-12);
    c.set("detector", "K_d", -3.4e-6);
    c.set("detector", "K_Tm", 1.1e-5);
}

ScenarioConfig cooling(double Q_T, double detuning, bool harmonic) {
    ScenarioConfig c;
    c.kind = "detector-cooling";
    detector_block(c, Q_T, 1e4);
    c.set("sweep", "detuning", detuning);
    c.set("sweep", "bath_T", "0, 0.05");
    c.set("sweep", "branch", "small");
    c.set("sweep", "harmonic_reference", harmonic ? "true" : "false");
    c.set("grid", "frac_min", 0.5);
    c.set("grid", "frac_max", 1.0);
    c.set("grid", "points", 51.0);
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"ch2-detection", "ch2-cooling-Q1e4", "ch2-goodcavity-Q1000", "ch3-beltran", "ch4-coherent9"};
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c;
    if (name == "ch2-detection") {
        c.kind = "detector-signal-noise";
        detector_block(c, 300.0, 1e3);
        c.set("sweep", "detunings", "0, 0.2, 0.4");
        c.set("sweep", "bath_T", 0.0);
        c.set("sweep", "branch", "small");
        c.set("sweep", "harmonic_reference", "true");
        c.set("grid", "I_min", 0.01);
        c.set("grid", "I_max", 0.7);
        c.set("grid", "points", 30.0);
        c.set("grid", "spacing", "log");
    } else if (name == "ch2-cooling-Q1e4") {
        c = cooling(300.0, 1.3, false);
    } else if (name == "ch2-goodcavity-Q1000") {
        c = cooling(1000.0, 2.2, true);
    } else if (name == "ch3-beltran") {
        c.kind = "hawking-line";
        c.set("line", "I_c", 2e-6);
        c.set("line", "C_0", 5e-17);
        c.set("line", "a", 0.25e-6);
        c.set("line", "N", 4800.0);
        c.set("line", "omega_p_hz", 1e12);
        c.set("line", "u_over_c_unbiased", 0.95);
        c.set("line", "loop_inductance", 1e-12);
        c.set("line", "convention", "squid_pair");
        c.set("pulse", "shape", "tanh");
        c.set("pulse", "amplitude", 0.2);
        c.set("pulse", "gradient_rate", 1e11);
        c.set("photons", "decay", "true");
        c.set("photons", "decay_per_1000_cells", 0.1);
        c.set("grid", "phi_min", 0.0);
        c.set("grid", "phi_max", 0.45);
        c.set("grid", "points", 46.0);
        c.set("profile", "points", 201.0);
        c.set("profile", "half_width", 10.0);
    } else if (name == "ch4-coherent9") {
        c.kind = "trilinear-evolve";
        c.set("trilinear", "pump", "coherent");
        c.set("trilinear", "mean", 9.0);
        c.set("trilinear", "dims", "30, 28, 28");
        c.set("trilinear", "leak_tol", 1e-6);
        c.set("grid", "tau_max", 3.0);
        c.set("grid", "points", 400.0);
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    c.output = name;
    return c;
}

}  // namespace nlcavity::cli
