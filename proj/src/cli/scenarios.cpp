#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "nlcavity/cli/scenario.hpp"
#include "nlcavity/constants.hpp"
#include "nlcavity/detector/detector.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/fock/fock.hpp"
#include "nlcavity/hawking/hawking.hpp"
#include "nlcavity/numerics/tolerance.hpp"
#include "nlcavity/qinfo/qinfo.hpp"
#include "nlcavity/trilinear/trilinear.hpp"

namespace nlcavity::cli {

namespace {

using nlohmann::json;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// Runs body(i) for i in [0, n) on up to thread_count() workers. Results must be written by index.
void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<double> drive_grid(const ScenarioConfig& c, const std::string& lo_key, const std::string& hi_key) {
    const double lo = c.number("grid", lo_key), hi = c.number("grid", hi_key);
    const int n = c.count("grid", "points");
    const std::string spacing = c.text_or("grid", "spacing", "linear");
    if (spacing != "linear" && spacing != "log") throw ConfigError("config: [grid] spacing must be linear or log");
    if (n == 1) return {lo};
    if (!(hi > lo)) throw ConfigError("config: [grid] needs " + hi_key + " > " + lo_key);
    if (spacing == "log") {
        if (!(lo > 0.0)) throw ConfigError("config: log spacing needs a positive lower end");
        return numerics::RealGrid::logspace(lo, hi, n).points();
    }
    return numerics::RealGrid::linspace(lo, hi, n).points();
}

detector::BranchPolicy branch_policy(const ScenarioConfig& c) {
    const std::string b = c.text_or("sweep", "branch", "small");
    if (b == "small") return detector::BranchPolicy::small;
    if (b == "large") return detector::BranchPolicy::large;
    if (b == "follow_sweep") return detector::BranchPolicy::follow_sweep;
    throw ConfigError("config: [sweep] branch must be small, large or follow_sweep");
}

detector::DetectorParams detector_params(const ScenarioConfig& c) {
    c.require_section("detector");
    auto p = detector::reference_params();
    const std::string s = "detector";
    p.Z_p = c.number_or(s, "Z_p", p.Z_p);
    p.omega_T = c.angular(s, "omega_T").value_or(p.omega_T);
    p.Q_T = c.number_or(s, "Q_T", p.Q_T);
    p.omega_m = c.angular(s, "omega_m").value_or(p.omega_m);
    p.Q_m = c.number_or(s, "Q_m", p.Q_m);
    p.mass = c.number_or(s, "mass", p.mass);
    p.I_c = c.number_or(s, "I_c", p.I_c);
    p.C_J = c.number_or(s, "C_J", p.C_J);
    p.Phi_ext = c.number_or(s, "Phi_ext", p.Phi_ext);
    p.B_ext = c.number_or(s, "B_ext", p.B_ext);
    p.loop_inductance = c.number_or(s, "loop_inductance", p.loop_inductance);
    const bool geometric = c.has(s, "lambda") || c.has(s, "l_osc") || c.has(s, "LT_l") || c.has(s, "CT_l");
    if (geometric) {
        p.geometry = detector::GeometricBlock{c.number_or(s, "lambda", 1.0), c.number(s, "l_osc"), c.number(s, "LT_l"),
                                              c.number(s, "CT_l")};
        if (!c.has(s, "K_d")) p.K_d.reset();
        if (!c.has(s, "K_Tm")) p.K_Tm.reset();
    }
    if (auto v = c.maybe_number(s, "K_d")) p.K_d = *v;
    if (auto v = c.maybe_number(s, "K_Tm")) p.K_Tm = *v;
    p.validate();
    return p;
}

json detector_manifest(const detector::DetectorParams& p) {
    const auto k = detector::coupling_constants(p);
    return {{"Z_p", p.Z_p},       {"omega_T", p.omega_T}, {"Q_T", p.Q_T},         {"omega_m", p.omega_m},
            {"Q_m", p.Q_m},       {"mass", p.mass},       {"I_c", p.I_c},         {"C_J", p.C_J},
            {"Phi_ext", p.Phi_ext}, {"B_ext", p.B_ext},   {"loop_inductance", p.loop_inductance},
            {"K_d", k.K_d},       {"K_Tm", k.K_Tm},       {"effective_duffing", detector::effective_duffing(p)},
            {"zero_point", detector::zero_point(p)}};
}

json gate_json(const detector::ValidityReport& g) {
    return {{"current_gate", g.current_gate}, {"beta_gate", g.beta_gate}, {"passes", g.passes()}};
}

void run_bistability(const ScenarioConfig& c, RunResult& r) {
    const auto p = detector_params(c);
    const auto on = detector::bistability_onset(p);
    Table t{"bistability.csv",
            {"detuning_over_bi", "I_lower_over_bi", "I_upper_over_bi", "delta_omega", "I_lower", "I_upper"},
            {}};
    for (double ratio : drive_grid(c, "ratio_min", "ratio_max")) {
        if (ratio < 1.0) throw ConfigError("config: bistability ratios must be at least 1");
        const auto [lo, hi] = detector::bistability_boundary(ratio);
        t.rows.push_back({ratio, lo, hi, ratio * on.delta_omega_bi, lo * on.I_bi, hi * on.I_bi});
    }
    r.tables.push_back(std::move(t));
    r.manifest["resolved"] = detector_manifest(p);
    r.manifest["summary"] = {{"E_bi", on.E_bi}, {"delta_omega_bi", on.delta_omega_bi}, {"I_bi", on.I_bi}};
    r.manifest["gates"] = gate_json(detector::validity_gates(p, on.I_bi));
}

void run_signal_noise(const ScenarioConfig& c, RunResult& r) {
    const auto p = detector_params(c);
    const auto policy = branch_policy(c);
    const double T = c.number_or("sweep", "bath_T", 0.0);
    const auto detunings = c.numbers("sweep", "detunings");
    const bool harmonic = c.flag_or("sweep", "harmonic_reference", false);
    const auto on = detector::bistability_onset(p);
    const auto grid = drive_grid(c, "I_min", "I_max");
    const std::vector<std::string> cols{"I_over_bi", "I_0",     "signal", "noise", "caves", "noise_over_signal",
                                        "R_gamma",   "omega_s", "delta_band"};

    auto sweep = [&](const detector::DetectorParams& q, double ratio, const std::string& file, const std::string& label) {
        const double dw = ratio * std::abs(on.delta_omega_bi);
        std::vector<std::vector<double>> rows(grid.size());
        std::vector<std::string> notes(grid.size());
        parallel_for(static_cast<int>(grid.size()), [&](int i) {
            const double I0 = grid[i] * on.I_bi;
            try {
                const auto o = detector::operating_point(q, {I0, dw}, T, policy);
                rows[i] = {grid[i], I0, o.signal, o.noise, o.caves, o.noise / o.signal, o.R_gamma, o.omega_s, o.delta_band};
            } catch (const ValidityError& e) {
                rows[i] = {grid[i], I0, nan, nan, nan, nan, nan, nan, nan};
                notes[i] = label + " I/I_bi=" + std::to_string(grid[i]) + ": " + e.what();
            }
        });
        for (auto& n : notes)
            if (!n.empty()) r.warnings.push_back(std::move(n));
        Table t{file, cols, std::move(rows)};
        t.meta = {{"detuning_over_abs_bi", ratio}, {"delta_omega", dw}, {"K_d", detector::coupling_constants(q).K_d}};
        r.tables.push_back(std::move(t));
    };
    for (std::size_t k = 0; k < detunings.size(); ++k)
        sweep(p, detunings[k], "signal_noise_" + std::to_string(k) + ".csv",
              "detuning " + std::to_string(detunings[k]));
    if (harmonic) {
        auto h = p;
        h.K_d = 0.0;
        sweep(h, 0.0, "signal_noise_harmonic.csv", "harmonic");
    }
    r.manifest["resolved"] = detector_manifest(p);
    r.manifest["resolved"]["bath_T"] = T;
    r.manifest["summary"] = {{"E_bi", on.E_bi}, {"delta_omega_bi", on.delta_omega_bi}, {"I_bi", on.I_bi}};
    r.manifest["gates"] = gate_json(detector::validity_gates(p, grid.back() * on.I_bi));
}

void run_cooling(const ScenarioConfig& c, RunResult& r) {
    const auto p = detector_params(c);
    const auto policy = branch_policy(c);
    const double ratio = c.number("sweep", "detuning");
    const auto temps = c.numbers("sweep", "bath_T");
    const bool harmonic = c.flag_or("sweep", "harmonic_reference", false);
    if (ratio < 1.0) throw ConfigError("config: [sweep] detuning must be at least 1 (units of delta_omega_bi)");
    const auto on = detector::bistability_onset(p);
    const double upper = detector::bistability_boundary(ratio).second;
    const double dw = ratio * on.delta_omega_bi;
    const auto fracs = drive_grid(c, "frac_min", "frac_max");

    std::vector<std::string> cols{"I_over_upper", "I_0", "ok", "R_gamma", "two_n_back_plus_one"};
    for (std::size_t j = 0; j < temps.size(); ++j) cols.push_back("n_net_T" + std::to_string(j));

    std::vector<std::vector<double>> rows(fracs.size());
    std::vector<std::string> notes(fracs.size());
    parallel_for(static_cast<int>(fracs.size()), [&](int i) {
        const double I0 = fracs[i] * upper * on.I_bi;
        const auto pts = detector::cooling_curve(p, dw, {I0}, temps, policy);
        const auto& first = pts.front();
        std::vector<double> row{fracs[i], I0, first.ok ? 1.0 : 0.0, first.ok ? first.R_gamma : nan,
                                first.ok ? first.two_n_back_plus_one : nan};
        for (const auto& pt : pts) row.push_back(pt.ok ? pt.n_net : nan);
        if (!first.ok) notes[i] = "I/I_upper=" + std::to_string(fracs[i]) + ": " + first.failure;
        rows[i] = std::move(row);
    });
    for (auto& n : notes)
        if (!n.empty()) r.warnings.push_back(std::move(n));

    json summary = {{"E_bi", on.E_bi},   {"delta_omega_bi", on.delta_omega_bi}, {"I_bi", on.I_bi},
                    {"I_upper_over_bi", upper}, {"bath_T", temps}};
    // Last gate-passing point below the upper boundary.
    for (std::size_t i = rows.size(); i-- > 0;) {
        if (fracs[i] < 1.0 && rows[i][2] == 1.0) {
            summary["last_pass_I_over_upper"] = fracs[i];
            summary["last_pass_two_n_back_plus_one"] = rows[i][4];
            if (harmonic) {
                const auto h = detector::harmonic_cooling_limit(p, rows[i][1]);
                summary["harmonic_limit_two_n_back_plus_one"] = h.two_n_back_plus_one;
                summary["harmonic_limit_delta_omega"] = h.delta_omega;
                summary["harmonic_limit_R_gamma"] = h.R_gamma;
            }
            break;
        }
    }
    r.tables.push_back({"cooling.csv", cols, std::move(rows)});
    r.manifest["resolved"] = detector_manifest(p);
    r.manifest["resolved"]["detuning_over_bi"] = ratio;
    r.manifest["summary"] = summary;
    r.manifest["gates"] = gate_json(detector::validity_gates(p, fracs.back() * upper * on.I_bi));
}

void run_hawking(const ScenarioConfig& c, RunResult& r) {
    using namespace hawking;
    c.require_section("line");
    c.require_section("pulse");
    LineParams lp;
    lp.I_c = c.number("line", "I_c");
    lp.C_0 = c.number("line", "C_0");
    lp.a = c.number("line", "a");
    lp.N = c.number("line", "N");
    lp.loop_inductance = c.number_or("line", "loop_inductance", lp.loop_inductance);
    const std::string conv = c.text_or("line", "convention", "squid_pair");
    if (conv == "single_junction") {
        lp.convention = JunctionConvention::single_junction;
    } else if (conv != "squid_pair") {
        throw ConfigError("config: [line] convention must be squid_pair or single_junction");
    }
    if (auto wp = c.angular("line", "omega_p")) {
        if (c.has("line", "C_J")) throw ConfigError("config: give only one of [line] C_J and omega_p");
        lp.C_J = 2.0 * std::numbers::pi * lp.squid_critical_current(0.0) / (2.0 * constants::phi0 * *wp * *wp);
    } else {
        lp.C_J = c.number("line", "C_J");
    }
    const double c_unbiased = propagation_velocity(lp, 0.0);
    if (auto f = c.maybe_number("line", "u_over_c_unbiased")) {
        lp.u = *f * c_unbiased;
    } else {
        lp.u = c.number("line", "u");
    }
    lp.validate();

    const std::string shape = c.text_or("pulse", "shape", "tanh");
    const double A = c.number("pulse", "amplitude");
    double w = 0.0;
    if (auto rate = c.maybe_number("pulse", "gradient_rate")) {
        if (shape != "tanh") throw ConfigError("config: [pulse] gradient_rate applies to the tanh shape only");
        w = rise_scale_for_gradient(lp, A, *rate);
    } else {
        w = c.number("pulse", "rise_scale");
    }
    FluxPulse pulse = shape == "tanh"       ? FluxPulse::tanh_step(A, w)
                      : shape == "gaussian" ? FluxPulse::gaussian(A, w)
                                            : throw ConfigError("config: [pulse] shape must be tanh or gaussian");
    pulse.allow_white_hole = c.flag_or("pulse", "allow_white_hole", false);

    PhotonModel model;
    model.decay = c.flag_or("photons", "decay", true);
    model.decay_per_1000_cells = c.number_or("photons", "decay_per_1000_cells", model.decay_per_1000_cells);

    const auto horizons = find_horizon(pulse, lp);
    if (horizons.white_hole_warning) r.warnings.push_back(horizons.warning);
    const double xh = black_hole_horizon(pulse, lp);
    const double TH = hawking_temperature(pulse, lp);
    const auto gates = validity_gates(pulse, lp);
    if (!gates.passes()) r.warnings.push_back("validity gates not satisfied (beta_L, Z_A/R_Q, max flux)");

    Table sweep{"flux_sweep.csv", {"phi_ext", "c", "c0_over_c", "inductance", "Z_A_over_R_Q", "omega_p_s"}, {}};
    for (double phi : drive_grid(c, "phi_min", "phi_max")) {
        if (!(phi >= 0.0 && phi < 0.5)) throw ConfigError("config: [grid] flux values must lie in [0, 0.5)");
        const double v = propagation_velocity(lp, phi);
        sweep.rows.push_back({phi, v, constants::c0 / v, junction_inductance(lp, 0.0, phi),
                              array_impedance(lp, phi) / constants::R_Q, lp.plasma_frequency(phi)});
    }
    const int np = c.count("profile", "points");
    const double half = c.number_or("profile", "half_width", 10.0) * w;
    Table prof{"profile.csv", {"xi", "phi_ext", "c", "g_tt"}, {}};
    for (int i = 0; i < np; ++i) {
        const double xi = np == 1 ? xh : xh - half + 2.0 * half * i / (np - 1);
        const auto g = metric_components(pulse, lp, xi);
        prof.rows.push_back({xi, pulse(xi), velocity_at(pulse, lp, xi), g.g_tt});
    }
    r.tables.push_back(std::move(sweep));
    r.tables.push_back(std::move(prof));

    r.manifest["resolved"] = {{"I_c", lp.I_c},
                              {"C_J", lp.C_J},
                              {"C_0", lp.C_0},
                              {"a", lp.a},
                              {"N", lp.N},
                              {"u", lp.u},
                              {"loop_inductance", lp.loop_inductance},
                              {"convention", conv},
                              {"pulse_shape", shape},
                              {"pulse_amplitude", A},
                              {"rise_scale", w},
                              {"decay", model.decay},
                              {"decay_per_1000_cells", model.decay_per_1000_cells}};
    r.manifest["summary"] = {{"c_unbiased", c_unbiased},
                             {"c0_over_c", constants::c0 / c_unbiased},
                             {"horizons", horizons.positions},
                             {"black_hole_horizon", xh},
                             {"velocity_gradient", velocity_gradient(pulse, lp, xh)},
                             {"T_H", TH},
                             {"power", radiated_power(TH)},
                             {"lifetime", horizon_lifetime(lp)},
                             {"photons_per_pulse", photons_per_pulse(pulse, lp, model)}};
    r.manifest["gates"] = {{"beta_L", gates.beta_L},
                           {"Z_A_over_R_Q", gates.Z_A_over_R_Q},
                           {"max_phi", gates.max_phi},
                           {"passes", gates.passes()}};
}

trilinear::PumpInitialState pump_state(const ScenarioConfig& c, int dim) {
    const std::string kind = c.text_or("trilinear", "pump", "coherent");
    if (kind == "coherent") return trilinear::PumpInitialState::coherent(std::sqrt(c.number("trilinear", "mean")), dim);
    if (kind == "number") {
        const double s = c.number("trilinear", "level");
        if (!(s >= 0.0) || s != std::floor(s)) throw ConfigError("config: [trilinear] level must be a non-negative integer");
        return trilinear::PumpInitialState::number(static_cast<int>(s));
    }
    throw ConfigError("config: [trilinear] pump must be coherent or number");
}

void run_trilinear_evolve(const ScenarioConfig& c, RunResult& r) {
    c.require_section("trilinear");
    const auto d = c.numbers("trilinear", "dims");
    if (d.size() != 3) throw ConfigError("config: [trilinear] dims needs three entries");
    std::vector<int> dims;
    for (double x : d) {
        if (!(x >= 1.0) || x != std::floor(x)) throw ConfigError("config: [trilinear] dims must be positive integers");
        dims.push_back(static_cast<int>(x));
    }
    const auto params = trilinear::TrilinearParams::degenerate(2.0, dims);
    const auto pump = pump_state(c, dims[0]);
    const auto psi0 = trilinear::pump_product_state(pump, params.spec);
    const double leak_tol = c.number_or("trilinear", "leak_tol", 1e-6);
    numerics::Tolerance tol{c.number_or("trilinear", "ode_abs_tol", 1e-12), c.number_or("trilinear", "ode_rel_tol", 1e-10),
                            5000000};
    tol.validate();
    const int n = c.count("grid", "points");
    const double tau_max = c.number("grid", "tau_max");
    if (!(tau_max > 0.0)) throw ConfigError("config: [grid] tau_max must be positive");
    const auto grid = n == 1 ? numerics::RealGrid({0.0}) : numerics::RealGrid::linspace(0.0, tau_max, n);
    const auto ev = trilinear::evolve_full(psi0, params, grid, leak_tol, tol);

    std::vector<double> semi(grid.size(), nan);
    if (c.text_or("trilinear", "pump", "coherent") == "coherent")
        semi = trilinear::semiclassical_occupation(trilinear::semiclassical_pump(c.number("trilinear", "mean"), grid));

    Table t{"evolve.csv",
            {"tau", "N_a", "N_b", "N_c", "H_I", "norm", "MR_ab", "MR_ac", "MR_bc", "q_plus_a", "q_minus_a",
             "information_b", "N_b_semiclassical"},
            std::vector<std::vector<double>>(grid.size())};
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
        const auto& psi = ev.states[i];
        const auto o = trilinear::observe(psi);
        const auto q = qinfo::squeezing_params(fock::partial_trace(psi, {0}));
        const double info = qinfo::information(fock::partial_trace(psi, {1}));
        t.rows[i] = {grid[i], o.N_a, o.N_b, o.N_c, o.H_I, o.norm, o.N_a + o.N_b, o.N_a + o.N_c, o.N_b - o.N_c,
                     q.q_plus, q.q_minus, info, semi[i]};
    });
    double drift_norm = 0.0, drift_mr = 0.0, drift_h = 0.0;
    const auto& r0 = t.rows.front();
    for (const auto& row : t.rows) {
        drift_norm = std::max(drift_norm, std::abs(row[5] - r0[5]));
        for (int k = 6; k <= 8; ++k) drift_mr = std::max(drift_mr, std::abs(row[k] - r0[k]) / std::max(1.0, std::abs(r0[k])));
        drift_h = std::max(drift_h, std::abs(row[4] - r0[4]));
    }
    r.tables.push_back(std::move(t));
    r.manifest["resolved"] = {{"dims", dims}, {"leak_tol", leak_tol}, {"ode_abs_tol", tol.abs_tol},
                              {"ode_rel_tol", tol.rel_tol}, {"tau_max", tau_max}, {"pump", c.text_or("trilinear", "pump", "coherent")}};
    r.manifest["summary"] = {{"max_leak", ev.max_leak}, {"norm_drift", drift_norm}, {"manley_rowe_drift", drift_mr},
                             {"H_I_drift", drift_h}};
    r.manifest["gates"] = {{"max_leak", ev.max_leak}, {"leak_tol", leak_tol}, {"passes", ev.max_leak <= leak_tol}};
}

void run_trilinear_info(const ScenarioConfig& c, RunResult& r) {
    c.require_section("trilinear");
    const auto means = c.numbers("trilinear", "means");
    const int n = c.count("grid", "points");
    const double tau_max = c.number("grid", "tau_max");
    if (!(tau_max > 0.0)) throw ConfigError("config: [grid] tau_max must be positive");
    const auto grid = n == 1 ? numerics::RealGrid({tau_max}) : numerics::RealGrid::linspace(tau_max / n, tau_max, n);
    const double tail = c.number_or("trilinear", "tail_tol", 1e-12);
    json summary = json::array();
    for (std::size_t k = 0; k < means.size(); ++k) {
        if (!(means[k] > 0.0)) throw ConfigError("config: [trilinear] means must be positive");
        const int dim = fock::coherent_required_dim(means[k], tail);
        const auto pump = trilinear::PumpInitialState::coherent(std::sqrt(means[k]), dim);
        Table t{"info_" + std::to_string(k) + ".csv",
                {"tau", "N_a", "N_b", "fidelity", "information", "d_eff_a", "d_eff_bc", "S_b"},
                std::vector<std::vector<double>>(grid.size())};
        parallel_for(static_cast<int>(grid.size()), [&](int i) {
            const auto red = trilinear::short_time_reduced(pump, grid[i]);
            const double Na = qinfo::mean_occupation(red.rho_pump);
            const double Nb = qinfo::mean_occupation(red.rho_signal);
            const auto ref = qinfo::thermal_reference(Nb, 1.0, static_cast<int>(red.rho_signal.size()));
            const double db = qinfo::effective_dimension(Nb);
            t.rows[i] = {grid[i],
                         Na,
                         Nb,
                         qinfo::fidelity(red.rho_signal, ref.state()),
                         qinfo::information(red.rho_signal),
                         qinfo::effective_dimension(Na),
                         db * db,
                         qinfo::von_neumann_entropy(red.rho_signal)};
        });
        t.meta = {{"mean_N_a0", means[k]}, {"pump_dim", dim}};
        summary.push_back({{"file", t.file}, {"mean_N_a0", means[k]}, {"pump_dim", dim}});
        r.tables.push_back(std::move(t));
    }
    r.manifest["resolved"] = {{"means", means}, {"tau_max", tau_max}, {"tail_tol", tail}, {"tier", "short-time"}};
    r.manifest["summary"] = summary;
    r.manifest["gates"] = json::object();
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

int thread_count() {
    if (const char* env = std::getenv("NLCAVITY_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_scenario(const ScenarioConfig& config) {
    RunResult r;
    r.manifest = json::object();
    const auto& k = config.kind;
    if (k == "detector-bistability") {
        run_bistability(config, r);
    } else if (k == "detector-signal-noise") {
        run_signal_noise(config, r);
    } else if (k == "detector-cooling") {
        run_cooling(config, r);
    } else if (k == "hawking-line") {
        run_hawking(config, r);
    } else if (k == "trilinear-evolve") {
        run_trilinear_evolve(config, r);
    } else if (k == "trilinear-info") {
        run_trilinear_info(config, r);
    } else {
        throw ConfigError("config: unknown scenario kind '" + k + "'");
    }
    for (const auto& key : config.unused_keys()) r.warnings.push_back("unused config key " + key);

    json cfg = json::object();
    for (const auto& [name, body] : config.sections) cfg[name] = body;
    r.manifest["kind"] = k;
    r.manifest["config"] = cfg;
    json tables = json::array();
    for (const auto& t : r.tables)
        tables.push_back({{"file", t.file}, {"columns", t.columns}, {"rows", t.rows.size()}, {"meta", t.meta}});
    r.manifest["tables"] = tables;
    r.manifest["warnings"] = r.warnings;
    return r;
}

std::string format_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << "\n";
    }
    return out.str();
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& t : result.tables) {
        std::ofstream f(dir / t.file, std::ios::binary);
        if (!f) throw Error("cannot write " + (dir / t.file).string());
        f << format_csv(t);
    }
    std::ofstream m(dir / "manifest.json", std::ios::binary);
    if (!m) throw Error("cannot write " + (dir / "manifest.json").string());
    m << result.manifest.dump(2) << "\n";
}

}  // namespace nlcavity::cli
