#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlcavity/cli/config.hpp"
#include "nlcavity/cli/scenario.hpp"
#include "nlcavity/errors.hpp"

using namespace nlcavity;
using namespace nlcavity::cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "nlcavity");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("nlcavity_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const auto p = dir / "scenario.ini";
    std::ofstream(p) << text;
    return p;
}

const char* bistability_ini = R"([scenario]
kind = detector-bistability

[detector]
Q_T = 300
Q_m = 1000

[grid]
ratio_min = 1
ratio_max = 3
points = 21
)";

}  // namespace

TEST_CASE("presets round-trip through text") {
    for (const auto& name : preset_names()) {
        const auto c = preset(name);
        CHECK(ScenarioConfig::from_string(c.to_string()) == c);
        CHECK(c.output == name);
    }
    CHECK_THROWS_AS((void)preset("nope"), ConfigError);
}

TEST_CASE("preset parameter values") {
    const auto d = preset("ch2-detection");
    CHECK(d.number("detector", "I_c") == 4.5e-6);
    CHECK(d.number("detector", "Phi_ext") == 0.442);
    CHECK(d.numbers("sweep", "detunings") == std::vector<double>{0.0, 0.2, 0.4});
    const auto h = preset("ch3-beltran");
    CHECK(h.number("line", "I_c") == 2e-6);
    CHECK(h.number("line", "C_0") == 5e-17);
    CHECK(h.number("line", "a") == 0.25e-6);
    CHECK(h.number("line", "N") == 4800.0);
}

TEST_CASE("config parsing errors") {
    CHECK_THROWS_AS((void)ScenarioConfig::from_string("[grid]\npoints = 3\n"), ConfigError);
    CHECK_THROWS_AS((void)ScenarioConfig::from_string("[scenario]\nkind = x\nextra = 1\n"), ConfigError);
    const auto c = ScenarioConfig::from_string("[scenario]\nkind = x\n[a]\nn = 1.5x\nm = 0\nk = 2.5\nf = maybe\n");
    CHECK_THROWS_AS((void)c.number("a", "n"), ConfigError);
    CHECK_THROWS_AS((void)c.count("a", "m"), ConfigError);
    CHECK_THROWS_AS((void)c.count("a", "k"), ConfigError);
    CHECK_THROWS_AS((void)c.flag_or("a", "f", false), ConfigError);
    CHECK_THROWS_AS((void)c.number("a", "missing"), ConfigError);
}

TEST_CASE("bistability run: rows, values and byte-identical reruns") {
    const auto dir = scratch("bistability");
    const auto cfg = write_config(dir, bistability_ini);
    const auto a = invoke({"run", cfg.string(), "--out", (dir / "a").string()});
    REQUIRE(a.code == exit_ok);
    const auto b = invoke({"run", cfg.string(), "--out", (dir / "b").string()});
    REQUIRE(b.code == exit_ok);
    CHECK(slurp(dir / "a" / "bistability.csv") == slurp(dir / "b" / "bistability.csv"));
    CHECK(slurp(dir / "a" / "manifest.json") == slurp(dir / "b" / "manifest.json"));

    const auto r = run_scenario(ScenarioConfig::from_string(bistability_ini));
    REQUIRE(r.tables.size() == 1);
    const auto& t = r.tables.front();
    REQUIRE(t.rows.size() == 21);
    CHECK(t.rows.front()[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(t.rows.front()[2] == doctest::Approx(1.0).epsilon(1e-6));
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        CHECK(t.rows[i][1] < t.rows[i][2]);
        CHECK(t.rows[i][2] > t.rows[i - 1][2]);
    }
    CHECK(r.warnings.empty());
}

TEST_CASE("unused keys become warnings") {
    const auto r = run_scenario(ScenarioConfig::from_string(std::string(bistability_ini) + "typo = 1\n"));
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings.front().find("grid.typo") != std::string::npos);
}

TEST_CASE("signal-noise rows match the grid and NaN cells carry warnings") {
    auto c = preset("ch2-detection");
    c.set("grid", "points", 8.0);
    c.set("grid", "I_max", 2.0);
    const auto r = run_scenario(c);
    REQUIRE(r.tables.size() == 4);
    std::size_t nan_rows = 0;
    for (const auto& t : r.tables) {
        CHECK(t.rows.size() == 8);
        for (const auto& row : t.rows) {
            if (std::isnan(row[2])) {
                ++nan_rows;
            } else {
                CHECK(row[3] >= row[4] * (1.0 - 1e-12));
            }
        }
    }
    CHECK(nan_rows > 0);
    CHECK(r.warnings.size() == nan_rows);
}

TEST_CASE("cooling run reports the last passing point") {
    auto c = preset("ch2-goodcavity-Q1000");
    c.set("grid", "frac_min", 0.9);
    c.set("grid", "points", 11.0);
    const auto r = run_scenario(c);
    REQUIRE(r.tables.size() == 1);
    CHECK(r.tables.front().rows.size() == 11);
    const auto& s = r.manifest["summary"];
    REQUIRE(s.contains("last_pass_two_n_back_plus_one"));
    CHECK(s["last_pass_two_n_back_plus_one"].get<double>() < s["harmonic_limit_two_n_back_plus_one"].get<double>());
}

TEST_CASE("trilinear-info over several pump means") {
    const auto c = ScenarioConfig::from_string(R"([scenario]
kind = trilinear-info

[trilinear]
means = 1, 3, 6, 9

[grid]
tau_max = 0.3
points = 5
)");
    const auto r = run_scenario(c);
    REQUIRE(r.tables.size() == 4);
    for (const auto& t : r.tables) {
        REQUIRE(t.rows.size() == 5);
        for (const auto& row : t.rows) {
            CHECK(row[3] >= 0.0);
            CHECK(row[3] <= 1.0 + 1e-12);
            CHECK(row[4] >= -1e-12);
        }
    }
}

TEST_CASE("hawking preset runs") {
    const auto r = run_scenario(preset("ch3-beltran"));
    CHECK(r.manifest["summary"]["T_H"].get<double>() == doctest::Approx(0.1216).epsilon(2e-3));
    CHECK(r.tables.at(0).rows.size() == 46);
    CHECK(r.tables.at(1).rows.size() == 201);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(invoke({"presets"}).code == exit_ok);
    CHECK(invoke({"presets", "--show", "ch3-beltran"}).out.find("kind = hawking-line") != std::string::npos);
    CHECK(invoke({"bogus"}).code == exit_config);
    CHECK(invoke({"run"}).code == exit_config);
    CHECK(invoke({"run", (dir / "missing.ini").string()}).code == exit_config);

    auto text = std::string(bistability_ini);
    text.replace(text.find("points = 21"), 11, "points = 0");
    CHECK(invoke({"run", write_config(dir, text).string(), "--out", (dir / "o").string()}).code == exit_config);

    CHECK(invoke({"run", write_config(dir, "[scenario]\nkind = nope\n").string()}).code == exit_config);

    auto weak = preset("ch3-beltran");
    weak.sections["pulse"].erase("gradient_rate");
    weak.set("pulse", "amplitude", 0.01);
    weak.set("pulse", "rise_scale", 1e-6);
    const auto v = invoke({"run", write_config(dir, weak.to_string()).string(), "--out", (dir / "o").string()});
    CHECK(v.code == exit_validity);

    auto small = preset("ch4-coherent9");
    small.set("trilinear", "dims", "6, 6, 6");
    small.set("grid", "points", 3.0);
    const auto tr = invoke({"run", write_config(dir, small.to_string()).string(), "--out", (dir / "o").string()});
    CHECK(tr.code == exit_convergence);
    CHECK(tr.err.find("required dim") != std::string::npos);
}
