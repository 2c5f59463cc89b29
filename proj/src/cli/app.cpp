#include <CLI11.hpp>
#include <ostream>

#include "nlcavity/cli/scenario.hpp"
#include "nlcavity/errors.hpp"

namespace nlcavity::cli {

namespace {

int execute(const ScenarioConfig& config, const std::string& out_override, std::ostream& out) {
    const std::string dir = !out_override.empty() ? out_override : !config.output.empty() ? config.output : "nlcavity-out";
    const auto result = run_scenario(config);
    write_outputs(result, dir);
    for (const auto& t : result.tables) out << dir << "/" << t.file << " (" << t.rows.size() << " rows)\n";
    out << dir << "/manifest.json\n";
    for (const auto& w : result.warnings) out << "warning: " << w << "\n";
    return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonlinear cavity, analogue horizon and trilinear scenario runner", "nlcavity"};
    app.require_subcommand(1);

    auto* presets = app.add_subcommand("presets", "List the built-in presets");
    std::string show;
    presets->add_option("--show", show, "Print one preset as a config file");

    auto* run = app.add_subcommand("run", "Run a scenario from a config file or preset");
    std::string config_path, preset_name, out_dir;
    auto* path_opt = run->add_option("config", config_path, "Scenario config file");
    auto* preset_opt = run->add_option("--preset", preset_name, "Built-in preset name");
    run->add_option("--out", out_dir, "Output directory");
    path_opt->excludes(preset_opt);
    preset_opt->excludes(path_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (presets->parsed()) {
            if (!show.empty()) {
                out << preset(show).to_string();
                return exit_ok;
            }
            for (const auto& name : preset_names()) out << name << "\t" << preset(name).kind << "\n";
            return exit_ok;
        }
        if (config_path.empty() && preset_name.empty()) throw ConfigError("run: give a config path or --preset");
        const auto config = preset_name.empty() ? ScenarioConfig::load(config_path) : preset(preset_name);
        return execute(config, out_dir, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return exit_config;
    } catch (const ValidityError& e) {
        err << "validity error: " << e.what() << "\n";
        return exit_validity;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << "\n";
        return exit_convergence;
    } catch (const TruncationError& e) {
        err << "truncation error: " << e.what() << " (required dim " << e.required_dim() << ")\n";
        return exit_convergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_other;
    }
}

}  // namespace nlcavity::cli
