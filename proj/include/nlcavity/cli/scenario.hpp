#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlcavity/cli/config.hpp"

namespace nlcavity::cli {

struct Table {
    std::string file;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json meta = nlohmann::json::object();
};

struct RunResult {
    std::vector<Table> tables;
    nlohmann::json manifest;
    std::vector<std::string> warnings;
};

/// Worker count for sweeps: NLCAVITY_THREADS if set and positive, else the hardware count.
[[nodiscard]] int thread_count();

[[nodiscard]] RunResult run_scenario(const ScenarioConfig& config);

/// Header row then one row per grid point, numbers as %.16e.
[[nodiscard]] std::string format_csv(const Table& table);
/// Writes every table plus manifest.json into `dir`, creating it if needed.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

enum ExitCode : int { exit_ok = 0, exit_other = 1, exit_config = 2, exit_validity = 3, exit_convergence = 4 };

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlcavity::cli
