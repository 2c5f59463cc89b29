#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nlcavity::cli {

/// INI-style scenario description. The [scenario] section carries `kind` and `output`;
/// every other section is a flat key/value block interpreted by the scenario runner.
class ScenarioConfig {
public:
    using Section = std::map<std::string, std::string>;

    std::string kind;
    std::string output;
    std::map<std::string, Section> sections;

    static ScenarioConfig from_string(const std::string& text);
    static ScenarioConfig load(const std::filesystem::path& path);
    [[nodiscard]] std::string to_string() const;

    void set(const std::string& section, const std::string& key, const std::string& value);
    void set(const std::string& section, const std::string& key, double value);

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const;
    [[nodiscard]] bool has_section(const std::string& section) const;
    void require_section(const std::string& section) const;

    // Typed getters. Missing required keys and unparsable values throw ConfigError.
    [[nodiscard]] double number(const std::string& section, const std::string& key) const;
    [[nodiscard]] double number_or(const std::string& section, const std::string& key, double fallback) const;
    [[nodiscard]] std::optional<double> maybe_number(const std::string& section, const std::string& key) const;
    /// Reads `key_hz` (Hz, converted to rad/s) or `key` (rad/s).
    [[nodiscard]] std::optional<double> angular(const std::string& section, const std::string& key) const;
    [[nodiscard]] int count(const std::string& section, const std::string& key) const;
    [[nodiscard]] std::vector<double> numbers(const std::string& section, const std::string& key) const;
    [[nodiscard]] std::string text_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const;
    [[nodiscard]] bool flag_or(const std::string& section, const std::string& key, bool fallback) const;

    /// Keys present in the file that no getter has read.
    [[nodiscard]] std::vector<std::string> unused_keys() const;

    bool operator==(const ScenarioConfig& other) const {
        return kind == other.kind && output == other.output && sections == other.sections;
    }

private:
    [[nodiscard]] const std::string* lookup(const std::string& section, const std::string& key) const;
    mutable std::set<std::string> used_;
};

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
[[nodiscard]] ScenarioConfig preset(const std::string& name);

}  // namespace nlcavity::cli
