#include "nlcavity/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nlcavity/errors.hpp"

namespace nlcavity::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
    if (pos != t.size()) throw ConfigError(where + ": trailing characters in '" + text + "'");
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_string(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ScenarioConfig c;
    for (const auto& [name, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("config: key '" + name + "' appears outside a section");
        for (const auto& [key, value] : body) c.sections[name][key] = trim(value.data());
    }
    const auto sc = c.sections.find("scenario");
    if (sc == c.sections.end()) throw ConfigError("config: missing [scenario] section");
    const auto kind = sc->second.find("kind");
    if (kind == sc->second.end() || kind->second.empty()) throw ConfigError("config: [scenario] kind is required");
    c.kind = kind->second;
    if (const auto out = sc->second.find("output"); out != sc->second.end()) c.output = out->second;
    for (const auto& [key, _] : sc->second)
        if (key != "kind" && key != "output") throw ConfigError("config: unknown key [scenario] " + key);
    c.sections.erase(sc);
    return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string ScenarioConfig::to_string() const {
    std::ostringstream out;
    out << "[scenario]\nkind = " << kind << "\n";
    if (!output.empty()) out << "output = " << output << "\n";
    for (const auto& [name, body] : sections) {
        out << "\n[" << name << "]\n";
        for (const auto& [key, value] : body) out << key << " = " << value << "\n";
    }
    return out.str();
}

void ScenarioConfig::set(const std::string& section, const std::string& key, const std::string& value) {
    sections[section][key] = value;
}

void ScenarioConfig::set(const std::string& section, const std::string& key, double value) {
    sections[section][key] = format_double(value);
}

const std::string* ScenarioConfig::lookup(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    used_.insert(section + "." + key);
    return &k->second;
}

bool ScenarioConfig::has(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) != 0;
}

bool ScenarioConfig::has_section(const std::string& section) const { return sections.count(section) != 0; }

void ScenarioConfig::require_section(const std::string& section) const {
    if (!has_section(section)) throw ConfigError("config: kind '" + kind + "' requires a [" + section + "] section");
}

double ScenarioConfig::number(const std::string& section, const std::string& key) const {
    const auto* v = lookup(section, key);
    if (!v) throw ConfigError("config: missing required key [" + section + "] " + key);
    return parse_double(*v, "[" + section + "] " + key);
}

double ScenarioConfig::number_or(const std::string& section, const std::string& key, double fallback) const {
    return maybe_number(section, key).value_or(fallback);
}

std::optional<double> ScenarioConfig::maybe_number(const std::string& section, const std::string& key) const {
    const auto* v = lookup(section, key);
    if (!v) return std::nullopt;
    return parse_double(*v, "[" + section + "] " + key);
}

std::optional<double> ScenarioConfig::angular(const std::string& section, const std::string& key) const {
    const auto hz = maybe_number(section, key + "_hz");
    const auto rad = maybe_number(section, key);
    if (hz && rad) throw ConfigError("config: give only one of [" + section + "] " + key + " and " + key + "_hz");
    if (hz) return 2.0 * std::numbers::pi * *hz;
    return rad;
}

int ScenarioConfig::count(const std::string& section, const std::string& key) const {
    const double v = number(section, key);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e7)
        throw ConfigError("config: [" + section + "] " + key + " must be a positive integer");
    return static_cast<int>(v);
}

std::vector<double> ScenarioConfig::numbers(const std::string& section, const std::string& key) const {
    const auto* v = lookup(section, key);
    if (!v) throw ConfigError("config: missing required key [" + section + "] " + key);
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, "[" + section + "] " + key));
    if (out.empty()) throw ConfigError("config: [" + section + "] " + key + " is empty");
    return out;
}

std::string ScenarioConfig::text_or(const std::string& section, const std::string& key,
                                    const std::string& fallback) const {
    const auto* v = lookup(section, key);
    return v ? *v : fallback;
}

bool ScenarioConfig::flag_or(const std::string& section, const std::string& key, bool fallback) const {
    const auto* v = lookup(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("config: [" + section + "] " + key + " must be true or false");
}

std::vector<std::string> ScenarioConfig::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [name, body] : sections)
        for (const auto& [key, _] : body)
            if (!used_.count(name + "." + key)) out.push_back(name + "." + key);
    return out;
}

}  // namespace nlcavity::cli
