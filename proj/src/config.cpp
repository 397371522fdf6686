#include "spinmetric/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "spinmetric/errors.hpp"

namespace spinmetric {

namespace {

// Keys with an empty default are optional; `out` has none and must be supplied.
const std::vector<std::pair<std::string, std::string>>& defaults() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"G", "0.05"},
        {"mu", "1"},
        {"N", "14"},
        {"t_max", ""},  // 100 for evolve/convergence, 400 for sweep
        {"dt", "0.02"},
        {"direction", "x"},
        {"sign", "+"},
        {"include_metric", "false"},
        {"G_min", "0.01"},
        {"G_max", "100"},
        {"G_count", "60"},
        {"G_values", ""},
        {"t_min", "2"},
        {"workers", "1"},
        {"alpha_c", "0"},
        {"beta_c", "0"},
        {"k_points", "101"},
        {"k_extent", "6.283185307179586"},
        {"mu_list", "0.5,1,2,4"},
        {"gravity_N", "80"},
        {"levels", "8"},
        {"N_list", "10,14,20,28"},
        {"out", ""},
    };
    return table;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(key, "config key '" + key + "': cannot parse '" + text + "'");
    }
    return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
    if (out.empty()) throw ConfigError(key, "config key '" + key + "': empty list");
    return out;
}

}  // namespace

RunConfig::RunConfig() {
    for (const auto& [k, v] : defaults()) {
        if (!v.empty()) values_[k] = v;
    }
}

const std::vector<std::string>& RunConfig::known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& entry : defaults()) k.push_back(entry.first);
        return k;
    }();
    return keys;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError(key, "unknown config key '" + key + "'");
    }
    values_[key] = value;
}

void RunConfig::apply(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        const std::string key = trim(assignment);
        throw ConfigError(key, "expected key=value, got '" + assignment + "'");
    }
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        config.apply(line);
    }
    return config;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str());
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& RunConfig::raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "config key '" + key + "' is not set");
    return it->second;
}

double RunConfig::real(const std::string& key) const { return parse_number<double>(key, raw(key)); }

int RunConfig::integer(const std::string& key) const { return parse_number<int>(key, raw(key)); }

bool RunConfig::boolean(const std::string& key) const {
    const std::string v = trim(raw(key));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> RunConfig::real_list(const std::string& key) const {
    return parse_list<double>(key, raw(key));
}

std::vector<int> RunConfig::integer_list(const std::string& key) const {
    return parse_list<int>(key, raw(key));
}

std::optional<std::filesystem::path> RunConfig::output_dir() const {
    if (!has("out") || trim(raw("out")).empty()) return std::nullopt;
    return std::filesystem::path(trim(raw("out")));
}

}  // namespace spinmetric
