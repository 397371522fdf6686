#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spinmetric {

/// Flat key=value configuration shared by all subcommands. Every key except `out`
/// has a default; unknown keys are rejected with a ConfigError naming the key.
class RunConfig {
public:
    RunConfig();

    static RunConfig from_text(const std::string& text);
    static RunConfig from_file(const std::filesystem::path& path);

    /// Applies a single `key=value` override.
    void apply(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    const std::string& raw(const std::string& key) const;

    double real(const std::string& key) const;
    int integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<double> real_list(const std::string& key) const;
    std::vector<int> integer_list(const std::string& key) const;
    std::optional<std::filesystem::path> output_dir() const;

    static const std::vector<std::string>& known_keys();

private:
    std::map<std::string, std::string> values_;
};

}  // namespace spinmetric
