#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace freegrass::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Settings for one CLI run. Unset optionals fall back to per-command defaults.
struct RunConfig {
    std::string command;
    std::string target;
    std::optional<std::string> algebra;
    std::uint64_t seed = 1;
    std::size_t E = 0;
    std::vector<std::size_t> ladder;
    std::size_t samples = 0;
    std::size_t instances = 0;
    std::optional<std::string> poly;
    std::size_t degree = 0;
    std::size_t depth = 2;
    std::size_t points = 512;
    std::string output;
    std::string format;
    nlohmann::json tolerances = nlohmann::json::object();

    nlohmann::json to_json() const;
};

// "20,50,100" -> {20, 50, 100}; throws ConfigError.
std::vector<std::size_t> parse_ladder(const std::string& s);

// Applies the keys of a config object; unknown keys throw ConfigError.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace freegrass::cli
