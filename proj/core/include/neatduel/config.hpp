#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "neatduel/coevolution.hpp"

namespace neatduel {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    RunSettings settings;
    bool has_seed = false;
    std::filesystem::path output_dir = "run";
    // Path of the fixed-topology seed genome as written in the config.
    std::string seed_genome_path;
    bool operator==(const RunConfig&) const = default;
};

struct ConfigKey {
    std::string_view name;
    std::string_view description;
    std::string default_value;
};

// Every accepted key with its default, in serialization order.
std::vector<ConfigKey> config_keys();

// Flat "key = value" lines; blank lines and lines starting with '#' are
// ignored. Unknown or repeated keys, bad values and a missing seed throw
// ConfigError. A seed_genome path is resolved against `base_dir`.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Writes every key. output_dir is omitted when `include_output_dir` is false.
std::string serialize_run_config(const RunConfig& config, bool include_output_dir = true);

}  // namespace neatduel
