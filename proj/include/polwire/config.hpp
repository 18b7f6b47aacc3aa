#pragma once
// TOML run configuration. Precedence is command-line flags, then file values,
// then built-in defaults.

#include "polwire/ensemble.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polwire {

struct EnsembleSettings {
    std::size_t realizations = 1;
    std::uint64_t seed = 1;
    std::optional<std::size_t> workers;   // unset: flag, then POLWIRE_WORKERS, then 1
};

struct RunConfig {
    SimulationConfig simulation;
    EnsembleSettings ensemble;
    std::string output_dir = "out";

    /// Throws ConfigError listing every violated constraint.
    void validate() const;
};

/// Parsed but not yet converted configuration document. Overrides are applied
/// here so that they go through the same key and unit checks as file values.
class ConfigDocument {
public:
    ConfigDocument();
    ~ConfigDocument();
    ConfigDocument(const ConfigDocument&);
    ConfigDocument& operator=(const ConfigDocument&);
    ConfigDocument(ConfigDocument&&) noexcept;
    ConfigDocument& operator=(ConfigDocument&&) noexcept;

    static ConfigDocument from_text(std::string_view text, std::string_view source = "<string>");
    static ConfigDocument from_file(const std::filesystem::path& path);

    /// `section.key=value`. The value uses TOML syntax; a bare word that is not
    /// valid TOML is taken as a string (so `modes.directionality=nonnegative` works).
    void apply_override(std::string_view assignment);

    /// Converts and validates, collecting all violations into one ConfigError.
    RunConfig resolve() const;

    std::string to_toml() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text);

/// TOML rendering of a resolved configuration; parse_config_text(to_toml(c))
/// reproduces `c`.
std::string to_toml(const RunConfig& config);

} // namespace polwire
