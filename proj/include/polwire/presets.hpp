#pragma once
// Named experiment presets and the runner that executes them (or a single
// configuration file) and writes data files plus a manifest.

#include "polwire/config.hpp"
#include "polwire/ensemble.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polwire {

std::string_view code_version();

enum class Tier { desk, full };
std::string_view to_string(Tier tier);

enum class GroupKind {
    trajectories,     // one ensemble per variant
    truncation,       // variants compared against a high mode-count reference
    photon_weights,   // adds analytic and infinite-time W(q)
    unidirectional,   // bidirectional vs q >= 0 pair with binned snapshots
};

struct PresetVariant {
    std::string label;
    std::vector<std::string> overrides;   // section.key=value
};

struct PresetGroup {
    std::string name;
    GroupKind kind = GroupKind::trajectories;
    std::vector<std::string> overrides;
    std::vector<PresetVariant> variants;
    std::optional<PresetVariant> reference;   // truncation groups only
};

struct Preset {
    std::string name;
    std::string description;
    Tier tier = Tier::desk;
    std::vector<PresetGroup> groups;
};

const std::vector<std::string>& preset_names();
bool is_preset(std::string_view name);
/// Throws ConfigError for unknown names.
Preset make_preset(std::string_view name, Tier tier);

/// Wave vector of the 2.1 eV photon for the default cross-section, used as the
/// mean exciton momentum in the photon-weight presets.
double photon_weight_mean_momentum();

struct RunOptions {
    Tier tier = Tier::desk;
    std::vector<std::string> overrides;   // applied after preset and file values
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> realizations;
    std::optional<std::size_t> workers;
    std::optional<std::string> out_dir;
    std::size_t max_dimension = 10000;
    std::optional<std::string> group;           // run only this group
    std::optional<std::string> cache_dir;       // spectrum cache
    std::optional<std::string> reference_dir;   // earlier run whose references are reused
    std::function<void(const std::string&)> log;
};

struct PlannedVariant {
    std::string group;
    GroupKind kind = GroupKind::trajectories;
    std::string label;
    bool reference = false;
    RunConfig config;
    std::size_t dimension = 0;
};

/// Resolves every variant (all violations reported together) and applies the
/// resource guard. Nothing is computed.
std::vector<PlannedVariant> plan_preset(const Preset& preset, const RunOptions& options);

struct VariantOutcome {
    PlannedVariant plan;
    EnsembleResult result;
    std::optional<std::vector<double>> analytic_weights;
    std::optional<Moments> infinite_time_weights;
    std::optional<ErrorEstimate> error;   // truncation groups, against the group reference
};

struct RunReport {
    std::string output_dir;
    std::vector<VariantOutcome> variants;
    std::vector<std::string> files;   // relative to output_dir
    double wall_time_s = 0.0;
};

RunReport run_preset(std::string_view name, const RunOptions& options);
RunReport run_config_file(const std::string& path, const RunOptions& options);

} // namespace polwire
