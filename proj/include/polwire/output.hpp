#pragma once

#include "polwire/ensemble.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polwire {

/// Shortest text with 17 significant digits ("%.17g"); parses back bit-exactly.
std::string format_number(double x);

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

/// Rows of already formatted fields; output uses LF line endings.
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of `name` in the header; throws IntegrityError if absent.
    std::size_t column(std::string_view name) const;
    std::vector<double> numeric_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

inline constexpr std::string_view kTrajectoryHeader = "time_fs,d_mean,d_std,pmol_mean,pmol_std";

/// Ensemble time series in the trajectory layout. An empty `times` gives a
/// header-only file.
std::string trajectory_csv(std::span<const double> times, const Moments& width, const Moments& p_mol);

/// Writes `content` to a sibling temporary file and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

struct ManifestVariant {
    std::string group;
    std::string label;
    std::string config_hash;
    std::size_t n_modes = 0;
    std::size_t dimension = 0;
    double realized_cutoff = 0.0;   // eV
    std::size_t n_requested = 0;
    std::size_t n_realizations = 0;
    bool std_defined = false;
    bool empty = false;             // no trajectory data was produced
    std::vector<FailedRealization> failed;
};

struct RunManifest {
    std::string run;                // preset name or configuration path
    std::string tier;
    std::string code_version;
    std::string rng_algorithm;
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;
    double wall_time_s = 0.0;
    std::vector<ManifestVariant> variants;
    std::map<std::string, std::string> files;   // path relative to the manifest -> sha256
};

/// Realized cutoff rounded to four significant figures, as text.
std::string four_significant(double x);

std::string manifest_json(const RunManifest& manifest);
/// Writes manifest.json in `dir`, after hashing every file listed in manifest.files.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest);
/// Marker left when a run aborts after writing some files.
void write_failed_manifest(const std::filesystem::path& dir, const RunManifest& partial, std::string_view reason);

/// Per-mode weights with optional reference curves aligned to `modes`.
/// `manifest_ref` is the manifest path relative to the JSON file.
std::string photon_weights_json(std::string_view manifest_ref, std::string_view label,
                                std::string_view config_hash, const CavityModeSet& modes,
                                const Moments& weights,
                                const std::optional<std::vector<double>>& analytic,
                                const std::optional<Moments>& infinite_time);

} // namespace polwire
