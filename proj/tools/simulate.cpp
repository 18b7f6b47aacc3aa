// simulate <preset|config.toml> [options]
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
// 3 numerical error, 4 resource guard.

#include "polwire/error.hpp"
#include "polwire/presets.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

std::optional<std::size_t> workers_from_env() {
    const char* value = std::getenv("POLWIRE_WORKERS");
    if (!value || !*value) return std::nullopt;
    try {
        std::size_t pos = 0;
        const unsigned long long n = std::stoull(value, &pos);
        if (pos != std::string(value).size() || n == 0) throw std::invalid_argument("");
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw polwire::ConfigError("POLWIRE_WORKERS must be a positive integer, got '" + std::string(value) + "'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exciton wave-packet dynamics in a multimode polaritonic wire"};
    app.set_version_flag("--version", std::string(polwire::code_version()));

    std::string target;
    polwire::RunOptions options;
    std::uint64_t seed = 0;
    std::size_t realizations = 0, workers = 0;
    std::string out_dir, group, cache_dir, reference_dir;
    bool full = false, list = false, quiet = false;

    std::string preset_list;
    for (const auto& n : polwire::preset_names()) preset_list += (preset_list.empty() ? "" : ", ") + n;

    app.add_option("target", target, "Preset name (" + preset_list + ") or path to a TOML configuration");
    auto* seed_opt = app.add_option("--seed", seed, "Master seed for the disorder ensemble");
    auto* real_opt = app.add_option("--realizations", realizations, "Number of disorder realizations")
                         ->check(CLI::PositiveNumber);
    auto* workers_opt = app.add_option("--workers", workers, "Concurrent realizations (default: POLWIRE_WORKERS or 1)")
                            ->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--override", options.overrides, "Configuration override section.key=value (repeatable)")
        ->allow_extra_args(false);
    app.add_flag("--full", full, "Use the full-scale tier of a preset instead of the desk-scale tier");
    app.add_option("--max-dimension", options.max_dimension, "Largest Hamiltonian dimension accepted")
        ->capture_default_str();
    app.add_option("--group", group, "Run only one group of a preset");
    app.add_option("--cache-dir", cache_dir, "Directory for cached eigendecompositions");
    app.add_option("--reference", reference_dir, "Earlier run output whose truncation references are reused");
    app.add_flag("--list", list, "List presets and exit");
    app.add_flag("-q,--quiet", quiet, "Suppress progress messages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& n : polwire::preset_names())
            std::cout << n << "  " << polwire::make_preset(n, polwire::Tier::desk).description << "\n";
        return 0;
    }
    if (target.empty()) {
        std::cerr << "error: a preset name or configuration path is required\n" << app.help();
        return 2;
    }

    try {
        options.tier = full ? polwire::Tier::full : polwire::Tier::desk;
        if (*seed_opt) options.seed = seed;
        if (*real_opt) options.realizations = realizations;
        if (*workers_opt)
            options.workers = workers;
        else
            options.workers = workers_from_env();
        if (!out_dir.empty()) options.out_dir = out_dir;
        if (!group.empty()) options.group = group;
        if (!cache_dir.empty()) options.cache_dir = cache_dir;
        if (!reference_dir.empty()) options.reference_dir = reference_dir;
        if (!quiet) options.log = [](const std::string& m) { std::cerr << m << std::endl; };

        const auto report = polwire::is_preset(target) ? polwire::run_preset(target, options)
                                                       : polwire::run_config_file(target, options);
        if (!quiet)
            std::cerr << "wrote " << report.files.size() << " files to " << report.output_dir << " in "
                      << report.wall_time_s << " s" << std::endl;
        return 0;
    } catch (const polwire::ConfigError& e) {
        std::cerr << "configuration error:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 2;
    } catch (const polwire::ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 4;
    } catch (const polwire::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const polwire::IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 3;
    } catch (const polwire::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
