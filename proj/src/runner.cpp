#include "polwire/error.hpp"
#include "polwire/hash.hpp"
#include "polwire/output.hpp"
#include "polwire/presets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#ifndef POLWIRE_VERSION
#define POLWIRE_VERSION "0.0.0"
#endif

namespace polwire {

namespace fs = std::filesystem;

std::string_view code_version() { return POLWIRE_VERSION; }

namespace {

void log(const RunOptions& options, const std::string& message) {
    if (options.log) options.log(message);
}

RunConfig resolve_variant(const ConfigDocument& base, const PresetGroup& group, const PresetVariant& variant,
                          const RunOptions& options) {
    ConfigDocument doc = base;
    for (const auto& o : group.overrides) doc.apply_override(o);
    for (const auto& o : variant.overrides) doc.apply_override(o);
    for (const auto& o : options.overrides) doc.apply_override(o);
    if (options.seed) doc.apply_override("ensemble.seed=" + std::to_string(*options.seed));
    if (options.realizations) doc.apply_override("ensemble.realizations=" + std::to_string(*options.realizations));
    if (options.workers) doc.apply_override("ensemble.workers=" + std::to_string(*options.workers));
    return doc.resolve();
}

void check_resources(const std::vector<PlannedVariant>& plan, std::size_t max_dimension) {
    for (const auto& v : plan) {
        if (v.dimension <= max_dimension) continue;
        const double gib = 16.0 * static_cast<double>(v.dimension) * static_cast<double>(v.dimension) / (1u << 30);
        std::ostringstream msg;
        msg << "variant '" << v.group << "/" << v.label << "' needs a dense matrix of dimension " << v.dimension
            << " (about " << std::round(gib * 10.0) / 10.0 << " GiB per copy, several copies held at once), above"
            << " the limit of " << max_dimension << ". Lower wire.n_molecules or modes.count, or raise"
            << " --max-dimension if the machine has the memory.";
        throw ResourceError(msg.str());
    }
}

fs::path variant_dir(const PlannedVariant& v) {
    if (v.group.empty()) return {};
    return fs::path(v.group) / v.label;
}

std::string rel_manifest(const fs::path& dir) {
    fs::path up;
    for (auto it = dir.begin(); it != dir.end(); ++it) up /= "..";
    return (up / "manifest.json").generic_string();
}

double time_average(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v;
    return y.empty() ? 0.0 : s / static_cast<double>(y.size());
}

struct Writer {
    fs::path root;
    std::vector<std::string> files;

    void write(const fs::path& rel, std::string_view content) {
        atomic_write(root / rel, content);
        files.push_back(rel.generic_string());
    }
};

ManifestVariant manifest_entry(const VariantOutcome& o) {
    ManifestVariant m;
    m.group = o.plan.group;
    m.label = o.plan.label;
    m.config_hash = o.result.config_hash;
    m.n_modes = o.result.modes.size();
    m.dimension = o.plan.dimension;
    m.realized_cutoff = o.result.modes.realized_cutoff();
    m.n_requested = o.result.n_requested;
    m.n_realizations = o.result.n_realizations;
    m.std_defined = o.result.std_defined;
    m.empty = o.result.times.empty();
    m.failed = o.result.failed;
    return m;
}

std::size_t resolve_workers(const RunConfig& c) { return c.ensemble.workers.value_or(1); }

VariantOutcome run_variant(const PlannedVariant& plan, const RunOptions& options) {
    const RunConfig& c = plan.config;
    VariantOutcome out;
    out.plan = plan;
    EnsembleOptions eo;
    eo.workers = resolve_workers(c);
    eo.cache_dir = options.cache_dir;

    std::vector<std::vector<double>> infinite(c.ensemble.realizations);
    if (plan.kind == GroupKind::photon_weights) {
        eo.on_prepared = [&infinite](std::size_t i, const PreparedSystem& s) {
            infinite[i] = infinite_time_photon_weights(s.spectrum, s.psi0).weights;
        };
    }
    log(options, "running " + (plan.group.empty() ? std::string("configuration") : plan.group + "/" + plan.label) +
                     " (dimension " + std::to_string(plan.dimension) + ", " +
                     std::to_string(c.ensemble.realizations) + " realization(s))");
    out.result = run_ensemble(c.simulation, c.ensemble.realizations, c.ensemble.seed, eo);

    if (plan.kind == GroupKind::photon_weights) {
        std::vector<std::vector<double>> done;
        for (auto& w : infinite)
            if (!w.empty()) done.push_back(std::move(w));
        out.infinite_time_weights = aggregate(done);
        const auto& s = c.simulation;
        out.analytic_weights =
            analytic_photon_weights(out.result.modes, s.packet, s.wire.mean_exciton_energy, s.coupling.rabi_splitting)
                .weights;
    }
    return out;
}

void write_variant(Writer& w, const VariantOutcome& o) {
    const fs::path dir = variant_dir(o.plan);
    const auto& r = o.result;
    w.write(dir / "trajectory.csv", trajectory_csv(r.times, r.width, r.p_mol));
    w.write(dir / "photon_weights.json",
            photon_weights_json(rel_manifest(dir), o.plan.label, r.config_hash, r.modes, r.photon_weights,
                                o.analytic_weights, o.infinite_time_weights));
    w.write(dir / "config.toml", to_toml(o.plan.config));
    w.write(dir / "config.json", canonical_json(o.plan.config.simulation));
}

std::string summary_csv(const std::vector<const VariantOutcome*>& outcomes) {
    std::vector<std::vector<std::string>> rows;
    for (const auto* o : outcomes) {
        const auto& r = o->result;
        std::vector<double> photon(r.p_mol.mean.size());
        for (std::size_t k = 0; k < photon.size(); ++k) photon[k] = 1.0 - r.p_mol.mean[k];
        const std::size_t argmax = normalize_photon_weights(r.photon_weights.mean).argmax;
        rows.push_back({o->plan.label, std::to_string(r.modes.size()), format_number(r.modes.realized_cutoff()),
                        std::to_string(r.n_realizations), format_number(time_average(photon)),
                        format_number(r.width.mean.empty() ? 0.0 : r.width.mean.back()),
                        std::to_string(r.modes.size() ? r.modes.modes[argmax].m_x : 0)});
    }
    return csv_text({"label", "n_modes", "realized_cutoff_eV", "realizations", "photon_content_time_avg",
                     "d_final_mean", "w_argmax_m_x"},
                    rows);
}

/// Reference run of a truncation group: its own directory and manifest, read
/// back through the recorded checksum before use.
struct Reference {
    std::vector<double> times, d_mean, d_std;
};

Reference load_reference(const fs::path& dir, const std::string& expected_hash) {
    const fs::path manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw IntegrityError("reference manifest missing: " + manifest_path.string());
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IntegrityError("reference manifest " + manifest_path.string() + " is unreadable: " + e.what());
    }
    const std::string digest = sha256_file((dir / "trajectory.csv").string());
    if (manifest["files"].value("trajectory.csv", "") != digest)
        throw IntegrityError("reference trajectory in " + dir.string() + " does not match its manifest checksum");
    const auto& variants = manifest["variants"];
    if (variants.size() != 1 || variants[0].value("config_hash", "") != expected_hash)
        throw IntegrityError("reference in " + dir.string() + " was produced from a different configuration");
    const CsvTable table = read_csv(dir / "trajectory.csv");
    return {table.numeric_column("time_fs"), table.numeric_column("d_mean"), table.numeric_column("d_std")};
}

ErrorEstimate compare(const EnsembleResult& r, const Reference& ref) {
    if (r.times.size() != ref.times.size()) throw ConfigError("reference time grid differs from the variant grid");
    for (std::size_t k = 0; k < r.times.size(); ++k)
        if (std::abs(r.times[k] - ref.times[k]) > 1e-9)
            throw ConfigError("reference time grid differs from the variant grid");
    return propagate_error_uncertainty(r.width.mean, r.width.std, ref.d_mean, ref.d_std);
}

RunManifest base_manifest(std::string run, const RunOptions& options, const std::vector<PlannedVariant>& plan) {
    RunManifest m;
    m.run = std::move(run);
    m.tier = std::string(to_string(options.tier));
    m.code_version = std::string(code_version());
    m.rng_algorithm = std::string(kRngAlgorithm);
    if (!plan.empty()) {
        m.master_seed = plan.front().config.ensemble.seed;
        m.workers = resolve_workers(plan.front().config);
    }
    return m;
}

std::string unidirectional_right_tail(const EnsembleResult& bi, const EnsembleResult& uni) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < bi.times.size(); ++k) {
        const double b = bi.right_tail.mean[k];
        const double u = uni.right_tail.mean[k];
        rows.push_back({format_number(bi.times[k]), format_number(b), format_number(bi.right_tail.std[k]),
                        format_number(u), format_number(uni.right_tail.std[k]),
                        b > 0.0 ? format_number(u / b) : std::string("nan")});
    }
    return csv_text({"time_fs", "bidirectional_mean", "bidirectional_std", "nonnegative_mean", "nonnegative_std",
                     "ratio"},
                    rows);
}

std::string unidirectional_bins(const EnsembleResult& bi, const EnsembleResult& uni, const SimulationConfig& c) {
    std::vector<std::vector<std::string>> rows;
    const double width = static_cast<double>(c.bin_size) * c.wire.spacing;
    for (std::size_t s = 0; s < bi.snapshot_times.size(); ++s) {
        const auto& b = bi.snapshot_bins[s];
        const auto& u = uni.snapshot_bins[s];
        for (std::size_t j = 0; j < b.mean.size(); ++j) {
            rows.push_back({format_number(bi.snapshot_times[s]), std::to_string(j),
                            format_number(static_cast<double>(j) * width),
                            format_number(static_cast<double>(j + 1) * width), format_number(b.mean[j]),
                            format_number(b.std[j]), format_number(u.mean[j]), format_number(u.std[j])});
        }
    }
    return csv_text({"snapshot_fs", "bin", "x_start_nm", "x_end_nm", "bidirectional_mean", "bidirectional_std",
                     "nonnegative_mean", "nonnegative_std"},
                    rows);
}

RunReport execute(const std::string& run_name, const std::vector<PlannedVariant>& plan, const fs::path& root,
                  const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.output_dir = root.string();
    Writer writer{root, {}};
    RunManifest manifest = base_manifest(run_name, options, plan);
    auto record_files = [&] {
        manifest.files.clear();
        for (const auto& f : writer.files) manifest.files[f] = "";
    };

    try {
        fs::create_directories(root);
        std::vector<std::string> groups;
        for (const auto& v : plan)
            if (std::find(groups.begin(), groups.end(), v.group) == groups.end()) groups.push_back(v.group);

        for (const auto& group : groups) {
            std::vector<const PlannedVariant*> members;
            for (const auto& v : plan)
                if (v.group == group) members.push_back(&v);
            const GroupKind kind = members.front()->kind;

            std::optional<Reference> reference;
            const std::size_t first_outcome = report.variants.size();
            for (const auto* v : members) {
                if (v->reference && options.reference_dir) {
                    const fs::path dir = fs::path(*options.reference_dir) / variant_dir(*v);
                    log(options, "using reference " + dir.string());
                    reference = load_reference(dir, config_hash(v->config.simulation));
                    continue;
                }
                VariantOutcome outcome = run_variant(*v, options);
                if (v->reference) {
                    // The reference gets its own manifest so later runs can consume it by hash.
                    Writer ref_writer{root / variant_dir(*v), {}};
                    ref_writer.write("trajectory.csv",
                                     trajectory_csv(outcome.result.times, outcome.result.width, outcome.result.p_mol));
                    ref_writer.write("config.toml", to_toml(v->config));
                    ref_writer.write("config.json", canonical_json(v->config.simulation));
                    RunManifest ref_manifest = base_manifest(run_name + ":" + group + "/reference", options, {*v});
                    ref_manifest.variants.push_back(manifest_entry(outcome));
                    for (const auto& f : ref_writer.files) ref_manifest.files[f] = "";
                    write_manifest(ref_writer.root, ref_manifest);
                    for (const auto& f : ref_writer.files)
                        writer.files.push_back((variant_dir(*v) / f).generic_string());
                    reference = load_reference(ref_writer.root, outcome.result.config_hash);
                } else {
                    write_variant(writer, outcome);
                }
                manifest.variants.push_back(manifest_entry(outcome));
                report.variants.push_back(std::move(outcome));
                record_files();
            }

            std::vector<const VariantOutcome*> outcomes;
            for (std::size_t i = first_outcome; i < report.variants.size(); ++i)
                if (!report.variants[i].plan.reference) outcomes.push_back(&report.variants[i]);
            if (group.empty()) continue;
            writer.write(fs::path(group) / "summary.csv", summary_csv(outcomes));

            if (kind == GroupKind::truncation && reference) {
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = first_outcome; i < report.variants.size(); ++i) {
                    auto& o = report.variants[i];
                    if (o.plan.reference) continue;
                    o.error = compare(o.result, *reference);
                    rows.push_back({o.plan.label, std::to_string(o.result.modes.size()),
                                    format_number(o.result.modes.realized_cutoff()), format_number(o.error->error),
                                    format_number(o.error->uncertainty)});
                }
                writer.write(fs::path(group) / "errors.csv",
                             csv_text({"label", "n_modes", "realized_cutoff_eV", "error", "uncertainty"}, rows));
            }
            if (kind == GroupKind::unidirectional && outcomes.size() == 2) {
                const auto& bi = outcomes[0]->result;
                const auto& uni = outcomes[1]->result;
                writer.write(fs::path(group) / "right_tail.csv", unidirectional_right_tail(bi, uni));
                writer.write(fs::path(group) / "binned.csv",
                             unidirectional_bins(bi, uni, outcomes[0]->plan.config.simulation));
            }
            record_files();
        }
        record_files();
        report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        manifest.wall_time_s = report.wall_time_s;
        write_manifest(root, manifest);
        report.files = writer.files;
        report.files.push_back("manifest.json");
    } catch (const std::exception& e) {
        record_files();
        manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        try {
            write_failed_manifest(root, manifest, e.what());
        } catch (...) {
            // The original error is more useful than a failure to record it.
        }
        throw;
    }
    return report;
}

} // namespace

std::vector<PlannedVariant> plan_preset(const Preset& preset, const RunOptions& options) {
    const ConfigDocument base;
    std::vector<PlannedVariant> plan;
    std::vector<std::string> violations;
    bool group_found = !options.group;
    for (const auto& g : preset.groups) {
        if (options.group && *options.group != g.name) continue;
        group_found = true;
        std::vector<const PresetVariant*> variants;
        if (g.reference) variants.push_back(&*g.reference);
        for (const auto& v : g.variants) variants.push_back(&v);
        for (const auto* v : variants) {
            try {
                PlannedVariant p;
                p.group = g.name;
                p.kind = g.kind;
                p.label = v->label;
                p.reference = g.reference && v == &*g.reference;
                p.config = resolve_variant(base, g, *v, options);
                p.dimension = p.config.simulation.dimension();
                plan.push_back(std::move(p));
            } catch (const ConfigError& e) {
                for (const auto& msg : e.violations()) violations.push_back(g.name + "/" + v->label + ": " + msg);
            }
        }
    }
    if (!group_found) violations.push_back("preset " + preset.name + " has no group '" + *options.group + "'");
    if (!violations.empty()) throw ConfigError(std::move(violations));
    check_resources(plan, options.max_dimension);
    return plan;
}

RunReport run_preset(std::string_view name, const RunOptions& options) {
    const Preset preset = make_preset(name, options.tier);
    const auto plan = plan_preset(preset, options);
    const fs::path root = options.out_dir ? fs::path(*options.out_dir) : fs::path("out") / preset.name;
    return execute(preset.name, plan, root, options);
}

RunReport run_config_file(const std::string& path, const RunOptions& options) {
    const ConfigDocument doc = ConfigDocument::from_file(path);
    PlannedVariant p;
    p.config = resolve_variant(doc, PresetGroup{}, PresetVariant{}, options);
    p.dimension = p.config.simulation.dimension();
    check_resources({p}, options.max_dimension);
    const fs::path root = options.out_dir ? fs::path(*options.out_dir) : fs::path(p.config.output_dir);
    return execute(path, {p}, root, options);
}

} // namespace polwire
