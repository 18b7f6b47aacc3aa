#include "polwire/ensemble.hpp"

#include "polwire/error.hpp"
#include "polwire/hash.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

namespace polwire {

namespace {

constexpr double kGridTolerance = 1e-9;

struct Neumaier {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + compensation; }
};

nlohmann::json truncation_json(const Truncation& t) {
    if (const auto* c = std::get_if<ModeCount>(&t)) return {{"count", c->count}};
    return {{"cutoff_eV", std::get<CutoffEnergy>(t).energy}};
}

} // namespace

std::size_t TimeGrid::size() const {
    return static_cast<std::size_t>(std::llround(t_end / dt)) + 1;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(k) * dt;
    return out;
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = t / dt;
    const auto idx = std::llround(k);
    if (idx < 0 || static_cast<std::size_t>(idx) >= size() || std::abs(k - static_cast<double>(idx)) > kGridTolerance)
        throw ConfigError("time " + std::to_string(t) + " fs is not on the time grid");
    return static_cast<std::size_t>(idx);
}

void SimulationConfig::validate() const {
    std::vector<std::string> errors;
    try {
        wire.validate();
    } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.violations().begin(), e.violations().end());
    }
    if (!(disorder.sigma_energy >= 0.0)) errors.emplace_back("disorder.sigma_energy_eV must be >= 0");
    if (!(disorder.sigma_position >= 0.0)) errors.emplace_back("disorder.sigma_position_nm must be >= 0");
    if (!(coupling.rabi_splitting >= 0.0)) errors.emplace_back("coupling.rabi_splitting_eV must be >= 0");
    if (!(packet.sigma_x > 0.0)) errors.emplace_back("wavepacket.sigma_x_nm must be > 0");
    if (packet.center && !(*packet.center >= 0.0 && *packet.center <= wire.length()))
        errors.emplace_back("wavepacket.center_nm must lie within [0, L_x]");
    if (const auto* c = std::get_if<ModeCount>(&truncation)) {
        if (c->count == 0)
            errors.emplace_back("modes.count must be >= 1");
        else if (directionality == Directionality::bidirectional && c->count % 2 == 0)
            errors.emplace_back("mode count must be odd for bidirectional mode sets");
    } else {
        const double cutoff = std::get<CutoffEnergy>(truncation).energy;
        if (wire.l_y > 0.0 && wire.l_z > 0.0 && wire.epsilon >= 1.0) {
            const double bottom = mode_energy(0.0, transverse_wavevector(wire.l_y, wire.l_z), wire.epsilon);
            if (!(cutoff >= bottom))
                errors.emplace_back("modes.cutoff_eV must be >= the minimum cavity energy (" +
                                    std::to_string(bottom) + " eV)");
        }
    }
    if (!(time.dt > 0.0)) errors.emplace_back("time.dt_fs must be > 0");
    if (!(time.t_end >= 0.0)) errors.emplace_back("time.t_end_fs must be >= 0");
    if (time.dt > 0.0 && time.t_end >= 0.0) {
        const double steps = time.t_end / time.dt;
        if (std::abs(steps - std::round(steps)) > kGridTolerance)
            errors.emplace_back("time.t_end_fs must be a multiple of time.dt_fs");
        else if (time.size() < 2)
            errors.emplace_back("time grid needs at least two points");
        for (double s : snapshots) {
            try {
                (void)time.index_of(s);
            } catch (const ConfigError& e) {
                errors.emplace_back(std::string("time.snapshots_fs: ") + e.what());
            }
        }
    }
    if (bin_size == 0) errors.emplace_back("output.bin_size must be >= 1");
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::size_t SimulationConfig::dimension() const {
    return wire.n_molecules + build_mode_set(wire, truncation, directionality).size();
}

std::string canonical_json(const SimulationConfig& c) {
    nlohmann::json j;
    j["wire"] = {{"n_molecules", c.wire.n_molecules},
                 {"spacing_nm", c.wire.spacing},
                 {"l_y_nm", c.wire.l_y},
                 {"l_z_nm", c.wire.l_z},
                 {"epsilon", c.wire.epsilon},
                 {"exciton_energy_eV", c.wire.mean_exciton_energy}};
    j["disorder"] = {{"sigma_energy_eV", c.disorder.sigma_energy},
                     {"sigma_position_nm", c.disorder.sigma_position}};
    j["coupling"] = {{"rabi_splitting_eV", c.coupling.rabi_splitting}};
    j["wavepacket"] = {{"sigma_x_nm", c.packet.sigma_x},
                       {"mean_momentum_per_nm", c.packet.mean_momentum},
                       {"center_nm", c.packet.center_for(c.wire)}};
    j["modes"] = truncation_json(c.truncation);
    j["modes"]["directionality"] = std::string(to_string(c.directionality));
    j["time"] = {{"t_end_fs", c.time.t_end}, {"dt_fs", c.time.dt}, {"snapshots_fs", c.snapshots}};
    j["output"] = {{"bin_size", c.bin_size}};
    return j.dump();
}

std::string config_hash(const SimulationConfig& config) { return sha256_hex(canonical_json(config)); }

PreparedSystem prepare_system(const SimulationConfig& config, std::uint64_t seed,
                              const std::optional<std::string>& cache_dir) {
    PreparedSystem s;
    s.modes = build_mode_set(config.wire, config.truncation, config.directionality);
    s.realization = sample_realization(config.wire, config.disorder, seed);
    s.hamiltonian = assemble(s.realization, s.modes, config.coupling);

    if (cache_dir) {
        const std::string key = spectrum_cache_key(s.realization, s.modes, config.coupling);
        const std::string path = (std::filesystem::path(*cache_dir) / (key + ".spec")).string();
        std::optional<Spectrum> cached;
        try {
            cached = load_spectrum(path, key);
        } catch (const IntegrityError&) {
            cached.reset();   // truncated file: treat as a miss and overwrite
        }
        if (cached && static_cast<std::size_t>(cached->dimension()) == s.hamiltonian.dimension()) {
            s.spectrum = std::move(*cached);
        } else {
            std::filesystem::create_directories(*cache_dir);
            s.spectrum = diagonalize(s.hamiltonian);
            save_spectrum(path, s.spectrum, key);
        }
    } else {
        s.spectrum = diagonalize(s.hamiltonian);
    }

    s.psi0 = gaussian_initial_state(config.wire, s.realization, s.modes.size(), config.packet);
    s.x0 = config.packet.center_for(config.wire);
    return s;
}

TrajectoryRecord record_trajectory(const SimulationConfig& config, const PreparedSystem& system,
                                   std::uint64_t seed) {
    TrajectoryRecord rec;
    rec.seed = seed;
    rec.config_hash = config_hash(config);
    rec.times = config.time.times();

    const Propagator propagator(system.spectrum, system.psi0);
    const Eigen::MatrixXd probs = propagator.probabilities(rec.times);
    const std::size_t nm = system.realization.size();
    const auto& positions = system.realization.positions;
    const double threshold = system.x0 + config.packet.sigma_x;

    rec.width.resize(rec.times.size());
    rec.p_mol.resize(rec.times.size());
    rec.right_tail.resize(rec.times.size());
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        const std::span<const double> sites(probs.col(static_cast<Eigen::Index>(k)).data(), nm);
        double pmol = 0.0;
        for (double p : sites) pmol += p;
        rec.p_mol[k] = pmol;
        rec.width[k] = wavepacket_width(sites, positions, system.x0, config.wire.spacing);
        rec.right_tail[k] = probability_beyond(sites, positions, threshold);
    }
    rec.photon_weights = photon_weight_trajectory(probs, nm);
    for (double s : config.snapshots) {
        const auto k = static_cast<Eigen::Index>(config.time.index_of(s));
        rec.snapshot_bins.push_back(
            bin_site_probabilities(std::span<const double>(probs.col(k).data(), nm), config.bin_size));
    }
    return rec;
}

TrajectoryRecord simulate_realization(const SimulationConfig& config, std::uint64_t seed,
                                      const std::optional<std::string>& cache_dir) {
    config.validate();
    const PreparedSystem system = prepare_system(config, seed, cache_dir);
    return record_trajectory(config, system, seed);
}

Moments aggregate(std::span<const std::vector<double>> samples) {
    Moments m;
    if (samples.empty()) return m;
    const std::size_t len = samples.front().size();
    for (const auto& s : samples)
        if (s.size() != len) throw ConfigError("aggregate: samples differ in length");
    const double n = static_cast<double>(samples.size());
    m.mean.resize(len);
    m.std.assign(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        const double shift = samples.front()[i];
        double lo = shift, hi = shift;
        Neumaier dev;
        for (const auto& s : samples) {
            dev.add(s[i] - shift);
            lo = std::min(lo, s[i]);
            hi = std::max(hi, s[i]);
        }
        const double mean = std::clamp(shift + dev.value() / n, lo, hi);
        m.mean[i] = mean;
        if (samples.size() > 1) {
            Neumaier sq;
            for (const auto& s : samples) sq.add((s[i] - mean) * (s[i] - mean));
            m.std[i] = std::sqrt(sq.value() / (n - 1.0));
        }
    }
    return m;
}

EnsembleResult run_ensemble(const SimulationConfig& config, std::size_t n_realizations,
                            std::uint64_t master_seed, const EnsembleOptions& options) {
    if (n_realizations < 1) throw ConfigError("ensemble.realizations must be >= 1");
    config.validate();

    EnsembleResult result;
    result.n_requested = n_realizations;
    result.master_seed = master_seed;
    result.workers = std::max<std::size_t>(1, std::min(options.workers, n_realizations));
    result.modes = build_mode_set(config.wire, config.truncation, config.directionality);
    result.config_hash = config_hash(config);
    result.times = config.time.times();
    result.snapshot_times = config.snapshots;

    std::vector<std::optional<TrajectoryRecord>> records(n_realizations);
    std::vector<std::string> errors(n_realizations);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < n_realizations; i = next++) {
            const std::uint64_t seed = derive_seed(master_seed, i);
            try {
                const PreparedSystem system = prepare_system(config, seed, options.cache_dir);
                if (options.on_prepared) options.on_prepared(i, system);
                records[i] = record_trajectory(config, system, seed);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (result.workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < result.workers; ++w) pool.emplace_back(worker);
    }

    std::vector<std::vector<double>> widths, pmols, tails, weights;
    std::vector<std::vector<std::vector<double>>> bins(config.snapshots.size());
    for (std::size_t i = 0; i < n_realizations; ++i) {
        if (!records[i]) {
            result.failed.push_back({i, derive_seed(master_seed, i), errors[i]});
            continue;
        }
        auto& r = *records[i];
        widths.push_back(std::move(r.width));
        pmols.push_back(std::move(r.p_mol));
        tails.push_back(std::move(r.right_tail));
        weights.push_back(std::move(r.photon_weights.weights));
        for (std::size_t s = 0; s < bins.size(); ++s) bins[s].push_back(std::move(r.snapshot_bins[s]));
    }

    const double failed_fraction = static_cast<double>(result.failed.size()) / static_cast<double>(n_realizations);
    if (widths.empty() || failed_fraction > options.max_failure_fraction) {
        std::string msg = "ensemble aborted: " + std::to_string(result.failed.size()) + " of " +
                          std::to_string(n_realizations) + " realizations failed";
        if (!result.failed.empty())
            msg += " (first: seed " + std::to_string(result.failed.front().seed) + ": " + result.failed.front().message + ")";
        throw NumericalError(msg);
    }

    result.n_realizations = widths.size();
    result.std_defined = result.n_realizations > 1;
    result.width = aggregate(widths);
    result.p_mol = aggregate(pmols);
    result.right_tail = aggregate(tails);
    result.photon_weights = aggregate(weights);
    for (auto& b : bins) result.snapshot_bins.push_back(aggregate(b));
    return result;
}

ErrorEstimate compare_to_reference(const EnsembleResult& result, const EnsembleResult& reference) {
    if (result.times.size() != reference.times.size())
        throw ConfigError("compare_to_reference: time grids differ");
    for (std::size_t i = 0; i < result.times.size(); ++i)
        if (std::abs(result.times[i] - reference.times[i]) > kGridTolerance)
            throw ConfigError("compare_to_reference: time grids differ");
    return propagate_error_uncertainty(result.width.mean, result.width.std, reference.width.mean,
                                       reference.width.std);
}

} // namespace polwire
