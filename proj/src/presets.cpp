#include "polwire/presets.hpp"

#include "polwire/error.hpp"

#include <array>
#include <charconv>

namespace polwire {

namespace {

std::string num(double x) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

std::string kv(std::string_view key, double x) { return std::string(key) + "=" + num(x); }
std::string kv(std::string_view key, std::size_t x) { return std::string(key) + "=" + std::to_string(x); }

PresetVariant mode_count_variant(std::size_t n_c) { return {"nc" + std::to_string(n_c), {kv("modes.count", n_c)}}; }

std::vector<PresetVariant> mode_count_variants(std::initializer_list<std::size_t> counts) {
    std::vector<PresetVariant> out;
    for (auto n : counts) out.push_back(mode_count_variant(n));
    return out;
}

std::string sigma_label(double sigma) { return "sigma" + num(sigma); }

// Wire and initial-state defaults shared by every preset: L_y = 200 nm,
// L_z = 400 nm, eps = 3, a = 10 nm, resonant exciton at 2.0 eV, Omega_R = 0.1 eV.
const std::vector<std::string> kCommon = {"wire.spacing_nm=10.0",     "wire.l_y_nm=200.0",
                                          "wire.l_z_nm=400.0",        "wire.epsilon=3.0",
                                          "wire.exciton_energy_eV=2.0", "coupling.rabi_splitting_eV=0.1",
                                          "wavepacket.sigma_x_nm=60.0", "ensemble.seed=20231115"};

PresetGroup with_common(PresetGroup g) {
    g.overrides.insert(g.overrides.begin(), kCommon.begin(), kCommon.end());
    return g;
}

Preset size_sweep(Tier tier) {
    Preset p{"size-sweep", "ordered wave packet width for several wire lengths", tier, {}};
    PresetGroup g{"sizes", GroupKind::trajectories, {}, {}, std::nullopt};
    if (tier == Tier::full) {
        g.overrides = {"modes.count=1601", "time.t_end_fs=10000.0", "time.dt_fs=10.0"};
        for (std::size_t n : {1000, 5000, 10000, 15000, 20000})
            g.variants.push_back({"n" + std::to_string(n), {kv("wire.n_molecules", n)}});
    } else {
        g.overrides = {"modes.count=101", "time.t_end_fs=2000.0", "time.dt_fs=1.0"};
        for (std::size_t n : {250, 500}) g.variants.push_back({"n" + std::to_string(n), {kv("wire.n_molecules", n)}});
    }
    p.groups.push_back(with_common(std::move(g)));
    return p;
}

Preset cutoff_sweep(Tier tier) {
    Preset p{"cutoff-sweep", "ordered truncation error against a high mode-count reference", tier, {}};
    const std::vector<std::string> grid = {"time.t_end_fs=5000.0", "time.dt_fs=10.0"};
    if (tier == Tier::full) {
        for (std::size_t n : {1000, 5000}) {
            PresetGroup g{"n" + std::to_string(n), GroupKind::truncation, grid,
                          mode_count_variants({1, 21, 151, 201, 401, 801}), mode_count_variant(1601)};
            g.overrides.push_back(kv("wire.n_molecules", n));
            g.reference->label = "reference";
            p.groups.push_back(with_common(std::move(g)));
        }
    } else {
        PresetGroup g{"n500", GroupKind::truncation, grid,
                      mode_count_variants({1, 5, 11, 15, 21, 25, 27, 29, 31, 41, 51, 101, 201}),
                      mode_count_variant(401)};
        g.overrides.push_back("wire.n_molecules=500");
        g.reference->label = "reference";
        p.groups.push_back(with_common(std::move(g)));
    }
    return p;
}

Preset disorder_sweep(Tier tier) {
    Preset p{"disorder-sweep", "truncation error and photon content under energetic disorder", tier, {}};
    const bool full = tier == Tier::full;
    const std::size_t n_m = full ? 5000 : 500;
    const std::size_t realizations = full ? 100 : 25;
    for (double ratio : {0.2, 0.5}) {
        PresetGroup g{"ratio" + num(ratio), GroupKind::truncation, {}, {}, std::nullopt};
        g.overrides = {kv("wire.n_molecules", n_m), kv("disorder.sigma_energy_eV", 0.1 * ratio),
                       "disorder.sigma_position_nm=1.0", "time.t_end_fs=1000.0", "time.dt_fs=10.0",
                       kv("ensemble.realizations", realizations)};
        g.variants = full ? mode_count_variants({1, 21, 151, 201, 401, 801}) : mode_count_variants({1, 11, 21, 51, 101});
        g.reference = mode_count_variant(full ? 1601 : 201);
        g.reference->label = "reference";
        p.groups.push_back(with_common(std::move(g)));
    }
    PresetGroup content{"photon-content", GroupKind::trajectories, {}, {}, std::nullopt};
    content.overrides = {kv("wire.n_molecules", full ? std::size_t{5000} : std::size_t{1000}),
                         kv("modes.count", full ? std::size_t{401} : std::size_t{101}),
                         "wavepacket.sigma_x_nm=120.0", "disorder.sigma_position_nm=1.0",
                         "time.t_end_fs=1000.0", "time.dt_fs=10.0", kv("ensemble.realizations", realizations)};
    for (double ratio : {0.05, 0.1, 0.2})
        content.variants.push_back({"ratio" + num(ratio), {kv("disorder.sigma_energy_eV", 0.1 * ratio)}});
    p.groups.push_back(with_common(std::move(content)));
    return p;
}

Preset photon_weights(Tier tier) {
    Preset p{"photon-weights", "time-averaged photon mode weights, ordered and disordered", tier, {}};
    const bool full = tier == Tier::full;
    const std::string q_bar = num(photon_weight_mean_momentum());
    const std::vector<std::string> base = {kv("wire.n_molecules", full ? std::size_t{5000} : std::size_t{1000}),
                                           kv("modes.count", full ? std::size_t{401} : std::size_t{201}),
                                           "wire.exciton_energy_eV=2.2", "time.t_end_fs=5000.0", "time.dt_fs=5.0"};

    PresetGroup ordered{"ordered", GroupKind::photon_weights, base, {}, std::nullopt};
    const std::vector<double> widths = full ? std::vector<double>{120.0} : std::vector<double>{120.0, 240.0};
    const std::vector<double> rabis = full ? std::vector<double>{0.05, 0.1, 0.3} : std::vector<double>{0.05, 0.3};
    for (const auto& [q_label, q_value] : {std::pair<std::string, std::string>{"q0", "0.0"}, {"q2.1eV", q_bar}})
        for (double w : widths)
            for (double rabi : rabis)
                ordered.variants.push_back({q_label + "-sx" + num(w) + "-rabi" + num(rabi),
                                            {"wavepacket.mean_momentum_per_nm=" + q_value,
                                             kv("wavepacket.sigma_x_nm", w),
                                             kv("coupling.rabi_splitting_eV", rabi)}});
    p.groups.push_back(with_common(std::move(ordered)));

    PresetGroup disordered{"disordered", GroupKind::photon_weights, base, {}, std::nullopt};
    disordered.overrides.insert(disordered.overrides.end(),
                                {"wavepacket.sigma_x_nm=120.0", "wavepacket.mean_momentum_per_nm=" + q_bar,
                                 "disorder.sigma_position_nm=1.0",
                                 kv("ensemble.realizations", full ? std::size_t{100} : std::size_t{5})});
    const std::vector<double> dis_rabis = full ? std::vector<double>{0.2, 0.1, 0.05} : std::vector<double>{0.1};
    for (double sigma : {0.02, 0.05})
        for (double rabi : dis_rabis)
            disordered.variants.push_back({sigma_label(sigma) + "-rabi" + num(rabi),
                                           {kv("disorder.sigma_energy_eV", sigma),
                                            kv("coupling.rabi_splitting_eV", rabi)}});
    p.groups.push_back(with_common(std::move(disordered)));
    return p;
}

Preset unidirectional(Tier tier) {
    Preset p{"unidirectional", "bidirectional versus q >= 0 cavity modes, binned site probabilities", tier, {}};
    const bool full = tier == Tier::full;
    // Both variants keep the same largest |m_x|: N_c = 2 m_max + 1 versus m_max + 1.
    const std::size_t n_bi = full ? 1001 : 101;
    PresetGroup g{"pair", GroupKind::unidirectional, {}, {}, std::nullopt};
    g.overrides = {kv("wire.n_molecules", full ? std::size_t{5000} : std::size_t{1000}),
                   "disorder.sigma_energy_eV=0.04", "disorder.sigma_position_nm=1.0",
                   "wavepacket.sigma_x_nm=120.0", "time.t_end_fs=5000.0", "time.dt_fs=10.0",
                   "time.snapshots_fs=[500.0, 1000.0, 2000.0, 5000.0]", "output.bin_size=50",
                   kv("ensemble.realizations", full ? std::size_t{100} : std::size_t{25})};
    g.variants = {{"bidirectional", {kv("modes.count", n_bi), "modes.directionality=\"bidirectional\""}},
                  {"nonnegative", {kv("modes.count", (n_bi - 1) / 2 + 1), "modes.directionality=\"nonnegative\""}}};
    p.groups.push_back(with_common(std::move(g)));
    return p;
}

Preset det_trajectories(Tier tier) {
    Preset p{"det-trajectories", "disorder-averaged width trajectories for several disorder strengths", tier, {}};
    if (tier == Tier::full) {
        for (double rabi : {0.05, 0.1}) {
            PresetGroup g{"rabi" + num(rabi), GroupKind::trajectories, {}, {}, std::nullopt};
            g.overrides = {"wire.n_molecules=5000", "modes.count=1001", "disorder.sigma_position_nm=1.0",
                           "time.t_end_fs=5000.0", "time.dt_fs=10.0", "ensemble.realizations=100"};
            g.overrides.push_back(kv("coupling.rabi_splitting_eV", rabi));
            for (double sigma : {0.005, 0.01, 0.02, 0.05, 0.1, 0.2})
                g.variants.push_back({sigma_label(sigma), {kv("disorder.sigma_energy_eV", sigma)}});
            p.groups.push_back(with_common(std::move(g)));
        }
    } else {
        PresetGroup g{"rabi0.1", GroupKind::trajectories, {}, {}, std::nullopt};
        g.overrides = {"wire.n_molecules=500", "modes.count=101", "disorder.sigma_position_nm=1.0",
                       "time.t_end_fs=5000.0", "time.dt_fs=10.0", "ensemble.realizations=25"};
        for (double sigma : {0.005, 0.02, 0.05})
            g.variants.push_back({sigma_label(sigma), {kv("disorder.sigma_energy_eV", sigma)}});
        p.groups.push_back(with_common(std::move(g)));
    }
    return p;
}

} // namespace

std::string_view to_string(Tier tier) { return tier == Tier::full ? "full" : "desk"; }

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"size-sweep",     "cutoff-sweep",   "disorder-sweep",
                                                   "photon-weights", "unidirectional", "det-trajectories"};
    return names;
}

bool is_preset(std::string_view name) {
    for (const auto& n : preset_names())
        if (n == name) return true;
    return false;
}

double photon_weight_mean_momentum() {
    const WireConfig wire;
    return wavevector_at_energy(2.1, transverse_wavevector(wire.l_y, wire.l_z), wire.epsilon);
}

Preset make_preset(std::string_view name, Tier tier) {
    if (name == "size-sweep") return size_sweep(tier);
    if (name == "cutoff-sweep") return cutoff_sweep(tier);
    if (name == "disorder-sweep") return disorder_sweep(tier);
    if (name == "photon-weights") return photon_weights(tier);
    if (name == "unidirectional") return unidirectional(tier);
    if (name == "det-trajectories") return det_trajectories(tier);
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

} // namespace polwire
