#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polwire/config.hpp"
#include "polwire/error.hpp"
#include "polwire/presets.hpp"

#include <cmath>
#include <string>

using namespace polwire;

namespace {

const std::string kMinimal = R"(
[wire]
n_molecules = 100
spacing_nm = 10.0
[modes]
count = 21
[time]
t_end_fs = 500.0
dt_fs = 5.0
)";

std::vector<std::string> violations_of(std::string_view text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool mentions(const std::vector<std::string>& v, std::string_view needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

std::filesystem::path source_path(const std::string& rel) { return std::filesystem::path(POLWIRE_SOURCE_DIR) / rel; }

} // namespace

TEST_CASE("minimal configuration") {
    const auto c = parse_config_text(kMinimal);
    CHECK(c.simulation.wire.n_molecules == 100);
    CHECK(std::get<ModeCount>(c.simulation.truncation).count == 21);
    CHECK(c.simulation.time.dt == 5.0);
    CHECK(c.simulation.wire.l_y == 200.0);
    CHECK(c.ensemble.realizations == 1);
    CHECK_FALSE(c.ensemble.workers.has_value());
}

TEST_CASE("even bidirectional mode count") {
    std::string text = kMinimal;
    text.replace(text.find("count = 21"), 10, "count = 20");
    CHECK(mentions(violations_of(text), "mode count must be odd"));
}

TEST_CASE("unknown keys and unit suffixes") {
    CHECK(mentions(violations_of(kMinimal + "[coupling]\nrabi = 0.1\n"), "unknown key coupling.rabi"));
    CHECK(mentions(violations_of(kMinimal + "[coupling]\nrabi_splitting_meV = 100.0\n"),
                   "unit-suffix mismatch for coupling.rabi_splitting_meV"));
    CHECK(mentions(violations_of(kMinimal + "[extra]\nx = 1\n"), "unknown section [extra]"));
}

TEST_CASE("all violations are reported together") {
    const auto v = violations_of(R"(
[wire]
n_molecules = 100
spacing_um = 0.01
l_y = 200.0
[modes]
count = 20
[time]
dt_fs = -1.0
)");
    CHECK(v.size() >= 4);
    CHECK(mentions(v, "spacing_um"));
    CHECK(mentions(v, "l_y"));
    CHECK(mentions(v, "mode count must be odd"));
}

TEST_CASE("type errors") {
    CHECK(!violations_of(kMinimal + "[ensemble]\nrealizations = \"ten\"\n").empty());
    CHECK(!violations_of(kMinimal + "[ensemble]\nrealizations = 0\n").empty());
}

TEST_CASE("energy cutoff") {
    std::string text = kMinimal;
    text.replace(text.find("count = 21"), 10, "cutoff_eV = 2.5");
    const auto c = parse_config_text(text);
    CHECK(std::get<CutoffEnergy>(c.simulation.truncation).energy == 2.5);

    std::string low = kMinimal;
    low.replace(low.find("count = 21"), 10, "cutoff_eV = 1.5");
    CHECK_FALSE(violations_of(low).empty());

    CHECK_FALSE(violations_of(kMinimal + "cutoff_eV = 2.5\n").empty());   // appended to [time], unknown there
}

TEST_CASE("snapshots must lie on the time grid") {
    CHECK_FALSE(violations_of(kMinimal + "snapshots_fs = [12.5]\n").empty());
    const auto c = parse_config_text(kMinimal + "snapshots_fs = [100.0, 500.0]\n");
    CHECK(c.simulation.snapshots == std::vector<double>{100.0, 500.0});
}

TEST_CASE("overrides") {
    auto doc = ConfigDocument::from_text(kMinimal);
    doc.apply_override("ensemble.seed=77");
    doc.apply_override("modes.directionality=nonnegative");
    doc.apply_override("modes.count=11");
    doc.apply_override("disorder.sigma_energy_eV=0.02");
    const auto c = doc.resolve();
    CHECK(c.ensemble.seed == 77);
    CHECK(c.simulation.directionality == Directionality::nonnegative_only);
    CHECK(std::get<ModeCount>(c.simulation.truncation).count == 11);
    CHECK(c.simulation.disorder.sigma_energy == 0.02);

    auto bad = ConfigDocument::from_text(kMinimal);
    bad.apply_override("wire.n_molecule=5");
    CHECK_THROWS_AS(bad.resolve(), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::from_text(kMinimal).apply_override("no-equals-sign"), ConfigError);
}

TEST_CASE("rendering round trip") {
    auto doc = ConfigDocument::from_text(kMinimal);
    doc.apply_override("disorder.sigma_energy_eV=0.015");
    doc.apply_override("wavepacket.mean_momentum_per_nm=0.0055988");
    doc.apply_override("time.snapshots_fs=[250.0]");
    const auto c = doc.resolve();
    const auto back = parse_config_text(to_toml(c));
    CHECK(to_toml(back) == to_toml(c));
    CHECK(config_hash(back.simulation) == config_hash(c.simulation));
    CHECK(back.simulation.disorder.sigma_energy == 0.015);
}

TEST_CASE("shipped configuration files parse") {
    for (const char* name : {"configs/minimal.toml", "configs/size-sweep-n5000.toml", "configs/unidirectional-desk.toml"}) {
        CAPTURE(name);
        CHECK_NOTHROW(parse_config(source_path(name)));
    }
    CHECK_THROWS_AS(parse_config(source_path("tests/data/even_modes.toml")), ConfigError);
    CHECK_THROWS_AS(parse_config(source_path("configs/does-not-exist.toml")), ConfigError);
}

TEST_CASE("presets") {
    CHECK(preset_names().size() == 6);
    CHECK_THROWS_AS(make_preset("nope", Tier::desk), ConfigError);
    RunOptions big;
    big.max_dimension = 1000000;
    for (const auto& name : preset_names())
        for (Tier tier : {Tier::desk, Tier::full}) {
            CAPTURE(name);
            CHECK_NOTHROW(plan_preset(make_preset(name, tier), big));
        }
}

TEST_CASE("size-sweep full tier realized cutoffs") {
    RunOptions big;
    big.max_dimension = 1000000;
    const auto plan = plan_preset(make_preset("size-sweep", Tier::full), big);
    const std::vector<double> expected = {57.30, 11.63, 6.07, 4.31, 3.49};
    REQUIRE(plan.size() == expected.size());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto& sim = plan[i].config.simulation;
        const auto modes = build_mode_set(sim.wire, sim.truncation, sim.directionality);
        CHECK(std::abs(modes.realized_cutoff() - expected[i]) <= 0.01);
    }
}

TEST_CASE("full tier spot checks") {
    RunOptions big;
    big.max_dimension = 1000000;
    const auto cut = plan_preset(make_preset("cutoff-sweep", Tier::full), big);
    std::size_t references = 0;
    for (const auto& v : cut) {
        if (v.reference) {
            ++references;
            CHECK(std::get<ModeCount>(v.config.simulation.truncation).count == 1601);
        }
    }
    CHECK(references == 2);

    const auto pair = plan_preset(make_preset("unidirectional", Tier::full), big);
    REQUIRE(pair.size() == 2);
    const auto& bi = pair[0].config.simulation;
    const auto& nn = pair[1].config.simulation;
    const auto mb = build_mode_set(bi.wire, bi.truncation, bi.directionality);
    const auto mn = build_mode_set(nn.wire, nn.truncation, nn.directionality);
    CHECK(mb.modes.back().m_x == mn.modes.back().m_x);
    CHECK(mn.modes.front().m_x == 0);
    CHECK(bi.snapshots == std::vector<double>{500.0, 1000.0, 2000.0, 5000.0});

    const auto weights = plan_preset(make_preset("photon-weights", Tier::desk), big);
    for (const auto& v : weights) CHECK(v.config.simulation.wire.mean_exciton_energy == 2.2);
}

TEST_CASE("resource guard") {
    RunOptions opt;
    CHECK_THROWS_AS(plan_preset(make_preset("size-sweep", Tier::full), opt), ResourceError);
    CHECK_NOTHROW(plan_preset(make_preset("size-sweep", Tier::desk), opt));
}

TEST_CASE("command-line values win over file values") {
    RunOptions opt;
    opt.seed = 99;
    opt.realizations = 3;
    opt.max_dimension = 1000000;
    const auto plan = plan_preset(make_preset("det-trajectories", Tier::desk), opt);
    for (const auto& v : plan) {
        CHECK(v.config.ensemble.seed == 99);
        CHECK(v.config.ensemble.realizations == 3);
    }
}
