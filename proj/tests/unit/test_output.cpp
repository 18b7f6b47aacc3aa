#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polwire/error.hpp"
#include "polwire/hash.hpp"
#include "polwire/output.hpp"
#include "polwire/presets.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

using namespace polwire;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "polwire_test_output" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double parse_back(const std::string& text) {
    const auto t = parse_csv("x\n" + text + "\n");
    return t.numeric_column("x").at(0);
}

} // namespace

TEST_CASE("numbers round trip bit-exactly") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20000; ++i) {
        const double x = std::bit_cast<double>(rng());
        if (!std::isfinite(x)) continue;
        CHECK(std::bit_cast<std::uint64_t>(parse_back(format_number(x))) == std::bit_cast<std::uint64_t>(x));
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(6.0) == "6");
    CHECK(format_number(-2.5e-20) == "-2.4999999999999999e-20");
}

TEST_CASE("CSV quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");

    const std::string text = csv_text({"label", "value"}, {{"a,b", "1"}, {"multi\nline \"q\"", "2"}});
    CHECK(text.find('\r') == std::string::npos);
    const auto t = parse_csv(text);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == "a,b");
    CHECK(t.rows[1][0] == "multi\nline \"q\"");
    CHECK(t.numeric_column("value") == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(t.column("missing"), IntegrityError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), IntegrityError);
    CHECK_THROWS_AS(parse_csv("a\n\"open\n"), IntegrityError);
    CHECK_THROWS_AS(csv_text({"a"}, {{"1", "2"}}), IntegrityError);
}

TEST_CASE("trajectory layout") {
    SUBCASE("empty series gives a header-only file") {
        const std::string text = trajectory_csv({}, Moments{}, Moments{});
        CHECK(text == std::string(kTrajectoryHeader) + "\n");
        CHECK(parse_csv(text).rows.empty());
    }
    SUBCASE("values survive a write and read") {
        const std::vector<double> t = {0.0, 10.0};
        const Moments w{{6.0, 6.123456789012345}, {0.0, 0.25}};
        const Moments p{{1.0, 0.7}, {0.0, 1e-17}};
        const auto dir = scratch("trajectory");
        atomic_write(dir / "trajectory.csv", trajectory_csv(t, w, p));
        const auto back = read_csv(dir / "trajectory.csv");
        CHECK(back.numeric_column("d_mean") == w.mean);
        CHECK(back.numeric_column("pmol_std") == p.std);
        CHECK(back.numeric_column("time_fs") == t);
    }
}

TEST_CASE("atomic writes leave no temporaries") {
    const auto dir = scratch("atomic");
    atomic_write(dir / "sub" / "a.txt", "first");
    atomic_write(dir / "sub" / "a.txt", "second");
    CHECK(slurp(dir / "sub" / "a.txt") == "second");
    for (const auto& e : fs::recursive_directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("manifest") {
    const auto dir = scratch("manifest");
    atomic_write(dir / "data.csv", "x\n1\n");
    RunManifest m;
    m.run = "unit";
    m.tier = "desk";
    m.variants.push_back(ManifestVariant{});
    m.variants.back().label = "empty-one";
    m.variants.back().empty = true;
    m.variants.back().realized_cutoff = 11.63456;
    m.files["data.csv"] = "";

    write_failed_manifest(dir, m, "interrupted");
    const auto failed = nlohmann::json::parse(slurp(dir / "manifest.failed.json"));
    CHECK(failed["status"] == "failed");
    CHECK(failed["reason"] == "interrupted");

    write_manifest(dir, m);
    CHECK_FALSE(fs::exists(dir / "manifest.failed.json"));
    const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(j["files"]["data.csv"] == sha256_hex(std::string_view("x\n1\n")));
    CHECK(j["variants"][0]["empty"] == true);
    CHECK(j["variants"][0]["realized_cutoff_eV"] == "11.63");
    CHECK(four_significant(57.2968) == "57.3");
}

TEST_CASE("configuration runs are reproducible and self-describing") {
    const auto dir = scratch("run");
    const fs::path cfg = dir / "run.toml";
    atomic_write(cfg, R"(
[wire]
n_molecules = 60
[disorder]
sigma_energy_eV = 0.02
sigma_position_nm = 1.0
[wavepacket]
sigma_x_nm = 40.0
[modes]
count = 7
[time]
t_end_fs = 200.0
dt_fs = 10.0
[ensemble]
realizations = 3
seed = 5
)");
    RunOptions a;
    a.out_dir = (dir / "a").string();
    RunOptions b = a;
    b.out_dir = (dir / "b").string();
    b.workers = 2;
    run_config_file(cfg.string(), a);
    run_config_file(cfg.string(), b);

    // config.toml records the worker count; everything derived from the physics must match.
    for (const char* f : {"trajectory.csv", "photon_weights.json", "config.json"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(dir / "a" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    CHECK(config_hash(parse_config(dir / "a" / "config.toml").simulation) ==
          config_hash(parse_config(dir / "b" / "config.toml").simulation));
    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    const std::string hash = manifest["variants"][0]["config_hash"];
    CHECK(hash == sha256_file((dir / "a" / "config.json").string()));
    CHECK(manifest["files"]["trajectory.csv"] == sha256_file((dir / "a" / "trajectory.csv").string()));
    CHECK(manifest["variants"][0]["realizations_completed"] == 3);

    const auto weights = nlohmann::json::parse(slurp(dir / "a" / "photon_weights.json"));
    CHECK(weights["config_hash"] == hash);
    CHECK(weights["modes"].size() == 7);

    const auto traj = read_csv(dir / "a" / "trajectory.csv");
    CHECK(traj.rows.size() == 21);
    CHECK(traj.numeric_column("d_mean").front() == doctest::Approx(4.0).epsilon(0.05));
}
