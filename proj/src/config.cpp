#include "polwire/config.hpp"

#include "polwire/error.hpp"

#include <toml.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace polwire {

namespace {

using Violations = std::vector<std::string>;

constexpr std::array<std::string_view, 12> kUnitSuffixes = {
    "per_nm", "per_um", "meV", "eV", "nm", "um", "mm", "fs", "ps", "ns", "m", "s"};

std::string describe(const toml::node& node) {
    switch (node.type()) {
    case toml::node_type::string: return "string";
    case toml::node_type::integer: return "integer";
    case toml::node_type::floating_point: return "float";
    case toml::node_type::boolean: return "boolean";
    case toml::node_type::array: return "array";
    case toml::node_type::table: return "table";
    default: return "value";
    }
}

std::optional<double> as_real(const toml::node& node) {
    if (auto v = node.value_exact<double>()) return *v;
    if (auto v = node.value_exact<std::int64_t>()) return static_cast<double>(*v);
    return std::nullopt;
}

struct Field {
    std::string_view section;
    std::string_view key;
    std::function<void(const toml::node&, RunConfig&, const std::string&, Violations&)> apply;
};

template <class Setter>
auto real_setter(Setter set) {
    return [set](const toml::node& node, RunConfig& c, const std::string& name, Violations& v) {
        if (auto x = as_real(node))
            set(c, *x);
        else
            v.push_back(name + " must be a number, got " + describe(node));
    };
}

template <class Setter>
auto count_setter(Setter set) {
    return [set](const toml::node& node, RunConfig& c, const std::string& name, Violations& v) {
        auto x = node.value_exact<std::int64_t>();
        if (!x)
            v.push_back(name + " must be an integer, got " + describe(node));
        else if (*x < 0)
            v.push_back(name + " must be >= 0");
        else
            set(c, static_cast<std::uint64_t>(*x));
    };
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"wire", "n_molecules", count_setter([](RunConfig& c, std::uint64_t x) { c.simulation.wire.n_molecules = x; })},
        {"wire", "spacing_nm", real_setter([](RunConfig& c, double x) { c.simulation.wire.spacing = x; })},
        {"wire", "l_y_nm", real_setter([](RunConfig& c, double x) { c.simulation.wire.l_y = x; })},
        {"wire", "l_z_nm", real_setter([](RunConfig& c, double x) { c.simulation.wire.l_z = x; })},
        {"wire", "epsilon", real_setter([](RunConfig& c, double x) { c.simulation.wire.epsilon = x; })},
        {"wire", "exciton_energy_eV",
         real_setter([](RunConfig& c, double x) { c.simulation.wire.mean_exciton_energy = x; })},
        {"disorder", "sigma_energy_eV",
         real_setter([](RunConfig& c, double x) { c.simulation.disorder.sigma_energy = x; })},
        {"disorder", "sigma_position_nm",
         real_setter([](RunConfig& c, double x) { c.simulation.disorder.sigma_position = x; })},
        {"coupling", "rabi_splitting_eV",
         real_setter([](RunConfig& c, double x) { c.simulation.coupling.rabi_splitting = x; })},
        {"wavepacket", "sigma_x_nm", real_setter([](RunConfig& c, double x) { c.simulation.packet.sigma_x = x; })},
        {"wavepacket", "mean_momentum_per_nm",
         real_setter([](RunConfig& c, double x) { c.simulation.packet.mean_momentum = x; })},
        {"wavepacket", "center_nm", real_setter([](RunConfig& c, double x) { c.simulation.packet.center = x; })},
        {"modes", "count", count_setter([](RunConfig& c, std::uint64_t x) { c.simulation.truncation = ModeCount{x}; })},
        {"modes", "cutoff_eV", real_setter([](RunConfig& c, double x) { c.simulation.truncation = CutoffEnergy{x}; })},
        {"modes", "directionality",
         [](const toml::node& node, RunConfig& c, const std::string& name, Violations& v) {
             auto s = node.value_exact<std::string>();
             if (!s) {
                 v.push_back(name + " must be a string, got " + describe(node));
                 return;
             }
             try {
                 c.simulation.directionality = directionality_from_string(*s);
             } catch (const ConfigError& e) {
                 v.push_back(name + ": " + e.what());
             }
         }},
        {"time", "t_end_fs", real_setter([](RunConfig& c, double x) { c.simulation.time.t_end = x; })},
        {"time", "dt_fs", real_setter([](RunConfig& c, double x) { c.simulation.time.dt = x; })},
        {"time", "snapshots_fs",
         [](const toml::node& node, RunConfig& c, const std::string& name, Violations& v) {
             const auto* arr = node.as_array();
             if (!arr) {
                 v.push_back(name + " must be an array of numbers, got " + describe(node));
                 return;
             }
             std::vector<double> out;
             for (const auto& el : *arr) {
                 if (auto x = as_real(el))
                     out.push_back(*x);
                 else
                     v.push_back(name + " entries must be numbers, got " + describe(el));
             }
             c.simulation.snapshots = std::move(out);
         }},
        {"ensemble", "realizations", count_setter([](RunConfig& c, std::uint64_t x) { c.ensemble.realizations = x; })},
        {"ensemble", "seed", count_setter([](RunConfig& c, std::uint64_t x) { c.ensemble.seed = x; })},
        {"ensemble", "workers", count_setter([](RunConfig& c, std::uint64_t x) { c.ensemble.workers = x; })},
        {"output", "dir",
         [](const toml::node& node, RunConfig& c, const std::string& name, Violations& v) {
             if (auto s = node.value_exact<std::string>())
                 c.output_dir = *s;
             else
                 v.push_back(name + " must be a string, got " + describe(node));
         }},
        {"output", "bin_size", count_setter([](RunConfig& c, std::uint64_t x) { c.simulation.bin_size = x; })},
    };
    return table;
}

std::string_view unit_suffix(std::string_view key) {
    for (auto unit : kUnitSuffixes) {
        if (key.size() > unit.size() + 1 && key.ends_with(unit) && key[key.size() - unit.size() - 1] == '_')
            return unit;
    }
    return {};
}

/// Explains an unrecognised key, pointing at a known key that differs only by unit.
std::string unknown_key_message(std::string_view section, std::string_view key) {
    const std::string name = std::string(section) + "." + std::string(key);
    const auto given_unit = unit_suffix(key);
    const auto given_base = key.substr(0, key.size() - (given_unit.empty() ? 0 : given_unit.size() + 1));
    for (const auto& f : fields()) {
        if (f.section != section) continue;
        const auto unit = unit_suffix(f.key);
        const auto base = f.key.substr(0, f.key.size() - (unit.empty() ? 0 : unit.size() + 1));
        if (base == given_base && (unit != given_unit))
            return "unit-suffix mismatch for " + name + ": expected " + std::string(section) + "." +
                   std::string(f.key);
    }
    return "unknown key " + name;
}

bool known_section(std::string_view s) {
    for (const auto& f : fields())
        if (f.section == s) return true;
    return false;
}

std::string format_double(double x) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    std::string s(buf.data(), end);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string quoted(const std::string& text) {
    std::ostringstream out;
    out << toml::value<std::string>(text);
    return out.str();
}

} // namespace

void RunConfig::validate() const {
    Violations v;
    try {
        simulation.validate();
    } catch (const ConfigError& e) {
        v = e.violations();
    }
    if (ensemble.realizations < 1) v.emplace_back("ensemble.realizations must be >= 1");
    if (ensemble.workers && *ensemble.workers < 1) v.emplace_back("ensemble.workers must be >= 1");
    if (output_dir.empty()) v.emplace_back("output.dir must not be empty");
    if (!v.empty()) throw ConfigError(std::move(v));
}

struct ConfigDocument::Impl {
    toml::table table;
    std::string source;
};

ConfigDocument::ConfigDocument() : impl_(std::make_unique<Impl>()) {}
ConfigDocument::~ConfigDocument() = default;
ConfigDocument::ConfigDocument(const ConfigDocument& other) : impl_(std::make_unique<Impl>(*other.impl_)) {}
ConfigDocument& ConfigDocument::operator=(const ConfigDocument& other) {
    if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
    return *this;
}
ConfigDocument::ConfigDocument(ConfigDocument&&) noexcept = default;
ConfigDocument& ConfigDocument::operator=(ConfigDocument&&) noexcept = default;

ConfigDocument ConfigDocument::from_text(std::string_view text, std::string_view source) {
    ConfigDocument doc;
    doc.impl_->source = std::string(source);
    try {
        doc.impl_->table = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
            << e.description();
        throw ConfigError(msg.str());
    }
    return doc;
}

ConfigDocument ConfigDocument::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read configuration file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return from_text(text.str(), path.string());
}

void ConfigDocument::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override must have the form section.key=value: " + std::string(assignment));
    const std::string path(assignment.substr(0, eq));
    const std::string value(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size() || path.find('.', dot + 1) != std::string::npos)
        throw ConfigError("override key must be section.key: " + path);
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);

    toml::table parsed;
    try {
        parsed = toml::parse("v = " + value);
    } catch (const toml::parse_error&) {
        parsed.insert_or_assign("v", value);
    }
    auto* node = parsed.get("v");

    auto& root = impl_->table;
    if (!root.contains(section)) root.insert(section, toml::table{});
    auto* tbl = root.get(section)->as_table();
    if (!tbl) throw ConfigError("override target " + section + " is not a table");
    tbl->insert_or_assign(key, std::move(*node));
}

RunConfig ConfigDocument::resolve() const {
    RunConfig config;
    Violations v;
    const auto& root = impl_->table;
    bool has_count = false, has_cutoff = false;
    for (const auto& [section_key, section_node] : root) {
        const std::string section(section_key.str());
        const auto* tbl = section_node.as_table();
        if (!tbl) {
            v.push_back(known_section(section) ? section + " must be a table" : "unknown key " + section);
            continue;
        }
        if (!known_section(section)) {
            v.push_back("unknown section [" + section + "]");
            continue;
        }
        for (const auto& [key_node, value] : *tbl) {
            const std::string key(key_node.str());
            const std::string name = section + "." + key;
            const Field* field = nullptr;
            for (const auto& f : fields())
                if (f.section == section && f.key == key) field = &f;
            if (!field) {
                v.push_back(unknown_key_message(section, key));
                continue;
            }
            if (name == "modes.count") has_count = true;
            if (name == "modes.cutoff_eV") has_cutoff = true;
            field->apply(value, config, name, v);
        }
    }
    if (has_count && has_cutoff) v.emplace_back("modes.count and modes.cutoff_eV are mutually exclusive");
    try {
        config.validate();
    } catch (const ConfigError& e) {
        v.insert(v.end(), e.violations().begin(), e.violations().end());
    }
    if (!v.empty()) throw ConfigError(std::move(v));
    return config;
}

std::string ConfigDocument::to_toml() const {
    std::ostringstream out;
    out << impl_->table;
    return out.str();
}

RunConfig parse_config(const std::filesystem::path& path) { return ConfigDocument::from_file(path).resolve(); }

RunConfig parse_config_text(std::string_view text) { return ConfigDocument::from_text(text).resolve(); }

std::string to_toml(const RunConfig& c) {
    const auto& s = c.simulation;
    std::ostringstream out;
    out << "[wire]\n"
        << "n_molecules = " << s.wire.n_molecules << "\n"
        << "spacing_nm = " << format_double(s.wire.spacing) << "\n"
        << "l_y_nm = " << format_double(s.wire.l_y) << "\n"
        << "l_z_nm = " << format_double(s.wire.l_z) << "\n"
        << "epsilon = " << format_double(s.wire.epsilon) << "\n"
        << "exciton_energy_eV = " << format_double(s.wire.mean_exciton_energy) << "\n\n"
        << "[disorder]\n"
        << "sigma_energy_eV = " << format_double(s.disorder.sigma_energy) << "\n"
        << "sigma_position_nm = " << format_double(s.disorder.sigma_position) << "\n\n"
        << "[coupling]\n"
        << "rabi_splitting_eV = " << format_double(s.coupling.rabi_splitting) << "\n\n"
        << "[wavepacket]\n"
        << "sigma_x_nm = " << format_double(s.packet.sigma_x) << "\n"
        << "mean_momentum_per_nm = " << format_double(s.packet.mean_momentum) << "\n";
    if (s.packet.center) out << "center_nm = " << format_double(*s.packet.center) << "\n";
    out << "\n[modes]\n";
    if (const auto* n = std::get_if<ModeCount>(&s.truncation))
        out << "count = " << n->count << "\n";
    else
        out << "cutoff_eV = " << format_double(std::get<CutoffEnergy>(s.truncation).energy) << "\n";
    out << "directionality = \"" << to_string(s.directionality) << "\"\n\n"
        << "[time]\n"
        << "t_end_fs = " << format_double(s.time.t_end) << "\n"
        << "dt_fs = " << format_double(s.time.dt) << "\n"
        << "snapshots_fs = [";
    for (std::size_t i = 0; i < s.snapshots.size(); ++i) out << (i ? ", " : "") << format_double(s.snapshots[i]);
    out << "]\n\n"
        << "[ensemble]\n"
        << "realizations = " << c.ensemble.realizations << "\n"
        << "seed = " << c.ensemble.seed << "\n";
    if (c.ensemble.workers) out << "workers = " << *c.ensemble.workers << "\n";
    out << "\n[output]\n"
        << "dir = " << quoted(c.output_dir) << "\n"
        << "bin_size = " << s.bin_size << "\n";
    return out.str();
}

} // namespace polwire
