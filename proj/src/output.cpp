#include "polwire/output.hpp"

#include "polwire/error.hpp"
#include "polwire/hash.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace polwire {

namespace {

using nlohmann::ordered_json;

double parse_number(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        // from_chars rejects "inf"/"nan" spellings produced by some writers.
        if (text == "inf") return HUGE_VAL;
        if (text == "-inf") return -HUGE_VAL;
        if (text == "nan") return std::nan("");
        throw IntegrityError("not a number in CSV: '" + text + "'");
    }
    return value;
}

ordered_json failures_json(const std::vector<FailedRealization>& failed) {
    ordered_json arr = ordered_json::array();
    for (const auto& f : failed) arr.push_back({{"index", f.index}, {"seed", f.seed}, {"message", f.message}});
    return arr;
}

} // namespace

std::string format_number(double x) {
    std::array<char, 40> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    if (ec != std::errc()) throw Error("number formatting failed");
    return std::string(buf.data(), end);
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_field(fields[i]);
        }
        out += '\n';
    };
    emit(header);
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw IntegrityError("CSV row width differs from header");
        emit(r);
    }
    return out;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw IntegrityError("CSV has no column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(parse_number(r.at(c)));
    return out;
}

CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
        case '"':
            quoted = true;
            field_started = true;
            break;
        case ',':
            record.push_back(std::move(field));
            field.clear();
            field_started = true;
            break;
        case '\r':
            break;
        case '\n':
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            field_started = false;
            break;
        default:
            field += ch;
            field_started = true;
        }
    }
    if (quoted) throw IntegrityError("CSV ends inside a quoted field");
    if (field_started || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    if (records.empty()) throw IntegrityError("CSV has no header row");
    CsvTable table;
    table.header = std::move(records.front());
    table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    for (const auto& r : table.rows)
        if (r.size() != table.header.size()) throw IntegrityError("CSV row width differs from header");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IntegrityError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_csv(text.str());
}

std::string trajectory_csv(std::span<const double> times, const Moments& width, const Moments& p_mol) {
    std::vector<std::string> header = {"time_fs", "d_mean", "d_std", "pmol_mean", "pmol_std"};
    std::vector<std::vector<std::string>> rows;
    rows.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        rows.push_back({format_number(times[k]), format_number(width.mean.at(k)), format_number(width.std.at(k)),
                        format_number(p_mol.mean.at(k)), format_number(p_mol.std.at(k))});
    }
    return csv_text(header, rows);
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string four_significant(double x) {
    std::array<char, 40> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.4g", x);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string manifest_json(const RunManifest& m) {
    ordered_json j;
    j["run"] = m.run;
    j["tier"] = m.tier;
    j["code_version"] = m.code_version;
    j["rng_algorithm"] = m.rng_algorithm;
    j["master_seed"] = m.master_seed;
    j["workers"] = m.workers;
    j["wall_time_s"] = m.wall_time_s;
    ordered_json variants = ordered_json::array();
    for (const auto& v : m.variants) {
        variants.push_back({{"group", v.group},
                            {"label", v.label},
                            {"config_hash", v.config_hash},
                            {"n_modes", v.n_modes},
                            {"dimension", v.dimension},
                            {"realized_cutoff_eV", four_significant(v.realized_cutoff)},
                            {"realizations_requested", v.n_requested},
                            {"realizations_completed", v.n_realizations},
                            {"std_defined", v.std_defined},
                            {"empty", v.empty},
                            {"failed_realizations", failures_json(v.failed)}});
    }
    j["variants"] = std::move(variants);
    ordered_json files = ordered_json::object();
    for (const auto& [path, digest] : m.files) files[path] = digest;
    j["files"] = std::move(files);
    return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& dir, RunManifest manifest) {
    for (auto& [path, digest] : manifest.files) digest = sha256_file((dir / path).string());
    atomic_write(dir / "manifest.json", manifest_json(manifest));
    std::error_code ignored;
    std::filesystem::remove(dir / "manifest.failed.json", ignored);
}

void write_failed_manifest(const std::filesystem::path& dir, const RunManifest& partial, std::string_view reason) {
    auto j = ordered_json::parse(manifest_json(partial));
    j["status"] = "failed";
    j["reason"] = std::string(reason);
    for (auto& [path, digest] : j["files"].items()) {
        std::error_code ec;
        if (std::filesystem::exists(dir / path, ec)) digest = sha256_file((dir / path).string());
    }
    atomic_write(dir / "manifest.failed.json", j.dump(2) + "\n");
}

std::string photon_weights_json(std::string_view manifest_ref, std::string_view label, std::string_view config_hash,
                                const CavityModeSet& modes, const Moments& weights,
                                const std::optional<std::vector<double>>& analytic,
                                const std::optional<Moments>& infinite_time) {
    if (weights.mean.size() != modes.size()) throw IntegrityError("photon weights do not match the mode set");
    ordered_json j;
    j["manifest"] = std::string(manifest_ref);
    j["label"] = std::string(label);
    j["config_hash"] = std::string(config_hash);
    ordered_json arr = ordered_json::array();
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto& m = modes.modes[k];
        ordered_json row = {{"m_x", m.m_x},
                            {"q", m.q},
                            {"energy_eV", m.energy},
                            {"weight_mean", weights.mean[k]},
                            {"weight_std", weights.std[k]}};
        if (analytic) row["analytic_weight"] = analytic->at(k);
        if (infinite_time) {
            row["infinite_time_mean"] = infinite_time->mean.at(k);
            row["infinite_time_std"] = infinite_time->std.at(k);
        }
        arr.push_back(std::move(row));
    }
    j["modes"] = std::move(arr);
    return j.dump(2) + "\n";
}

} // namespace polwire
