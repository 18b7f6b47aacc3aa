#include "polwire/grid.hpp"

#include "polwire/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polwire {

void WireConfig::validate() const {
    std::vector<std::string> errors;
    if (n_molecules < 1) errors.emplace_back("wire.n_molecules must be >= 1");
    if (!(spacing > 0.0)) errors.emplace_back("wire.spacing_nm must be > 0");
    if (!(l_y > 0.0)) errors.emplace_back("wire.l_y_nm must be > 0");
    if (!(l_z > 0.0)) errors.emplace_back("wire.l_z_nm must be > 0");
    if (!(epsilon >= 1.0)) errors.emplace_back("wire.epsilon must be >= 1");
    if (!(mean_exciton_energy > 0.0)) errors.emplace_back("wire.exciton_energy_eV must be > 0");
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::string_view to_string(Directionality d) {
    return d == Directionality::bidirectional ? "bidirectional" : "nonnegative";
}

Directionality directionality_from_string(std::string_view s) {
    if (s == "bidirectional") return Directionality::bidirectional;
    if (s == "nonnegative" || s == "nonnegative-only" || s == "unidirectional")
        return Directionality::nonnegative_only;
    throw ConfigError("unknown directionality '" + std::string(s) +
                      "' (expected bidirectional or nonnegative)");
}

double CavityModeSet::spacing() const { return 2.0 * constants::pi / wire_length; }

double CavityModeSet::realized_cutoff() const {
    double best = 0.0;
    for (const auto& m : modes) best = std::max(best, m.energy);
    return best;
}

std::size_t CavityModeSet::nearest_index(double q) const {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const double dist = std::abs(modes[j].q - q);
        if (dist < best_dist) {
            best_dist = dist;
            best = j;
        }
    }
    return best;
}

double transverse_wavevector(double l_y, double l_z) {
    if (!(l_y > 0.0) || !(l_z > 0.0))
        throw DomainError("transverse_wavevector: lengths must be positive");
    return constants::pi * std::sqrt(1.0 / (l_y * l_y) + 1.0 / (l_z * l_z));
}

double mode_energy(double q, double q0, double epsilon) {
    if (!(epsilon >= 1.0)) throw DomainError("mode_energy: epsilon must be >= 1");
    if (!(q0 > 0.0)) throw DomainError("mode_energy: q0 must be positive");
    return constants::hbar * constants::c / std::sqrt(epsilon) * std::sqrt(q0 * q0 + q * q);
}

double mode_wavevector(std::int64_t m_x, double wire_length) {
    return 2.0 * constants::pi * static_cast<double>(m_x) / wire_length;
}

double wavevector_at_energy(double energy, double q0, double epsilon) {
    const double k = energy * std::sqrt(epsilon) / (constants::hbar * constants::c);
    if (k < q0) throw DomainError("wavevector_at_energy: energy below the cavity band bottom");
    return std::sqrt(k * k - q0 * q0);
}

CavityModeSet build_mode_set(const WireConfig& wire, const Truncation& truncation,
                             Directionality directionality) {
    wire.validate();
    CavityModeSet set;
    set.q0 = transverse_wavevector(wire.l_y, wire.l_z);
    set.wire_length = wire.length();
    set.directionality = directionality;

    std::int64_t m_max = 0;
    if (const auto* count = std::get_if<ModeCount>(&truncation)) {
        if (count->count == 0) throw ConfigError("mode count must be >= 1");
        if (directionality == Directionality::bidirectional) {
            if (count->count % 2 == 0) throw ConfigError("mode count must be odd for bidirectional mode sets");
            m_max = static_cast<std::int64_t>((count->count - 1) / 2);
        } else {
            m_max = static_cast<std::int64_t>(count->count - 1);
        }
    } else {
        const double cutoff = std::get<CutoffEnergy>(truncation).energy;
        const double bottom = mode_energy(0.0, set.q0, wire.epsilon);
        if (!(cutoff >= bottom))
            throw ConfigError("cutoff energy " + std::to_string(cutoff) +
                              " eV is below the minimum cavity energy " + std::to_string(bottom) +
                              " eV; the mode set would be empty");
        // Energies increase strictly with |m_x|, so walk outward until the cutoff is passed.
        while (mode_energy(mode_wavevector(m_max + 1, set.wire_length), set.q0, wire.epsilon) <= cutoff)
            ++m_max;
    }

    const std::int64_t m_min = directionality == Directionality::bidirectional ? -m_max : 0;
    set.modes.reserve(static_cast<std::size_t>(m_max - m_min + 1));
    for (std::int64_t m = m_min; m <= m_max; ++m) {
        // Evaluate at |m| so that +-m energies are bit-identical.
        const double q_abs = mode_wavevector(m < 0 ? -m : m, set.wire_length);
        set.modes.push_back({m, m < 0 ? -q_abs : q_abs, mode_energy(q_abs, set.q0, wire.epsilon)});
    }
    return set;
}

} // namespace polwire
