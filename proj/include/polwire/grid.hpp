#pragma once

// Physical constants, wire geometry and the truncated cavity mode grid.
// Units are eV, nm and fs throughout.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace polwire {

namespace constants {
inline constexpr double hbar = 0.6582119569;   // eV fs
inline constexpr double c = 299.792458;        // nm / fs
inline constexpr double pi = 3.141592653589793238462643383279502884;
} // namespace constants

struct WireConfig {
    std::size_t n_molecules = 5000;
    double spacing = 10.0;              // nm, mean intermolecular distance a
    double l_y = 200.0;                 // nm
    double l_z = 400.0;                 // nm
    double epsilon = 3.0;               // relative permittivity
    double mean_exciton_energy = 2.0;   // eV

    /// L_x = N_M a.
    double length() const { return static_cast<double>(n_molecules) * spacing; }

    /// Throws ConfigError listing every violated constraint.
    void validate() const;
};

enum class Directionality { bidirectional, nonnegative_only };

std::string_view to_string(Directionality d);
Directionality directionality_from_string(std::string_view s);

/// Truncation by number of modes. For bidirectional sets the count must be
/// odd (m_x = -m_max..m_max); for nonnegative-only sets m_x = 0..count-1.
struct ModeCount {
    std::size_t count;
};

/// Truncation by energy: keep every mode with energy <= cutoff.
struct CutoffEnergy {
    double energy;   // eV
};

using Truncation = std::variant<ModeCount, CutoffEnergy>;

struct CavityMode {
    std::int64_t m_x;
    double q;        // nm^-1
    double energy;   // eV
};

struct CavityModeSet {
    std::vector<CavityMode> modes;   // ascending m_x
    double q0 = 0.0;
    double wire_length = 0.0;
    Directionality directionality = Directionality::bidirectional;

    std::size_t size() const { return modes.size(); }
    /// Grid spacing 2 pi / L_x.
    double spacing() const;
    /// Largest retained mode energy.
    double realized_cutoff() const;
    /// Index of the retained mode whose q is closest to `q` (first on ties).
    std::size_t nearest_index(double q) const;
};

/// q0 for the lowest transverse band (n_y = n_z = 1).
double transverse_wavevector(double l_y, double l_z);

/// Photon energy hbar c / sqrt(eps) * sqrt(q0^2 + q^2).
double mode_energy(double q, double q0, double epsilon);

/// Wave vector of the mode with index m_x on a ring of length `wire_length`.
double mode_wavevector(std::int64_t m_x, double wire_length);

/// Positive q at which the photon dispersion reaches `energy` (inverse of
/// mode_energy on q >= 0). Throws DomainError below the band bottom.
double wavevector_at_energy(double energy, double q0, double epsilon);

CavityModeSet build_mode_set(const WireConfig& wire, const Truncation& truncation,
                             Directionality directionality);

} // namespace polwire
