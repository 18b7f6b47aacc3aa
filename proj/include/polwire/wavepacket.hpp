#pragma once

#include "polwire/disorder.hpp"
#include "polwire/grid.hpp"
#include "polwire/spectrum.hpp"

#include <optional>

namespace polwire {

/// Gaussian exciton wave packet. `sigma_x` is the rms width of the initial
/// site probability, so an ordered packet has d(0) = sigma_x / a.
struct WavepacketSpec {
    double sigma_x = 60.0;          // nm
    double mean_momentum = 0.0;     // nm^-1, not snapped to the photon grid
    std::optional<double> center;   // nm, defaults to N_M a / 2

    double center_for(const WireConfig& wire) const { return center.value_or(0.5 * wire.length()); }
};

/// Purely molecular initial state
///   c_n ~ exp(-(x_n - x0)^2 / (4 sigma_x^2) + i qbar0 x_n),
/// normalized by the discrete site sum; photon amplitudes are exactly zero.
/// Uses the realization's (possibly disordered) positions in both the
/// envelope and the phase.
StateVector gaussian_initial_state(const WireConfig& wire, const MolecularRealization& realization,
                                   std::size_t n_modes, const WavepacketSpec& spec);

/// True when fewer than a few sites fall under the envelope (sigma_x < a),
/// which makes d(0) unreliable.
bool envelope_under_resolved(const WireConfig& wire, const WavepacketSpec& spec);

} // namespace polwire
