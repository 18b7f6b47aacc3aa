#include "polwire/wavepacket.hpp"

#include "polwire/error.hpp"

#include <cmath>

namespace polwire {

StateVector gaussian_initial_state(const WireConfig& wire, const MolecularRealization& realization,
                                   std::size_t n_modes, const WavepacketSpec& spec) {
    if (!(spec.sigma_x > 0.0)) throw ConfigError("wavepacket.sigma_x_nm must be > 0");
    const double x0 = spec.center_for(wire);
    if (!(x0 >= 0.0 && x0 <= wire.length()))
        throw ConfigError("wavepacket.center_nm must lie within [0, L_x]");
    if (realization.size() != wire.n_molecules)
        throw ConfigError("realization size does not match wire.n_molecules");

    const std::size_t nm = realization.size();
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(nm + n_modes));
    const double inv_four_var = 1.0 / (4.0 * spec.sigma_x * spec.sigma_x);
    for (std::size_t n = 0; n < nm; ++n) {
        const double dx = realization.positions[n] - x0;
        const double envelope = std::exp(-dx * dx * inv_four_var);
        const double phase = spec.mean_momentum * realization.positions[n];
        psi[static_cast<Eigen::Index>(n)] = envelope * cplx(std::cos(phase), std::sin(phase));
    }
    const double norm = psi.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw DomainError("gaussian_initial_state: envelope vanishes on every site (center outside the molecules?)");
    psi /= norm;
    return psi;
}

bool envelope_under_resolved(const WireConfig& wire, const WavepacketSpec& spec) {
    return spec.sigma_x < wire.spacing;
}

} // namespace polwire
