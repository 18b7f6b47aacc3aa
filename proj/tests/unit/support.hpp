#pragma once

#include "polwire/ensemble.hpp"

namespace polwire::testing {

inline SimulationConfig ordered_config(std::size_t n_molecules, std::size_t n_modes, double rabi = 0.1,
                                       double sigma_x = 60.0, double t_end = 5000.0, double dt = 10.0) {
    SimulationConfig c;
    c.wire.n_molecules = n_molecules;
    c.truncation = ModeCount{n_modes};
    c.coupling.rabi_splitting = rabi;
    c.packet.sigma_x = sigma_x;
    c.time = TimeGrid{t_end, dt};
    return c;
}

} // namespace polwire::testing
