#include "polwire/disorder.hpp"

#include "polwire/error.hpp"

#include <cmath>

namespace polwire {

double NormalSampler::uniform_open() {
    // 53 random mantissa bits, shifted to (0, 1] so that log() is finite.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalSampler::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * constants::pi * uniform_open();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t realization_index) {
    return splitmix64(master_seed ^ splitmix64(realization_index));
}

MolecularRealization sample_realization(const WireConfig& wire, const DisorderSpec& spec,
                                        std::uint64_t seed) {
    wire.validate();
    if (!(spec.sigma_energy >= 0.0) || !(spec.sigma_position >= 0.0))
        throw ConfigError("disorder standard deviations must be >= 0");

    const std::size_t n = wire.n_molecules;
    MolecularRealization r;
    r.seed = seed;
    r.energies.resize(n);
    r.positions.resize(n);

    NormalSampler normal(seed);
    for (std::size_t i = 0; i < n; ++i) {
        double e = wire.mean_exciton_energy + spec.sigma_energy * normal();
        while (!(e > 0.0)) e = wire.mean_exciton_energy + spec.sigma_energy * normal();
        r.energies[i] = e;
    }
    for (std::size_t i = 0; i < n; ++i)
        r.positions[i] = static_cast<double>(i) * wire.spacing + spec.sigma_position * normal();
    return r;
}

} // namespace polwire
