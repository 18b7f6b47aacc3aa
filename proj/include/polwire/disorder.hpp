#pragma once

#include "polwire/grid.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace polwire {

/// Standard deviations of the static disorder. Zero means the ordered system.
struct DisorderSpec {
    double sigma_energy = 0.0;     // eV
    double sigma_position = 0.0;   // nm

    bool ordered() const { return sigma_energy == 0.0 && sigma_position == 0.0; }
};

/// One static-disorder sample: per-site excitation energies and positions.
/// Index order is site order; positions are neither sorted nor wrapped.
struct MolecularRealization {
    std::vector<double> energies;    // eV
    std::vector<double> positions;   // nm
    std::uint64_t seed = 0;

    std::size_t size() const { return energies.size(); }
};

/// Identifier recorded in manifests for the sampling algorithm below.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/box-muller/splitmix64-seed";

/// Standard normal deviates from a 64-bit Mersenne Twister via the
/// Box-Muller transform. Portable across standard libraries, unlike
/// std::normal_distribution.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()();

private:
    double uniform_open();   // (0, 1]

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; a bijection on 64-bit integers.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-realization seed. Injective in `realization_index` for a fixed master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t realization_index);

/// E_n ~ N(hbar w_M, sigma_M^2), x_n ~ N((n-1) a, sigma_a^2). Energies are drawn
/// for all sites first, then positions. Non-positive energies are redrawn.
MolecularRealization sample_realization(const WireConfig& wire, const DisorderSpec& spec,
                                        std::uint64_t seed);

} // namespace polwire
