#pragma once

#include "polwire/disorder.hpp"
#include "polwire/grid.hpp"
#include "polwire/hamiltonian.hpp"
#include "polwire/observables.hpp"
#include "polwire/spectrum.hpp"
#include "polwire/wavepacket.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polwire {

/// Uniform grid t_k = k dt, k = 0..t_end/dt.
struct TimeGrid {
    double t_end = 5000.0;   // fs
    double dt = 10.0;        // fs

    std::size_t size() const;
    std::vector<double> times() const;
    /// Index of grid point `t`; throws ConfigError if `t` is not on the grid.
    std::size_t index_of(double t) const;
};

/// Everything needed to simulate one realization.
struct SimulationConfig {
    WireConfig wire;
    DisorderSpec disorder;
    CouplingSpec coupling;
    WavepacketSpec packet;
    Truncation truncation = ModeCount{101};
    Directionality directionality = Directionality::bidirectional;
    TimeGrid time;
    std::vector<double> snapshots;   // fs, on the time grid; site probabilities are binned there
    std::size_t bin_size = 50;       // sites per bin for snapshot output

    /// Throws ConfigError listing every violated constraint.
    void validate() const;
    std::size_t dimension() const;
};

/// Canonical JSON text of the configuration (sorted keys, fixed number format).
std::string canonical_json(const SimulationConfig& config);
std::string config_hash(const SimulationConfig& config);

/// One assembled and diagonalized realization with its initial state.
struct PreparedSystem {
    CavityModeSet modes;
    MolecularRealization realization;
    HamiltonianMatrix hamiltonian;
    Spectrum spectrum;
    StateVector psi0;
    double x0 = 0.0;
};

PreparedSystem prepare_system(const SimulationConfig& config, std::uint64_t seed,
                              const std::optional<std::string>& cache_dir = std::nullopt);

/// Observables of one realization on the configured time grid.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> width;        // d(t)
    std::vector<double> p_mol;        // P_mol(t)
    std::vector<double> right_tail;   // probability on sites with x_n > x0 + sigma_x
    PhotonWeights photon_weights;     // sum over the grid, normalized per realization
    std::vector<std::vector<double>> snapshot_bins;   // one vector of bins per snapshot
    std::uint64_t seed = 0;
    std::string config_hash;
};

TrajectoryRecord record_trajectory(const SimulationConfig& config, const PreparedSystem& system,
                                   std::uint64_t seed);

TrajectoryRecord simulate_realization(const SimulationConfig& config, std::uint64_t seed,
                                      const std::optional<std::string>& cache_dir = std::nullopt);

/// Pointwise mean and (n-1)-denominator standard deviation.
struct Moments {
    std::vector<double> mean;
    std::vector<double> std;
};

/// Aggregates equal-length samples in the given order with compensated sums.
/// A single sample yields std = 0.
Moments aggregate(std::span<const std::vector<double>> samples);

struct FailedRealization {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct EnsembleResult {
    std::size_t n_requested = 0;
    std::size_t n_realizations = 0;   // successful
    std::vector<double> times;
    Moments width;
    Moments p_mol;
    Moments right_tail;
    Moments photon_weights;           // per mode
    std::vector<double> snapshot_times;
    std::vector<Moments> snapshot_bins;
    CavityModeSet modes;
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;
    std::vector<FailedRealization> failed;
    bool std_defined = false;         // false for a single realization (std reported as 0)
    std::string config_hash;
};

struct EnsembleOptions {
    std::size_t workers = 1;
    std::optional<std::string> cache_dir;
    double max_failure_fraction = 0.1;
    /// Called on the worker thread for realization `index` after diagonalization.
    /// Must only touch state owned by that index.
    std::function<void(std::size_t index, const PreparedSystem&)> on_prepared;
};

/// Runs realizations i = 0..n-1 with seeds derive_seed(master_seed, i).
/// Realizations run concurrently on `workers` threads; aggregation happens in
/// index order afterwards, so the result does not depend on completion order.
EnsembleResult run_ensemble(const SimulationConfig& config, std::size_t n_realizations,
                            std::uint64_t master_seed, const EnsembleOptions& options = {});

/// truncation_error of the mean widths plus its propagated 2-sigma uncertainty.
ErrorEstimate compare_to_reference(const EnsembleResult& result, const EnsembleResult& reference);

} // namespace polwire
