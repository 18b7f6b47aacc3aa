#pragma once

#include "polwire/disorder.hpp"
#include "polwire/grid.hpp"
#include "polwire/spectrum.hpp"
#include "polwire/wavepacket.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace polwire {

/// P_mol = sum_n |c_n|^2 over the molecular block.
double molecular_population(const StateVector& psi, std::size_t n_molecules);

/// d = sqrt(<x^2>) / a with <x^2> = sum_n |c_n|^2 (x_n - x0)^2 / P_mol.
/// Throws UndefinedObservableError when P_mol <= 1e-12.
double wavepacket_width(const StateVector& psi, const MolecularRealization& realization, double x0,
                        double spacing);

/// Same as wavepacket_width, from site probabilities |c_n|^2.
double wavepacket_width(std::span<const double> site_probabilities, std::span<const double> positions,
                        double x0, double spacing);

/// Relative photon mode weights, normalized so the dominant mode has weight 1.
struct PhotonWeights {
    std::vector<double> weights;      // normalized, in mode-set order
    std::vector<double> raw;          // before normalization
    std::size_t argmax = 0;           // first mode (in mode order) attaining the maximum
    std::vector<std::size_t> ties;    // every mode within 1e-12 relative of the maximum
    bool degenerate = false;          // all raw weights are zero; weights left at zero
};

PhotonWeights normalize_photon_weights(std::vector<double> raw);

/// W(q) = sum_t |<q|psi(t)>|^2 / W_max over the sampled states.
PhotonWeights photon_weight_trajectory(std::span<const StateVector> states, std::size_t n_molecules);

/// Same, from a (basis x time) probability matrix as produced by Propagator.
PhotonWeights photon_weight_trajectory(const Eigen::MatrixXd& probabilities, std::size_t n_molecules);

/// Infinite-time average W(q) ~ sum_clusters |<q|P_cluster|psi0>|^2, where
/// eigenvalues closer than `cluster_tolerance` (eV, chained) share one projector.
PhotonWeights infinite_time_photon_weights(const Spectrum& spectrum, const StateVector& psi0,
                                           double cluster_tolerance = 1e-10);

/// Lower-polariton molecular fraction 1/2 (1 + delta / sqrt(delta^2 + Omega_R^2)),
/// delta = hbar w_q - E_M.
double hopfield_molecular_fraction(double mode_energy, double e_m, double omega_r);

/// Unnormalized infinite-system weight Pi (1 - Pi) |phi(q)|^2 where
/// |phi(q)|^2 = exp(-2 sigma_x^2 (q - qbar0)^2) is the momentum distribution of
/// the Gaussian prepared by gaussian_initial_state.
double analytic_photon_weight(double q, double mode_energy, const WavepacketSpec& spec, double e_m,
                              double omega_r);

/// analytic_photon_weight over a mode set, normalized to max 1.
PhotonWeights analytic_photon_weights(const CavityModeSet& modes, const WavepacketSpec& spec, double e_m,
                                      double omega_r);

/// (1/N) sum_i |d_i - ref_i| / ref_i.
double truncation_error(std::span<const double> d, std::span<const double> d_ref);

struct ErrorEstimate {
    double error = 0.0;
    double uncertainty = 0.0;
};

/// First-order propagation of 2-sigma inputs through truncation_error, time
/// points treated as independent. The derivative of |x| is taken as sign(x),
/// so points where mean == reference contribute nothing.
ErrorEstimate propagate_error_uncertainty(std::span<const double> d_mean, std::span<const double> d_std,
                                          std::span<const double> ref_mean, std::span<const double> ref_std);

/// Sum of site probabilities in consecutive bins of `bin_size` sites.
std::vector<double> bin_site_probabilities(std::span<const double> site_probabilities, std::size_t bin_size);

/// Total probability on sites with x_n > threshold.
double probability_beyond(std::span<const double> site_probabilities, std::span<const double> positions,
                          double threshold);

// Signal analysis helpers used by presets and checks.

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Centred moving average over `window` samples; the output is shorter by window - 1.
std::vector<double> running_mean(std::span<const double> y, std::size_t window);

/// Period of the strongest Fourier component of y(t) - mean, searched between
/// twice the sampling step and half the record length. Uniform sampling required.
double dominant_period(std::span<const double> times, std::span<const double> y);

} // namespace polwire
