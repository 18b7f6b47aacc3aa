#pragma once

#include "polwire/hamiltonian.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace polwire {

/// Amplitudes over the (molecules ++ photons) basis of a HamiltonianMatrix.
using StateVector = Eigen::VectorXcd;

/// Full eigendecomposition of one Hamiltonian realization.
struct Spectrum {
    Eigen::VectorXd eigenvalues;     // eV, ascending
    Eigen::MatrixXcd eigenvectors;   // column chi is the eigenvector of eigenvalues[chi]
    std::size_t n_molecules = 0;

    std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Hermitian eigendecomposition (LAPACK zheevd). Rejects inputs whose
/// anti-Hermitian part exceeds 1e-12 relative to the largest entry.
Spectrum diagonalize(const HamiltonianMatrix& h);

/// Eigenbasis coefficients <chi|psi>.
Eigen::VectorXcd expand(const Spectrum& spectrum, const StateVector& psi);

/// Inverse of expand: sum_chi coeff_chi |chi>.
StateVector recombine(const Spectrum& spectrum, const Eigen::VectorXcd& coefficients);

/// psi(t) = V exp(-i Lambda t / hbar) V^dagger psi0. Negative t evolves backward.
StateVector propagate(const Spectrum& spectrum, const StateVector& psi0, double t);

/// Exact evolution of one initial state, amortising the eigenbasis projection
/// over many time points. Holds a reference to the spectrum.
class Propagator {
public:
    Propagator(const Spectrum& spectrum, const StateVector& psi0);

    StateVector state(double t) const;

    /// Columns are psi(times[k]).
    Eigen::MatrixXcd states(std::span<const double> times) const;

    /// |<i|psi(times[k])>|^2 as a dimension x times matrix. Computed in blocks
    /// of time points to bound memory.
    Eigen::MatrixXd probabilities(std::span<const double> times) const;

    const Eigen::VectorXcd& coefficients() const { return coefficients_; }

private:
    const Spectrum& spectrum_;
    Eigen::VectorXcd coefficients_;
};

/// Cache key for the spectrum of assemble(realization, modes, coupling).
std::string spectrum_cache_key(const MolecularRealization& realization, const CavityModeSet& modes,
                               const CouplingSpec& coupling);

/// Binary spectrum cache:
///   char[4] "PWSP" | u32 version | char[64] key | u64 dimension | u64 n_molecules
///   | f64 eigenvalues[dimension] | complex128 eigenvectors (column-major)
inline constexpr std::uint32_t kSpectrumCacheVersion = 1;

void save_spectrum(const std::string& path, const Spectrum& spectrum, std::string_view key);

/// Returns nullopt if the file is missing, has another version, or a different key.
std::optional<Spectrum> load_spectrum(const std::string& path, std::string_view key);

} // namespace polwire
