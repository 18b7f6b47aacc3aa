#pragma once

#include "polwire/disorder.hpp"
#include "polwire/grid.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>

namespace polwire {

using cplx = std::complex<double>;

struct CouplingSpec {
    double rabi_splitting = 0.1;   // eV, collective Omega_R
};

/// Dense single-excitation Hamiltonian in eV. Basis: molecules 0..N_M-1 in
/// site order, then photons in mode-set order.
struct HamiltonianMatrix {
    Eigen::MatrixXcd matrix;
    std::size_t n_molecules = 0;
    std::size_t n_modes = 0;

    std::size_t dimension() const { return n_molecules + n_modes; }
};

/// <1_n|H|q> = -i (Omega_R / 2) sqrt(E_n / (N_M hbar w_q)) exp(i q x_n).
cplx coupling_element(double e_n, double x_n, double q, double mode_energy, double omega_r,
                      std::size_t n_molecules);

HamiltonianMatrix assemble(const MolecularRealization& realization, const CavityModeSet& modes,
                           const CouplingSpec& coupling);

/// Quantities implied by a choice of Omega_R and molecular density; reported
/// as metadata only.
struct DerivedCoupling {
    double density;         // molecules / nm^3
    double dipole_debye;    // transition dipole implied by Omega_R = mu sqrt(hbar w_0 rho / 2 eps)
};

DerivedCoupling derived_coupling(const WireConfig& wire, const CouplingSpec& coupling);

/// Binary dump: 32-byte little-endian header
///   char[4] "PWHM" | u32 version | u64 rows | u64 cols | u32 n_molecules | u32 basis tag
/// followed by row-major complex128 entries.
inline constexpr std::uint32_t kMatrixDumpVersion = 1;
inline constexpr std::uint32_t kBasisMoleculesThenPhotons = 1;

void write_matrix_dump(const HamiltonianMatrix& h, std::ostream& out);
HamiltonianMatrix read_matrix_dump(std::istream& in);

} // namespace polwire
