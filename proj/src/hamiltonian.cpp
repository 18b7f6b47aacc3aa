#include "polwire/hamiltonian.hpp"

#include "binary_io.hpp"
#include "polwire/error.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace polwire {

cplx coupling_element(double e_n, double x_n, double q, double mode_energy, double omega_r,
                      std::size_t n_molecules) {
    if (!(e_n > 0.0)) throw DomainError("coupling_element: molecular energy must be positive");
    if (!(mode_energy > 0.0)) throw DomainError("coupling_element: mode energy must be positive");
    if (n_molecules < 1) throw DomainError("coupling_element: n_molecules must be >= 1");
    const double g = 0.5 * omega_r * std::sqrt(e_n / (static_cast<double>(n_molecules) * mode_energy));
    const double phase = q * x_n;
    // -i g (cos + i sin)
    return {g * std::sin(phase), -g * std::cos(phase)};
}

HamiltonianMatrix assemble(const MolecularRealization& realization, const CavityModeSet& modes,
                           const CouplingSpec& coupling) {
    if (realization.energies.size() != realization.positions.size())
        throw ConfigError("realization energies and positions differ in length");
    if (realization.size() == 0) throw ConfigError("realization has no molecules");
    if (!(coupling.rabi_splitting >= 0.0)) throw ConfigError("rabi splitting must be >= 0");

    const std::size_t nm = realization.size();
    const std::size_t nc = modes.size();
    HamiltonianMatrix h;
    h.n_molecules = nm;
    h.n_modes = nc;
    h.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(nm + nc),
                                      static_cast<Eigen::Index>(nm + nc));
    auto& m = h.matrix;

    for (std::size_t n = 0; n < nm; ++n) m(n, n) = realization.energies[n];
    for (std::size_t j = 0; j < nc; ++j) m(nm + j, nm + j) = modes.modes[j].energy;

    if (coupling.rabi_splitting > 0.0) {
        for (std::size_t j = 0; j < nc; ++j) {
            const auto& mode = modes.modes[j];
            for (std::size_t n = 0; n < nm; ++n) {
                const cplx g = coupling_element(realization.energies[n], realization.positions[n], mode.q,
                                                mode.energy, coupling.rabi_splitting, nm);
                m(n, nm + j) = g;
                m(nm + j, n) = std::conj(g);
            }
        }
    }
    return h;
}

DerivedCoupling derived_coupling(const WireConfig& wire, const CouplingSpec& coupling) {
    constexpr double joule_per_ev = 1.602176634e-19;
    constexpr double vacuum_permittivity = 8.8541878128e-12;   // F / m
    constexpr double coulomb_metre_per_debye = 3.33564095e-30;

    wire.validate();
    const double density = 1.0 / (wire.spacing * wire.l_y * wire.l_z);   // N_M / (L_x L_y L_z)
    const double bottom = mode_energy(0.0, transverse_wavevector(wire.l_y, wire.l_z), wire.epsilon);
    const double field = std::sqrt(bottom * joule_per_ev * density * 1e27 /
                                   (2.0 * vacuum_permittivity * wire.epsilon));   // V / m
    const double dipole = coupling.rabi_splitting * joule_per_ev / field;           // C m
    return {density, dipole / coulomb_metre_per_debye};
}

void write_matrix_dump(const HamiltonianMatrix& h, std::ostream& out) {
    using detail::write_le;
    out.write("PWHM", 4);
    write_le<std::uint32_t>(out, kMatrixDumpVersion);
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(h.matrix.rows()));
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(h.matrix.cols()));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(h.n_molecules));
    write_le<std::uint32_t>(out, kBasisMoleculesThenPhotons);
    for (Eigen::Index r = 0; r < h.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) {
            write_le<double>(out, h.matrix(r, c).real());
            write_le<double>(out, h.matrix(r, c).imag());
        }
    if (!out) throw Error("failed writing matrix dump");
}

HamiltonianMatrix read_matrix_dump(std::istream& in) {
    using detail::read_le;
    char magic[4];
    if (!in.read(magic, 4) || std::string(magic, 4) != "PWHM") throw IntegrityError("not a matrix dump");
    if (read_le<std::uint32_t>(in) != kMatrixDumpVersion) throw IntegrityError("unsupported matrix dump version");
    const auto rows = read_le<std::uint64_t>(in);
    const auto cols = read_le<std::uint64_t>(in);
    const auto nm = read_le<std::uint32_t>(in);
    if (read_le<std::uint32_t>(in) != kBasisMoleculesThenPhotons) throw IntegrityError("unknown basis order tag");
    if (rows != cols || nm > rows) throw IntegrityError("inconsistent matrix dump header");

    HamiltonianMatrix h;
    h.n_molecules = nm;
    h.n_modes = rows - nm;
    h.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < h.matrix.rows(); ++r)
        for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) {
            const double re = read_le<double>(in);
            const double im = read_le<double>(in);
            h.matrix(r, c) = {re, im};
        }
    return h;
}

} // namespace polwire
