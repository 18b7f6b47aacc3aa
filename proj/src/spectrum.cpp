#include "polwire/spectrum.hpp"

#include "binary_io.hpp"
#include "polwire/error.hpp"
#include "polwire/hash.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace polwire {

namespace {

constexpr double kHermiticityTolerance = 1e-12;
constexpr double kNormTolerance = 1e-10;
constexpr Eigen::Index kTimeBlock = 128;

std::string matrix_hash(const Eigen::MatrixXcd& m) {
    return sha256_hex(std::as_bytes(std::span(m.data(), static_cast<std::size_t>(m.size()))));
}

void require_normalized(const StateVector& psi, const char* where) {
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > kNormTolerance)
        throw DomainError(std::string(where) + ": state is not normalized (norm " + std::to_string(norm) + ")");
}

Eigen::VectorXcd phase_factors(const Eigen::VectorXd& energies, double t) {
    Eigen::VectorXcd out(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        const double angle = -energies[i] * t / constants::hbar;
        out[i] = {std::cos(angle), std::sin(angle)};
    }
    return out;
}

} // namespace

Spectrum diagonalize(const HamiltonianMatrix& h) {
    const auto& m = h.matrix;
    if (m.rows() != m.cols()) throw IntegrityError("diagonalize: matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermiticityTolerance * scale)
        throw IntegrityError("diagonalize: matrix is not Hermitian (max |H - H^dagger| = " +
                             std::to_string(asym) + ")");

    Spectrum s;
    s.n_molecules = h.n_molecules;
    s.eigenvectors = m;
    s.eigenvalues.resize(m.rows());
    const auto n = static_cast<lapack_int>(m.rows());
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                       reinterpret_cast<lapack_complex_double*>(s.eigenvectors.data()), n,
                       s.eigenvalues.data());
    if (info != 0)
        throw NumericalError("diagonalize: zheevd failed (info " + std::to_string(info) +
                             ") for matrix sha256 " + matrix_hash(m));
    return s;
}

Eigen::VectorXcd expand(const Spectrum& spectrum, const StateVector& psi) {
    if (psi.size() != spectrum.eigenvectors.rows()) throw ConfigError("expand: dimension mismatch");
    return spectrum.eigenvectors.adjoint() * psi;
}

StateVector recombine(const Spectrum& spectrum, const Eigen::VectorXcd& coefficients) {
    if (coefficients.size() != spectrum.eigenvectors.cols()) throw ConfigError("recombine: dimension mismatch");
    return spectrum.eigenvectors * coefficients;
}

StateVector propagate(const Spectrum& spectrum, const StateVector& psi0, double t) {
    return Propagator(spectrum, psi0).state(t);
}

Propagator::Propagator(const Spectrum& spectrum, const StateVector& psi0)
    : spectrum_(spectrum) {
    require_normalized(psi0, "propagate");
    coefficients_ = expand(spectrum, psi0);
}

StateVector Propagator::state(double t) const {
    StateVector out =
        spectrum_.eigenvectors * coefficients_.cwiseProduct(phase_factors(spectrum_.eigenvalues, t));
    if (std::abs(out.norm() - 1.0) > kNormTolerance)
        throw NumericalError("propagate: norm drift beyond 1e-10 at t = " + std::to_string(t) + " fs");
    return out;
}

Eigen::MatrixXcd Propagator::states(std::span<const double> times) const {
    const Eigen::Index dim = coefficients_.size();
    const auto nt = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXcd phased(dim, nt);
    for (Eigen::Index k = 0; k < nt; ++k)
        phased.col(k) = coefficients_.cwiseProduct(phase_factors(spectrum_.eigenvalues, times[k]));
    return spectrum_.eigenvectors * phased;
}

Eigen::MatrixXd Propagator::probabilities(std::span<const double> times) const {
    const Eigen::Index dim = coefficients_.size();
    const auto nt = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXd out(dim, nt);
    for (Eigen::Index start = 0; start < nt; start += kTimeBlock) {
        const Eigen::Index len = std::min(kTimeBlock, nt - start);
        const Eigen::MatrixXcd block =
            states(times.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(len)));
        out.middleCols(start, len) = block.cwiseAbs2();
        for (Eigen::Index k = 0; k < len; ++k) {
            const double norm2 = out.col(start + k).sum();
            if (std::abs(norm2 - 1.0) > 2.0 * kNormTolerance)
                throw NumericalError("propagate: norm drift beyond 1e-10 at t = " +
                                     std::to_string(times[static_cast<std::size_t>(start + k)]) + " fs");
        }
    }
    return out;
}

std::string spectrum_cache_key(const MolecularRealization& realization, const CavityModeSet& modes,
                               const CouplingSpec& coupling) {
    Sha256 h;
    h.update("polwire-hamiltonian-v1");
    h.update_values(std::span<const double>(realization.energies));
    h.update_values(std::span<const double>(realization.positions));
    for (const auto& m : modes.modes) {
        const double fields[3] = {static_cast<double>(m.m_x), m.q, m.energy};
        h.update_values(std::span<const double>(fields));
    }
    const double omega = coupling.rabi_splitting;
    h.update_values(std::span<const double>(&omega, 1));
    return h.hex();
}

void save_spectrum(const std::string& path, const Spectrum& spectrum, std::string_view key) {
    using detail::write_le;
    if (key.size() != 64) throw ConfigError("save_spectrum: key must be a 64-character hex digest");
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out.write("PWSP", 4);
        write_le<std::uint32_t>(out, kSpectrumCacheVersion);
        out.write(key.data(), 64);
        write_le<std::uint64_t>(out, spectrum.dimension());
        write_le<std::uint64_t>(out, spectrum.n_molecules);
        for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) write_le<double>(out, spectrum.eigenvalues[i]);
        const cplx* v = spectrum.eigenvectors.data();
        for (Eigen::Index i = 0; i < spectrum.eigenvectors.size(); ++i) {
            write_le<double>(out, v[i].real());
            write_le<double>(out, v[i].imag());
        }
        if (!out) throw Error("failed writing " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::optional<Spectrum> load_spectrum(const std::string& path, std::string_view key) {
    using detail::read_le;
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    char magic[4];
    if (!in.read(magic, 4) || std::string_view(magic, 4) != "PWSP") return std::nullopt;
    if (read_le<std::uint32_t>(in) != kSpectrumCacheVersion) return std::nullopt;
    char stored[64];
    if (!in.read(stored, 64) || std::string_view(stored, 64) != key) return std::nullopt;
    const auto dim = static_cast<Eigen::Index>(read_le<std::uint64_t>(in));
    Spectrum s;
    s.n_molecules = read_le<std::uint64_t>(in);
    s.eigenvalues.resize(dim);
    s.eigenvectors.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) s.eigenvalues[i] = read_le<double>(in);
    cplx* v = s.eigenvectors.data();
    for (Eigen::Index i = 0; i < dim * dim; ++i) {
        const double re = read_le<double>(in);
        const double im = read_le<double>(in);
        v[i] = {re, im};
    }
    return s;
}

} // namespace polwire
