#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polwire/error.hpp"
#include "polwire/hamiltonian.hpp"
#include "polwire/spectrum.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace polwire;

namespace {

HamiltonianMatrix from_matrix(Eigen::MatrixXcd m, std::size_t n_molecules) {
    HamiltonianMatrix h;
    h.n_molecules = n_molecules;
    h.n_modes = static_cast<std::size_t>(m.rows()) - n_molecules;
    h.matrix = std::move(m);
    return h;
}

Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {u(rng), u(rng)};
    return 0.5 * (a + a.adjoint());
}

StateVector random_state(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    StateVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = {g(rng), g(rng)};
    return v / v.norm();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "polwire_test_spectrum";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("diagonal matrix") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    const auto s = diagonalize(from_matrix(m, 3));
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(s.eigenvalues[2] == doctest::Approx(3.0));
    CHECK(std::abs(s.eigenvectors(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("two-level system") {
    Eigen::MatrixXcd m(2, 2);
    m << 2.0, cplx(0.0, -0.05), cplx(0.0, 0.05), 2.0;
    const auto s = diagonalize(from_matrix(m, 1));
    CHECK(s.eigenvalues[0] == doctest::Approx(1.95).epsilon(1e-14));
    CHECK(s.eigenvalues[1] == doctest::Approx(2.05).epsilon(1e-14));
}

TEST_CASE("random Hermitian decomposition") {
    const Eigen::MatrixXcd m = random_hermitian(50, 17);
    const auto s = diagonalize(from_matrix(m, 25));
    const auto& v = s.eigenvectors;
    const Eigen::MatrixXcd lambda = s.eigenvalues.cast<cplx>().asDiagonal();
    CHECK((v * lambda * v.adjoint() - m).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index c = 0; c < 50; ++c) CHECK((m * v.col(c) - s.eigenvalues[c] * v.col(c)).norm() < 1e-10);
    for (Eigen::Index c = 1; c < 50; ++c) CHECK(s.eigenvalues[c] >= s.eigenvalues[c - 1]);
}

TEST_CASE("non-Hermitian input is rejected") {
    Eigen::MatrixXcd m = random_hermitian(6, 2);
    m(0, 3) += 1e-3;
    CHECK_THROWS_AS(diagonalize(from_matrix(m, 3)), IntegrityError);
}

TEST_CASE("propagation") {
    const Eigen::MatrixXcd m = random_hermitian(30, 5);
    const auto s = diagonalize(from_matrix(m, 20));
    const StateVector psi0 = random_state(30, 9);

    SUBCASE("t = 0 is the identity") { CHECK((propagate(s, psi0, 0.0) - psi0).norm() < 1e-12); }
    SUBCASE("eigenstates only acquire a phase") {
        const StateVector chi = s.eigenvectors.col(4);
        const double t = 37.5;
        const cplx phase = std::exp(cplx(0.0, -s.eigenvalues[4] * t / constants::hbar));
        CHECK((propagate(s, chi, t) - phase * chi).norm() < 1e-12);
    }
    SUBCASE("group property") {
        const StateVector a = propagate(s, propagate(s, psi0, 3.0), 4.5);
        CHECK((a - propagate(s, psi0, 7.5)).norm() < 1e-12);
    }
    SUBCASE("time reversal") {
        CHECK((propagate(s, propagate(s, psi0, 120.0), -120.0) - psi0).norm() < 1e-12);
    }
    SUBCASE("agrees with a dense matrix exponential") {
        for (double t : {0.7, 5.0, 40.0}) {
            const Eigen::MatrixXcd arg = cplx(0.0, -t / constants::hbar) * m;
            const Eigen::MatrixXcd u = arg.exp();
            CHECK((propagate(s, psi0, t) - u * psi0).norm() < 1e-10);
        }
    }
    SUBCASE("unnormalized states are rejected") {
        CHECK_THROWS_AS(propagate(s, StateVector(2.0 * psi0), 1.0), DomainError);
        CHECK_THROWS_AS(Propagator(s, StateVector(0.5 * psi0)), DomainError);
    }
    SUBCASE("Propagator agrees with propagate") {
        const Propagator prop(s, psi0);
        std::vector<double> times;
        for (int k = 0; k < 300; ++k) times.push_back(0.5 * k);   // spans several time blocks
        const Eigen::MatrixXcd states = prop.states(times);
        const Eigen::MatrixXd probs = prop.probabilities(times);
        for (std::size_t k : {0u, 1u, 127u, 128u, 299u}) {
            const StateVector expected = propagate(s, psi0, times[k]);
            CHECK((states.col(static_cast<Eigen::Index>(k)) - expected).norm() < 1e-12);
            CHECK((probs.col(static_cast<Eigen::Index>(k)) - expected.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((prop.state(times[k]) - expected).norm() < 1e-12);
        }
    }
}

TEST_CASE("expand and recombine") {
    const auto s = diagonalize(from_matrix(random_hermitian(12, 3), 6));
    const StateVector psi = random_state(12, 4);
    const Eigen::VectorXcd c = expand(s, psi);
    CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((recombine(s, c) - psi).norm() < 1e-12);
    const Eigen::VectorXcd e3 = expand(s, s.eigenvectors.col(3));
    CHECK(std::abs(e3[3]) == doctest::Approx(1.0));
    CHECK(e3.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(expand(s, StateVector::Zero(5)), ConfigError);
}

TEST_CASE("spectrum cache") {
    WireConfig wire;
    wire.n_molecules = 20;
    const auto modes = build_mode_set(wire, ModeCount{5}, Directionality::bidirectional);
    const auto r = sample_realization(wire, DisorderSpec{0.02, 1.0}, 4);
    const CouplingSpec coupling{0.1};
    const auto s = diagonalize(assemble(r, modes, coupling));
    const std::string key = spectrum_cache_key(r, modes, coupling);
    CHECK(key.size() == 64);

    const auto path = scratch("cache.spec").string();
    save_spectrum(path, s, key);
    const auto back = load_spectrum(path, key);
    REQUIRE(back.has_value());
    CHECK(back->eigenvalues == s.eigenvalues);
    CHECK(back->eigenvectors == s.eigenvectors);
    CHECK(back->n_molecules == 20);

    std::string other = key;
    other[0] = other[0] == 'a' ? 'b' : 'a';
    CHECK_FALSE(load_spectrum(path, other).has_value());
    CHECK_FALSE(load_spectrum(scratch("missing.spec").string(), key).has_value());
    CHECK_THROWS_AS(save_spectrum(path, s, "short"), ConfigError);

    SUBCASE("key depends on every input") {
        auto r2 = r;
        r2.energies[7] += 1e-12;
        CHECK(spectrum_cache_key(r2, modes, coupling) != key);
        auto r3 = r;
        r3.positions[0] += 1e-9;
        CHECK(spectrum_cache_key(r3, modes, coupling) != key);
        CHECK(spectrum_cache_key(r, modes, CouplingSpec{0.1000001}) != key);
        const auto modes7 = build_mode_set(wire, ModeCount{7}, Directionality::bidirectional);
        CHECK(spectrum_cache_key(r, modes7, coupling) != key);
        CHECK(spectrum_cache_key(r, modes, coupling) == key);
    }
}
