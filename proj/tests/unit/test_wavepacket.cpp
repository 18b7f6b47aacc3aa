#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polwire/error.hpp"
#include "polwire/observables.hpp"
#include "polwire/wavepacket.hpp"

#include <cmath>

using namespace polwire;

namespace {

WireConfig wire_of(std::size_t n) {
    WireConfig w;
    w.n_molecules = n;
    return w;
}

MolecularRealization ordered(const WireConfig& w) { return sample_realization(w, DisorderSpec{}, 0); }

double initial_width(std::size_t n_m, double sigma_x) {
    const auto wire = wire_of(n_m);
    WavepacketSpec spec;
    spec.sigma_x = sigma_x;
    const auto r = ordered(wire);
    return wavepacket_width(gaussian_initial_state(wire, r, 3, spec), r, spec.center_for(wire), wire.spacing);
}

} // namespace

TEST_CASE("initial width equals sigma_x / a") {
    CHECK(std::abs(initial_width(5000, 60.0) - 6.0) < 0.1);
    CHECK(std::abs(initial_width(5000, 120.0) - 12.0) < 0.1);
    CHECK(std::abs(initial_width(1000, 240.0) - 24.0) < 0.1);
}

TEST_CASE("initial width is converged in N_M") {
    const double ref = initial_width(5000, 60.0);
    for (std::size_t n : {100u, 250u, 1000u}) CHECK(std::abs(initial_width(n, 60.0) - ref) / ref < 0.02);
}

TEST_CASE("purely molecular and normalized") {
    const auto wire = wire_of(400);
    WavepacketSpec spec;
    spec.mean_momentum = 0.004;
    const auto psi = gaussian_initial_state(wire, ordered(wire), 41, spec);
    REQUIRE(psi.size() == 441);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(molecular_population(psi, 400) == doctest::Approx(1.0).epsilon(1e-14));
    for (Eigen::Index k = 400; k < 441; ++k) CHECK(psi[k] == cplx(0.0, 0.0));
}

TEST_CASE("zero mean momentum gives real positive amplitudes") {
    const auto wire = wire_of(300);
    const auto psi = gaussian_initial_state(wire, ordered(wire), 0, WavepacketSpec{});
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
        CHECK(psi[n].imag() == 0.0);
        CHECK(psi[n].real() >= 0.0);
    }
}

TEST_CASE("ordered packet is mirror symmetric about the wire centre") {
    // x_i - x0 = -(x_{N-i} - x0) for x0 = N a / 2.
    const std::size_t n = 500;
    const auto wire = wire_of(n);
    const auto psi = gaussian_initial_state(wire, ordered(wire), 1, WavepacketSpec{});
    for (std::size_t i = 1; i < n; ++i)
        CHECK(std::abs(std::abs(psi[static_cast<Eigen::Index>(i)]) - std::abs(psi[static_cast<Eigen::Index>(n - i)])) <
              1e-12);
}

TEST_CASE("phase uses the disordered positions") {
    const auto wire = wire_of(200);
    const auto r = sample_realization(wire, DisorderSpec{0.0, 2.0}, 31);
    WavepacketSpec spec;
    spec.mean_momentum = 0.0123;
    const auto psi = gaussian_initial_state(wire, r, 0, spec);
    const double x0 = spec.center_for(wire);
    const double norm = psi.norm();
    double total = 0.0;
    for (std::size_t n = 0; n < r.size(); ++n) {
        const double dx = r.positions[n] - x0;
        total += std::exp(-dx * dx / (2.0 * spec.sigma_x * spec.sigma_x));
    }
    const double scale = norm / std::sqrt(total);
    for (std::size_t n = 80; n < 120; ++n) {
        const double dx = r.positions[n] - x0;
        const cplx expected = scale * std::exp(-dx * dx / (4.0 * spec.sigma_x * spec.sigma_x)) *
                              std::exp(cplx(0.0, spec.mean_momentum * r.positions[n]));
        CHECK(std::abs(psi[static_cast<Eigen::Index>(n)] - expected) < 1e-14);
    }
}

TEST_CASE("explicit centre") {
    const auto wire = wire_of(400);
    WavepacketSpec spec;
    spec.center = 1000.0;
    const auto r = ordered(wire);
    const auto psi = gaussian_initial_state(wire, r, 0, spec);
    Eigen::Index peak = 0;
    psi.cwiseAbs().maxCoeff(&peak);
    CHECK(peak == 100);
    CHECK(wavepacket_width(psi, r, 1000.0, 10.0) == doctest::Approx(6.0).epsilon(0.01));
}

TEST_CASE("invalid packets") {
    const auto wire = wire_of(100);
    const auto r = ordered(wire);
    WavepacketSpec outside;
    outside.center = 5000.0;
    CHECK_THROWS_AS(gaussian_initial_state(wire, r, 0, outside), ConfigError);

    WavepacketSpec needle;
    needle.sigma_x = 0.01;
    needle.center = 5.0;   // midway between two sites
    CHECK_THROWS_AS(gaussian_initial_state(wire, r, 0, needle), DomainError);

    WavepacketSpec zero;
    zero.sigma_x = 0.0;
    CHECK_THROWS_AS(gaussian_initial_state(wire, r, 0, zero), ConfigError);

    CHECK_THROWS_AS(gaussian_initial_state(wire_of(99), r, 0, WavepacketSpec{}), ConfigError);
}

TEST_CASE("under-resolved envelope flag") {
    WavepacketSpec spec;
    spec.sigma_x = 5.0;
    CHECK(envelope_under_resolved(wire_of(100), spec));
    spec.sigma_x = 60.0;
    CHECK_FALSE(envelope_under_resolved(wire_of(100), spec));
}
