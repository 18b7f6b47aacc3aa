#include "polwire/observables.hpp"

#include "polwire/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polwire {

namespace {

constexpr double kMinPopulation = 1e-12;
constexpr double kTieTolerance = 1e-12;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw ConfigError(std::string(what) + ": time grids differ in length");
}

} // namespace

double molecular_population(const StateVector& psi, std::size_t n_molecules) {
    if (static_cast<std::size_t>(psi.size()) < n_molecules) throw ConfigError("molecular_population: state too short");
    return psi.head(static_cast<Eigen::Index>(n_molecules)).squaredNorm();
}

double wavepacket_width(std::span<const double> site_probabilities, std::span<const double> positions,
                        double x0, double spacing) {
    if (site_probabilities.size() != positions.size())
        throw ConfigError("wavepacket_width: probabilities and positions differ in length");
    double pmol = 0.0;
    double second_moment = 0.0;
    for (std::size_t n = 0; n < positions.size(); ++n) {
        const double dx = positions[n] - x0;
        pmol += site_probabilities[n];
        second_moment += site_probabilities[n] * dx * dx;
    }
    if (!(pmol > kMinPopulation))
        throw UndefinedObservableError("wavepacket_width: molecular population vanishes");
    return std::sqrt(second_moment / pmol) / spacing;
}

double wavepacket_width(const StateVector& psi, const MolecularRealization& realization, double x0,
                        double spacing) {
    const std::size_t nm = realization.size();
    if (static_cast<std::size_t>(psi.size()) < nm) throw ConfigError("wavepacket_width: state too short");
    std::vector<double> probs(nm);
    for (std::size_t n = 0; n < nm; ++n) probs[n] = std::norm(psi[static_cast<Eigen::Index>(n)]);
    return wavepacket_width(probs, realization.positions, x0, spacing);
}

PhotonWeights normalize_photon_weights(std::vector<double> raw) {
    PhotonWeights w;
    w.raw = std::move(raw);
    w.weights.assign(w.raw.size(), 0.0);
    if (w.raw.empty()) {
        w.degenerate = true;
        return w;
    }
    const auto max_it = std::max_element(w.raw.begin(), w.raw.end());
    const double max_value = *max_it;
    if (!(max_value > 0.0)) {
        w.degenerate = true;
        return w;
    }
    for (std::size_t j = 0; j < w.raw.size(); ++j) {
        w.weights[j] = w.raw[j] / max_value;
        if (w.raw[j] >= max_value * (1.0 - kTieTolerance)) w.ties.push_back(j);
    }
    w.argmax = w.ties.front();
    return w;
}

PhotonWeights photon_weight_trajectory(std::span<const StateVector> states, std::size_t n_molecules) {
    if (states.size() < 2) throw ConfigError("photon_weight_trajectory: need at least two time samples");
    const auto dim = static_cast<std::size_t>(states.front().size());
    if (dim < n_molecules) throw ConfigError("photon_weight_trajectory: state too short");
    std::vector<double> raw(dim - n_molecules, 0.0);
    for (const auto& psi : states) {
        if (static_cast<std::size_t>(psi.size()) != dim) throw ConfigError("photon_weight_trajectory: ragged states");
        for (std::size_t j = 0; j < raw.size(); ++j) raw[j] += std::norm(psi[static_cast<Eigen::Index>(n_molecules + j)]);
    }
    return normalize_photon_weights(std::move(raw));
}

PhotonWeights photon_weight_trajectory(const Eigen::MatrixXd& probabilities, std::size_t n_molecules) {
    if (probabilities.cols() < 2) throw ConfigError("photon_weight_trajectory: need at least two time samples");
    const auto dim = static_cast<std::size_t>(probabilities.rows());
    if (dim < n_molecules) throw ConfigError("photon_weight_trajectory: state too short");
    const auto nc = static_cast<Eigen::Index>(dim - n_molecules);
    const Eigen::VectorXd sums =
        probabilities.bottomRows(nc).rowwise().sum();
    return normalize_photon_weights(std::vector<double>(sums.data(), sums.data() + sums.size()));
}

PhotonWeights infinite_time_photon_weights(const Spectrum& spectrum, const StateVector& psi0,
                                           double cluster_tolerance) {
    const Eigen::VectorXcd coeffs = expand(spectrum, psi0);
    const auto nm = static_cast<Eigen::Index>(spectrum.n_molecules);
    const Eigen::Index dim = coeffs.size();
    const Eigen::Index nc = dim - nm;
    std::vector<double> raw(static_cast<std::size_t>(nc), 0.0);
    const auto& vecs = spectrum.eigenvectors;
    const auto& vals = spectrum.eigenvalues;

    Eigen::VectorXcd projected(nc);
    Eigen::Index start = 0;
    while (start < dim) {
        Eigen::Index end = start + 1;
        while (end < dim && vals[end] - vals[end - 1] < cluster_tolerance) ++end;
        // <q| P_cluster |psi0> = sum_{chi in cluster} <q|chi> <chi|psi0>
        projected = vecs.block(nm, start, nc, end - start) * coeffs.segment(start, end - start);
        for (Eigen::Index j = 0; j < nc; ++j) raw[static_cast<std::size_t>(j)] += std::norm(projected[j]);
        start = end;
    }
    return normalize_photon_weights(std::move(raw));
}

double hopfield_molecular_fraction(double mode_energy, double e_m, double omega_r) {
    if (!(omega_r > 0.0)) throw DomainError("hopfield_molecular_fraction: omega_r must be positive");
    const double detuning = mode_energy - e_m;
    return 0.5 * (1.0 + detuning / std::hypot(detuning, omega_r));
}

double analytic_photon_weight(double q, double mode_energy, const WavepacketSpec& spec, double e_m,
                              double omega_r) {
    const double pi_l = hopfield_molecular_fraction(mode_energy, e_m, omega_r);
    const double dq = q - spec.mean_momentum;
    return pi_l * (1.0 - pi_l) * std::exp(-2.0 * spec.sigma_x * spec.sigma_x * dq * dq);
}

PhotonWeights analytic_photon_weights(const CavityModeSet& modes, const WavepacketSpec& spec, double e_m,
                                      double omega_r) {
    std::vector<double> raw;
    raw.reserve(modes.size());
    for (const auto& m : modes.modes) raw.push_back(analytic_photon_weight(m.q, m.energy, spec, e_m, omega_r));
    return normalize_photon_weights(std::move(raw));
}

double truncation_error(std::span<const double> d, std::span<const double> d_ref) {
    require_same_length(d.size(), d_ref.size(), "truncation_error");
    if (d.empty()) throw ConfigError("truncation_error: empty time series");
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(d_ref[i] > 0.0)) throw DomainError("truncation_error: reference width must be positive");
        sum += std::abs(d[i] - d_ref[i]) / d_ref[i];
    }
    return sum / static_cast<double>(d.size());
}

ErrorEstimate propagate_error_uncertainty(std::span<const double> d_mean, std::span<const double> d_std,
                                          std::span<const double> ref_mean, std::span<const double> ref_std) {
    require_same_length(d_mean.size(), ref_mean.size(), "propagate_error_uncertainty");
    require_same_length(d_mean.size(), d_std.size(), "propagate_error_uncertainty");
    require_same_length(ref_mean.size(), ref_std.size(), "propagate_error_uncertainty");
    ErrorEstimate out;
    out.error = truncation_error(d_mean, ref_mean);
    double variance = 0.0;
    for (std::size_t i = 0; i < d_mean.size(); ++i) {
        const double s = sign(d_mean[i] - ref_mean[i]);
        const double r = ref_mean[i];
        const double by_d = s / r * (2.0 * d_std[i]);
        const double by_ref = -s * d_mean[i] / (r * r) * (2.0 * ref_std[i]);
        variance += by_d * by_d + by_ref * by_ref;
    }
    out.uncertainty = std::sqrt(variance) / static_cast<double>(d_mean.size());
    return out;
}

std::vector<double> bin_site_probabilities(std::span<const double> site_probabilities, std::size_t bin_size) {
    if (bin_size == 0) throw ConfigError("bin size must be >= 1");
    std::vector<double> bins((site_probabilities.size() + bin_size - 1) / bin_size, 0.0);
    for (std::size_t n = 0; n < site_probabilities.size(); ++n) bins[n / bin_size] += site_probabilities[n];
    return bins;
}

double probability_beyond(std::span<const double> site_probabilities, std::span<const double> positions,
                          double threshold) {
    if (site_probabilities.size() != positions.size())
        throw ConfigError("probability_beyond: probabilities and positions differ in length");
    double sum = 0.0;
    for (std::size_t n = 0; n < positions.size(); ++n)
        if (positions[n] > threshold) sum += site_probabilities[n];
    return sum;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("linear_fit: need two or more paired samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<double> running_mean(std::span<const double> y, std::size_t window) {
    if (window == 0) throw ConfigError("running_mean: window must be >= 1");
    if (y.size() < window) return {};
    std::vector<double> out(y.size() - window + 1);
    double sum = std::accumulate(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(window), 0.0);
    out[0] = sum / static_cast<double>(window);
    for (std::size_t i = 1; i < out.size(); ++i) {
        sum += y[i + window - 1] - y[i - 1];
        out[i] = sum / static_cast<double>(window);
    }
    return out;
}

double dominant_period(std::span<const double> times, std::span<const double> y) {
    if (times.size() != y.size() || times.size() < 4) throw ConfigError("dominant_period: need >= 4 samples");
    const double dt = times[1] - times[0];
    const double span_t = times.back() - times.front();
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

    const double f_lo = 2.0 / span_t;
    const double f_hi = 0.5 / dt;
    const double df = 1.0 / (16.0 * span_t);
    double best_f = f_lo;
    double best_power = -1.0;
    for (double f = f_lo; f <= f_hi; f += df) {
        double re = 0.0, im = 0.0;
        const double w = 2.0 * constants::pi * f;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double v = y[k] - mean;
            re += v * std::cos(w * times[k]);
            im -= v * std::sin(w * times[k]);
        }
        const double power = re * re + im * im;
        if (power > best_power) {
            best_power = power;
            best_f = f;
        }
    }
    return 1.0 / best_f;
}

} // namespace polwire
