#include "polwire/config.hpp"
#include "polwire/error.hpp"
#include "polwire/observables.hpp"
#include "polwire/presets.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace polwire;

namespace {

py::dict moments(const Moments& m) {
    py::dict d;
    d["mean"] = m.mean;
    d["std"] = m.std;
    return d;
}

py::list modes_list(const CavityModeSet& modes) {
    py::list out;
    for (const auto& m : modes.modes) {
        py::dict d;
        d["m_x"] = m.m_x;
        d["q"] = m.q;
        d["energy_eV"] = m.energy;
        out.append(d);
    }
    return out;
}

py::dict ensemble_dict(const EnsembleResult& r) {
    py::dict d;
    d["times"] = r.times;
    d["width"] = moments(r.width);
    d["p_mol"] = moments(r.p_mol);
    d["right_tail"] = moments(r.right_tail);
    d["photon_weights"] = moments(r.photon_weights);
    d["modes"] = modes_list(r.modes);
    d["realized_cutoff_eV"] = r.modes.realized_cutoff();
    d["n_realizations"] = r.n_realizations;
    d["std_defined"] = r.std_defined;
    d["config_hash"] = r.config_hash;
    return d;
}

RunConfig resolve_text(const std::string& toml, const std::vector<std::string>& overrides) {
    auto doc = ConfigDocument::from_text(toml);
    for (const auto& o : overrides) doc.apply_override(o);
    return doc.resolve();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exciton wave-packet dynamics in a multimode polaritonic wire";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<IntegrityError>(m, "IntegrityError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<UndefinedObservableError>(m, "UndefinedObservableError", base.ptr());

    m.attr("__version__") = std::string(code_version());
    m.attr("HBAR_EV_FS") = constants::hbar;

    m.def("transverse_wavevector", &transverse_wavevector, py::arg("l_y_nm"), py::arg("l_z_nm"));
    m.def("mode_energy", &mode_energy, py::arg("q_per_nm"), py::arg("q0_per_nm"), py::arg("epsilon"));
    m.def("wavevector_at_energy", &wavevector_at_energy, py::arg("energy_eV"), py::arg("q0_per_nm"),
          py::arg("epsilon"));
    m.def(
        "mode_set",
        [](std::size_t n_molecules, std::size_t count, const std::string& directionality) {
            WireConfig w;
            w.n_molecules = n_molecules;
            const auto set = build_mode_set(w, ModeCount{count}, directionality_from_string(directionality));
            py::dict d;
            d["modes"] = modes_list(set);
            d["realized_cutoff_eV"] = set.realized_cutoff();
            d["spacing_per_nm"] = set.spacing();
            return d;
        },
        py::arg("n_molecules"), py::arg("count"), py::arg("directionality") = "bidirectional",
        "Cavity modes of the default wire cross-section (a = 10 nm, L_y = 200 nm, L_z = 400 nm, eps = 3).");

    m.def(
        "sample_realization",
        [](std::size_t n_molecules, double sigma_energy, double sigma_position, std::uint64_t seed) {
            WireConfig w;
            w.n_molecules = n_molecules;
            const auto r = sample_realization(w, DisorderSpec{sigma_energy, sigma_position}, seed);
            return py::make_tuple(r.energies, r.positions);
        },
        py::arg("n_molecules"), py::arg("sigma_energy_eV"), py::arg("sigma_position_nm"), py::arg("seed"));
    m.def("derive_seed", &derive_seed, py::arg("master_seed"), py::arg("index"));

    m.def("hopfield_molecular_fraction", &hopfield_molecular_fraction, py::arg("mode_energy_eV"),
          py::arg("exciton_energy_eV"), py::arg("rabi_splitting_eV"));
    m.def("truncation_error",
          [](const std::vector<double>& d, const std::vector<double>& ref) { return truncation_error(d, ref); },
          py::arg("d"), py::arg("d_ref"));

    m.def(
        "config_hash",
        [](const std::string& toml, const std::vector<std::string>& overrides) {
            return config_hash(resolve_text(toml, overrides).simulation);
        },
        py::arg("toml"), py::arg("overrides") = std::vector<std::string>{});
    m.def(
        "simulate",
        [](const std::string& toml, const std::vector<std::string>& overrides, std::optional<std::size_t> realizations,
           std::optional<std::uint64_t> seed, std::size_t workers) {
            const auto c = resolve_text(toml, overrides);
            EnsembleOptions opt;
            opt.workers = workers;
            EnsembleResult r;
            {
                py::gil_scoped_release release;
                r = run_ensemble(c.simulation, realizations.value_or(c.ensemble.realizations),
                                 seed.value_or(c.ensemble.seed), opt);
            }
            return ensemble_dict(r);
        },
        py::arg("toml"), py::arg("overrides") = std::vector<std::string>{}, py::arg("realizations") = py::none(),
        py::arg("seed") = py::none(), py::arg("workers") = 1,
        "Runs the ensemble described by a TOML document and returns the aggregated observables.");

    m.def(
        "run",
        [](const std::string& target, const std::string& out_dir, bool full, std::vector<std::string> overrides,
           std::optional<std::uint64_t> seed, std::optional<std::size_t> realizations, std::optional<std::size_t> workers,
           std::optional<std::string> group) {
            RunOptions o;
            o.tier = full ? Tier::full : Tier::desk;
            o.out_dir = out_dir;
            o.overrides = std::move(overrides);
            o.seed = seed;
            o.realizations = realizations;
            o.workers = workers;
            o.group = std::move(group);
            RunReport report;
            {
                py::gil_scoped_release release;
                report = is_preset(target) ? run_preset(target, o) : run_config_file(target, o);
            }
            return report.files;
        },
        py::arg("target"), py::arg("out_dir"), py::arg("full") = false,
        py::arg("overrides") = std::vector<std::string>{}, py::arg("seed") = py::none(),
        py::arg("realizations") = py::none(), py::arg("workers") = py::none(), py::arg("group") = py::none(),
        "Runs a preset or a configuration file, writing outputs and a manifest; returns the written files.");
    m.def("preset_names", &preset_names);
}
