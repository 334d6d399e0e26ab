#include "fqcsim/analysis.hpp"
#include "fqcsim/commands.hpp"
#include "fqcsim/config.hpp"
#include "fqcsim/errors.hpp"
#include "fqcsim/evolve.hpp"
#include "fqcsim/hamiltonian.hpp"
#include "fqcsim/io.hpp"
#include "fqcsim/metrics.hpp"
#include "fqcsim/reference.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fqcsim;

namespace {

StateVector initial_state(const HamiltonianMatrix& h, const py::object& initial) {
    if (py::isinstance<py::str>(initial)) return basis_state(h, initial.cast<std::string>());
    return system_state(h, initial.cast<Eigen::VectorXcd>());
}

py::array_t<cplx> rho_array(const TimeSeries& s) {
    const py::ssize_t n = static_cast<py::ssize_t>(s.size());
    const py::ssize_t d = s.system_dim;
    py::array_t<cplx> out({n, d, d});
    auto r = out.mutable_unchecked<3>();
    for (py::ssize_t t = 0; t < n; ++t)
        for (py::ssize_t i = 0; i < d; ++i)
            for (py::ssize_t j = 0; j < d; ++j) r(t, i, j) = s.rho[t].entries(i, j);
    return out;
}

py::dict fit_dict(const FitReport& r) {
    py::dict d;
    d["kind"] = r.kind;
    d["parameters"] = r.parameters;
    d["residual_norm"] = r.residual_norm;
    d["converged"] = r.converged;
    d["found"] = r.found;
    d["notes"] = r.notes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite quasi-continuum emulation of non-Hermitian dynamics";
    m.attr("__version__") = code_version();

    auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    (void)config_error;

    py::class_<FqcSpec>(m, "FqcSpec")
        .def(py::init([](int n_half, double v, double gamma, std::optional<double> hole) {
                 FqcSpec s;
                 s.n_half = n_half;
                 s.coupling_v = v;
                 s.gamma_target = gamma;
                 if (hole) s.hole = Hole{*hole};
                 return s;
             }),
             py::arg("n_half") = 15, py::arg("v") = 0.3, py::arg("gamma") = 1.0,
             py::arg("hole") = py::none())
        .def_readwrite("n_half", &FqcSpec::n_half)
        .def_readwrite("v", &FqcSpec::coupling_v)
        .def_readwrite("gamma", &FqcSpec::gamma_target)
        .def_property(
            "hole", [](const FqcSpec& s) { return s.hole ? std::optional<double>(s.hole->half_width) : std::nullopt; },
            [](FqcSpec& s, std::optional<double> w) { s.hole = w ? std::optional<Hole>(Hole{*w}) : std::nullopt; })
        .def_property_readonly("gap", &FqcSpec::gap)
        .def_property_readonly("level_count", &FqcSpec::level_count);

    py::class_<DriveSpec>(m, "DriveSpec")
        .def(py::init([](double omega0, double delta) { return DriveSpec{omega0, delta}; }),
             py::arg("omega0") = 0.0, py::arg("delta") = 0.0)
        .def_readwrite("omega0", &DriveSpec::rabi_omega0)
        .def_readwrite("delta", &DriveSpec::detuning_delta);

    py::class_<HamiltonianMatrix>(m, "Hamiltonian")
        .def_readonly("matrix", &HamiltonianMatrix::entries)
        .def_readonly("basis_labels", &HamiltonianMatrix::basis_labels)
        .def_readonly("excited_index", &HamiltonianMatrix::excited_index)
        .def_readonly("fqc_energies", &HamiltonianMatrix::fqc_energies)
        .def_property_readonly("dim", &HamiltonianMatrix::dim)
        .def_property_readonly("system_dim", &HamiltonianMatrix::system_dim);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_readonly("times", &TimeSeries::times)
        .def_readonly("pi_e", &TimeSeries::pi_e)
        .def_readonly("system_dim", &TimeSeries::system_dim)
        .def_property_readonly("rho", &rho_array)
        .def("__len__", &TimeSeries::size);

    m.def("fermi_rate", &fermi_rate, py::arg("v"), py::arg("gap"));
    m.def("coupling_for_gap", &coupling_for_gap, py::arg("gap"), py::arg("gamma") = 1.0);
    m.def("build_single_level", &build_single_level, py::arg("spec"));
    m.def("build_two_level", &build_two_level, py::arg("spec"), py::arg("drive"));
    m.def("build_adaptive", &build_adaptive, py::arg("spec"), py::arg("drive"));
    m.def("adaptive_spec_for_size", &adaptive_spec_for_size, py::arg("levels"), py::arg("v"),
          py::arg("hole_half_width"), py::arg("gamma") = 1.0);
    m.def("uniform_grid", &uniform_grid, py::arg("t_final"), py::arg("points"));

    m.def(
        "propagate",
        [](const HamiltonianMatrix& h, const py::object& initial, const std::vector<double>& times) {
            return propagate(h, initial_state(h, initial), times);
        },
        py::arg("hamiltonian"), py::arg("initial"), py::arg("times"),
        "Exact propagation; `initial` is a basis label or system amplitudes (c_g, c_e).");

    m.def(
        "decay_reference",
        [](double gamma, double pi0, const std::vector<double>& times) { return decay_single(gamma, pi0, times); },
        py::arg("gamma"), py::arg("pi0"), py::arg("times"));
    m.def(
        "nonhermitian_reference",
        [](const DriveSpec& drive, const Eigen::VectorXcd& psi0, const std::vector<double>& times, double gamma) {
            return evolve_nonhermitian(NonHermitianSpec{gamma, drive}, psi0, times);
        },
        py::arg("drive"), py::arg("psi0"), py::arg("times"), py::arg("gamma") = 1.0);

    m.def(
        "d1", [](const TimeSeries& s, double gamma, double tf) { return d1(s, gamma, tf).value; },
        py::arg("series"), py::arg("gamma"), py::arg("t_final"));
    m.def(
        "d2",
        [](const TimeSeries& s, const TimeSeries& ref, double tf, bool projected) {
            return d2(s, ref, tf, projected ? TraceForm::Projected : TraceForm::Completed).value;
        },
        py::arg("series"), py::arg("reference"), py::arg("t_final"), py::arg("projected") = false);
    m.def(
        "trace_distance",
        [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return trace_distance(a, b); },
        py::arg("rho"), py::arg("sigma"));

    m.def(
        "zeno_time", [](const HamiltonianMatrix& h) { return fit_dict(zeno_time(h)); },
        py::arg("hamiltonian"));
    m.def(
        "revival_time",
        [](const TimeSeries& s, double gamma, std::optional<DriveSpec> drive, double search_start) {
            RevivalOptions o;
            o.model = NonHermitianSpec{gamma, drive};
            o.search_start = search_start;
            return fit_dict(revival_time(s, o));
        },
        py::arg("series"), py::arg("gamma") = 1.0, py::arg("drive") = py::none(),
        py::arg("search_start") = -1.0);
    m.def(
        "fit_effective_params",
        [](const TimeSeries& s, double omega_guess, double gamma_guess) {
            FitOptions o;
            o.omega_guess = omega_guess;
            o.gamma_guess = gamma_guess;
            return fit_dict(fit_effective_params(s, o));
        },
        py::arg("series"), py::arg("omega_guess"), py::arg("gamma_guess") = 1.0);

    m.def(
        "sideband_spectrum",
        [](const FqcSpec& spec, const DriveSpec& drive, const std::string& method, double tf, int points) {
            SidebandOptions o;
            o.method = sideband_method_from_string(method);
            o.t_final = tf;
            o.grid_points = points;
            const auto s = sideband_spectrum(spec, drive, o);
            py::dict d;
            d["k"] = s.k;
            d["energy"] = s.energy;
            d["occupation"] = s.occupation;
            d["n_max"] = n_max(s);
            return d;
        },
        py::arg("spec"), py::arg("drive"), py::arg("method") = "closed", py::arg("t_final") = 8.0,
        py::arg("grid_points") = 8001);

    m.def(
        "nonmarkovianity",
        [](const HamiltonianMatrix& h, double tf, int points, int pairs, std::uint64_t seed,
           const std::string& domain, int bootstrap, int threads) {
            PairSampler ps;
            ps.count = pairs;
            ps.seed = seed;
            ps.domain = sampling_domain_from_string(domain);
            ps.bootstrap_resamples = bootstrap;
            const auto nm = nonmarkovianity(h, tf, points, ps, threads);
            py::dict d;
            d["times"] = nm.times;
            d["sigma"] = nm.sigma;
            d["estimate"] = nm.estimate;
            d["standard_error"] = nm.standard_error;
            d["best_pair"] = nm.best_pair;
            return d;
        },
        py::arg("hamiltonian"), py::arg("t_final"), py::arg("grid_points"), py::arg("pairs") = 256,
        py::arg("seed") = 1, py::arg("domain") = "system", py::arg("bootstrap") = 1000,
        py::arg("threads") = 0);

    m.def(
        "default_config", [](const std::string& cmd) { return to_json(default_config(cmd)).dump(); },
        py::arg("command"));
    m.def(
        "run_command",
        [](const std::string& cmd, const std::string& config_json, int threads) {
            Json patch;
            try {
                patch = Json::parse(config_json);
            } catch (const Json::parse_error& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            const auto cfg = apply_json(default_config(cmd), patch);
            CommandOutput out;
            {
                py::gil_scoped_release release;
                out = run_command(cmd, cfg, threads);
            }
            std::map<std::string, std::string> files;
            for (const auto& f : out.files) files[f.name] = f.content;
            return std::make_pair(out.summary.dump(), files);
        },
        py::arg("command"), py::arg("config_json") = "{}", py::arg("threads") = 0);
}
