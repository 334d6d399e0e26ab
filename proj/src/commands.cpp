#include "fqcsim/commands.hpp"

#include "fqcsim/analysis.hpp"
#include "fqcsim/errors.hpp"
#include "fqcsim/metrics.hpp"
#include "fqcsim/reference.hpp"
#include "fqcsim/sweep.hpp"

#include <numbers>
#include <sstream>

namespace fqcsim {

namespace {

void require_model(const RunConfig& cfg, const std::string& command,
                   std::initializer_list<const char*> allowed) {
    for (const char* m : allowed)
        if (cfg.model == m) return;
    std::string list;
    for (const char* m : allowed) list += (list.empty() ? "" : ", ") + std::string(m);
    throw ConfigError("command '" + command + "' needs model " + list + ", got '" + cfg.model + "'");
}

HamiltonianMatrix driven_hamiltonian(const RunConfig& cfg) {
    return cfg.model == "adaptive" ? build_adaptive(cfg.fqc_spec(), cfg.drive_spec())
                                   : build_two_level(cfg.fqc_spec(), cfg.drive_spec());
}

NonHermitianSpec driven_model(const RunConfig& cfg) {
    return NonHermitianSpec{cfg.gamma, cfg.drive_spec()};
}

void add_json(CommandOutput& out, const std::string& name, const Json& j) {
    out.files.push_back({name, j.dump(2) + "\n"});
}

Json resolved_config_file(const RunConfig& cfg) { return to_json(cfg); }

void append_pair(std::ostringstream& out, cplx z) {
    out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
}

/// Literal, projected and Markovian-limit source terms along the run.
std::string source_csv(const HamiltonianMatrix& h, const StateVector& psi0,
                       std::span<const double> grid, double gamma, const Json& prov) {
    const Propagator prop(h);
    const Eigen::VectorXcd coeffs = prop.coefficients(psi0.amplitudes);
    std::ostringstream out;
    out << "# config: " << prov.dump() << '\n';
    out << "t";
    for (const char* group : {"lit", "proj", "markov"})
        for (const char* e : {"gg", "ge", "eg", "ee"})
            out << ',' << group << '_' << e << "_re," << group << '_' << e << "_im";
    out << '\n';
    StateVector psi;
    psi.basis_labels = h.basis_labels;
    for (double t : grid) {
        psi.amplitudes = prop.state_at(coeffs, t);
        const Eigen::Vector2cd sys = psi.amplitudes.head(2);
        const Eigen::Matrix2cd rho = sys * sys.adjoint();
        const Eigen::Matrix2cd lit = source_term(h, psi);
        const Eigen::Matrix2cd proj = projected_source(h, psi);
        const Eigen::Matrix2cd mk = markovian_source(gamma, rho);
        out << format_double(t);
        for (const Eigen::Matrix2cd* m : {&lit, &proj, &mk})
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) append_pair(out, (*m)(i, j));
        out << '\n';
    }
    return out.str();
}

SidebandSpectrum sidebands_for(const RunConfig& cfg) {
    SidebandOptions so;
    so.method = sideband_method_from_string(cfg.sidebands.method);
    so.t_final = cfg.sidebands.t_final;
    so.grid_points = cfg.sidebands.grid_points;
    so.initial = cfg.initial_system();
    return sideband_spectrum(cfg.fqc_spec(), cfg.drive_spec(), so);
}

PairSampler sampler_for(const RunConfig& cfg) {
    PairSampler s;
    s.count = cfg.markov.pairs;
    s.seed = cfg.seed;
    s.domain = sampling_domain_from_string(cfg.markov.domain);
    s.bootstrap_resamples = cfg.markov.bootstrap;
    return s;
}

CommandOutput cmd_decay(const RunConfig& cfg, const Json& prov) {
    require_model(cfg, "decay", {"decay"});
    const HamiltonianMatrix h = build_single_level(cfg.fqc_spec());
    const auto grid = uniform_grid(cfg.t_final, cfg.grid_points);
    const TimeSeries fqc = propagate(h, basis_state(h, "e"), grid);
    const TimeSeries ref = decay_single(cfg.gamma, 1.0, grid);

    Json metrics{{"provenance", prov}, {"d1", to_json(d1(fqc, cfg.gamma, cfg.t_final))}};
    if (cfg.v > 0.0) {
        metrics["zeno"] = to_json(zeno_time(h));
        RevivalOptions ro;
        ro.model = NonHermitianSpec{cfg.gamma, std::nullopt};
        ro.search_start = cfg.revival.search_start;
        ro.threshold_fraction = cfg.revival.threshold_fraction;
        metrics["revival"] = to_json(revival_time(fqc, ro));
        const double gap = cfg.fqc_spec().gap();
        metrics["revival_law"] = {{"gap", gap}, {"T_r_predicted", 2.0 * std::numbers::pi / gap}};
    } else {
        metrics["zeno"] = nullptr;
        metrics["revival"] = nullptr;
        metrics["notes"] = "v = 0: the excited level is decoupled, pi_e stays 1";
    }

    CommandOutput out;
    out.files.push_back({"timeseries.csv", timeseries_csv(fqc, prov)});
    out.files.push_back({"reference.csv", timeseries_csv(ref, prov)});
    add_json(out, "metrics.json", metrics);
    out.summary = {{"d1", metrics["d1"]["value"]}};
    if (cfg.v > 0.0) {
        out.summary["T_Z"] = metrics["zeno"]["parameters"]["T_Z"];
        out.summary["revival_found"] = metrics["revival"]["found"];
        if (metrics["revival"]["found"].get<bool>())
            out.summary["T_r"] = metrics["revival"]["parameters"]["T_r"];
    }
    return out;
}

CommandOutput cmd_rabi(const RunConfig& cfg, const Json& prov, int threads) {
    require_model(cfg, "rabi", {"rabi", "adaptive"});
    const HamiltonianMatrix h = driven_hamiltonian(cfg);
    const auto grid = uniform_grid(cfg.t_final, cfg.grid_points);
    const StateVector psi0 = system_state(h, cfg.initial_system());
    const TimeSeries fqc = propagate(h, psi0, grid);
    const TimeSeries ref = evolve_nonhermitian(driven_model(cfg), psi0.amplitudes.head(2), grid);

    Json metrics{{"provenance", prov},
                 {"d2", to_json(d2(fqc, ref, cfg.t_final))},
                 {"d2_projected", to_json(d2(fqc, ref, cfg.t_final, TraceForm::Projected))},
                 {"regime", to_string(classify_regime(cfg.omega0, cfg.gamma))},
                 {"levels", h.fqc_energies.size()}};
    CommandOutput out;
    out.files.push_back({"timeseries.csv", timeseries_csv(fqc, prov)});
    out.files.push_back({"reference.csv", timeseries_csv(ref, prov)});
    out.files.push_back({"source.csv", source_csv(h, psi0, grid, cfg.gamma, prov)});
    if (cfg.sidebands.enabled) {
        const SidebandSpectrum s = sidebands_for(cfg);
        out.files.push_back({"spectrum.csv", spectrum_csv(s, prov)});
        metrics["sidebands"] = {{"method", to_string(s.method)}, {"n_max", n_max(s)}};
    }
    if (cfg.markov.enabled) {
        const NonMarkovianity nm =
            nonmarkovianity(h, cfg.t_final, cfg.grid_points, sampler_for(cfg), threads);
        out.files.push_back({"sigma.csv", sigma_csv(nm, prov)});
        metrics["markov"] = to_json(nm);
    }
    add_json(out, "metrics.json", metrics);
    out.summary = {{"d2", metrics["d2"]["value"]}, {"regime", metrics["regime"]}};
    if (cfg.sidebands.enabled) out.summary["n_max"] = metrics["sidebands"]["n_max"];
    if (cfg.markov.enabled) out.summary["sigma"] = metrics["markov"]["estimate"];
    return out;
}

CommandOutput cmd_sidebands(const RunConfig& cfg, const Json& prov) {
    require_model(cfg, "sidebands", {"rabi", "adaptive"});
    const SidebandSpectrum s = sidebands_for(cfg);
    Json j = to_json(s);
    j["provenance"] = prov;
    j["peak_energy_over_omega0"] =
        cfg.omega0 > 0.0 ? n_max(s) * cfg.fqc_spec().gap() / cfg.omega0 : 0.0;
    CommandOutput out;
    out.files.push_back({"spectrum.csv", spectrum_csv(s, prov)});
    add_json(out, "spectrum.json", j);
    out.summary = {{"method", to_string(s.method)}, {"n_max", n_max(s)}};
    return out;
}

CommandOutput cmd_markov(const RunConfig& cfg, const Json& prov, int threads) {
    require_model(cfg, "markov", {"rabi", "adaptive"});
    const HamiltonianMatrix h = driven_hamiltonian(cfg);
    const NonMarkovianity nm =
        nonmarkovianity(h, cfg.t_final, cfg.grid_points, sampler_for(cfg), threads);
    const int points = resolved_grid_points(cfg.t_final, cfg.omega0, cfg.grid_points);
    const auto grid = uniform_grid(cfg.t_final, points);
    const StateVector psi0 = system_state(h, cfg.initial_system());
    const TimeSeries fqc = propagate(h, psi0, grid);

    Json j{{"provenance", prov}, {"markov", to_json(nm)}};
    RevivalOptions ro;
    ro.model = driven_model(cfg);
    ro.search_start = cfg.revival.search_start;
    ro.threshold_fraction = cfg.revival.threshold_fraction;
    j["revival"] = to_json(revival_time(fqc, ro));
    CommandOutput out;
    out.files.push_back({"sigma.csv", sigma_csv(nm, prov)});
    out.files.push_back({"timeseries.csv", timeseries_csv(fqc, prov)});
    add_json(out, "markov.json", j);
    out.summary = {{"estimate", nm.estimate}, {"standard_error", nm.standard_error}};
    return out;
}

CommandOutput cmd_fit(const RunConfig& cfg, const Json& prov) {
    require_model(cfg, "fit", {"rabi", "adaptive"});
    const HamiltonianMatrix h = driven_hamiltonian(cfg);
    const auto grid = uniform_grid(cfg.t_final, cfg.grid_points);
    const StateVector psi0 = system_state(h, cfg.initial_system());
    const TimeSeries fqc = propagate(h, psi0, grid);
    const TimeSeries ref = evolve_nonhermitian(driven_model(cfg), psi0.amplitudes.head(2), grid);
    FitOptions fo;
    fo.omega_guess = cfg.fit.omega_guess < 0.0 ? cfg.omega0 : cfg.fit.omega_guess;
    fo.gamma_guess = cfg.fit.gamma_guess;
    const FitReport fit = fit_effective_params(fqc, fo);
    Json j{{"provenance", prov},
           {"fit", to_json(fit)},
           {"d2", to_json(d2(fqc, ref, cfg.t_final))},
           {"Omega_predicted", damped_rabi_frequency(cfg.omega0, cfg.gamma)}};
    CommandOutput out;
    out.files.push_back({"timeseries.csv", timeseries_csv(fqc, prov)});
    add_json(out, "fit.json", j);
    out.summary = {{"Omega_tilde", fit.at("Omega_tilde")},
                   {"Gamma_tilde", fit.at("Gamma_tilde")},
                   {"converged", fit.converged}};
    return out;
}

SizeScanConfig scan_config(const RunConfig& cfg) {
    SizeScanConfig sc;
    sc.drive = cfg.drive_spec();
    sc.coupling_v = cfg.v;
    sc.gamma = cfg.gamma;
    sc.t_final = cfg.t_final;
    sc.grid_points = cfg.grid_points;
    sc.hole_half_width = cfg.hole;
    sc.cell_budget_seconds = cfg.sweep.cell_budget_seconds;
    return sc;
}

CommandOutput cmd_adaptive_compare(const RunConfig& cfg, const Json& prov) {
    require_model(cfg, "adaptive-compare", {"rabi", "adaptive"});
    const SizeScanConfig sc = scan_config(cfg);
    FqcSpec flat;
    flat.n_half = (cfg.compare.flat_size - 1) / 2;
    flat.coupling_v = cfg.v;
    flat.gamma_target = cfg.gamma;
    const FqcSpec adaptive = adaptive_spec_for_size(
        cfg.compare.adaptive_size, cfg.v, cfg.hole.value_or(cfg.omega0 / 2.0), cfg.gamma);
    const SizeScanVariant vf = evaluate_variant(flat, sc);
    const SizeScanVariant va = evaluate_variant(adaptive, sc);
    std::vector<SizeScanPoint> pts(1);
    pts[0].size = cfg.compare.flat_size;
    pts[0].flat = vf;
    pts[0].adaptive = va;

    const auto grid = uniform_grid(cfg.t_final, cfg.grid_points);
    CommandOutput out;
    for (const auto& [name, spec] : {std::pair{"flat.csv", flat}, std::pair{"adaptive.csv", adaptive}}) {
        const HamiltonianMatrix h = build_two_level(spec, cfg.drive_spec());
        out.files.push_back({name, timeseries_csv(propagate(h, basis_state(h, "e"), grid), prov)});
    }
    SystemVector e(2);
    e << 0.0, 1.0;
    out.files.push_back(
        {"reference.csv", timeseries_csv(evolve_nonhermitian(driven_model(cfg), e, grid), prov)});
    Json j{{"provenance", prov}, {"compare", to_json(pts)[0]}};
    add_json(out, "compare.json", j);
    out.summary = j["compare"];
    return out;
}

CommandOutput cmd_sweep(const RunConfig& cfg, const Json& prov, int threads) {
    CommandOutput out;
    if (cfg.sweep.size_scan) {
        SizeScanConfig sc = scan_config(cfg);
        sc.sizes = cfg.sweep.sizes;
        sc.flat_and_adaptive = cfg.sweep.adaptive;
        const auto pts = run_size_scan(sc, threads);
        out.files.push_back({"size_scan.csv", size_scan_csv(pts, prov)});
        Json j{{"provenance", prov}, {"points", to_json(pts)}};
        add_json(out, "size_scan.json", j);
        out.summary = {{"points", pts.size()}};
        return out;
    }
    SweepGrid g;
    g.n_values = cfg.sweep.n_values;
    g.v_values = cfg.sweep.v_values;
    g.metric = metric_from_string(cfg.sweep.metric);
    g.cell_budget_seconds = cfg.sweep.cell_budget_seconds;
    g.seed = cfg.seed;
    g.fixed.model = cfg.sweep.adaptive || cfg.model == "adaptive" ? Model::Adaptive
                    : cfg.model == "rabi"                           ? Model::TwoLevel
                                                                    : Model::Single;
    g.fixed.t_final = cfg.t_final;
    g.fixed.omega0 = cfg.omega0;
    g.fixed.detuning = cfg.delta;
    g.fixed.gamma = cfg.gamma;
    g.fixed.grid_points = cfg.grid_points;
    g.fixed.hole_half_width = cfg.hole;
    const SweepMap map = run_sweep(g, threads);
    out.files.push_back({"sweep.csv", sweep_csv(map, prov)});
    Json j = to_json(map);
    j["provenance"] = prov;
    add_json(out, "sweep.json", j);
    std::size_t failed = 0;
    for (const auto& c : map.cells) failed += c.ok ? 0 : 1;
    out.summary = {{"cells", map.cells.size()}, {"failed_cells", failed}};
    return out;
}

}  // namespace

const OutputFile& CommandOutput::file(const std::string& name) const {
    for (const auto& f : files)
        if (f.name == name) return f;
    throw std::out_of_range("no output file named " + name);
}

Json provenance(const std::string& command, const RunConfig& cfg) {
    return Json{{"command", command},
                {"code_version", code_version()},
                {"seed", cfg.seed},
                {"config", to_json(cfg)}};
}

CommandOutput run_command(const std::string& command, const RunConfig& cfg, int threads) {
    cfg.validate();
    const Json prov = provenance(command, cfg);
    CommandOutput out;
    if (command == "decay") out = cmd_decay(cfg, prov);
    else if (command == "rabi") out = cmd_rabi(cfg, prov, threads);
    else if (command == "sidebands") out = cmd_sidebands(cfg, prov);
    else if (command == "markov") out = cmd_markov(cfg, prov, threads);
    else if (command == "fit") out = cmd_fit(cfg, prov);
    else if (command == "adaptive-compare") out = cmd_adaptive_compare(cfg, prov);
    else if (command == "sweep") out = cmd_sweep(cfg, prov, threads);
    else throw ConfigError("unknown command '" + command + "'");
    add_json(out, "resolved_config.json", resolved_config_file(cfg));
    return out;
}

void write_outputs(const CommandOutput& out, const std::filesystem::path& dir) {
    for (const auto& f : out.files) write_text_file(dir / f.name, f.content);
}

}  // namespace fqcsim
