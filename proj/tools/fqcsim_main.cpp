#include "fqcsim/commands.hpp"
#include "fqcsim/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

/// Flag values are collected as a JSON patch and merged over the config file,
/// so flags and files pass through the same strict parser.
struct Flags {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> grid_points;
    std::optional<double> tf;
    std::optional<int> n;
    std::optional<double> v;
    std::optional<double> gamma;
    std::optional<double> hole;
    std::optional<double> omega0;
    std::optional<double> delta;
    std::optional<std::string> model;
    std::optional<std::string> initial;

    bool sidebands = false;
    bool markov = false;
    std::optional<std::string> sideband_method;
    std::optional<double> sideband_tf;
    std::optional<int> sideband_points;
    std::optional<int> pairs;
    std::optional<std::string> domain;
    std::optional<int> bootstrap;
    std::optional<double> omega_guess;
    std::optional<double> gamma_guess;
    std::optional<double> revival_start;
    std::optional<std::string> n_values;
    std::optional<std::string> v_values;
    std::optional<std::string> metric;
    std::optional<double> cell_budget;
    bool size_scan = false;
    bool adaptive = false;
    std::optional<std::string> sizes;
    std::optional<int> flat_size;
    std::optional<int> adaptive_size;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file (strict schema)");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "sampling seed");
    cmd->add_option("--grid-points", f.grid_points, "uniform time-grid points on [0, t_f]");
    cmd->add_option("--tf", f.tf, "final time in units of 1/Gamma");
    cmd->add_option("--N", f.n, "FQC half-size: levels k = -N..N");
    cmd->add_option("--v", f.v, "FQC coupling");
    cmd->add_option("--gamma", f.gamma, "target decay rate");
    cmd->add_option("--model", f.model, "decay, rabi or adaptive");
}

void add_drive(CLI::App* cmd, Flags& f) {
    cmd->add_option("--omega0", f.omega0, "Rabi coupling Omega0");
    cmd->add_option("--delta", f.delta, "detuning Delta");
    cmd->add_option("--hole", f.hole, "adaptive hole half-width (default Omega0/2)");
    cmd->add_option("--initial", f.initial, "initial state: e, g or 're_g,im_g,re_e,im_e'");
}

void add_sideband_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--method", f.sideband_method, "closed, quadrature or simulated");
    cmd->add_option("--sideband-tf", f.sideband_tf, "final time for quadrature/simulated");
    cmd->add_option("--sideband-points", f.sideband_points, "grid points for quadrature");
}

void add_markov_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--pairs", f.pairs, "number of sampled state pairs");
    cmd->add_option("--domain", f.domain, "sampling domain: system or full");
    cmd->add_option("--bootstrap", f.bootstrap, "bootstrap resamples for the standard error");
}

fqcsim::Json initial_json(const std::string& text) {
    if (text == "e" || text == "g") return text;
    const auto x = fqcsim::parse_real_list(text);
    if (x.size() != 4) throw fqcsim::ConfigError("--initial needs e, g or four numbers");
    return fqcsim::Json{{"g", {x[0], x[1]}}, {"e", {x[2], x[3]}}};
}

fqcsim::Json flag_patch(const Flags& f) {
    fqcsim::Json p = fqcsim::Json::object();
    auto set = [&](const char* key, const auto& opt) {
        if (opt) p[key] = *opt;
    };
    set("out", f.out);
    set("seed", f.seed);
    set("grid_points", f.grid_points);
    set("t_f", f.tf);
    set("N", f.n);
    set("v", f.v);
    set("gamma", f.gamma);
    set("hole", f.hole);
    set("Omega0", f.omega0);
    set("Delta", f.delta);
    set("model", f.model);
    if (f.initial) p["initial"] = initial_json(*f.initial);

    auto section = [&](const char* name) -> fqcsim::Json& {
        if (!p.contains(name)) p[name] = fqcsim::Json::object();
        return p[name];
    };
    if (f.sidebands) section("sidebands")["enabled"] = true;
    if (f.sideband_method) section("sidebands")["method"] = *f.sideband_method;
    if (f.sideband_tf) section("sidebands")["t_f"] = *f.sideband_tf;
    if (f.sideband_points) section("sidebands")["grid_points"] = *f.sideband_points;
    if (f.markov) section("markov")["enabled"] = true;
    if (f.pairs) section("markov")["pairs"] = *f.pairs;
    if (f.domain) section("markov")["domain"] = *f.domain;
    if (f.bootstrap) section("markov")["bootstrap"] = *f.bootstrap;
    if (f.omega_guess) section("fit")["omega_guess"] = *f.omega_guess;
    if (f.gamma_guess) section("fit")["gamma_guess"] = *f.gamma_guess;
    if (f.revival_start) section("revival")["search_start"] = *f.revival_start;
    if (f.n_values) section("sweep")["n_values"] = fqcsim::parse_int_list(*f.n_values);
    if (f.v_values) section("sweep")["v_values"] = fqcsim::parse_real_list(*f.v_values);
    if (f.metric) section("sweep")["metric"] = *f.metric;
    if (f.cell_budget) section("sweep")["cell_budget"] = *f.cell_budget;
    if (f.size_scan) section("sweep")["size_scan"] = true;
    if (f.adaptive) section("sweep")["adaptive"] = true;
    if (f.sizes) section("sweep")["sizes"] = fqcsim::parse_int_list(*f.sizes);
    if (f.flat_size) section("compare")["flat_size"] = *f.flat_size;
    if (f.adaptive_size) section("compare")["adaptive_size"] = *f.adaptive_size;
    return p;
}

fqcsim::RunConfig resolve(const std::string& command, const Flags& f) {
    fqcsim::RunConfig cfg = fqcsim::default_config(command);
    if (!f.config_path.empty()) {
        fqcsim::Json file;
        try {
            file = fqcsim::Json::parse(fqcsim::read_text_file(f.config_path));
        } catch (const nlohmann::json::parse_error& ex) {
            throw fqcsim::ConfigError("config " + f.config_path + " is not valid JSON: " + ex.what());
        }
        cfg = fqcsim::apply_json(cfg, file);
    }
    return fqcsim::apply_json(cfg, flag_patch(f));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite quasi-continuum emulation of non-Hermitian dynamics"};
    app.require_subcommand(1, 1);
    Flags f;

    auto* decay = app.add_subcommand("decay", "single level decaying into a flat FQC");
    add_common(decay, f);
    decay->add_option("--revival-start", f.revival_start, "earliest revival search time");

    auto* rabi = app.add_subcommand("rabi", "driven two-level system against H_eff");
    add_common(rabi, f);
    add_drive(rabi, f);
    rabi->add_flag("--sidebands", f.sidebands, "also write the sideband spectrum");
    rabi->add_flag("--markov", f.markov, "also write the non-Markovianity trajectory");
    add_sideband_flags(rabi, f);
    add_markov_flags(rabi, f);

    auto* sweep = app.add_subcommand("sweep", "(N, v) parameter map or FQC size scan");
    add_common(sweep, f);
    add_drive(sweep, f);
    sweep->add_option("--n-values", f.n_values, "N values: a:b:step or x,y,z");
    sweep->add_option("--v-values", f.v_values, "v values: a:b:step or x,y,z");
    sweep->add_option("--metric", f.metric, "d1, d2 or fit");
    sweep->add_option("--cell-budget", f.cell_budget, "per-cell wall-clock budget in seconds");
    sweep->add_flag("--size-scan", f.size_scan, "scan FQC sizes instead of an (N, v) map");
    sweep->add_flag("--adaptive", f.adaptive, "use the adaptive FQC (size scan: add it)");
    sweep->add_option("--sizes", f.sizes, "FQC sizes for --size-scan");

    auto* sidebands = app.add_subcommand("sidebands", "FQC occupation spectrum |c_k|^2");
    add_common(sidebands, f);
    add_drive(sidebands, f);
    add_sideband_flags(sidebands, f);

    auto* markov = app.add_subcommand("markov", "trace-distance non-Markovianity");
    add_common(markov, f);
    add_drive(markov, f);
    add_markov_flags(markov, f);
    markov->add_option("--revival-start", f.revival_start, "earliest revival search time");

    auto* fit = app.add_subcommand("fit", "fit Omega~ and Gamma~ to pi_e(t)");
    add_common(fit, f);
    add_drive(fit, f);
    fit->add_option("--omega-guess", f.omega_guess, "initial Omega~ (default Omega0)");
    fit->add_option("--gamma-guess", f.gamma_guess, "initial Gamma~");

    auto* compare = app.add_subcommand("adaptive-compare", "flat against adaptive FQC");
    add_common(compare, f);
    add_drive(compare, f);
    compare->add_option("--flat-size", f.flat_size, "levels in the flat FQC");
    compare->add_option("--adaptive-size", f.adaptive_size, "levels in the adaptive FQC (even)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const fqcsim::RunConfig cfg = resolve(command, f);
        const fqcsim::CommandOutput out = fqcsim::run_command(command, cfg);
        fqcsim::write_outputs(out, cfg.out);
        std::cout << out.summary.dump(2) << '\n';
        return kOk;
    } catch (const fqcsim::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return kConfigError;
    } catch (const fqcsim::NumericalError& ex) {
        std::cerr << "numerical error: " << ex.what() << '\n';
        return kNumericalError;
    } catch (const fqcsim::IoError& ex) {
        std::cerr << "io error: " << ex.what() << '\n';
        return kIoError;
    } catch (const std::exception& ex) {
        std::cerr << "numerical error: " << ex.what() << '\n';
        return kNumericalError;
    }
}
