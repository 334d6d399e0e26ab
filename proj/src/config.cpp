#include "fqcsim/config.hpp"

#include "fqcsim/errors.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace fqcsim {

namespace {

const std::vector<std::string> kCommands = {"decay",   "rabi", "sweep",           "sidebands",
                                            "markov",  "fit",  "adaptive-compare"};

void check_keys(const Json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw ConfigError("unknown key '" + item.key() + "' in " + where + " (allowed: " + list +
                              ")");
        }
    }
}

template <class T>
void read(const Json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
    }
}

void read_number(const Json& j, const char* key, double& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number())
        throw ConfigError("key '" + std::string(key) + "' in " + where + " must be a number");
    out = j.at(key).get<double>();
}

void read_int(const Json& j, const char* key, int& out, const std::string& where) {
    if (!j.contains(key)) return;
    const auto& x = j.at(key);
    if (!x.is_number_integer())
        throw ConfigError("key '" + std::string(key) + "' in " + where + " must be an integer");
    out = x.get<int>();
}

cplx read_complex(const Json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(where + " must be a number or [re, im]");
}

InitialState read_initial(const Json& j) {
    InitialState s;
    if (j.is_string()) {
        s.label = j.get<std::string>();
        if (s.label != "e" && s.label != "g")
            throw ConfigError("initial must be \"e\", \"g\" or {\"g\": .., \"e\": ..}");
        return s;
    }
    check_keys(j, "initial", {"g", "e"});
    std::array<cplx, 2> a{cplx{0.0, 0.0}, cplx{0.0, 0.0}};
    if (j.contains("g")) a[0] = read_complex(j.at("g"), "initial.g");
    if (j.contains("e")) a[1] = read_complex(j.at("e"), "initial.e");
    s.label.clear();
    s.amplitudes = a;
    return s;
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

FqcSpec RunConfig::fqc_spec() const {
    FqcSpec spec;
    spec.n_half = n_half;
    spec.coupling_v = v;
    spec.gamma_target = gamma;
    if (model == "adaptive") spec.hole = Hole{hole.value_or(omega0 / 2.0)};
    return spec;
}

DriveSpec RunConfig::drive_spec() const { return DriveSpec{omega0, delta}; }

SystemVector RunConfig::initial_system() const {
    SystemVector c(2);
    if (initial.amplitudes) {
        c << (*initial.amplitudes)[0], (*initial.amplitudes)[1];
    } else if (initial.label == "g") {
        c << 1.0, 0.0;
    } else {
        c << 0.0, 1.0;
    }
    return c;
}

void RunConfig::validate() const {
    if (model != "decay" && model != "rabi" && model != "adaptive")
        throw ConfigError("model must be decay, rabi or adaptive, got '" + model + "'");
    fqc_spec().validate();
    drive_spec().validate();
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_f must be > 0");
    if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
    if (hole && !(*hole >= 0.0)) throw ConfigError("hole must be >= 0");
    if (model == "decay") {
        if (initial.amplitudes || initial.label != "e")
            throw ConfigError("the decay model has no ground state; initial must be \"e\"");
        if (omega0 != 0.0) throw ConfigError("the decay model has no drive; Omega0 must be 0");
    } else {
        const SystemVector c = initial_system();
        if (!(c.norm() > 0.0)) throw ConfigError("initial state has zero norm");
    }
    sideband_method_from_string(sidebands.method);
    if (!(sidebands.t_final > 0.0)) throw ConfigError("sidebands.t_f must be > 0");
    if (sidebands.grid_points < 2) throw ConfigError("sidebands.grid_points must be >= 2");
    if (markov.pairs < 1) throw ConfigError("markov.pairs must be >= 1");
    if (markov.bootstrap < 0) throw ConfigError("markov.bootstrap must be >= 0");
    sampling_domain_from_string(markov.domain);
    metric_from_string(sweep.metric);
    if (!(sweep.cell_budget_seconds > 0.0)) throw ConfigError("sweep.cell_budget must be > 0");
    for (int s : sweep.sizes)
        if (s < 1) throw ConfigError("sweep.sizes must be >= 1");
    if (compare.flat_size < 1) throw ConfigError("compare.flat_size must be >= 1");
    if (compare.adaptive_size < 2 || compare.adaptive_size % 2)
        throw ConfigError("compare.adaptive_size must be even and >= 2");
    if (!(revival.threshold_fraction > 0.0)) throw ConfigError("revival.threshold must be > 0");
}

RunConfig default_config(const std::string& command) {
    RunConfig c;
    if (command == "decay") return c;
    if (command == "sweep") {
        for (int n = 2; n <= 40; ++n) c.sweep.n_values.push_back(n);
        for (int i = 5; i <= 60; ++i) c.sweep.v_values.push_back(i / 100.0);
        for (int s = 15; s <= 101; s += 4) c.sweep.sizes.push_back(s);
        c.grid_points = 1001;
        return c;
    }
    c.model = "rabi";
    if (command == "rabi") {
        c.n_half = 30;
        c.omega0 = 1.0;
        c.t_final = 8.0;
    } else if (command == "sidebands") {
        c.n_half = 22;
        c.omega0 = 10.0;
        c.initial.label = "g";
        c.sidebands.enabled = true;
    } else if (command == "markov") {
        c.n_half = 25;
        c.v = 0.25;
        c.omega0 = 1.0;
        c.t_final = 24.0;
        c.grid_points = 2401;
        c.markov.enabled = true;
    } else if (command == "fit") {
        c.n_half = 17;
        c.omega0 = 10.0;
        c.grid_points = 4001;
    } else if (command == "adaptive-compare") {
        c.model = "adaptive";
        c.omega0 = 10.0;
        c.grid_points = 4001;
    } else {
        std::string list;
        for (const auto& k : kCommands) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("unknown command '" + command + "' (" + list + ")");
    }
    return c;
}

RunConfig apply_json(RunConfig c, const Json& j) {
    check_keys(j, "config",
               {"model", "N", "v", "gamma", "hole", "Omega0", "Delta", "t_f", "grid_points",
                "initial", "seed", "out", "sidebands", "markov", "fit", "revival", "sweep",
                "compare"});
    const std::string top = "config";
    read(j, "model", c.model, top);
    read_int(j, "N", c.n_half, top);
    read_number(j, "v", c.v, top);
    read_number(j, "gamma", c.gamma, top);
    if (j.contains("hole")) {
        if (j.at("hole").is_null()) {
            c.hole.reset();
        } else {
            double h = 0.0;
            read_number(j, "hole", h, top);
            c.hole = h;
        }
    }
    read_number(j, "Omega0", c.omega0, top);
    read_number(j, "Delta", c.delta, top);
    read_number(j, "t_f", c.t_final, top);
    read_int(j, "grid_points", c.grid_points, top);
    if (j.contains("initial")) c.initial = read_initial(j.at("initial"));
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            throw ConfigError("key 'seed' must be a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    read(j, "out", c.out, top);

    if (j.contains("sidebands")) {
        const auto& s = j.at("sidebands");
        check_keys(s, "sidebands", {"enabled", "method", "t_f", "grid_points"});
        read(s, "enabled", c.sidebands.enabled, "sidebands");
        read(s, "method", c.sidebands.method, "sidebands");
        read_number(s, "t_f", c.sidebands.t_final, "sidebands");
        read_int(s, "grid_points", c.sidebands.grid_points, "sidebands");
    }
    if (j.contains("markov")) {
        const auto& s = j.at("markov");
        check_keys(s, "markov", {"enabled", "pairs", "domain", "bootstrap"});
        read(s, "enabled", c.markov.enabled, "markov");
        read_int(s, "pairs", c.markov.pairs, "markov");
        read(s, "domain", c.markov.domain, "markov");
        read_int(s, "bootstrap", c.markov.bootstrap, "markov");
    }
    if (j.contains("fit")) {
        const auto& s = j.at("fit");
        check_keys(s, "fit", {"omega_guess", "gamma_guess"});
        read_number(s, "omega_guess", c.fit.omega_guess, "fit");
        read_number(s, "gamma_guess", c.fit.gamma_guess, "fit");
    }
    if (j.contains("revival")) {
        const auto& s = j.at("revival");
        check_keys(s, "revival", {"search_start", "threshold"});
        read_number(s, "search_start", c.revival.search_start, "revival");
        read_number(s, "threshold", c.revival.threshold_fraction, "revival");
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_keys(s, "sweep",
                   {"n_values", "v_values", "metric", "cell_budget", "size_scan", "sizes",
                    "adaptive"});
        read(s, "n_values", c.sweep.n_values, "sweep");
        read(s, "v_values", c.sweep.v_values, "sweep");
        read(s, "metric", c.sweep.metric, "sweep");
        read_number(s, "cell_budget", c.sweep.cell_budget_seconds, "sweep");
        read(s, "size_scan", c.sweep.size_scan, "sweep");
        read(s, "sizes", c.sweep.sizes, "sweep");
        read(s, "adaptive", c.sweep.adaptive, "sweep");
    }
    if (j.contains("compare")) {
        const auto& s = j.at("compare");
        check_keys(s, "compare", {"flat_size", "adaptive_size"});
        read_int(s, "flat_size", c.compare.flat_size, "compare");
        read_int(s, "adaptive_size", c.compare.adaptive_size, "compare");
    }
    return c;
}

Json to_json(const RunConfig& c) {
    Json initial;
    if (c.initial.amplitudes) {
        initial = Json{{"g", complex_json((*c.initial.amplitudes)[0])},
                       {"e", complex_json((*c.initial.amplitudes)[1])}};
    } else {
        initial = c.initial.label;
    }
    return Json{
        {"model", c.model},
        {"N", c.n_half},
        {"v", c.v},
        {"gamma", c.gamma},
        {"hole", c.hole ? Json(*c.hole) : Json(nullptr)},
        {"Omega0", c.omega0},
        {"Delta", c.delta},
        {"t_f", c.t_final},
        {"grid_points", c.grid_points},
        {"initial", initial},
        {"seed", c.seed},
        {"sidebands",
         {{"enabled", c.sidebands.enabled},
          {"method", c.sidebands.method},
          {"t_f", c.sidebands.t_final},
          {"grid_points", c.sidebands.grid_points}}},
        {"markov",
         {{"enabled", c.markov.enabled},
          {"pairs", c.markov.pairs},
          {"domain", c.markov.domain},
          {"bootstrap", c.markov.bootstrap}}},
        {"fit", {{"omega_guess", c.fit.omega_guess}, {"gamma_guess", c.fit.gamma_guess}}},
        {"revival",
         {{"search_start", c.revival.search_start},
          {"threshold", c.revival.threshold_fraction}}},
        {"sweep",
         {{"n_values", c.sweep.n_values},
          {"v_values", c.sweep.v_values},
          {"metric", c.sweep.metric},
          {"cell_budget", c.sweep.cell_budget_seconds},
          {"size_scan", c.sweep.size_scan},
          {"sizes", c.sweep.sizes},
          {"adaptive", c.sweep.adaptive}}},
        {"compare",
         {{"flat_size", c.compare.flat_size}, {"adaptive_size", c.compare.adaptive_size}}}};
}

std::vector<double> parse_real_list(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw ConfigError("cannot parse number '" + s + "'");
        return x;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError("range must be start:stop:step, got '" + text + "'");
        const double a = number(parts[0]);
        const double b = number(parts[1]);
        const double step = number(parts[2]);
        if (!(step > 0.0) || b < a) throw ConfigError("invalid range '" + text + "'");
        const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
        // computed as a + i*step so values do not accumulate rounding drift
        for (long i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double x : parse_real_list(text)) {
        if (x != std::round(x)) throw ConfigError("expected integers in '" + text + "'");
        out.push_back(static_cast<int>(std::lround(x)));
    }
    return out;
}

}  // namespace fqcsim
