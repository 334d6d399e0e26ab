#include "fqcsim/io.hpp"

#include "fqcsim/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fqcsim {

namespace {

void provenance_line(std::ostringstream& out, const Json& provenance) {
    out << "# config: " << provenance.dump() << '\n';
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json variant_json(const SizeScanVariant& v) {
    return Json{{"levels", v.levels},       {"n_half", v.n_half},
                {"Omega_tilde", v.omega_tilde}, {"Gamma_tilde", v.gamma_tilde},
                {"d2", v.d2},               {"converged", v.converged},
                {"ok", v.ok},               {"error", v.error}};
}

void variant_row(std::ostringstream& out, int size, const char* name, const SizeScanVariant& v) {
    out << size << ',' << name << ',' << v.levels << ',' << format_double(v.omega_tilde) << ','
        << format_double(v.gamma_tilde) << ',' << format_double(v.d2) << ','
        << (v.converged ? 1 : 0) << '\n';
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string timeseries_csv(const TimeSeries& series, const Json& provenance) {
    std::ostringstream out;
    provenance_line(out, provenance);
    const int d = series.system_dim;
    out << "t,pi_e";
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out << ",rho" << i << j << "_re,rho" << i << j << "_im";
    const bool fqc = !series.fqc_populations.empty();
    if (fqc)
        for (std::size_t k = 0; k < series.fqc_energies.size(); ++k) out << ",p_f" << k;
    out << '\n';
    for (std::size_t n = 0; n < series.size(); ++n) {
        out << format_double(series.times[n]) << ',' << format_double(series.pi_e[n]);
        const auto& rho = series.rho[n].entries;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out << ',' << format_double(rho(i, j).real()) << ','
                    << format_double(rho(i, j).imag());
        if (fqc)
            for (double p : series.fqc_populations[n]) out << ',' << format_double(p);
        out << '\n';
    }
    return out.str();
}

Json to_json(const TimeSeries& series) {
    Json rho = Json::array();
    for (const auto& r : series.rho) {
        Json m = Json::array();
        for (int i = 0; i < r.dim(); ++i) {
            Json row = Json::array();
            for (int j = 0; j < r.dim(); ++j) row.push_back(complex_json(r.entries(i, j)));
            m.push_back(row);
        }
        rho.push_back(m);
    }
    Json j{{"system_dim", series.system_dim},
           {"times", series.times},
           {"pi_e", series.pi_e},
           {"rho", rho}};
    if (!series.fqc_populations.empty()) {
        j["fqc_energies"] = series.fqc_energies;
        j["fqc_populations"] = series.fqc_populations;
    }
    return j;
}

Json to_json(const MetricResult& m) {
    return Json{{"value", m.value},
                {"t_final", m.t_final},
                {"grid_points", m.grid_points},
                {"method_notes", m.method_notes}};
}

Json to_json(const FitReport& r) {
    Json params = Json::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    return Json{{"kind", r.kind},
                {"found", r.found},
                {"converged", r.converged},
                {"parameters", params},
                {"residual_norm", r.residual_norm},
                {"grid_points", r.grid_points},
                {"notes", r.notes}};
}

std::string spectrum_csv(const SidebandSpectrum& s, const Json& provenance) {
    std::ostringstream out;
    provenance_line(out, provenance);
    out << "k,energy,occupation\n";
    for (std::size_t i = 0; i < s.k.size(); ++i)
        out << s.k[i] << ',' << format_double(s.energy[i]) << ','
            << format_double(s.occupation[i]) << '\n';
    return out.str();
}

Json to_json(const SidebandSpectrum& s) {
    Json amps = Json::array();
    for (cplx a : s.amplitude) amps.push_back(complex_json(a));
    return Json{{"method", to_string(s.method)},
                {"t_final", s.t_final},
                {"n_max", s.k.empty() ? 0 : n_max(s)},
                {"k", s.k},
                {"energy", s.energy},
                {"occupation", s.occupation},
                {"amplitude", amps}};
}

std::string sigma_csv(const NonMarkovianity& nm, const Json& provenance) {
    std::ostringstream out;
    provenance_line(out, provenance);
    out << "t,sigma\n";
    for (std::size_t i = 0; i < nm.times.size(); ++i)
        out << format_double(nm.times[i]) << ',' << format_double(nm.sigma[i]) << '\n';
    return out.str();
}

Json to_json(const NonMarkovianity& nm) {
    return Json{{"estimate", nm.estimate},
                {"standard_error", nm.standard_error},
                {"best_pair", nm.best_pair},
                {"pairs", nm.sampler.count},
                {"seed", nm.sampler.seed},
                {"domain", to_string(nm.sampler.domain)},
                {"bootstrap_resamples", nm.sampler.bootstrap_resamples},
                {"grid_points", nm.grid_points},
                {"pair_final", nm.pair_final}};
}

std::string sweep_csv(const SweepMap& map, const Json& provenance) {
    std::ostringstream out;
    provenance_line(out, provenance);
    out << "N,v,value,ok\n";
    for (const auto& c : map.cells)
        out << c.n_half << ',' << format_double(c.v) << ',' << format_double(c.value) << ','
            << (c.ok ? 1 : 0) << '\n';
    return out.str();
}

Json to_json(const SweepMap& map) {
    Json cells = Json::array();
    for (const auto& c : map.cells) {
        Json extras = Json::object();
        for (const auto& [k, v] : c.extras) extras[k] = v;
        cells.push_back(Json{{"N", c.n_half},
                             {"v", c.v},
                             {"value", c.value},
                             {"ok", c.ok},
                             {"error", c.error},
                             {"extras", extras}});
    }
    const auto& g = map.grid;
    Json fixed{{"model", to_string(g.fixed.model)},
               {"t_final", g.fixed.t_final},
               {"Omega0", g.fixed.omega0},
               {"Delta", g.fixed.detuning},
               {"gamma", g.fixed.gamma},
               {"grid_points", g.fixed.grid_points}};
    if (g.fixed.hole_half_width) fixed["hole"] = *g.fixed.hole_half_width;
    return Json{{"provenance",
                 Json{{"code_version", map.code_version}, {"seed", g.seed}}},
                {"metric", to_string(g.metric)},
                {"n_values", g.n_values},
                {"v_values", g.v_values},
                {"fixed", fixed},
                {"cell_budget_seconds", g.cell_budget_seconds},
                {"cells", cells}};
}

std::string size_scan_csv(const std::vector<SizeScanPoint>& points, const Json& provenance) {
    std::ostringstream out;
    provenance_line(out, provenance);
    out << "size,variant,levels,Omega_tilde,Gamma_tilde,d2,converged\n";
    for (const auto& p : points) {
        variant_row(out, p.size, "flat", p.flat);
        if (p.adaptive) variant_row(out, p.size, "adaptive", *p.adaptive);
    }
    return out.str();
}

Json to_json(const std::vector<SizeScanPoint>& points) {
    Json arr = Json::array();
    for (const auto& p : points) {
        Json j{{"size", p.size}, {"flat", variant_json(p.flat)}};
        if (p.adaptive) j["adaptive"] = variant_json(*p.adaptive);
        arr.push_back(j);
    }
    return arr;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " +
                              ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path.string());
    return ss.str();
}

}  // namespace fqcsim
