#include "fqcsim/sweep.hpp"

#include "fqcsim/errors.hpp"
#include "fqcsim/metrics.hpp"
#include "fqcsim/parallel.hpp"

#include <chrono>
#include <cmath>

#ifndef FQCSIM_VERSION
#define FQCSIM_VERSION "0.0.0"
#endif

namespace fqcsim {

namespace {

using clock = std::chrono::steady_clock;

clock::time_point deadline_after(double seconds) {
    return clock::now() + std::chrono::duration_cast<clock::duration>(
                              std::chrono::duration<double>(seconds));
}

FqcSpec spec_for(int n_half, double v, const SweepFixed& fixed) {
    FqcSpec spec;
    spec.n_half = n_half;
    spec.coupling_v = v;
    spec.gamma_target = fixed.gamma;
    if (fixed.model == Model::Adaptive)
        spec.hole = Hole{fixed.hole_half_width.value_or(fixed.omega0 / 2.0)};
    return spec;
}

}  // namespace

const char* code_version() { return FQCSIM_VERSION; }

std::string to_string(Model m) {
    switch (m) {
        case Model::Single: return "single";
        case Model::TwoLevel: return "two-level";
        case Model::Adaptive: return "adaptive";
    }
    return "unknown";
}

std::string to_string(SweepMetric m) {
    switch (m) {
        case SweepMetric::D1: return "d1";
        case SweepMetric::D2: return "d2";
        case SweepMetric::Fit: return "fit";
    }
    return "unknown";
}

Model model_from_string(const std::string& s) {
    if (s == "single" || s == "decay") return Model::Single;
    if (s == "two-level" || s == "rabi") return Model::TwoLevel;
    if (s == "adaptive") return Model::Adaptive;
    throw ConfigError("unknown model '" + s + "' (single, two-level, adaptive)");
}

SweepMetric metric_from_string(const std::string& s) {
    if (s == "d1") return SweepMetric::D1;
    if (s == "d2") return SweepMetric::D2;
    if (s == "fit") return SweepMetric::Fit;
    throw ConfigError("unknown metric '" + s + "' (d1, d2, fit)");
}

void SweepGrid::validate() const {
    if (n_values.empty() || v_values.empty()) throw ConfigError("sweep axes must be non-empty");
    for (int n : n_values)
        if (n < 0) throw ConfigError("sweep n values must be >= 0");
    for (double v : v_values)
        if (!(v > 0.0)) throw ConfigError("sweep v values must be > 0");
    if (!(fixed.t_final > 0.0)) throw ConfigError("t_final must be > 0");
    if (fixed.grid_points < 2) throw ConfigError("grid_points must be >= 2");
    if (metric == SweepMetric::D1 && fixed.model != Model::Single)
        throw ConfigError("metric d1 applies to the single-level model only");
    if (metric == SweepMetric::Fit && fixed.model == Model::Single)
        throw ConfigError("metric fit needs a driven two-level model");
    if (!(cell_budget_seconds > 0.0)) throw ConfigError("cell budget must be > 0");
}

EmulationRun run_emulation(int n_half, double v, const SweepFixed& fixed,
                           const std::optional<SystemVector>& initial, bool record_fqc) {
    const FqcSpec spec = spec_for(n_half, v, fixed);
    const auto grid = uniform_grid(fixed.t_final, fixed.grid_points);
    EmulationRun run;
    PropagateOptions popts;
    popts.record_fqc = record_fqc;
    if (fixed.model == Model::Single) {
        run.hamiltonian = build_single_level(spec);
        const StateVector psi0 = basis_state(run.hamiltonian, "e");
        run.fqc = propagate(run.hamiltonian, psi0, grid, popts);
        run.reference = decay_single(fixed.gamma, 1.0, grid);
        return run;
    }
    const DriveSpec drive{fixed.omega0, fixed.detuning};
    run.hamiltonian = fixed.model == Model::Adaptive ? build_adaptive(spec, drive)
                                                     : build_two_level(spec, drive);
    SystemVector c0(2);
    c0 << 0.0, 1.0;
    if (initial) c0 = *initial;
    const StateVector psi0 = system_state(run.hamiltonian, c0);
    run.fqc = propagate(run.hamiltonian, psi0, grid, popts);
    run.reference = evolve_nonhermitian(NonHermitianSpec{fixed.gamma, drive},
                                        psi0.amplitudes.head(2), grid);
    return run;
}

SweepCell evaluate_cell(int n_half, double v, const SweepFixed& fixed, SweepMetric metric,
                        double budget_seconds) {
    SweepCell cell;
    cell.n_half = n_half;
    cell.v = v;
    const auto deadline = deadline_after(budget_seconds);
    try {
        const EmulationRun run = run_emulation(n_half, v, fixed);
        cell.extras["levels"] = static_cast<double>(run.hamiltonian.fqc_energies.size());
        switch (metric) {
            case SweepMetric::D1:
                cell.value = d1(run.fqc, fixed.gamma, fixed.t_final).value;
                break;
            case SweepMetric::D2:
                cell.value = d2(run.fqc, run.reference, fixed.t_final).value;
                break;
            case SweepMetric::Fit: {
                FitOptions fo;
                fo.omega_guess = fixed.omega0;
                fo.gamma_guess = fixed.gamma;
                fo.deadline = deadline;
                const FitReport fit = fit_effective_params(run.fqc, fo);
                cell.value = fit.at("Gamma_tilde");
                cell.extras["Omega_tilde"] = fit.at("Omega_tilde");
                cell.extras["converged"] = fit.converged ? 1.0 : 0.0;
                cell.extras["d2"] = d2(run.fqc, run.reference, fixed.t_final).value;
                if (!fit.converged) {
                    cell.error = "fit did not converge: " + fit.notes;
                    return cell;
                }
                break;
            }
        }
        if (!std::isfinite(cell.value)) {
            cell.error = "non-finite metric";
            return cell;
        }
        if (clock::now() > deadline) {
            cell.error = "cell exceeded its wall-clock budget";
            return cell;
        }
        cell.ok = true;
    } catch (const std::exception& ex) {
        cell.error = ex.what();
    }
    return cell;
}

SweepMap run_sweep(const SweepGrid& grid, int threads) {
    grid.validate();
    SweepMap map;
    map.grid = grid;
    map.code_version = code_version();
    const std::size_t nv = grid.v_values.size();
    map.cells.resize(grid.n_values.size() * nv);
    parallel_for(map.cells.size(), thread_count(threads), [&](std::size_t idx) {
        map.cells[idx] = evaluate_cell(grid.n_values[idx / nv], grid.v_values[idx % nv], grid.fixed,
                                       grid.metric, grid.cell_budget_seconds);
    });
    return map;
}

SizeScanVariant evaluate_variant(const FqcSpec& spec, const SizeScanConfig& cfg) {
    SizeScanVariant out;
    out.n_half = spec.n_half;
    try {
        const auto deadline = deadline_after(cfg.cell_budget_seconds);
        const HamiltonianMatrix h = build_two_level(spec, cfg.drive);
        out.levels = static_cast<int>(h.fqc_energies.size());
        const auto grid = uniform_grid(cfg.t_final, cfg.grid_points);
        const StateVector psi0 = basis_state(h, "e");
        const TimeSeries fqc = propagate(h, psi0, grid);
        const TimeSeries ref =
            evolve_nonhermitian(NonHermitianSpec{cfg.gamma, cfg.drive}, psi0.amplitudes.head(2), grid);
        FitOptions fo;
        fo.omega_guess = cfg.drive.rabi_omega0;
        fo.gamma_guess = cfg.gamma;
        fo.deadline = deadline;
        const FitReport fit = fit_effective_params(fqc, fo);
        out.omega_tilde = fit.at("Omega_tilde");
        out.gamma_tilde = fit.at("Gamma_tilde");
        out.converged = fit.converged;
        out.d2 = d2(fqc, ref, cfg.t_final).value;
        out.ok = fit.converged;
        if (!fit.converged) out.error = "fit did not converge: " + fit.notes;
    } catch (const std::exception& ex) {
        out.error = ex.what();
    }
    return out;
}

std::vector<SizeScanPoint> run_size_scan(const SizeScanConfig& cfg, int threads) {
    if (cfg.sizes.empty()) throw ConfigError("size scan needs at least one size");
    cfg.drive.validate();
    std::vector<SizeScanPoint> points(cfg.sizes.size());
    parallel_for(cfg.sizes.size(), thread_count(threads), [&](std::size_t i) {
        const int size = cfg.sizes[i];
        SizeScanPoint& p = points[i];
        p.size = size;
        if (size < 1) {
            p.flat.error = "size must be >= 1";
            return;
        }
        FqcSpec flat;
        flat.n_half = (size - 1) / 2;
        flat.coupling_v = cfg.coupling_v;
        flat.gamma_target = cfg.gamma;
        p.flat = evaluate_variant(flat, cfg);
        if (cfg.flat_and_adaptive) {
            const int even = size - size % 2;
            try {
                const FqcSpec adaptive = adaptive_spec_for_size(
                    even, cfg.coupling_v, cfg.hole_half_width.value_or(cfg.drive.rabi_omega0 / 2.0),
                    cfg.gamma);
                p.adaptive = evaluate_variant(adaptive, cfg);
            } catch (const std::exception& ex) {
                SizeScanVariant failed;
                failed.error = ex.what();
                p.adaptive = failed;
            }
        }
    });
    return points;
}

}  // namespace fqcsim
