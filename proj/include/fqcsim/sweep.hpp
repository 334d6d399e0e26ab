#pragma once

#include "fqcsim/analysis.hpp"
#include "fqcsim/evolve.hpp"
#include "fqcsim/hamiltonian.hpp"
#include "fqcsim/reference.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fqcsim {

enum class Model { Single, TwoLevel, Adaptive };
enum class SweepMetric { D1, D2, Fit };

std::string to_string(Model m);
std::string to_string(SweepMetric m);
Model model_from_string(const std::string& s);
SweepMetric metric_from_string(const std::string& s);

struct SweepFixed {
    Model model = Model::Single;
    double t_final = 10.0;
    double omega0 = 0.0;
    double detuning = 0.0;
    double gamma = 1.0;
    int grid_points = kDefaultGridPoints;
    /// Adaptive hole; unset means Omega0 / 2.
    std::optional<double> hole_half_width;
};

struct SweepGrid {
    std::vector<int> n_values;
    std::vector<double> v_values;
    SweepFixed fixed;
    SweepMetric metric = SweepMetric::D1;
    double cell_budget_seconds = 30.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SweepCell {
    int n_half = 0;
    double v = 0.0;
    double value = 0.0;
    bool ok = false;
    std::string error;
    std::map<std::string, double> extras;
};

/// Row-major over (n_values, v_values).
struct SweepMap {
    SweepGrid grid;
    std::vector<SweepCell> cells;
    std::string code_version;

    const SweepCell& at(std::size_t n_index, std::size_t v_index) const {
        return cells.at(n_index * grid.v_values.size() + v_index);
    }
};

/// FQC series and its Markovian reference for one configuration.
struct EmulationRun {
    HamiltonianMatrix hamiltonian;
    TimeSeries fqc;
    TimeSeries reference;
};

/// Builds the model Hamiltonian for (n_half, v), propagates from `initial`
/// (|e> when unset) and evaluates the matching non-Hermitian reference.
EmulationRun run_emulation(int n_half, double v, const SweepFixed& fixed,
                           const std::optional<SystemVector>& initial = std::nullopt,
                           bool record_fqc = false);

/// One sweep cell; failures are reported in the cell, never thrown.
SweepCell evaluate_cell(int n_half, double v, const SweepFixed& fixed, SweepMetric metric,
                        double budget_seconds);

/// Cells run on an independent task pool and are stored by index.
SweepMap run_sweep(const SweepGrid& grid, int threads = 0);

struct SizeScanVariant {
    int levels = 0;
    int n_half = 0;
    double omega_tilde = 0.0;
    double gamma_tilde = 0.0;
    double d2 = 0.0;
    bool converged = false;
    bool ok = false;
    std::string error;
};

struct SizeScanPoint {
    int size = 0;
    SizeScanVariant flat;
    std::optional<SizeScanVariant> adaptive;
};

struct SizeScanConfig {
    std::vector<int> sizes;
    bool flat_and_adaptive = true;
    DriveSpec drive{10.0, 0.0};
    double coupling_v = 0.3;
    double gamma = 1.0;
    double t_final = 10.0;
    int grid_points = 4001;
    std::optional<double> hole_half_width;
    double cell_budget_seconds = 30.0;
};

/// For each requested size: flat FQC with n_half = (size - 1) / 2 and, when
/// enabled, an adaptive FQC with the largest even level count <= size.
std::vector<SizeScanPoint> run_size_scan(const SizeScanConfig& cfg, int threads = 0);

/// Evaluates one FQC variant of the size scan (fit plus D2 against H_eff).
SizeScanVariant evaluate_variant(const FqcSpec& spec, const SizeScanConfig& cfg);

const char* code_version();

}  // namespace fqcsim
