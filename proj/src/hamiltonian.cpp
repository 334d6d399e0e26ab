#include "fqcsim/hamiltonian.hpp"

#include "fqcsim/errors.hpp"

#include <cmath>
#include <numbers>

namespace fqcsim {

namespace {

void fill_fqc_block(HamiltonianMatrix& h, int offset, const std::vector<double>& energies,
                    double v) {
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const int row = offset + static_cast<int>(i);
        h.entries(row, row) = energies[i];
        h.entries(row, h.excited_index) = v;
        h.entries(h.excited_index, row) = v;
        h.basis_labels.push_back("f" + std::to_string(i));
    }
    h.fqc_energies = energies;
    h.coupling_v = v;
}

}  // namespace

double fermi_rate(double coupling_v, double gap) {
    return 2.0 * std::numbers::pi * coupling_v * coupling_v / gap;
}

double gap_for_rate(double coupling_v, double gamma) {
    return 2.0 * std::numbers::pi * coupling_v * coupling_v / gamma;
}

double coupling_for_gap(double gap, double gamma) {
    return std::sqrt(gap * gamma / (2.0 * std::numbers::pi));
}

double FqcSpec::gap() const { return gap_for_rate(coupling_v, gamma_target); }

int FqcSpec::level_count() const { return static_cast<int>(level_energies(*this).size()); }

void FqcSpec::validate() const {
    if (n_half < 0) throw ConfigError("n_half must be >= 0, got " + std::to_string(n_half));
    if (!(coupling_v >= 0.0) || !std::isfinite(coupling_v))
        throw ConfigError("coupling_v must be >= 0, got " + std::to_string(coupling_v));
    if (!(gamma_target > 0.0) || !std::isfinite(gamma_target))
        throw ConfigError("gamma_target must be > 0, got " + std::to_string(gamma_target));
    if (hole) {
        if (!(hole->half_width >= 0.0) || !std::isfinite(hole->half_width))
            throw ConfigError("hole half_width must be >= 0");
        const double band = n_half * gap();
        if (hole->half_width > band)
            throw ConfigError("hole half_width " + std::to_string(hole->half_width) +
                              " exceeds the FQC band half-width " + std::to_string(band));
    }
}

void DriveSpec::validate() const {
    if (!(rabi_omega0 >= 0.0) || !std::isfinite(rabi_omega0))
        throw ConfigError("rabi_omega0 must be >= 0");
    if (!std::isfinite(detuning_delta)) throw ConfigError("detuning_delta must be finite");
}

bool HamiltonianMatrix::is_symmetric() const { return entries == entries.transpose(); }

std::vector<double> level_energies(const FqcSpec& spec) {
    const double gap = spec.gap();
    const double hole = spec.hole ? spec.hole->half_width : 0.0;
    std::vector<double> energies;
    energies.reserve(2 * spec.n_half + 1);
    for (int k = -spec.n_half; k <= spec.n_half; ++k) {
        const double e = static_cast<double>(k) * gap;
        if (std::abs(e) < hole) continue;
        energies.push_back(e);
    }
    return energies;
}

HamiltonianMatrix build_single_level(const FqcSpec& spec) {
    spec.validate();
    const auto energies = level_energies(spec);
    if (energies.empty()) throw ConfigError("hole removes every FQC level");
    HamiltonianMatrix h;
    const int dim = 1 + static_cast<int>(energies.size());
    h.entries = Eigen::MatrixXd::Zero(dim, dim);
    h.excited_index = 0;
    h.has_ground = false;
    h.basis_labels = {"e"};
    fill_fqc_block(h, 1, energies, spec.coupling_v);
    return h;
}

HamiltonianMatrix build_two_level(const FqcSpec& spec, const DriveSpec& drive) {
    spec.validate();
    drive.validate();
    const auto energies = level_energies(spec);
    if (energies.empty()) throw ConfigError("hole removes every FQC level");
    HamiltonianMatrix h;
    const int dim = 2 + static_cast<int>(energies.size());
    h.entries = Eigen::MatrixXd::Zero(dim, dim);
    h.excited_index = 1;
    h.has_ground = true;
    h.basis_labels = {"g", "e"};
    h.entries(0, 1) = drive.rabi_omega0;
    h.entries(1, 0) = drive.rabi_omega0;
    h.entries(1, 1) = drive.detuning_delta;
    fill_fqc_block(h, 2, energies, spec.coupling_v);
    return h;
}

HamiltonianMatrix build_adaptive(const FqcSpec& spec, const DriveSpec& drive) {
    FqcSpec holed = spec;
    if (!holed.hole) holed.hole = Hole{drive.rabi_omega0 / 2.0};
    holed.validate();
    if (holed.level_count() < 2)
        throw ConfigError("adaptive FQC keeps fewer than 2 levels");
    return build_two_level(holed, drive);
}

FqcSpec adaptive_spec_for_size(int levels, double coupling_v, double hole_half_width,
                               double gamma) {
    if (levels < 2 || levels % 2 != 0)
        throw ConfigError("adaptive FQC size must be even and >= 2, got " +
                          std::to_string(levels));
    if (!(coupling_v > 0.0)) throw ConfigError("adaptive FQC needs coupling_v > 0");
    if (!(hole_half_width >= 0.0) || !std::isfinite(hole_half_width))
        throw ConfigError("hole half_width must be >= 0");
    FqcSpec spec;
    spec.coupling_v = coupling_v;
    spec.gamma_target = gamma;
    spec.hole = Hole{hole_half_width};
    const double gap = spec.gap();
    // smallest k with k*gap >= hole, so survivors per side are removed_k..n_half
    int first_kept = 0;
    while (static_cast<double>(first_kept) * gap < hole_half_width) ++first_kept;
    if (first_kept == 0) ++first_kept;  // no hole: k = 0 survives unpaired
    spec.n_half = first_kept + levels / 2 - 1;
    if (spec.hole->half_width == 0.0) {
        // without a hole the grid is odd-sized; remove only the center level
        spec.hole->half_width = gap / 2.0;
    }
    spec.validate();
    return spec;
}

double lamb_shift_sum(const FqcSpec& spec) {
    const auto energies = level_energies(spec);
    const double v2 = spec.coupling_v * spec.coupling_v;
    // pair +E with -E so the cancellation is exact in floating point
    double sum = 0.0;
    std::size_t lo = 0;
    std::size_t hi = energies.size();
    while (lo < hi) {
        --hi;
        if (lo == hi) {
            if (energies[lo] != 0.0) sum -= v2 / energies[lo];
            break;
        }
        const double a = energies[lo];
        const double b = energies[hi];
        double pair = 0.0;
        if (a != 0.0) pair -= v2 / a;
        if (b != 0.0) pair -= v2 / b;
        sum += pair;
        ++lo;
    }
    return sum;
}

}  // namespace fqcsim
