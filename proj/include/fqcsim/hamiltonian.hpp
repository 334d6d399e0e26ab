#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace fqcsim {

/// Central hole of an adaptive quasi-continuum: levels with |E| < half_width are removed.
struct Hole {
    double half_width = 0.0;
};

/// Geometry of a finite quasi-continuum (FQC) of 2N+1 equidistant levels,
/// each coupled with strength v to the excited state. Energies in units of
/// hbar*Gamma, hbar = 1.
struct FqcSpec {
    int n_half = 15;
    double coupling_v = 0.3;
    double gamma_target = 1.0;
    std::optional<Hole> hole;

    /// Level spacing delta = 2 pi v^2 / Gamma (golden-rule relation inverted).
    double gap() const;
    /// Number of FQC levels after the hole is applied.
    int level_count() const;
    void validate() const;
};

struct DriveSpec {
    double rabi_omega0 = 0.0;
    double detuning_delta = 0.0;

    void validate() const;
};

/// Real symmetric Hamiltonian with an ordered basis: [g], e, FQC levels ascending.
struct HamiltonianMatrix {
    Eigen::MatrixXd entries;
    std::vector<std::string> basis_labels;
    /// Index of |e> in the basis (0 for single-level, 1 for two-level).
    int excited_index = 0;
    /// Whether a ground state |g> is present at index 0.
    bool has_ground = false;
    /// FQC level energies in basis order (ascending).
    std::vector<double> fqc_energies;
    double coupling_v = 0.0;

    int dim() const { return static_cast<int>(entries.rows()); }
    /// Number of system states (1 or 2).
    int system_dim() const { return has_ground ? 2 : 1; }
    bool is_symmetric() const;
};

double fermi_rate(double coupling_v, double gap);
double gap_for_rate(double coupling_v, double gamma);
/// Coupling giving level spacing `gap` at decay rate `gamma`.
double coupling_for_gap(double gap, double gamma = 1.0);

/// FQC diagonal energies in ascending order, hole removed.
std::vector<double> level_energies(const FqcSpec& spec);

HamiltonianMatrix build_single_level(const FqcSpec& spec);
HamiltonianMatrix build_two_level(const FqcSpec& spec, const DriveSpec& drive);
/// Two-level Hamiltonian on a holed FQC. If spec.hole is unset the hole
/// half-width defaults to Omega0 / 2.
HamiltonianMatrix build_adaptive(const FqcSpec& spec, const DriveSpec& drive);

/// Smallest n_half whose holed grid keeps at least `levels` states.
/// Survivors come in +/- pairs, so `levels` must be even.
FqcSpec adaptive_spec_for_size(int levels, double coupling_v, double hole_half_width,
                               double gamma = 1.0);

/// Discrete principal-value sum v^2 * sum_{E_f != 0} 1 / (0 - E_f); the
/// Lamb shift of |e> in the quasi-continuum. Zero for symmetric spectra.
double lamb_shift_sum(const FqcSpec& spec);

}  // namespace fqcsim
