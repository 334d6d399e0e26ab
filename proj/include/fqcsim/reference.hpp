#pragma once

#include "fqcsim/evolve.hpp"
#include "fqcsim/hamiltonian.hpp"

#include <optional>
#include <span>
#include <string>

namespace fqcsim {

/// Exact dissipative model H_eff = H0 - i (Gamma/2) |e><e|. Without a drive
/// the system is the single decaying level.
struct NonHermitianSpec {
    double gamma = 1.0;
    std::optional<DriveSpec> drive;

    int system_dim() const { return drive ? 2 : 1; }
    void validate() const;
};

/// H_eff in the system basis ({g, e} or {e}).
SystemMatrix effective_hamiltonian(const NonHermitianSpec& spec);

/// pi0 * exp(-gamma t) sampled on the grid.
TimeSeries decay_single(double gamma, double pi0, std::span<const double> grid);

/// rho(t) = exp(-i H_eff t) |psi0><psi0| exp(+i H_eff^dag t), not renormalized.
TimeSeries evolve_nonhermitian(const NonHermitianSpec& spec, const SystemVector& psi0,
                               std::span<const double> grid);

/// Same evolution obtained by integrating
///   i d(rho)/dt = [H0, rho] + i {H_d, rho}
/// with fixed-step RK4 (`substeps` steps between grid points). Used as an
/// independent check of the closed-form route.
TimeSeries integrate_nonhermitian(const NonHermitianSpec& spec, const SystemMatrix& rho0,
                                  std::span<const double> grid, int substeps = 64);

/// exp(-i H t) for a 1x1 or 2x2 matrix, closed form.
SystemMatrix small_propagator(const SystemMatrix& h, double t);

/// Markovian-limit source -i (gamma/2) {P_e, rho}, the value the FQC source
/// approaches as the quasi-continuum becomes dense.
Eigen::Matrix2cd markovian_source(double gamma, const Eigen::Matrix2cd& rho);

enum class DampingRegime { Overdamped, Critical, Underdamped };

std::string to_string(DampingRegime r);

/// Sign of Omega0^2 - gamma^2/16, the discriminant of the resonant H_eff.
DampingRegime classify_regime(double omega0, double gamma);

struct DampedOscillator {
    DampingRegime regime = DampingRegime::Underdamped;
    /// Omega0^2 - (Gamma/4)^2; its sign sets the regime.
    double discriminant = 0.0;
    /// Delta0 = 4 Omega0^2 - Gamma^2 / 4.
    double delta0 = 0.0;
    ComplexSeries ce;
};

/// Closed-form solution of c_e'' + (Gamma/2) c_e' + Omega0^2 c_e = 0 with
/// c_e(0), c_e'(0) taken from the Schroedinger equation under H_eff at
/// psi0 = (c_g, c_e). Requires zero detuning.
DampedOscillator damped_oscillator_ce(const NonHermitianSpec& spec, const SystemVector& psi0,
                                      std::span<const double> grid);

/// Oscillation frequency of the under-damped regime, Omega0 sqrt(1 - (Gamma/(4 Omega0))^2).
double damped_rabi_frequency(double omega0, double gamma);

}  // namespace fqcsim
