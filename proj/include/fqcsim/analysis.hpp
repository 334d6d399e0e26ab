#pragma once

#include "fqcsim/evolve.hpp"
#include "fqcsim/hamiltonian.hpp"
#include "fqcsim/reference.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fqcsim {

struct FitReport {
    std::string kind;
    std::map<std::string, double> parameters;
    double residual_norm = 0.0;
    int grid_points = 0;
    /// False whenever the fit or detector did not reach its stopping criterion.
    bool converged = false;
    /// For detectors: whether the feature exists in the data at all.
    bool found = true;
    std::string notes;

    double at(const std::string& name) const { return parameters.at(name); }
};

/// Quadratic short-time fit 1 - pi_e = t^2 / T_Z^2 on t in [0, T_Z/10], where
/// the analytic T_Z^-2 is the variance of H in |e> (sum of |H_en|^2, n != e).
/// The series must start at t = 0 from |e>.
FitReport zeno_time(const TimeSeries& series, const HamiltonianMatrix& h);

/// Same fit on a dedicated uniform grid of `samples` points spanning the
/// window, starting from |e>. Independent of any output grid.
FitReport zeno_time(const HamiltonianMatrix& h, int samples = 200);

/// Analytic Zeno time from the excited-state row of H.
double analytic_zeno_time(const HamiltonianMatrix& h);

struct RevivalOptions {
    /// Markovian model the series is compared against. Its drive must match
    /// the Hamiltonian that produced the series.
    NonHermitianSpec model;
    /// Earliest time considered; negative means 3 / gamma.
    double search_start = -1.0;
    /// Echo must reach this fraction of the t = 0 memory lobe.
    double threshold_fraction = 0.5;
};

/// Revival onset on a uniform grid with recorded system amplitudes.
///
/// The residual R = i dc/dt - H_eff c vanishes for exactly Markovian decay.
/// Applying the same operator again, (i d/dt - H_eff)^2 c, reproduces the
/// memory kernel K(t) c_e(0) up to slowly varying terms: a sharp lobe at
/// t = 0 and an identical lobe each time the quasi-continuum rephases. The
/// onset is the first such lobe after search_start, located to sub-grid
/// precision by a parabola through the peak samples. The time of the first
/// population maximum that follows is reported as well.
///
/// A series without any lobe yields found = false rather than an error.
FitReport revival_time(const TimeSeries& series, const RevivalOptions& opts);

struct CriticalCoupling {
    double v_c = 0.0;
    double delta_c = 0.0;
};

/// delta_c = 2 pi / t_f, v_c = sqrt(gamma / t_f)  (hbar = 1).
CriticalCoupling critical_coupling(double t_final, double gamma = 1.0);

enum class SidebandMethod {
    /// Laplace transform of the under-damped non-Hermitian amplitude.
    ClosedForm,
    /// Trapezoidal c_k(t_f) = -i v int_0^t_f c_e(t) exp(i E_k t) dt with c_e
    /// from the non-Hermitian model.
    Quadrature,
    /// |c_k(t_f)|^2 from the full FQC simulation.
    Simulated,
};

std::string to_string(SidebandMethod m);
SidebandMethod sideband_method_from_string(const std::string& s);

struct SidebandOptions {
    SidebandMethod method = SidebandMethod::ClosedForm;
    double t_final = 8.0;
    int grid_points = 8001;
    /// Initial system state (c_g, c_e). The closed form corresponds to |g>.
    std::optional<SystemVector> initial;
};

struct SidebandSpectrum {
    std::vector<int> k;
    std::vector<double> energy;
    std::vector<cplx> amplitude;
    std::vector<double> occupation;
    SidebandMethod method = SidebandMethod::ClosedForm;
    /// 0 for the closed form (t -> infinity).
    double t_final = 0.0;
};

SidebandSpectrum sideband_spectrum(const FqcSpec& spec, const DriveSpec& drive,
                                   const SidebandOptions& opts = {});

/// k >= 0 of the largest occupation (smallest k on ties).
int n_max(const SidebandSpectrum& spectrum);
int n_max(const FqcSpec& spec, const DriveSpec& drive, const SidebandOptions& opts = {});

struct FitOptions {
    double omega_guess = 10.0;
    double gamma_guess = 1.0;
    /// Only samples with t <= t_final enter the fit; negative uses all.
    double t_final = -1.0;
    int max_evaluations = 4000;
    /// Abort (converged = false) once this point in time has passed.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Levenberg-Marquardt fit of pi_e(t) to exp(-G t / 2) cos^2(W t); reports
/// Omega_tilde = W and Gamma_tilde = G.
FitReport fit_effective_params(const TimeSeries& series, const FitOptions& opts);

}  // namespace fqcsim
