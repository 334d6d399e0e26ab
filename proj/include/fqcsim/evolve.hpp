#pragma once

#include "fqcsim/hamiltonian.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace fqcsim {

using cplx = std::complex<double>;

/// At most 2x2: system subspace {g, e} or {e}.
using SystemMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;
using SystemVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, 2, 1>;

struct Eigensystem {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns are eigenvectors
};

/// Symmetric eigendecomposition. Throws NumericalError if the solver fails
/// or the eigenvectors are not orthonormal to 1e-10.
Eigensystem diagonalize(const HamiltonianMatrix& h);

struct StateVector {
    Eigen::VectorXcd amplitudes;
    std::vector<std::string> basis_labels;

    double norm() const { return amplitudes.norm(); }
};

/// Basis state |label> of h ("e", "g" or "f<i>").
StateVector basis_state(const HamiltonianMatrix& h, const std::string& label);
/// Normalized superposition of |g> and |e> (two-level) or |e> alone.
StateVector system_state(const HamiltonianMatrix& h, const SystemVector& system_amplitudes);

/// Projection of |psi><psi| onto the system subspace. Sub-normalized.
struct ReducedDensity {
    SystemMatrix entries;
    double time = 0.0;

    int dim() const { return static_cast<int>(entries.rows()); }
    double trace() const { return entries.trace().real(); }
    /// Excited-state population (last diagonal entry).
    double excited_population() const { return entries(dim() - 1, dim() - 1).real(); }
};

ReducedDensity density_from_amplitudes(const SystemVector& amplitudes, double time = 0.0);

/// Sampled observables on an ascending time grid.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> pi_e;
    std::vector<ReducedDensity> rho;
    /// System amplitudes (c_g, c_e) or (c_e). Empty when only densities exist.
    std::vector<SystemVector> amplitudes;
    /// |c_k|^2 per time, one entry per FQC level. Empty unless recorded.
    std::vector<std::vector<double>> fqc_populations;
    std::vector<double> fqc_energies;
    int system_dim = 1;

    std::size_t size() const { return times.size(); }
    /// Throws ConfigError on non-increasing grids or length mismatches.
    void validate() const;
};

/// `points` uniform samples on [0, t_final].
std::vector<double> uniform_grid(double t_final, int points);

inline constexpr int kDefaultGridPoints = 2001;

/// Exact propagator exp(-iHt) from a one-time eigendecomposition.
class Propagator {
public:
    explicit Propagator(const HamiltonianMatrix& h);
    Propagator(const HamiltonianMatrix& h, Eigensystem eig);

    const HamiltonianMatrix& hamiltonian() const { return h_; }
    const Eigensystem& eigensystem() const { return eig_; }

    /// Eigenbasis coefficients <psi_n|psi0>.
    Eigen::VectorXcd coefficients(const Eigen::VectorXcd& psi0) const;
    /// Full state at time t, reconstructed in the original basis.
    Eigen::VectorXcd state_at(const Eigen::VectorXcd& coeffs, double t) const;
    /// Only the system components of the state at time t.
    SystemVector system_at(const Eigen::VectorXcd& coeffs, double t) const;

private:
    HamiltonianMatrix h_;
    Eigensystem eig_;
    Eigen::MatrixXd system_rows_;
};

struct PropagateOptions {
    bool record_fqc = false;
};

/// Throws ConfigError on dimension mismatch or un-normalized psi0.
TimeSeries propagate(const Propagator& prop, const StateVector& psi0,
                     std::span<const double> grid, const PropagateOptions& opts = {});
TimeSeries propagate(const HamiltonianMatrix& h, const StateVector& psi0,
                     std::span<const double> grid, const PropagateOptions& opts = {});

ReducedDensity reduce(const HamiltonianMatrix& h, const StateVector& psi, double time = 0.0);

/// FQC source term in the literal form
///   [[0, lambda], [conj(lambda), eta]],
///   lambda = v sum_i rho_gi,  eta = v sum_i (rho_ie - rho_ei).
/// Requires a two-level basis.
Eigen::Matrix2cd source_term(const HamiltonianMatrix& h, const StateVector& psi);

/// i d(rho_r)/dt - [H0, rho_r] evaluated from the Schroedinger right-hand
/// side of the full state. This is the source actually driving rho_r.
Eigen::Matrix2cd projected_source(const HamiltonianMatrix& h, const StateVector& psi);

struct ComplexSeries {
    std::vector<double> times;
    std::vector<cplx> values;
};

/// K(tau) = v^2 sum_k exp(-i k delta tau) for the flat (or holed) FQC.
ComplexSeries memory_kernel(const FqcSpec& spec, std::span<const double> tau_grid);

}  // namespace fqcsim
