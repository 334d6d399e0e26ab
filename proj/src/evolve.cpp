#include "fqcsim/evolve.hpp"

#include "fqcsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace fqcsim {

namespace {

constexpr double kNormTol = 1e-10;

int label_index(const HamiltonianMatrix& h, const std::string& label) {
    for (std::size_t i = 0; i < h.basis_labels.size(); ++i)
        if (h.basis_labels[i] == label) return static_cast<int>(i);
    throw ConfigError("unknown basis label '" + label + "'");
}

void require_two_level(const HamiltonianMatrix& h) {
    if (!h.has_ground) throw ConfigError("operation requires a two-level Hamiltonian");
}

}  // namespace

Eigensystem diagonalize(const HamiltonianMatrix& h) {
    if (!h.is_symmetric()) throw ConfigError("Hamiltonian is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver failed for dim " + std::to_string(h.dim()));
    Eigensystem eig{solver.eigenvalues(), solver.eigenvectors()};
    const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
    const double dev =
        (gram - Eigen::MatrixXd::Identity(h.dim(), h.dim())).cwiseAbs().maxCoeff();
    if (dev > kNormTol)
        throw NumericalError("eigenvectors not orthonormal (Gram deviation " +
                             std::to_string(dev) + ")");
    return eig;
}

StateVector basis_state(const HamiltonianMatrix& h, const std::string& label) {
    StateVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(h.dim());
    psi.amplitudes(label_index(h, label)) = 1.0;
    psi.basis_labels = h.basis_labels;
    return psi;
}

StateVector system_state(const HamiltonianMatrix& h, const SystemVector& system_amplitudes) {
    if (system_amplitudes.size() != h.system_dim())
        throw ConfigError("system amplitude vector has wrong length");
    const double n = system_amplitudes.norm();
    if (!(n > 0.0)) throw ConfigError("system amplitudes are all zero");
    StateVector psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(h.dim());
    for (int i = 0; i < h.system_dim(); ++i) psi.amplitudes(i) = system_amplitudes(i) / n;
    psi.basis_labels = h.basis_labels;
    return psi;
}

ReducedDensity density_from_amplitudes(const SystemVector& amplitudes, double time) {
    ReducedDensity rho;
    rho.entries = amplitudes * amplitudes.adjoint();
    rho.time = time;
    return rho;
}

void TimeSeries::validate() const {
    const std::size_t n = times.size();
    if (pi_e.size() != n || rho.size() != n)
        throw ConfigError("time series: observable lengths do not match the grid");
    if (!amplitudes.empty() && amplitudes.size() != n)
        throw ConfigError("time series: amplitude record length mismatch");
    if (!fqc_populations.empty() && fqc_populations.size() != n)
        throw ConfigError("time series: FQC population record length mismatch");
    for (std::size_t i = 1; i < n; ++i)
        if (!(times[i] > times[i - 1]))
            throw ConfigError("time series: grid is not strictly increasing");
}

std::vector<double> uniform_grid(double t_final, int points) {
    if (points < 2) throw ConfigError("time grid needs at least 2 points");
    if (!(t_final > 0.0)) throw ConfigError("t_final must be > 0");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = t_final * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

Propagator::Propagator(const HamiltonianMatrix& h) : Propagator(h, diagonalize(h)) {}

Propagator::Propagator(const HamiltonianMatrix& h, Eigensystem eig)
    : h_(h), eig_(std::move(eig)) {
    system_rows_ = eig_.vectors.topRows(h_.system_dim());
}

Eigen::VectorXcd Propagator::coefficients(const Eigen::VectorXcd& psi0) const {
    if (psi0.size() != h_.dim())
        throw ConfigError("state dimension " + std::to_string(psi0.size()) +
                          " does not match Hamiltonian dimension " + std::to_string(h_.dim()));
    return eig_.vectors.transpose().cast<cplx>() * psi0;
}

Eigen::VectorXcd Propagator::state_at(const Eigen::VectorXcd& coeffs, double t) const {
    Eigen::VectorXcd rotated(coeffs.size());
    for (Eigen::Index n = 0; n < coeffs.size(); ++n)
        rotated(n) = coeffs(n) * std::polar(1.0, -eig_.values(n) * t);
    return eig_.vectors.cast<cplx>() * rotated;
}

SystemVector Propagator::system_at(const Eigen::VectorXcd& coeffs, double t) const {
    SystemVector out = SystemVector::Zero(system_rows_.rows());
    for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
        const cplx phased = coeffs(n) * std::polar(1.0, -eig_.values(n) * t);
        for (Eigen::Index r = 0; r < system_rows_.rows(); ++r)
            out(r) += system_rows_(r, n) * phased;
    }
    return out;
}

TimeSeries propagate(const Propagator& prop, const StateVector& psi0,
                     std::span<const double> grid, const PropagateOptions& opts) {
    const auto& h = prop.hamiltonian();
    if (psi0.amplitudes.size() != h.dim())
        throw ConfigError("initial state dimension does not match the Hamiltonian");
    if (std::abs(psi0.norm() - 1.0) > kNormTol)
        throw ConfigError("initial state is not normalized (norm " +
                          std::to_string(psi0.norm()) + ")");
    const Eigen::VectorXcd coeffs = prop.coefficients(psi0.amplitudes);
    if (std::abs(coeffs.norm() - 1.0) > kNormTol)
        throw NumericalError("eigenbasis projection lost normalization");

    TimeSeries ts;
    ts.system_dim = h.system_dim();
    ts.times.assign(grid.begin(), grid.end());
    ts.pi_e.reserve(grid.size());
    ts.rho.reserve(grid.size());
    ts.amplitudes.reserve(grid.size());
    if (opts.record_fqc) {
        ts.fqc_energies = h.fqc_energies;
        ts.fqc_populations.reserve(grid.size());
    }
    const int sys = h.system_dim();
    for (double t : grid) {
        SystemVector c;
        if (opts.record_fqc) {
            const Eigen::VectorXcd psi = prop.state_at(coeffs, t);
            c = psi.head(sys);
            std::vector<double> pops(h.dim() - sys);
            for (int i = sys; i < h.dim(); ++i) pops[i - sys] = std::norm(psi(i));
            ts.fqc_populations.push_back(std::move(pops));
        } else {
            c = prop.system_at(coeffs, t);
        }
        ts.rho.push_back(density_from_amplitudes(c, t));
        ts.pi_e.push_back(std::norm(c(sys - 1)));
        ts.amplitudes.push_back(c);
    }
    ts.validate();
    return ts;
}

TimeSeries propagate(const HamiltonianMatrix& h, const StateVector& psi0,
                     std::span<const double> grid, const PropagateOptions& opts) {
    return propagate(Propagator(h), psi0, grid, opts);
}

ReducedDensity reduce(const HamiltonianMatrix& h, const StateVector& psi, double time) {
    if (psi.amplitudes.size() != h.dim())
        throw ConfigError("state dimension does not match the Hamiltonian");
    return density_from_amplitudes(psi.amplitudes.head(h.system_dim()), time);
}

Eigen::Matrix2cd source_term(const HamiltonianMatrix& h, const StateVector& psi) {
    require_two_level(h);
    const auto& c = psi.amplitudes;
    cplx lambda = 0.0;
    cplx eta = 0.0;
    for (int i = 2; i < h.dim(); ++i) {
        lambda += c(0) * std::conj(c(i));
        eta += c(i) * std::conj(c(1)) - c(1) * std::conj(c(i));
    }
    lambda *= h.coupling_v;
    eta *= h.coupling_v;
    Eigen::Matrix2cd s;
    s << 0.0, lambda, std::conj(lambda), eta;
    return s;
}

Eigen::Matrix2cd projected_source(const HamiltonianMatrix& h, const StateVector& psi) {
    require_two_level(h);
    const Eigen::VectorXcd& c = psi.amplitudes;
    // i dc/dt = H c
    const Eigen::VectorXcd hc = h.entries.cast<cplx>() * c;
    const Eigen::Vector2cd sys = c.head(2);
    const Eigen::Vector2cd dsys = hc.head(2);
    // i d(c c^dag)/dt = (H c) c^dag - c (H c)^dag
    const Eigen::Matrix2cd i_drho = dsys * sys.adjoint() - sys * dsys.adjoint();
    const Eigen::Matrix2cd h0 = h.entries.topLeftCorner(2, 2).cast<cplx>();
    const Eigen::Matrix2cd rho = sys * sys.adjoint();
    return i_drho - (h0 * rho - rho * h0);
}

ComplexSeries memory_kernel(const FqcSpec& spec, std::span<const double> tau_grid) {
    spec.validate();
    const auto energies = level_energies(spec);
    const double v2 = spec.coupling_v * spec.coupling_v;
    ComplexSeries out;
    out.times.assign(tau_grid.begin(), tau_grid.end());
    out.values.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        cplx k = 0.0;
        for (double e : energies) k += std::polar(1.0, -e * tau);
        out.values.push_back(v2 * k);
    }
    return out;
}

}  // namespace fqcsim
