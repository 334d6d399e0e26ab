#include "fqcsim/reference.hpp"

#include "fqcsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fqcsim {

namespace {

constexpr cplx kI{0.0, 1.0};

TimeSeries series_from_densities(std::span<const double> grid, std::vector<ReducedDensity> rho,
                                 int dim) {
    TimeSeries ts;
    ts.system_dim = dim;
    ts.times.assign(grid.begin(), grid.end());
    ts.pi_e.reserve(rho.size());
    for (const auto& r : rho) ts.pi_e.push_back(r.excited_population());
    ts.rho = std::move(rho);
    ts.validate();
    return ts;
}

}  // namespace

void NonHermitianSpec::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be > 0");
    if (drive) drive->validate();
}

SystemMatrix effective_hamiltonian(const NonHermitianSpec& spec) {
    spec.validate();
    const cplx decay = -0.5 * kI * spec.gamma;
    if (!spec.drive) {
        SystemMatrix h(1, 1);
        h(0, 0) = decay;
        return h;
    }
    SystemMatrix h(2, 2);
    h << 0.0, spec.drive->rabi_omega0, spec.drive->rabi_omega0,
        spec.drive->detuning_delta + decay;
    return h;
}

SystemMatrix small_propagator(const SystemMatrix& h, double t) {
    const cplx scale = -kI * t;
    if (h.rows() == 1) {
        SystemMatrix u(1, 1);
        u(0, 0) = std::exp(scale * h(0, 0));
        return u;
    }
    // exp(A) = exp(m) [cosh(q) I + sinh(q)/q (A - m I)], m = tr(A)/2, q^2 = m^2 - det(A)
    const Eigen::Matrix2cd a = scale * h;
    const cplx m = 0.5 * a.trace();
    const Eigen::Matrix2cd b = a - m * Eigen::Matrix2cd::Identity();
    const cplx q = std::sqrt(-b.determinant());
    const cplx sinhc = std::abs(q) < 1e-8 ? 1.0 + q * q / 6.0 : std::sinh(q) / q;
    const Eigen::Matrix2cd u = std::exp(m) * (std::cosh(q) * Eigen::Matrix2cd::Identity() + sinhc * b);
    return u;
}

TimeSeries decay_single(double gamma, double pi0, std::span<const double> grid) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    if (pi0 < 0.0 || pi0 > 1.0) throw ConfigError("pi0 must lie in [0, 1]");
    std::vector<ReducedDensity> rho;
    rho.reserve(grid.size());
    for (double t : grid) {
        ReducedDensity r;
        r.entries = SystemMatrix::Constant(1, 1, pi0 * std::exp(-gamma * t));
        r.time = t;
        rho.push_back(r);
    }
    return series_from_densities(grid, std::move(rho), 1);
}

TimeSeries evolve_nonhermitian(const NonHermitianSpec& spec, const SystemVector& psi0,
                               std::span<const double> grid) {
    const SystemMatrix h = effective_hamiltonian(spec);
    if (psi0.size() != h.rows()) throw ConfigError("initial state has the wrong dimension");
    std::vector<ReducedDensity> rho;
    std::vector<SystemVector> amps;
    rho.reserve(grid.size());
    amps.reserve(grid.size());
    for (double t : grid) {
        const SystemVector c = small_propagator(h, t) * psi0;
        rho.push_back(density_from_amplitudes(c, t));
        amps.push_back(c);
    }
    TimeSeries ts = series_from_densities(grid, std::move(rho), static_cast<int>(h.rows()));
    ts.amplitudes = std::move(amps);
    return ts;
}

TimeSeries integrate_nonhermitian(const NonHermitianSpec& spec, const SystemMatrix& rho0,
                                  std::span<const double> grid, int substeps) {
    const SystemMatrix heff = effective_hamiltonian(spec);
    if (rho0.rows() != heff.rows() || rho0.cols() != heff.cols())
        throw ConfigError("initial density has the wrong dimension");
    if (substeps < 1) throw ConfigError("substeps must be >= 1");
    const SystemMatrix h0 = SystemMatrix(heff.real().cast<cplx>());
    SystemMatrix hd = SystemMatrix::Zero(heff.rows(), heff.cols());
    hd(heff.rows() - 1, heff.cols() - 1) = -0.5 * spec.gamma;
    // d(rho)/dt = -i ([H0, rho] + i {H_d, rho})
    auto rhs = [&](const SystemMatrix& r) -> SystemMatrix {
        const SystemMatrix comm = h0 * r - r * h0;
        const SystemMatrix anti = hd * r + r * hd;
        return -kI * (comm + kI * anti);
    };
    std::vector<ReducedDensity> out;
    out.reserve(grid.size());
    SystemMatrix rho = rho0;
    double t = 0.0;
    for (double target : grid) {
        if (target < t) throw ConfigError("grid must be ascending and start at >= 0");
        const double h = (target - t) / substeps;
        for (int s = 0; s < substeps && h > 0.0; ++s) {
            const SystemMatrix k1 = rhs(rho);
            const SystemMatrix k2 = rhs(rho + 0.5 * h * k1);
            const SystemMatrix k3 = rhs(rho + 0.5 * h * k2);
            const SystemMatrix k4 = rhs(rho + h * k3);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t = target;
        ReducedDensity r;
        r.entries = rho;
        r.time = t;
        out.push_back(r);
    }
    return series_from_densities(grid, std::move(out), static_cast<int>(heff.rows()));
}

Eigen::Matrix2cd markovian_source(double gamma, const Eigen::Matrix2cd& rho) {
    Eigen::Matrix2cd pe = Eigen::Matrix2cd::Zero();
    pe(1, 1) = 1.0;
    return cplx(0.0, -0.5 * gamma) * (pe * rho + rho * pe);
}

std::string to_string(DampingRegime r) {
    switch (r) {
        case DampingRegime::Overdamped: return "overdamped";
        case DampingRegime::Critical: return "critical";
        case DampingRegime::Underdamped: return "underdamped";
    }
    return "unknown";
}

double damped_rabi_frequency(double omega0, double gamma) {
    const double ratio = gamma / (4.0 * omega0);
    if (!(omega0 > 0.0) || ratio >= 1.0)
        throw ConfigError("damped Rabi frequency requires Omega0 > Gamma/4");
    return omega0 * std::sqrt(1.0 - ratio * ratio);
}

DampingRegime classify_regime(double omega0, double gamma) {
    const double disc = omega0 * omega0 - gamma * gamma / 16.0;
    const double scale = std::max(omega0 * omega0, gamma * gamma / 16.0);
    if (std::abs(disc) <= 1e-12 * scale) return DampingRegime::Critical;
    return disc > 0.0 ? DampingRegime::Underdamped : DampingRegime::Overdamped;
}

DampedOscillator damped_oscillator_ce(const NonHermitianSpec& spec, const SystemVector& psi0,
                                      std::span<const double> grid) {
    spec.validate();
    if (!spec.drive) throw ConfigError("damped oscillator needs a drive");
    if (spec.drive->detuning_delta != 0.0)
        throw ConfigError("damped oscillator form requires zero detuning");
    if (psi0.size() != 2) throw ConfigError("initial state must be (c_g, c_e)");
    const double w0 = spec.drive->rabi_omega0;
    const double g = spec.gamma;

    DampedOscillator out;
    out.discriminant = w0 * w0 - g * g / 16.0;
    out.delta0 = 4.0 * w0 * w0 - g * g / 4.0;
    out.regime = classify_regime(w0, g);

    const cplx c0 = psi0(1);
    // i c_e' = Omega0 c_g - i (Gamma/2) c_e
    const cplx dc0 = -kI * w0 * psi0(0) - 0.5 * g * c0;
    const double decay = g / 4.0;

    out.ce.times.assign(grid.begin(), grid.end());
    out.ce.values.reserve(grid.size());
    if (out.regime == DampingRegime::Critical) {
        // c = (A + B t) exp(-Gamma t / 4)
        const cplx a = c0;
        const cplx b = dc0 + decay * c0;
        for (double t : grid) out.ce.values.push_back((a + b * t) * std::exp(-decay * t));
        return out;
    }
    // roots s = -Gamma/4 +- r, r real (over) or imaginary (under)
    const cplx r = std::sqrt(cplx(-out.discriminant, 0.0));
    const cplx sp = -decay + r;
    const cplx sm = -decay - r;
    const cplx ap = (dc0 - sm * c0) / (sp - sm);
    const cplx am = c0 - ap;
    for (double t : grid) out.ce.values.push_back(ap * std::exp(sp * t) + am * std::exp(sm * t));
    return out;
}

}  // namespace fqcsim
