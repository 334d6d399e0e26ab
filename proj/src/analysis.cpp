#include "fqcsim/analysis.hpp"

#include "fqcsim/errors.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fqcsim {

namespace {

constexpr cplx kI{0.0, 1.0};

double uniform_step(const TimeSeries& s) {
    const double dt = (s.times.back() - s.times.front()) / static_cast<double>(s.size() - 1);
    for (std::size_t i = 1; i < s.size(); ++i)
        if (std::abs((s.times[i] - s.times[i - 1]) - dt) > 1e-9 * std::max(1.0, dt * 1e3))
            throw ConfigError("revival detection needs a uniform time grid");
    return dt;
}

/// Vertex offset in samples of the parabola through (-1, a), (0, b), (1, c).
double parabola_offset(double a, double b, double c) {
    const double denom = a - 2.0 * b + c;
    if (denom == 0.0) return 0.0;
    return std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
}

struct DampedCosFunctor : Eigen::DenseFunctor<double> {
    DampedCosFunctor(const std::vector<double>& t, const std::vector<double>& y,
                     std::optional<std::chrono::steady_clock::time_point> deadline)
        : Eigen::DenseFunctor<double>(2, static_cast<int>(t.size())), t_(t), y_(y),
          deadline_(deadline) {}

    int operator()(const InputType& x, ValueType& f) const {
        if (deadline_ && std::chrono::steady_clock::now() > *deadline_) return -1;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const double c = std::cos(x(0) * t_[i]);
            f(i) = std::exp(-0.5 * x(1) * t_[i]) * c * c - y_[i];
        }
        return 0;
    }

    int df(const InputType& x, JacobianType& j) const {
        if (deadline_ && std::chrono::steady_clock::now() > *deadline_) return -1;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const double t = t_[i];
            const double env = std::exp(-0.5 * x(1) * t);
            const double c = std::cos(x(0) * t);
            j(i, 0) = -env * t * std::sin(2.0 * x(0) * t);
            j(i, 1) = -0.5 * t * env * c * c;
        }
        return 0;
    }

    const std::vector<double>& t_;
    const std::vector<double>& y_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
};

}  // namespace

double analytic_zeno_time(const HamiltonianMatrix& h) {
    double var = 0.0;
    for (int n = 0; n < h.dim(); ++n)
        if (n != h.excited_index) var += h.entries(h.excited_index, n) * h.entries(h.excited_index, n);
    if (!(var > 0.0)) throw ConfigError("excited state is decoupled: Zeno time is infinite");
    return 1.0 / std::sqrt(var);
}

FitReport zeno_time(const TimeSeries& series, const HamiltonianMatrix& h) {
    series.validate();
    if (series.size() < 2 || std::abs(series.times.front()) > 1e-12)
        throw ConfigError("Zeno fit needs a series starting at t = 0");
    if (std::abs(series.pi_e.front() - 1.0) > 1e-9)
        throw ConfigError("Zeno fit needs pi_e(0) = 1");
    const double tz = analytic_zeno_time(h);

    auto fit_window = [&](double end, int& samples) {
        double sxy = 0.0;
        double sxx = 0.0;
        samples = 0;
        for (std::size_t i = 1; i < series.size() && series.times[i] <= end; ++i) {
            const double x = series.times[i] * series.times[i];
            const double y = 1.0 - series.pi_e[i];
            sxy += x * y;
            sxx += x * x;
            ++samples;
        }
        return sxx > 0.0 ? 1.0 / std::sqrt(sxy / sxx) : 0.0;
    };

    const double window = tz / 10.0;
    int samples = 0;
    const double fitted = fit_window(window, samples);
    if (samples < 10)
        throw ConfigError("Zeno window [0, " + std::to_string(window) + "] holds only " +
                          std::to_string(samples) + " samples; refine the grid (need >= 10)");
    int half_samples = 0;
    const double half = fit_window(window / 2.0, half_samples);

    FitReport r;
    r.kind = "zeno";
    r.parameters["T_Z"] = fitted;
    r.parameters["T_Z_analytic"] = tz;
    r.parameters["window_end"] = window;
    r.parameters["T_Z_half_window"] = half_samples >= 2 ? half : fitted;
    r.parameters["relative_error"] = std::abs(fitted - tz) / tz;
    double res = 0.0;
    for (std::size_t i = 1; i < series.size() && series.times[i] <= window; ++i) {
        const double t = series.times[i];
        const double d = (1.0 - series.pi_e[i]) - t * t / (fitted * fitted);
        res += d * d;
    }
    r.residual_norm = std::sqrt(res);
    r.grid_points = samples;
    r.converged = true;
    r.notes = "least squares of 1 - pi_e against t^2 through the origin";
    return r;
}

FitReport zeno_time(const HamiltonianMatrix& h, int samples) {
    if (samples < 11) throw ConfigError("Zeno fit needs at least 11 samples");
    const double window = analytic_zeno_time(h) / 10.0;
    // stay a hair inside the window so rounding cannot drop the last sample
    const auto grid = uniform_grid(window * (1.0 - 1e-12), samples);
    return zeno_time(propagate(h, basis_state(h, "e"), grid), h);
}

FitReport revival_time(const TimeSeries& series, const RevivalOptions& opts) {
    series.validate();
    if (series.amplitudes.empty())
        throw ConfigError("revival detection needs recorded system amplitudes");
    const SystemMatrix heff = effective_hamiltonian(opts.model);
    if (heff.rows() != series.system_dim)
        throw ConfigError("revival model dimension does not match the series");
    if (series.size() < 5) throw ConfigError("series too short for revival detection");
    const double dt = uniform_step(series);
    const double start = opts.search_start >= 0.0 ? opts.search_start : 3.0 / opts.model.gamma;
    const int e = series.system_dim - 1;
    const SystemMatrix heff2 = heff * heff;

    const std::size_t n = series.size();
    std::vector<double> echo(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const SystemVector& cm = series.amplitudes[j - 1];
        const SystemVector& c0 = series.amplitudes[j];
        const SystemVector& cp = series.amplitudes[j + 1];
        const SystemVector dc = (cp - cm) / (2.0 * dt);
        const SystemVector ddc = (cp - 2.0 * c0 + cm) / (dt * dt);
        // (i d/dt - H)^2 c = -c'' - 2 i H c' + H^2 c
        const SystemVector g = -ddc - 2.0 * kI * (heff * dc) + heff2 * c0;
        echo[j] = std::abs(g(e));
    }

    double reference = 0.0;
    for (std::size_t j = 1; j + 1 < n && series.times[j] < start; ++j)
        reference = std::max(reference, echo[j]);
    if (!(reference > 0.0))
        throw ConfigError("no memory lobe before search_start; is c_e(0) = 0 or the grid too coarse?");

    FitReport r;
    r.kind = "revival";
    r.grid_points = static_cast<int>(n);
    r.parameters["reference_lobe"] = reference;
    r.parameters["search_start"] = start;
    const double threshold = opts.threshold_fraction * reference;
    for (std::size_t j = 2; j + 2 < n; ++j) {
        if (series.times[j] < start) continue;
        if (echo[j] < threshold || echo[j] < echo[j - 1] || echo[j] < echo[j + 1]) continue;
        const double off = parabola_offset(echo[j - 1], echo[j], echo[j + 1]);
        const double tr = series.times[j] + off * dt;
        r.parameters["T_r"] = tr;
        r.parameters["echo_ratio"] = echo[j] / reference;
        // first population maximum after onset
        for (std::size_t k = j + 1; k + 1 < n; ++k) {
            if (series.pi_e[k] >= series.pi_e[k - 1] && series.pi_e[k] > series.pi_e[k + 1]) {
                r.parameters["population_peak_time"] = series.times[k];
                r.parameters["population_peak"] = series.pi_e[k];
                break;
            }
        }
        r.found = true;
        r.converged = true;
        r.notes = "memory-kernel echo of (i d/dt - H_eff)^2 c_e";
        return r;
    }
    r.found = false;
    r.converged = true;
    r.notes = "no revival within the series";
    return r;
}

CriticalCoupling critical_coupling(double t_final, double gamma) {
    if (!(t_final > 0.0)) throw ConfigError("t_final must be > 0");
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    return {std::sqrt(gamma / t_final), 2.0 * std::numbers::pi / t_final};
}

std::string to_string(SidebandMethod m) {
    switch (m) {
        case SidebandMethod::ClosedForm: return "closed";
        case SidebandMethod::Quadrature: return "quadrature";
        case SidebandMethod::Simulated: return "simulated";
    }
    return "unknown";
}

SidebandMethod sideband_method_from_string(const std::string& s) {
    if (s == "closed") return SidebandMethod::ClosedForm;
    if (s == "quadrature") return SidebandMethod::Quadrature;
    if (s == "simulated") return SidebandMethod::Simulated;
    throw ConfigError("unknown sideband method '" + s + "' (closed, quadrature, simulated)");
}

SidebandSpectrum sideband_spectrum(const FqcSpec& spec, const DriveSpec& drive,
                                   const SidebandOptions& opts) {
    spec.validate();
    drive.validate();
    if (!(spec.coupling_v > 0.0)) throw ConfigError("sideband spectrum needs coupling_v > 0");
    const double gap = spec.gap();
    const double v = spec.coupling_v;
    const double gamma = spec.gamma_target;
    const auto energies = level_energies(spec);

    SidebandSpectrum out;
    out.method = opts.method;
    out.t_final = opts.method == SidebandMethod::ClosedForm ? 0.0 : opts.t_final;
    for (double en : energies) {
        out.k.push_back(static_cast<int>(std::lround(en / gap)));
        out.energy.push_back(en);
    }

    SystemVector psi0(2);
    psi0 << 1.0, 0.0;
    if (opts.initial) psi0 = *opts.initial;

    switch (opts.method) {
        case SidebandMethod::ClosedForm: {
            if (drive.detuning_delta != 0.0)
                throw ConfigError("closed-form sidebands require zero detuning");
            if (drive.rabi_omega0 == 0.0) {
                // the prefactor v Omega0 / sqrt(Delta0) vanishes
                out.amplitude.assign(energies.size(), cplx(0.0, 0.0));
                break;
            }
            const double delta0 = 4.0 * drive.rabi_omega0 * drive.rabi_omega0 - gamma * gamma / 4.0;
            if (!(delta0 > 0.0))
                throw ConfigError("closed-form sidebands require Delta0 = 4 Omega0^2 - Gamma^2/4 > 0");
            const double root = std::sqrt(delta0);
            const cplx sp{-gamma / 4.0, root / 2.0};
            const cplx sm{-gamma / 4.0, -root / 2.0};
            const double pref = v * drive.rabi_omega0 / root;
            for (double en : energies) {
                const cplx ik{0.0, en};
                out.amplitude.push_back(pref * (-1.0 / (sp + ik) + 1.0 / (sm + ik)));
            }
            break;
        }
        case SidebandMethod::Quadrature: {
            NonHermitianSpec nh{gamma, drive};
            const auto grid = uniform_grid(opts.t_final, opts.grid_points);
            const auto ref = evolve_nonhermitian(nh, psi0, grid);
            for (double en : energies) {
                cplx acc = 0.0;
                for (std::size_t j = 1; j < grid.size(); ++j) {
                    const cplx f0 = ref.amplitudes[j - 1](1) * std::polar(1.0, en * grid[j - 1]);
                    const cplx f1 = ref.amplitudes[j](1) * std::polar(1.0, en * grid[j]);
                    acc += 0.5 * (grid[j] - grid[j - 1]) * (f0 + f1);
                }
                out.amplitude.push_back(-kI * v * acc);
            }
            break;
        }
        case SidebandMethod::Simulated: {
            const auto h = build_two_level(spec, drive);
            const Propagator prop(h);
            const StateVector start = system_state(h, psi0);
            const Eigen::VectorXcd psi = prop.state_at(prop.coefficients(start.amplitudes), opts.t_final);
            for (int i = 2; i < h.dim(); ++i) out.amplitude.push_back(psi(i));
            break;
        }
    }
    for (const cplx& a : out.amplitude) out.occupation.push_back(std::norm(a));
    return out;
}

int n_max(const SidebandSpectrum& spectrum) {
    int best = -1;
    double best_occ = -1.0;
    for (std::size_t i = 0; i < spectrum.k.size(); ++i) {
        if (spectrum.k[i] < 0) continue;
        if (spectrum.occupation[i] > best_occ ||
            (spectrum.occupation[i] == best_occ && spectrum.k[i] < best)) {
            best = spectrum.k[i];
            best_occ = spectrum.occupation[i];
        }
    }
    if (best < 0) throw ConfigError("spectrum has no k >= 0 levels");
    return best;
}

int n_max(const FqcSpec& spec, const DriveSpec& drive, const SidebandOptions& opts) {
    return n_max(sideband_spectrum(spec, drive, opts));
}

FitReport fit_effective_params(const TimeSeries& series, const FitOptions& opts) {
    series.validate();
    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (opts.t_final >= 0.0 && series.times[i] > opts.t_final * (1.0 + 1e-12)) break;
        t.push_back(series.times[i]);
        y.push_back(series.pi_e[i]);
    }
    if (t.size() < 3) throw ConfigError("fit needs at least 3 samples");

    DampedCosFunctor functor(t, y, opts.deadline);
    Eigen::LevenbergMarquardt<DampedCosFunctor> lm(functor);
    lm.setMaxfev(opts.max_evaluations);
    Eigen::VectorXd x(2);
    x << opts.omega_guess, opts.gamma_guess;
    const auto status = lm.minimize(x);

    FitReport r;
    r.kind = "damped_rabi";
    r.parameters["Omega_tilde"] = x(0);
    r.parameters["Gamma_tilde"] = x(1);
    r.parameters["omega_guess"] = opts.omega_guess;
    r.parameters["gamma_guess"] = opts.gamma_guess;
    double res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double c = std::cos(x(0) * t[i]);
        const double d = std::exp(-0.5 * x(1) * t[i]) * c * c - y[i];
        res += d * d;
    }
    r.residual_norm = std::sqrt(res);
    r.grid_points = static_cast<int>(t.size());
    using namespace Eigen::LevenbergMarquardtSpace;
    switch (status) {
        case RelativeReductionTooSmall:
        case RelativeErrorTooSmall:
        case RelativeErrorAndReductionTooSmall:
        case CosinusTooSmall:
        case FtolTooSmall:
        case XtolTooSmall:
        case GtolTooSmall:
            r.converged = true;
            break;
        default:
            r.converged = false;
            break;
    }
    r.notes = "Levenberg-Marquardt status " + std::to_string(static_cast<int>(status)) +
              ", " + std::to_string(lm.nfev()) + " evaluations";
    if (status == UserAsked) r.notes += " (deadline exceeded)";
    return r;
}

}  // namespace fqcsim
