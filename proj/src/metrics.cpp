#include "fqcsim/metrics.hpp"

#include "fqcsim/errors.hpp"
#include "fqcsim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fqcsim {

namespace {

constexpr double kHermitianTol = 1e-8;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sum of |eigenvalues| of a Hermitian matrix of dimension <= 2.
double abs_eigen_sum(const SystemMatrix& m) {
    if (m.rows() == 1) return std::abs(m(0, 0).real());
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double half_diff = 0.5 * (a - d);
    const double radius = std::sqrt(half_diff * half_diff + std::norm(m(0, 1)));
    const double mean = 0.5 * (a + d);
    return std::abs(mean + radius) + std::abs(mean - radius);
}

bool is_hermitian(const SystemMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTol;
}

void require_grid_covers(const TimeSeries& ts, double t_final) {
    if (ts.size() < 2) throw ConfigError("series needs at least two samples");
    if (std::abs(ts.times.front()) > 1e-12) throw ConfigError("series must start at t = 0");
    if (!(t_final > 0.0)) throw ConfigError("t_final must be > 0");
    if (ts.times.back() < t_final * (1.0 - 1e-12))
        throw ConfigError("series ends at t = " + std::to_string(ts.times.back()) +
                          ", shorter than t_f = " + std::to_string(t_final));
}

int points_up_to(const TimeSeries& ts, double t_final) {
    return static_cast<int>(
        std::upper_bound(ts.times.begin(), ts.times.end(), t_final * (1.0 + 1e-12)) -
        ts.times.begin());
}

}  // namespace

double trace_distance(const SystemMatrix& rho, const SystemMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw ConfigError("trace distance: dimension mismatch");
    if (!is_hermitian(rho) || !is_hermitian(sigma))
        throw ConfigError("trace distance: input is not Hermitian");
    return 0.5 * abs_eigen_sum(rho - sigma);
}

double trace_distance(const ReducedDensity& rho, const ReducedDensity& sigma) {
    return trace_distance(rho.entries, sigma.entries);
}

double completed_trace_distance(const SystemMatrix& rho, const SystemMatrix& sigma) {
    const double leak = std::abs((rho.trace() - sigma.trace()).real());
    return trace_distance(rho, sigma) + 0.5 * leak;
}

double trapezoid(std::span<const double> x, std::span<const double> y, double x_end) {
    if (x.size() != y.size()) throw ConfigError("trapezoid: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i - 1] >= x_end) break;
        if (x[i] <= x_end) {
            sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
        } else {
            const double frac = (x_end - x[i - 1]) / (x[i] - x[i - 1]);
            const double y_end = y[i - 1] + frac * (y[i] - y[i - 1]);
            sum += 0.5 * (x_end - x[i - 1]) * (y_end + y[i - 1]);
            break;
        }
    }
    return sum;
}

MetricResult d1(const TimeSeries& fqc, double gamma, double t_final) {
    fqc.validate();
    require_grid_covers(fqc, t_final);
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    const double pi0 = fqc.pi_e.front();
    std::vector<double> gap(fqc.size());
    for (std::size_t i = 0; i < fqc.size(); ++i)
        gap[i] = std::abs(fqc.pi_e[i] - pi0 * std::exp(-gamma * fqc.times[i]));
    MetricResult r;
    r.value = trapezoid(fqc.times, gap, t_final) / t_final;
    r.t_final = t_final;
    r.grid_points = points_up_to(fqc, t_final);
    r.method_notes = "trapezoid of |pi_e - pi_e(0) exp(-gamma t)|";
    return r;
}

MetricResult d2(const TimeSeries& fqc, const TimeSeries& reference, double t_final,
               TraceForm form) {
    fqc.validate();
    reference.validate();
    if (fqc.size() != reference.size()) throw ConfigError("d2: grids have different lengths");
    for (std::size_t i = 0; i < fqc.size(); ++i)
        if (std::abs(fqc.times[i] - reference.times[i]) >
            1e-12 * std::max(1.0, std::abs(fqc.times[i])))
            throw ConfigError("d2: grids differ at index " + std::to_string(i));
    if (fqc.system_dim != reference.system_dim)
        throw ConfigError("d2: system dimensions differ");
    require_grid_covers(fqc, t_final);
    std::vector<double> dist(fqc.size());
    for (std::size_t i = 0; i < fqc.size(); ++i)
        dist[i] = form == TraceForm::Completed
                      ? completed_trace_distance(fqc.rho[i].entries, reference.rho[i].entries)
                      : trace_distance(fqc.rho[i], reference.rho[i]);
    MetricResult r;
    r.value = trapezoid(fqc.times, dist, t_final) / t_final;
    r.t_final = t_final;
    r.grid_points = points_up_to(fqc, t_final);
    r.method_notes = form == TraceForm::Completed
                         ? "trapezoid of the leak-completed trace distance between paired samples"
                         : "trapezoid of the projected trace distance between paired samples";
    return r;
}

std::string to_string(SamplingDomain d) {
    return d == SamplingDomain::System ? "system" : "full";
}

SamplingDomain sampling_domain_from_string(const std::string& s) {
    if (s == "system") return SamplingDomain::System;
    if (s == "full") return SamplingDomain::Full;
    throw ConfigError("unknown sampling domain '" + s + "' (expected system or full)");
}

int resolved_grid_points(double t_final, double omega0, int requested) {
    const int needed =
        static_cast<int>(std::ceil(40.0 * t_final * omega0 / (2.0 * std::numbers::pi))) + 1;
    return std::max(requested, needed);
}

Eigen::VectorXcd sample_pure_state(int dim, int system_dim, SamplingDomain domain,
                                   std::uint64_t seed, std::uint64_t index, int which) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(2 * index + static_cast<std::uint64_t>(which))));
    std::normal_distribution<double> normal(0.0, 1.0);
    const int active = domain == SamplingDomain::System ? system_dim : dim;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < active; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        psi(i) = cplx(re, im);
    }
    return psi / psi.norm();
}

NonMarkovianity nonmarkovianity(const HamiltonianMatrix& h, double t_final, int grid_points,
                                const PairSampler& sampler, int threads) {
    if (!h.has_ground) throw ConfigError("non-Markovianity requires a two-level Hamiltonian");
    if (sampler.count < 2) throw ConfigError("sampler count must be >= 2");
    const double omega0 = std::abs(h.entries(0, 1));
    const int points = resolved_grid_points(t_final, omega0, grid_points);
    const auto grid = uniform_grid(t_final, points);

    const Eigensystem eig = diagonalize(h);
    const int dim = h.dim();
    Eigen::MatrixXcd phases(points, dim);
    for (int j = 0; j < points; ++j)
        for (int n = 0; n < dim; ++n) phases(j, n) = std::polar(1.0, -eig.values(n) * grid[j]);
    const Eigen::MatrixXcd sys_rows_t = eig.vectors.topRows(2).transpose().cast<cplx>();
    const Eigen::MatrixXcd vt = eig.vectors.transpose().cast<cplx>();

    std::vector<std::vector<double>> cumulative(sampler.count);
    parallel_for(static_cast<std::size_t>(sampler.count), thread_count(threads), [&](std::size_t p) {
        Eigen::MatrixXcd sys[2];
        for (int which = 0; which < 2; ++which) {
            const Eigen::VectorXcd psi0 =
                sample_pure_state(dim, 2, sampler.domain, sampler.seed, p, which);
            const Eigen::VectorXcd coeffs = vt * psi0;
            sys[which] = phases * coeffs.asDiagonal() * sys_rows_t;  // points x 2
        }
        std::vector<double> acc(points, 0.0);
        double prev = 0.0;
        for (int j = 0; j < points; ++j) {
            const Eigen::Vector2cd a = sys[0].row(j).transpose();
            const Eigen::Vector2cd b = sys[1].row(j).transpose();
            const SystemMatrix diff = a * a.adjoint() - b * b.adjoint();
            const double dist = 0.5 * abs_eigen_sum(diff);
            if (j > 0) acc[j] = acc[j - 1] + std::max(0.0, dist - prev);
            prev = dist;
        }
        cumulative[p] = std::move(acc);
    });

    NonMarkovianity out;
    out.times = grid;
    out.sampler = sampler;
    out.grid_points = points;
    out.sigma.assign(points, 0.0);
    out.pair_final.resize(sampler.count);
    for (int p = 0; p < sampler.count; ++p) {
        for (int j = 0; j < points; ++j) out.sigma[j] = std::max(out.sigma[j], cumulative[p][j]);
        out.pair_final[p] = cumulative[p].back();
    }
    out.best_pair = static_cast<int>(
        std::max_element(out.pair_final.begin(), out.pair_final.end()) - out.pair_final.begin());
    out.estimate = out.pair_final[out.best_pair];

    if (sampler.bootstrap_resamples > 1) {
        std::mt19937_64 rng(splitmix64(sampler.seed ^ 0x5eedb007ULL));
        std::uniform_int_distribution<int> pick(0, sampler.count - 1);
        double mean = 0.0;
        double sq = 0.0;
        for (int b = 0; b < sampler.bootstrap_resamples; ++b) {
            double best = 0.0;
            for (int i = 0; i < sampler.count; ++i) best = std::max(best, out.pair_final[pick(rng)]);
            mean += best;
            sq += best * best;
        }
        const double nb = sampler.bootstrap_resamples;
        mean /= nb;
        out.standard_error = std::sqrt(std::max(0.0, (sq / nb - mean * mean) * nb / (nb - 1.0)));
    }
    return out;
}

}  // namespace fqcsim
