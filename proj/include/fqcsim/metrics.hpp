#pragma once

#include "fqcsim/evolve.hpp"
#include "fqcsim/hamiltonian.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fqcsim {

struct MetricResult {
    double value = 0.0;
    double t_final = 0.0;
    int grid_points = 0;
    std::string method_notes;
};

/// Half the trace norm of rho - sigma. Both inputs must be Hermitian to 1e-8.
double trace_distance(const SystemMatrix& rho, const SystemMatrix& sigma);
double trace_distance(const ReducedDensity& rho, const ReducedDensity& sigma);

/// Trace distance of the normalized extensions rho + (1 - Tr rho) |leak><leak|:
/// 1/2 ||rho - sigma||_1 + 1/2 |Tr rho - Tr sigma|. Equal to trace_distance
/// when the traces agree and to |rho - sigma| for one-level inputs.
double completed_trace_distance(const SystemMatrix& rho, const SystemMatrix& sigma);

enum class TraceForm {
    /// Leaked population counted as a distinguishable flag state.
    Completed,
    /// 1/2 ||rho - sigma||_1 on the sub-normalized matrices as given.
    Projected
};

/// Trapezoidal integral of samples y over x, restricted to [x0, x_end].
double trapezoid(std::span<const double> x, std::span<const double> y, double x_end);

/// (1/t_f) * integral_0^t_f |pi_e(t) - pi_e(0) exp(-gamma t)| dt.
MetricResult d1(const TimeSeries& fqc, double gamma, double t_final);

/// Mean trace distance between paired samples of two series on the same grid.
MetricResult d2(const TimeSeries& fqc, const TimeSeries& reference, double t_final,
               TraceForm form = TraceForm::Completed);

enum class SamplingDomain {
    /// Pure states of the two-level subspace {g, e}.
    System,
    /// Pure states of the whole Hilbert space (system plus FQC).
    Full,
};

std::string to_string(SamplingDomain d);
SamplingDomain sampling_domain_from_string(const std::string& s);

struct PairSampler {
    int count = 256;
    std::uint64_t seed = 1;
    SamplingDomain domain = SamplingDomain::System;
    int bootstrap_resamples = 1000;
};

struct NonMarkovianity {
    std::vector<double> times;
    /// max over sampled pairs of the accumulated positive trace-distance increments.
    std::vector<double> sigma;
    /// Final accumulated value of every sampled pair.
    std::vector<double> pair_final;
    int best_pair = -1;
    double estimate = 0.0;
    /// Bootstrap standard error of the max-over-pairs estimate.
    double standard_error = 0.0;
    PairSampler sampler;
    int grid_points = 0;
};

/// Minimum points on [0, t] for >= 40 samples per 2 pi / Omega0.
int resolved_grid_points(double t_final, double omega0, int requested);

/// Trace-distance non-Markovianity measure on the projected FQC dynamics. Pairs are
/// independent given (seed, index); `threads` <= 0 uses FQCSIM_THREADS.
NonMarkovianity nonmarkovianity(const HamiltonianMatrix& h, double t_final, int grid_points,
                                const PairSampler& sampler, int threads = 0);

/// Random pure state for pair `index`, member `which` (0 or 1).
Eigen::VectorXcd sample_pure_state(int dim, int system_dim, SamplingDomain domain,
                                   std::uint64_t seed, std::uint64_t index, int which);

}  // namespace fqcsim
