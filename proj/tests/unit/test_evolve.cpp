#include "fqcsim/errors.hpp"
#include "fqcsim/evolve.hpp"
#include "fqcsim/hamiltonian.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fqcsim;

namespace {

FqcSpec flat(int n, double v) {
    FqcSpec s;
    s.n_half = n;
    s.coupling_v = v;
    return s;
}

}  // namespace

TEST_CASE("2x2 diagonalization gives -v and +v") {
    const auto eig = diagonalize(build_single_level(flat(0, 0.3)));
    CHECK(eig.values(0) == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(eig.values(1) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("eigenvectors are orthonormal and reconstruct H") {
    const auto h = build_two_level(flat(15, 0.3), DriveSpec{1.0, 0.2});
    const auto eig = diagonalize(h);
    const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(h.dim(), h.dim())).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXd rec = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    CHECK((rec - h.entries).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 1; i < h.dim(); ++i) CHECK(eig.values(i) >= eig.values(i - 1));
}

TEST_CASE("decoupled excited level stays fully populated") {
    const auto h = build_single_level(flat(5, 0.0));
    const auto grid = uniform_grid(10.0, 101);
    const auto s = propagate(h, basis_state(h, "e"), grid);
    for (double p : s.pi_e) CHECK(p == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("one FQC level gives Rabi flopping cos^2(vt)") {
    const auto h = build_single_level(flat(0, 0.3));
    const auto grid = uniform_grid(20.0, 401);
    const auto s = propagate(h, basis_state(h, "e"), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c = std::cos(0.3 * grid[i]);
        CHECK(s.pi_e[i] == doctest::Approx(c * c).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("N=15, v=0.3 tracks exponential decay; v=0.45 revives near 5") {
    const auto grid = uniform_grid(10.0, 2001);
    const auto h1 = build_single_level(flat(15, 0.3));
    const auto s1 = propagate(h1, basis_state(h1, "e"), grid);
    // past the quadratic short-time regime the decay is exponential
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= 1.0) worst = std::max(worst, std::abs(s1.pi_e[i] - std::exp(-grid[i])));
    CHECK(worst < 0.03);

    const auto h2 = build_single_level(flat(15, 0.45));
    const auto s2 = propagate(h2, basis_state(h2, "e"), grid);
    // population is near zero before the echo and grows markedly after it
    const auto at = [&](double t) { return s2.pi_e[static_cast<std::size_t>(std::lround(t / 0.005))]; };
    CHECK(at(4.0) < 0.05);
    CHECK(at(6.5) > 0.3);
}

TEST_CASE("propagation is unitary to 1e-10") {
    const auto h = build_two_level(flat(20, 0.3), DriveSpec{3.0, 0.5});
    const Propagator prop(h);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd psi(h.dim());
    for (int i = 0; i < h.dim(); ++i) psi(i) = cplx(nd(rng), nd(rng));
    psi.normalize();
    const auto coeffs = prop.coefficients(psi);
    for (double t : uniform_grid(50.0, 501)) CHECK(std::abs(prop.state_at(coeffs, t).norm() - 1.0) < 1e-10);
}

TEST_CASE("values at a time do not depend on the grid") {
    const auto h = build_two_level(flat(15, 0.3), DriveSpec{1.0, 0.0});
    const auto psi0 = basis_state(h, "e");
    const auto coarse = propagate(h, psi0, uniform_grid(8.0, 5));
    const auto fine = propagate(h, psi0, uniform_grid(8.0, 4001));
    for (std::size_t i = 0; i < coarse.size(); ++i)
        CHECK(std::abs(coarse.pi_e[i] - fine.pi_e[i * 1000]) < 1e-12);
}

TEST_CASE("propagate validates its input") {
    const auto h = build_single_level(flat(2, 0.3));
    StateVector bad;
    bad.amplitudes = Eigen::VectorXcd::Constant(h.dim(), 1.0);
    const auto grid = uniform_grid(1.0, 3);
    CHECK_THROWS_AS(propagate(h, bad, grid), ConfigError);
    StateVector wrong;
    wrong.amplitudes = Eigen::VectorXcd::Zero(3);
    wrong.amplitudes(0) = 1.0;
    CHECK_THROWS_AS(propagate(h, wrong, grid), ConfigError);
}

TEST_CASE("reduced density of the system subspace") {
    const auto h = build_two_level(flat(1, 0.3), DriveSpec{1.0, 0.0});
    SUBCASE("excited state") {
        const auto r = reduce(h, basis_state(h, "e"));
        CHECK(std::abs(r.entries(0, 0)) == 0.0);
        CHECK(r.entries(1, 1) == cplx(1.0, 0.0));
        CHECK(std::abs(r.entries(0, 1)) == 0.0);
    }
    SUBCASE("equal superposition") {
        SystemVector c(2);
        c << 1.0, 1.0;
        const auto r = reduce(h, system_state(h, c));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(r.entries(i, j) - 0.5) < 1e-15);
    }
    SUBCASE("FQC amplitude lowers the trace") {
        StateVector psi;
        psi.amplitudes = Eigen::VectorXcd::Zero(h.dim());
        psi.amplitudes(1) = std::sqrt(0.6);
        psi.amplitudes(3) = std::sqrt(0.4);
        const auto r = reduce(h, psi);
        CHECK(r.trace() == doctest::Approx(0.6).epsilon(1e-14));
        CHECK(r.trace() < 1.0);
    }
}

TEST_CASE("series records stay consistent") {
    const auto h = build_two_level(flat(10, 0.3), DriveSpec{1.0, 0.0});
    PropagateOptions opts;
    opts.record_fqc = true;
    const auto s = propagate(h, basis_state(h, "e"), uniform_grid(5.0, 51), opts);
    CHECK_NOTHROW(s.validate());
    REQUIRE(s.fqc_populations.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double total = s.rho[i].trace();
        for (double p : s.fqc_populations[i]) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(s.pi_e[i] == doctest::Approx(s.rho[i].entries(1, 1).real()));
        CHECK(s.rho[i].trace() <= 1.0 + 1e-10);
    }
}

TEST_CASE("source term vanishes with no FQC amplitude") {
    const auto h = build_two_level(flat(5, 0.3), DriveSpec{1.0, 0.0});
    SystemVector c(2);
    c << 0.6, cplx(0.0, 0.8);
    const auto psi = system_state(h, c);
    CHECK(source_term(h, psi).cwiseAbs().maxCoeff() == 0.0);
    CHECK(projected_source(h, psi).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("source term with a single FQC level matches hand substitution") {
    const double v = 0.3;
    const auto h = build_two_level(flat(0, v), DriveSpec{1.0, 0.0});
    StateVector psi;
    psi.amplitudes = Eigen::VectorXcd(3);
    const cplx cg(0.5, 0.1), ce(0.2, -0.4), cf(0.3, 0.6);
    psi.amplitudes << cg, ce, cf;
    psi.amplitudes.normalize();
    const cplx g = psi.amplitudes(0), e = psi.amplitudes(1), f = psi.amplitudes(2);
    // rho_ab = c_a conj(c_b)
    const cplx lambda = v * g * std::conj(f);
    const cplx eta = v * (f * std::conj(e) - e * std::conj(f));
    const auto s = source_term(h, psi);
    CHECK(std::abs(s(0, 0)) == 0.0);
    CHECK(std::abs(s(0, 1) - lambda) < 1e-15);
    CHECK(std::abs(s(1, 0) - std::conj(lambda)) < 1e-15);
    CHECK(std::abs(s(1, 1) - eta) < 1e-15);
    // eta is purely imaginary
    CHECK(std::abs(s(1, 1).real()) < 1e-16);

    // the source actually entering the reduced dynamics
    const auto p = projected_source(h, psi);
    CHECK(std::abs(p(0, 1) + lambda) < 1e-15);
    CHECK(std::abs(p(1, 0) - std::conj(lambda)) < 1e-15);
    CHECK(std::abs(p(1, 1) - eta) < 1e-15);
}

TEST_CASE("projected source equals i d(rho)/dt - [H0, rho] by finite differences") {
    const auto h = build_two_level(flat(12, 0.3), DriveSpec{1.0, 0.3});
    const Propagator prop(h);
    const auto coeffs = prop.coefficients(basis_state(h, "e").amplitudes);
    const double t = 1.7;
    const double dt = 1e-5;
    auto rho_at = [&](double tt) {
        const Eigen::Vector2cd c = prop.state_at(coeffs, tt).head(2);
        return Eigen::Matrix2cd(c * c.adjoint());
    };
    const Eigen::Matrix2cd drho = (rho_at(t + dt) - rho_at(t - dt)) / (2.0 * dt);
    const Eigen::Matrix2cd h0 = h.entries.topLeftCorner(2, 2).cast<cplx>();
    const Eigen::Matrix2cd rho = rho_at(t);
    const Eigen::Matrix2cd expected = cplx(0.0, 1.0) * drho - (h0 * rho - rho * h0);
    StateVector psi;
    psi.amplitudes = prop.state_at(coeffs, t);
    CHECK((projected_source(h, psi) - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("memory kernel: value at zero, periodicity and first Dirichlet zero") {
    const FqcSpec s = flat(15, 0.3);
    const double gap = s.gap();
    const double period = 2.0 * std::numbers::pi / gap;
    const double zero = 2.0 * std::numbers::pi / (31.0 * gap);
    const std::vector<double> taus{0.0, period, zero, 0.5 * zero};
    const auto k = memory_kernel(s, taus);
    CHECK(std::abs(k.values[0] - 31.0 * 0.09) < 1e-14);
    CHECK(std::abs(k.values[1] - 31.0 * 0.09) < 1e-11);
    CHECK(std::abs(k.values[2]) < 1e-13);
    // Dirichlet kernel sin(31 x / 2) / sin(x / 2) at x = gap * tau
    const double x = gap * taus[3];
    const double dirichlet = std::sin(31.0 * x / 2.0) / std::sin(x / 2.0);
    CHECK(std::abs(k.values[3] - 0.09 * dirichlet) < 1e-13);
}
