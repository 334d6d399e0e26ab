#include "fqcsim/errors.hpp"
#include "fqcsim/evolve.hpp"
#include "fqcsim/hamiltonian.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fqcsim;

namespace {

FqcSpec flat(int n, double v) {
    FqcSpec s;
    s.n_half = n;
    s.coupling_v = v;
    return s;
}

}  // namespace

TEST_CASE("single level with one FQC state is the 2x2 coupling matrix") {
    const auto h = build_single_level(flat(0, 0.3));
    REQUIRE(h.dim() == 2);
    CHECK(h.entries(0, 0) == 0.0);
    CHECK(h.entries(0, 1) == 0.3);
    CHECK(h.entries(1, 0) == 0.3);
    CHECK(h.entries(1, 1) == 0.0);
    CHECK(h.basis_labels == std::vector<std::string>{"e", "f0"});
}

TEST_CASE("single level N=15 has dimension 2N+2 and gap 2 pi v^2") {
    const auto h = build_single_level(flat(15, 0.3));
    CHECK(h.dim() == 32);
    const double gap = 2.0 * std::numbers::pi * 0.09;
    CHECK(flat(15, 0.3).gap() == doctest::Approx(gap).epsilon(1e-15));
    CHECK(gap == doctest::Approx(0.5655).epsilon(1e-4));
    for (int k = -15; k <= 15; ++k) {
        const int row = 1 + k + 15;
        CHECK(h.entries(row, row) == doctest::Approx(k * gap).epsilon(1e-14));
        CHECK(h.entries(0, row) == 0.3);
    }
    // FQC levels are not coupled among themselves
    for (int i = 1; i < h.dim(); ++i)
        for (int j = 1; j < h.dim(); ++j)
            if (i != j) CHECK(h.entries(i, j) == 0.0);
}

TEST_CASE("spectrum of the single-level Hamiltonian is symmetric under negation") {
    for (auto [n, v] : {std::pair{2, 0.1}, std::pair{15, 0.3}, std::pair{7, 0.45}}) {
        const auto eig = diagonalize(build_single_level(flat(n, v)));
        const int d = static_cast<int>(eig.values.size());
        for (int i = 0; i < d; ++i)
            CHECK(eig.values(i) == doctest::Approx(-eig.values(d - 1 - i)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("two-level undriven N=0 matrix") {
    const auto h = build_two_level(flat(0, 0.3), DriveSpec{0.0, 0.0});
    Eigen::MatrixXd expected(3, 3);
    expected << 0, 0, 0, 0, 0, 0.3, 0, 0.3, 0;
    CHECK(h.entries == expected);
    CHECK(h.basis_labels == std::vector<std::string>{"g", "e", "f0"});
    CHECK(h.excited_index == 1);
}

TEST_CASE("two-level N=30 has 2N+3 = 63 rows") {
    CHECK(build_two_level(flat(30, 0.3), DriveSpec{1.0, 0.0}).dim() == 63);
}

TEST_CASE("two-level entries match a hand-built matrix element by element") {
    const double v = 0.1;
    const double gap = 2.0 * std::numbers::pi * v * v;
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(5, 5);
    expected(0, 1) = expected(1, 0) = 0.5;
    expected(1, 1) = 0.2;
    for (int k = -1; k <= 1; ++k) {
        expected(3 + k, 3 + k) = k * gap;
        expected(1, 3 + k) = expected(3 + k, 1) = v;
    }
    const auto h = build_two_level(flat(1, v), DriveSpec{0.5, 0.2});
    CHECK((h.entries - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(h.is_symmetric());
}

TEST_CASE("every builder produces an exactly symmetric matrix") {
    FqcSpec holed = flat(20, 0.3);
    holed.hole = Hole{3.0};
    CHECK(build_single_level(flat(15, 0.3)).is_symmetric());
    CHECK(build_two_level(flat(15, 0.3), DriveSpec{1.0, 0.3}).is_symmetric());
    CHECK(build_adaptive(holed, DriveSpec{10.0, 0.0}).is_symmetric());
}

TEST_CASE("level energies") {
    SUBCASE("N=1 with gap 0.5") {
        const auto e = level_energies(flat(1, coupling_for_gap(0.5)));
        REQUIRE(e.size() == 3);
        CHECK(e[0] == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(e[1] == 0.0);
        CHECK(e[2] == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("N=15, v=0.3") {
        const auto e = level_energies(flat(15, 0.3));
        CHECK(e.size() == 31);
        CHECK(e.back() == doctest::Approx(15 * 2.0 * std::numbers::pi * 0.09).epsilon(1e-14));
        CHECK(e.back() == doctest::Approx(8.48).epsilon(1e-3));
        CHECK(std::is_sorted(e.begin(), e.end()));
        for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == -e[e.size() - 1 - i]);
    }
    SUBCASE("hole of half a gap removes k=0") {
        FqcSpec s = flat(5, 0.3);
        s.hole = Hole{s.gap() / 2.0};
        const auto e = level_energies(s);
        CHECK(e.size() == 10);
        CHECK(std::none_of(e.begin(), e.end(), [](double x) { return x == 0.0; }));
    }
}

TEST_CASE("adaptive grid matches an independent filter of the flat grid") {
    FqcSpec s = flat(20, 0.3);
    s.hole = Hole{3.0};
    const double gap = 2.0 * std::numbers::pi * 0.09;
    std::vector<double> oracle;
    for (int k = -20; k <= 20; ++k)
        if (std::abs(k) * gap >= 3.0) oracle.push_back(k * gap);
    const auto h = build_adaptive(s, DriveSpec{10.0, 0.0});
    REQUIRE(h.fqc_energies.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i)
        CHECK(h.fqc_energies[i] == doctest::Approx(oracle[i]).epsilon(1e-14));
    CHECK(h.dim() == 2 + static_cast<int>(oracle.size()));
    CHECK(oracle.size() % 2 == 0);
    for (int i = 2; i < h.dim(); ++i) CHECK(h.entries(1, i) == 0.3);
}

TEST_CASE("adaptive N=17 with only the centre removed has 34 levels") {
    FqcSpec s = flat(17, 0.3);
    s.hole = Hole{s.gap() / 2.0};
    const auto h = build_adaptive(s, DriveSpec{10.0, 0.0});
    CHECK(h.fqc_energies.size() == 34);
    CHECK(h.dim() == 36);
}

TEST_CASE("adaptive with an empty hole equals the flat two-level matrix") {
    FqcSpec s = flat(10, 0.3);
    s.hole = Hole{0.0};
    const DriveSpec d{2.0, 0.1};
    const auto a = build_adaptive(s, d);
    const auto b = build_two_level(flat(10, 0.3), d);
    CHECK(a.entries == b.entries);
    CHECK(a.basis_labels == b.basis_labels);
}

TEST_CASE("adaptive hole defaults to Omega0 / 2") {
    const auto h = build_adaptive(flat(30, 0.3), DriveSpec{4.0, 0.0});
    for (double e : h.fqc_energies) CHECK(std::abs(e) >= 2.0);
    const double gap = flat(30, 0.3).gap();
    CHECK(std::abs(h.fqc_energies[h.fqc_energies.size() / 2]) < 2.0 + gap);
}

TEST_CASE("adaptive size helper returns the requested even level count") {
    for (int levels : {2, 10, 34, 80}) {
        const FqcSpec s = adaptive_spec_for_size(levels, 0.3, 5.0, 1.0);
        CHECK(s.level_count() == levels);
        for (double e : level_energies(s)) CHECK(std::abs(e) >= 5.0);
    }
    CHECK(adaptive_spec_for_size(34, 0.3, 5.0, 1.0).n_half == 25);
    CHECK(adaptive_spec_for_size(34, 0.3, 0.0, 1.0).level_count() == 34);
    CHECK_THROWS_AS(adaptive_spec_for_size(35, 0.3, 5.0, 1.0), ConfigError);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(build_single_level(flat(3, -0.1)), ConfigError);
    CHECK_THROWS_AS(build_single_level(flat(-1, 0.3)), ConfigError);
    FqcSpec wide = flat(3, 0.3);
    wide.hole = Hole{10.0};
    CHECK_THROWS_AS(build_adaptive(wide, DriveSpec{1.0, 0.0}), ConfigError);
    FqcSpec one = flat(0, 0.3);
    one.hole = Hole{0.0};
    CHECK_THROWS_AS(build_adaptive(one, DriveSpec{1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(build_two_level(flat(3, 0.3), DriveSpec{-1.0, 0.0}), ConfigError);
}

TEST_CASE("decay rate depends on v and gap only through v^2 / gap") {
    CHECK(fermi_rate(0.3, 2.0 * std::numbers::pi * 0.09) == doctest::Approx(1.0).epsilon(1e-15));
    for (double scale : {0.5, 2.0, 3.7}) {
        const double v = 0.3 * std::sqrt(scale);
        const double gap = 2.0 * std::numbers::pi * 0.09 * scale;
        CHECK(fermi_rate(v, gap) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(gap_for_rate(0.3, 2.0) == doctest::Approx(std::numbers::pi * 0.09).epsilon(1e-15));
}

TEST_CASE("principal-value shift cancels exactly on the symmetric grid") {
    for (int n : {1, 5, 15, 40}) CHECK(lamb_shift_sum(flat(n, 0.3)) == 0.0);
    FqcSpec holed = flat(25, 0.3);
    holed.hole = Hole{5.0};
    CHECK(lamb_shift_sum(holed) == 0.0);
}

TEST_CASE("single-level eigenvalues stay within one gap of the linear ladder") {
    for (double gap : {0.5, 1.0, 2.0, 5.0}) {
        const auto eig = diagonalize(build_single_level(flat(15, coupling_for_gap(gap))));
        // 32 eigenvalues: lower half maps to n = -15..0, upper half to 0..15
        for (int i = 0; i < 32; ++i) {
            const int n = i < 16 ? i - 15 : i - 16;
            CHECK(std::abs(eig.values(i) - n * gap) / gap < 1.0);
        }
    }
}

TEST_CASE("large gap: eigenvalues within 2% of n outside the hybridized centre") {
    const double gap = 5.0;
    const auto eig = diagonalize(build_single_level(flat(15, coupling_for_gap(gap))));
    for (int i = 0; i < 32; ++i) {
        const int n = i < 16 ? i - 15 : i - 16;
        if (std::abs(n) < 2) continue;
        CHECK(std::abs(eig.values(i) / gap - n) <= 0.02 * std::abs(n));
    }
}
