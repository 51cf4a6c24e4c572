#include <doctest.h>

#include <cmath>

#include "diracspec/errors.hpp"
#include "diracspec/propagate.hpp"
#include "diracspec/weyl.hpp"
#include "support.hpp"

using namespace dirac;
using oracle::pi;

namespace {

ProblemSpec busy_spec() {
    auto s = testing::with_constant_potential(example_problem({1.0, 1.7, 0.6}), 0.3, -0.2, 0.5);
    s.alpha = {0.4, 1.1};
    s.alpha_prime = {-0.7, 0.9};
    s.gamma = {0.5, -1.2};
    s.gamma_prime = {1.3, 0.2};
    s.trans[0] = {1.4, 0.35};
    s.trans[1] = {0.6, -0.45};
    return s;
}

}  // namespace

TEST_CASE("weyl solution identities") {
    for (const auto& s : {example_problem(), busy_spec()}) {
        for (double l : {-1.3, 0.45, 2.75}) {
            CAPTURE(l);
            const auto grid = make_grid(s, l);
            const auto Phi = weyl_solution(s, l, grid);
            const auto phi = solve_phi(s, l, grid);
            const auto aux = solve_aux_phi(s, l, grid);
            const double M = weyl_function(s, l, grid);

            const Spinor pa = Phi.values[0].front();
            const double norm = (l * s.alpha_prime[1] - s.alpha[1]) * pa.y2 - (l * s.alpha_prime[0] - s.alpha[0]) * pa.y1;
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
            CHECK((s.alpha_prime[0] * pa.y1 - s.alpha_prime[1] * pa.y2) / s.d1() == doctest::Approx(M).epsilon(1e-10));

            double worst = 0.0, size = 0.0;
            for (int i = 0; i < 3; ++i)
                for (std::size_t k = 0; k < Phi.values[i].size(); ++k) {
                    worst = std::max(worst, (Phi.values[i][k] - aux.values[i][k] - M * phi.values[i][k]).norm());
                    size = std::max(size, Phi.values[i][k].norm());
                }
            CHECK(worst <= 1e-8 * std::max(1.0, size));

            for (int k : {1, 2})
                CHECK((Phi.right_limit(k) - jump_matrix(s, l, k) * Phi.left_limit(k)).norm() <=
                      1e-14 * std::max(1.0, size));
        }
    }
}

TEST_CASE("weyl function decays between eigenvalues") {
    const auto s = example_problem();
    double c_low = 0.0, c_high = 0.0;
    for (int k = 5; k <= 40; ++k) {
        const double l = k + 0.5;
        const double c = std::fabs(weyl_function(s, l)) * l;
        (k <= 20 ? c_low : c_high) = std::max(k <= 20 ? c_low : c_high, c);
    }
    CHECK(c_low > 0.0);
    CHECK(c_high <= 2.0 * c_low);
}

TEST_CASE("poles and residues") {
    const auto s = example_problem();
    const auto w = spectral_data(s, {-0.5, 6.0});
    REQUIRE(w.size() >= 8);
    CHECK(residue_at(s, w.data[0], w.grid) == doctest::Approx(-1.0 / (pi + 4.0)).epsilon(1e-4));
    for (std::size_t k = 0; k < 8; ++k) {
        const auto& d = w.data[k];
        CHECK(std::fabs(residue_at(s, d, w.grid) + 1.0 / d.mu) <= 1e-4 / d.mu);
        const double eps = 1e-6;
        CHECK(weyl_function(s, d.lambda - eps, w.grid) * weyl_function(s, d.lambda + eps, w.grid) < 0.0);
    }
    CHECK_THROWS_AS(weyl_function(s, 0.0), NearSpectrumError);
}

TEST_CASE("residues of a perturbed problem") {
    const auto s = testing::with_constant_potential(example_problem(), 0.4);
    const auto w = spectral_data(s, {-0.5, 4.0});
    for (const auto& d : w.data) CHECK(std::fabs(residue_at(s, d, w.grid) + 1.0 / d.mu) <= 1e-4 / d.mu);
}

TEST_CASE("partial fractions") {
    const auto s = example_problem();
    const auto w = spectral_data(s, {-112.0, 112.0});
    REQUIRE(w.size() >= 201);
    const double l = 0.5 * (w.data[100].lambda + w.data[101].lambda);

    const auto zero = partial_fraction(s, l, 0, w);
    const auto* d0 = &w.data[0];
    for (const auto& d : w.data)
        if (d.n == 0) d0 = &d;
    CHECK(zero.pf_truncated == doctest::Approx(1.0 / (d0->mu * (d0->lambda - l))).epsilon(1e-15));
    CHECK(zero.pf_error == doctest::Approx(std::fabs(zero.m_value - zero.pf_truncated)).epsilon(1e-15));

    const double e25 = partial_fraction(s, l, 25, w).pf_error;
    const double e50 = partial_fraction(s, l, 50, w).pf_error;
    const double e100 = partial_fraction(s, l, 100, w).pf_error;
    CHECK(e50 <= 1.1 * e25);
    CHECK(e100 <= 1.1 * e50);

    const double target = w.data.front().lambda - 10.0;
    const auto outside = midgap_grid(find_eigenvalues(s, {target - 3.0, target + 3.0}).lambdas());
    double below = outside.front();
    for (double m : outside)
        if (std::fabs(m - target) < std::fabs(below - target)) below = m;
    const auto far = partial_fraction(s, below, 100, w);
    CHECK(far.m_value * far.pf_truncated > 0.0);

    CHECK_THROWS_AS(partial_fraction(s, l, 150, w), NumericalError);
}

TEST_CASE("auxiliary problem") {
    const auto s = example_problem();
    CHECK(char_delta1(s, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    const Window win{-0.5, 12.0};
    const auto taus = find_aux_eigenvalues(s, win);
    const auto lambdas = find_eigenvalues(s, win).lambdas();
    REQUIRE_FALSE(taus.empty());
    for (double t : taus) {
        const auto grid = make_grid(s, t);
        const auto psi = solve_psi(s, t, grid);
        const Spinor pa = psi.values[0].front();
        CHECK(std::fabs(s.alpha_prime[0] * pa.y1 - s.alpha_prime[1] * pa.y2) <= 1e-8 * oracle::delta_scale(t));
    }
    CHECK(interlaced(lambdas, taus));
    CHECK_FALSE(interlaced({1.0, 2.0}, {3.0}));
    CHECK_FALSE(interlaced({1.0}, {1.0 + 1e-9}));
}

TEST_CASE("mid-gap grid") {
    const auto g = midgap_grid({3.0, 1.0, 2.0, 2.005});
    REQUIRE(g.size() == 2);
    CHECK(g[0] == 1.5);
    CHECK(g[1] == doctest::Approx(2.5025));
}

TEST_CASE("comparator reflexivity and symmetry") {
    const auto s = example_problem();
    const Window w{-0.5, 12.0};
    const auto same = compare_problems(s, s, w);
    CHECK(same.indistinguishable());
    CHECK(same.lambda_distance <= 1e-9);
    CHECK(same.tau_distance <= 1e-9);
    CHECK(same.mu_deviation <= 1e-9);
    CHECK(same.weyl_deviation <= 1e-9);
    CHECK(same.describe().find("overall: indistinguishable") != std::string::npos);

    const auto p = testing::with_constant_potential(s, 0.05);
    const auto ab = compare_problems(s, p, w);
    const auto ba = compare_problems(p, s, w);
    CHECK_FALSE(ab.indistinguishable());
    CHECK(ab.max_index_deviation >= 1e-3);
    CHECK(ab.weyl_verdict == ba.weyl_verdict);
    CHECK(ab.spectral_data_verdict == ba.spectral_data_verdict);
    CHECK(ab.two_spectra_verdict == ba.two_spectra_verdict);
    CHECK(ab.lambda_distance == doctest::Approx(ba.lambda_distance));
    CHECK(ab.describe().find("two spectra (lambda_n, tau_n): distinct") != std::string::npos);
}

TEST_CASE("scaling the left quadruple") {
    const auto s = busy_spec();
    auto t = s;
    for (auto* v : {&t.alpha[0], &t.alpha[1], &t.alpha_prime[0], &t.alpha_prime[1]}) *v *= 1.7;
    const auto rep = compare_problems(s, t, {-6.0, 6.0});
    CHECK(rep.two_spectra_verdict);
    CHECK(rep.lambda_distance <= 1e-9);
    CHECK(rep.tau_distance <= 1e-9);
}
