#include <doctest.h>

#include <cmath>
#include <random>

#include "diracspec/errors.hpp"
#include "diracspec/resolvent.hpp"
#include "diracspec/spectrum.hpp"
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

RhsField sin_rhs() { return RhsField::sinusoid({{1, 1.0, 1.0, 0.0}}); }

double max_norm(const PiecewiseSolution& u) {
    double m = 0.0;
    for (const auto& seg : u.values)
        for (const auto& y : seg) m = std::max(m, y.norm());
    return m;
}

}  // namespace

TEST_CASE("zero right-hand side") {
    const auto r = resolvent_apply(example_problem(), 1.3, RhsField::zero());
    CHECK(max_norm(r.u) == 0.0);
}

TEST_CASE("defects of the example resolvent") {
    const auto s = example_problem();
    const auto r = resolvent_apply(s, 1.3, sin_rhs());
    CHECK(r.residual.equation <= 1e-6);
    for (double c : r.residual.conditions) CHECK(c <= 1e-8);
    CHECK(r.residual.max_condition() <= 1e-8);
    CHECK(r.delta == doctest::Approx(oracle::delta(s, 1.3)).epsilon(1e-9));
}

TEST_CASE("defects for general coefficients") {
    const auto s = busy_spec();
    const RhsField rhs = RhsField::from_function([](double x) { return Spinor{std::cos(3 * x), x - 1.0}; });
    for (double l : {-2.2, 0.37, 5.5}) {
        const auto r = resolvent_apply(s, l, rhs);
        CAPTURE(l);
        CHECK(r.residual.equation <= 1e-6);
        CHECK(r.residual.max_condition() <= 1e-8 * std::max(1.0, r.residual.scale));
    }
}

TEST_CASE("kernel integration reproduces the direct formula") {
    const auto s = busy_spec();
    const double l = 2.1;
    const auto grid = make_grid(s, l);
    const RhsField rhs = RhsField::from_function([](double x) { return Spinor{std::exp(-x), std::sin(2 * x)}; });
    const auto samples = sample_rhs(rhs, grid);
    const auto r = resolvent_apply(s, l, samples, grid);
    const GreenFunction G(s, l, grid);
    for (int p = 0; p < 20; ++p) {
        const int seg = p % 3;
        const int k = 2 + (p * 131) % (grid[seg].steps - 4);
        const double x = grid[seg].node(k);
        const Spinor direct = r.u.values[seg][static_cast<std::size_t>(k)];
        CHECK((G.integrate(samples, x) - direct).norm() <= 1e-7 * std::max(1.0, direct.norm()));
    }
}

TEST_CASE("kernel structure") {
    const auto s = busy_spec();
    const double l = 1.9;
    const GreenFunction G(s, l);
    for (double x : {0.3, 1.2, 2.5})
        for (double t : {0.1, 0.9, 1.4, 3.0})
            if (t != x) CHECK(std::fabs(G(x, t).det()) <= 1e-12 * (1.0 + G(x, t).max_abs() * G(x, t).max_abs()));

    for (double x : {0.3, 1.2, 2.5}) {
        const int seg = s.segment_of(x);
        const double eps = 1e-9;
        const Mat2 jump = G(x, x + eps) - G(x, x - eps);
        const double r = s.rho[static_cast<std::size_t>(seg)];
        CHECK(jump.m11 == doctest::Approx(0.0).epsilon(1e-6).scale(1.0));
        CHECK(jump.m12 == doctest::Approx(r).epsilon(1e-6));
        CHECK(jump.m21 == doctest::Approx(-r).epsilon(1e-6));
        CHECK(jump.m22 == doctest::Approx(0.0).epsilon(1e-6).scale(1.0));
    }
    CHECK_THROWS_AS(G(s.xi1, 1.0), std::invalid_argument);
}

TEST_CASE("kernel symmetry") {
    const auto s = busy_spec();
    const GreenFunction G(s, -0.8);
    for (double x : {0.2, 1.0, 2.9})
        for (double t : {0.5, 1.5, 2.2}) {
            const Mat2 lhs = s.rho[static_cast<std::size_t>(s.segment_of(x))] * G(x, t);
            const Mat2 rhs = s.rho[static_cast<std::size_t>(s.segment_of(t))] * G(t, x).transpose();
            CHECK((lhs - rhs).max_abs() <= 1e-10 * (1.0 + lhs.max_abs()));
        }
}

TEST_CASE("linearity") {
    const auto s = busy_spec();
    const double l = 3.7;
    const auto grid = make_grid(s, l);
    const RhsField f = RhsField::constant(1.0, -2.0);
    const RhsField g = sin_rhs();
    const RhsField h = RhsField::from_function([&](double x) { return 2.0 * f.at(x) + g.at(x); });
    const auto uf = resolvent_apply(s, l, f, grid).u;
    const auto ug = resolvent_apply(s, l, g, grid).u;
    const auto uh = resolvent_apply(s, l, h, grid).u;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < uh.values[i].size(); ++k)
            worst = std::max(worst, (uh.values[i][k] - 2.0 * uf.values[i][k] - ug.values[i][k]).norm());
    CHECK(worst <= 1e-12 * (1.0 + max_norm(uh)));
}

TEST_CASE("pole growth near an eigenvalue") {
    const auto s = example_problem();
    const auto w = find_eigenvalues(s, {0.3, 1.0});
    REQUIRE(w.size() == 1);
    const double ln = w.data[0].lambda;
    const double far = max_norm(resolvent_apply(s, ln + 1e-2, RhsField::constant(1.0, 1.0)).u);
    const double near = max_norm(resolvent_apply(s, ln + 1e-3, RhsField::constant(1.0, 1.0)).u);
    CHECK(near / far == doctest::Approx(10.0).epsilon(0.1));
    CHECK_THROWS_AS(resolvent_apply(s, 0.0, sin_rhs()), NearSpectrumError);
    try {
        resolvent_apply(s, 0.0, sin_rhs());
    } catch (const NearSpectrumError& e) {
        CHECK(std::string(e.what()).rfind("near spectrum", 0) == 0);
    }
}

TEST_CASE("residual detector") {
    const auto s = example_problem();
    const auto w = find_eigenvalues(s, {0.3, 1.0});
    REQUIRE(w.size() == 1);
    const auto grid = make_grid(s, 1.0);
    const auto phi = solve_phi(s, w.data[0].lambda, grid);
    const auto rep = residual_norm(s, w.data[0].lambda, RhsField::zero(), phi);
    CHECK(rep.equation <= 1e-6);
    CHECK(rep.max_condition() <= 1e-6);

    auto r = resolvent_apply(s, 1.3, sin_rhs());
    CHECK(r.residual.equation <= 1e-6);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    for (auto& seg : r.u.values)
        for (auto& y : seg) y += Spinor{u(rng), u(rng)};
    CHECK(residual_norm(s, 1.3, sin_rhs(), r.u).equation > 1e-4);
}

TEST_CASE("sample size mismatch") {
    const auto s = example_problem();
    const auto grid = make_grid(s, 2.0);
    auto samples = sample_rhs(sin_rhs(), grid);
    samples[1].pop_back();
    CHECK_THROWS_AS(resolvent_apply(s, 2.2, samples, grid), GridMismatchError);
}

TEST_CASE("rhs documents") {
    const auto f = load_rhs(testing::read_text(testing::data_dir() / "rhs_sin.json"));
    CHECK(f.kind() == RhsField::Kind::sinusoid);
    CHECK(f.at(pi / 2).y1 == doctest::Approx(1.0));
    CHECK(f.at(pi / 2).y2 == 0.0);

    const auto t = load_rhs(R"({"rhs": {"kind": "table", "x": [0, 2], "f1": [0, 4], "f2": [1, 1]}})");
    CHECK(t.at(0.5).y1 == doctest::Approx(1.0));
    CHECK(t.at(3.0).y1 == doctest::Approx(4.0));
    CHECK(load_rhs(R"({"rhs": {"kind": "constant", "f1": 2}})").at(1.0) == Spinor{2.0, 0.0});
    CHECK(load_rhs(R"({"rhs": {"kind": "zero"}})").at(1.0) == Spinor{});
    CHECK_THROWS_AS(load_rhs("{"), ParseError);
    CHECK_THROWS_AS(load_rhs(R"({"rhs": {"kind": "noise"}})"), ParseError);
    CHECK_THROWS_AS(load_rhs(R"({"other": 1})"), ParseError);
}
