#include <doctest.h>

#include <cmath>
#include <string>

#include "diracspec/errors.hpp"
#include "diracspec/model.hpp"
#include "support.hpp"

using namespace dirac;

namespace {

std::string example_text() { return testing::read_text(testing::data_dir() / "example.json"); }

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

bool message_contains(const std::function<void()>& fn, const std::string& needle) {
    try {
        fn();
    } catch (const ValidationError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("example document loads with d1 = d2 = 1") {
    const auto s = load_problem(example_text());
    CHECK(s.a == 0.0);
    CHECK(s.b == doctest::Approx(oracle::pi));
    CHECK(s.xi1 == doctest::Approx(oracle::pi / 4));
    CHECK(s.xi2 == doctest::Approx(oracle::pi / 2));
    CHECK(s.d1() == 1.0);
    CHECK(s.d2() == 1.0);
    CHECK(s.trans[0].scale == 1.0);
    CHECK(s.trans[1].shift == 0.0);
    CHECK(s.potential.kind() == PotentialField::Kind::zero);
}

TEST_CASE("built-in example equals the document") {
    const auto doc = load_problem(example_text());
    const auto ex = example_problem();
    CHECK(dump_problem(doc) == dump_problem(ex));
}

TEST_CASE("dump and reload round-trip") {
    auto s = testing::with_constant_potential(example_problem({1, 2, 3}), 0.3, -0.1, 0.2);
    s.trans[0] = {2.0, 0.25};
    const auto back = load_problem(dump_problem(s));
    CHECK(dump_problem(back) == dump_problem(s));
    CHECK(back.rho[2] == 3.0);
    CHECK(back.potential.constant_value().q == -0.1);
}

TEST_CASE("validation messages") {
    const auto text = example_text();
    CHECK(message_contains([&] { load_problem(replace(text, "{\"scale\": 1, \"shift\": 0}, {", "{\"scale\": -1, \"shift\": 0}, {")); },
                           "alpha3 > 0 violated"));
    CHECK(message_contains(
        [&] {
            auto t = replace(text, "\"alpha\": [0, 1]", "\"alpha\": [0, 0]");
            load_problem(replace(t, "\"alpha_prime\": [-1, 0]", "\"alpha_prime\": [0, 0]"));
        },
        "d1 <= 0"));
    auto s = example_problem();
    s.xi2 = s.xi1;
    CHECK(message_contains([&] { validate(s); }, "a < xi1 < xi2 < b"));
    s = example_problem();
    s.rho[1] = 0.0;
    CHECK(message_contains([&] { validate(s); }, "rho2 > 0"));
    s = example_problem();
    s.gamma = {0.0, 0.0};
    CHECK(message_contains([&] { validate(s); }, "d2 <= 0"));
    s = example_problem();
    s.trans[1].scale = 0.0;
    CHECK(message_contains([&] { validate(s); }, "alpha5 > 0"));
}

TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(load_problem("{not json"), ParseError);
    CHECK_THROWS_AS(load_problem("[]"), ParseError);
    CHECK_THROWS_AS(load_problem(replace(example_text(), "\"rho\": [1, 1, 1],", "")), ParseError);
    CHECK_THROWS_AS(load_problem(replace(example_text(), "\"rho\": [1, 1, 1]", "\"rho\": [1, 1]")), ParseError);
    CHECK_THROWS_AS(load_problem(replace(example_text(), "\"kind\": \"zero\"", "\"kind\": \"wiggly\"")), ParseError);
    CHECK_THROWS_AS(load_problem_file(testing::data_dir() / "missing.json"), ParseError);
}

TEST_CASE("potential evaluation") {
    auto s = example_problem();
    const auto z = eval_potential(s, 0.5, 0);
    CHECK(z.p == 0.0);
    CHECK(z.q == 0.0);
    CHECK(z.r == 0.0);

    s.potential = PotentialField::constant(0.3, 0.0, 0.0);
    const auto c = eval_potential(s, 1.0, 1);
    CHECK(c.p == 0.3);
    CHECK(c.q == 0.0);

    std::array<PotentialTable, 3> t;
    t[0] = {{0.0, 1.0}, {0.0, 2.0}, {}, {}};
    t[1] = {{0.0}, {0.0}, {}, {}};
    t[2] = {{0.0}, {0.0}, {}, {}};
    s.potential = PotentialField::table(t);
    CHECK(eval_potential(s, 0.25, 0).p == doctest::Approx(0.5));
    CHECK(eval_potential(s, 0.5, 0).q == 0.0);
    CHECK_THROWS_AS(eval_potential(s, -0.1, 0), std::out_of_range);
    CHECK_THROWS_AS(eval_potential(s, 2.0, 0), std::out_of_range);
}

TEST_CASE("table potential documents") {
    const std::string doc = replace(example_text(), "{\"kind\": \"zero\"}",
                                    R"({"kind": "table", "segments": [
        {"x": [0, 0.8], "p": [0, 1]}, {"x": [0.7, 1.6], "r": [1, 1]}, {"x": [1.5, 3.2], "q": [2, 2]}]})");
    const auto s = load_problem(doc);
    CHECK_FALSE(s.potential.piecewise_constant());
    CHECK(eval_potential(s, 0.4, 0).p == doctest::Approx(0.5));
    CHECK(eval_potential(s, 1.0, 1).r == 1.0);
    CHECK(eval_potential(s, 2.0, 2).q == 2.0);

    const std::string short_table = replace(example_text(), "{\"kind\": \"zero\"}",
                                            R"({"kind": "table", "segments": [
        {"x": [0.2, 0.8], "p": [0, 1]}, {"x": [0.7, 1.6]}, {"x": [1.5, 3.2]}]})");
    CHECK(message_contains([&] { load_problem(short_table); }, "does not cover"));
}

TEST_CASE("inner product of the constant element") {
    const auto s = example_problem();
    const auto g = make_grid(s, 1.0);
    const auto F = make_domain_element(s, g, [](double) { return Spinor{1.0, 0.0}; });
    CHECK(inner_product(F, F, s) == doctest::Approx(oracle::pi + 4.0).epsilon(1e-12));

    const auto Z = make_domain_element(s, g, [](double) { return Spinor{}; });
    CHECK(inner_product(Z, Z, s) == 0.0);
    CHECK(inner_product(F, Z, s) == 0.0);
}

TEST_CASE("inner product weights and symmetry") {
    auto s = example_problem({1, 1, 2});
    const auto g = make_grid(s, 1.0);
    const auto F = make_domain_element(s, g, [](double) { return Spinor{0.0, 1.0}; });
    const double expected = oracle::pi / 4 + oracle::pi / 4 + 2.0 * oracle::pi / 2;
    CHECK(inner_product(F, F, s) == doctest::Approx(expected).epsilon(1e-12));

    const auto G = make_domain_element(s, g, [](double x) { return Spinor{std::sin(x), std::cos(2 * x)}; });
    CHECK(inner_product(F, G, s) == doctest::Approx(inner_product(G, F, s)).epsilon(1e-14));

    const auto other = make_grid(s, 50.0);
    const auto H = make_domain_element(s, other, [](double) { return Spinor{1.0, 0.0}; });
    CHECK_THROWS_AS(inner_product(F, H, s), GridMismatchError);
}

TEST_CASE("domain elements honour the first-component jumps") {
    auto s = example_problem();
    s.trans[0].scale = 2.0;
    s.trans[1].scale = 3.0;
    const auto g = make_grid(s, 1.0);
    const auto F = make_domain_element(s, g, [](double) { return Spinor{1.0, 0.0}; });
    CHECK(F.f[0].front().y1 == 1.0);
    CHECK(F.f[1][5].y1 == 2.0);
    CHECK(F.f[2].back().y1 == 6.0);
    CHECK(F.v1 == 1.0);
    CHECK(F.v2 == 2.0);

    const auto G = make_domain_element(s, g, [](double) { return Spinor{0.0, 1.0}; });
    for (const auto& seg : G.f)
        for (const auto& y : seg) CHECK(y == Spinor{0.0, 1.0});

    const auto ex = example_problem();
    const auto eg = make_grid(ex, 1.0);
    const auto H = make_domain_element(ex, eg, [](double x) { return Spinor{std::sin(x), std::cos(x)}; });
    CHECK(H.f[0].back().y1 == doctest::Approx(H.f[1].front().y1).epsilon(1e-15));
    CHECK(H.f[1].back().y1 == doctest::Approx(H.f[2].front().y1).epsilon(1e-15));
    CHECK(H.r == doctest::Approx(-std::sin(0.0)));
    CHECK(H.s == doctest::Approx(std::sin(oracle::pi)).epsilon(1e-12));
}

TEST_CASE("operator is symmetric on domain elements") {
    auto s = testing::with_constant_potential(example_problem({1, 2, 1.5}), 0.2, 0.1, -0.3);
    s.trans[0] = {1.5, 0.3};
    s.trans[1] = {0.8, -0.2};
    const auto g = make_grid(s, 4.0);
    const auto F = make_domain_element(s, g, [](double x) { return Spinor{std::cos(x), std::sin(2 * x) + 1}; });
    const auto G = make_domain_element(s, g, [](double x) { return Spinor{x * x, std::exp(-x)}; });
    const double lhs = inner_product(apply_operator(s, F), G, s);
    const double rhs = inner_product(F, apply_operator(s, G), s);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("grid rules") {
    const auto s = example_problem();
    const auto g = make_grid(s, 1.0);
    for (const auto& seg : g.segments) {
        CHECK(seg.steps % 2 == 0);
        CHECK(seg.steps >= 2048);
    }
    CHECK(g[0].x0 == s.a);
    CHECK(g[2].x1 == s.b);
    CHECK(g[0].node(g[0].steps) == s.xi1);

    const auto big = make_grid(s, 100.0);
    CHECK(big[2].steps > g[2].steps);
    CHECK(big[2].h() <= 2 * oracle::pi / (1024 * 100.0) + 1e-15);

    GridOptions coarse{16, 1};
    const auto c = make_grid(s, 10.0, coarse);
    CHECK(c[0].h() <= 2 * oracle::pi / (20 * 10.0) + 1e-15);
    CHECK(s.optical_length() == doctest::Approx(oracle::pi));
}
