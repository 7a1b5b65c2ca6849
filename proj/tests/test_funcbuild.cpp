#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "treeten/funcbuild.hpp"

using namespace treeten;

namespace {

GridPoint random_point(const LabeledTree& tree, std::mt19937_64& rng) {
    GridPoint p;
    for (const auto& v : tree.vertices())
        p.set(v, static_cast<int>(rng() % 2));
    return p;
}

double horner(const std::vector<double>& c, double x) {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

} // namespace

TEST_CASE("build_constant handles positive, negative and complex scalars") {
    auto tree = make_tree("comb", 2, 4);
    std::mt19937_64 rng(21);
    for (double c : {3.0, -1.75, 0.0}) {
        auto net = build_constant<double>(tree, c);
        CHECK(net.max_bond_dim() == 1);
        for (int t = 0; t < 5; ++t)
            CHECK(evaluate(net, random_point(tree, rng)) ==
                  doctest::Approx(c).epsilon(1e-14));
    }
    const std::complex<double> z{0.5, -2.0};
    auto net = build_constant<std::complex<double>>(tree, z);
    auto val = evaluate(net, random_point(tree, rng));
    CHECK(std::abs(val - z) <= 1e-14);
}

TEST_CASE("build_exponential matches exp(k.x + a) on random grid points") {
    std::mt19937_64 rng(22);
    for (const char* name : {"path-sequential", "binary-tree", "comb"}) {
        const int n = std::string(name) == "binary-tree" ? 1 : 2;
        auto tree = make_tree(name, n, 6);
        const std::vector<double> k{1.3, -0.7};
        auto net = build_exponential<double>(tree, 2.0, k, 0.4);
        CHECK(net.max_bond_dim() == 1);
        for (int t = 0; t < 40; ++t) {
            auto p = random_point(tree, rng);
            double arg = 0.4;
            for (int i = 1; i <= n; ++i) arg += k[i - 1] * p.value(i);
            CHECK(evaluate(net, p) ==
                  doctest::Approx(2.0 * std::exp(arg)).epsilon(1e-13));
        }
    }
}

TEST_CASE("build_exponential with negative prefactor") {
    auto tree = make_tree("path-sequential", 1, 5);
    auto net = build_exponential<double>(tree, -0.5, {2.0}, 0.0);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        auto p = random_point(tree, rng);
        CHECK(evaluate(net, p) ==
              doctest::Approx(-0.5 * std::exp(2.0 * p.value(1)))
                  .epsilon(1e-13));
    }
}

TEST_CASE("complex exponential gives plane waves") {
    using C = std::complex<double>;
    auto tree = make_tree("path-interleaved", 2, 6);
    const C i{0.0, 1.0};
    auto net = build_exponential<C>(tree, C(1), {i * 3.0, i * -5.0}, C(0));
    std::mt19937_64 rng(24);
    for (int t = 0; t < 30; ++t) {
        auto p = random_point(tree, rng);
        const double arg = 3.0 * p.value(1) - 5.0 * p.value(2);
        CHECK(std::abs(evaluate(net, p) - std::exp(i * arg)) <= 1e-13);
    }
}

TEST_CASE("build_delta: spike height and unit integral") {
    auto tree = make_tree("binary-tree", 1, 4);
    auto point = encode_point(tree, {0.3125});
    auto net = build_delta<double>(tree, point);
    CHECK(evaluate(net, point) == doctest::Approx(16.0)); // 2^L
    std::mt19937_64 rng(25);
    for (int t = 0; t < 10; ++t) {
        auto p = random_point(tree, rng);
        if (!(p == point)) CHECK(evaluate(net, p) == 0.0);
    }
    auto integral = partial_integrate(net, {1});
    CHECK(std::get<double>(integral) == doctest::Approx(1.0).epsilon(1e-14));

    GridPoint partial;
    partial.set({1, 1}, 1);
    CHECK_THROWS_AS(build_delta<double>(tree, partial), OffGridPoint);
}

TEST_CASE("build_polynomial matches Horner on every grid point") {
    const std::vector<double> coeff{0.5, -1.0, 2.0, 0.25}; // cubic
    for (const char* name : {"path-sequential", "binary-tree", "star"}) {
        auto tree = make_tree(name, 1, 4);
        PolynomialSpec<double> spec{coeff, 1, {1, 1}};
        auto net = build_polynomial(tree, spec);
        for (const auto& e : tree.edges()) CHECK(net.bond_dim(e) == 4);
        for (int m = 0; m < 16; ++m) {
            const double x = m / 16.0;
            auto p = encode_point(tree, {x});
            CHECK(evaluate(net, p) ==
                  doctest::Approx(horner(coeff, x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("build_polynomial is topology independent (multi-variable trees)") {
    // p(x_2) on a 3-variable tree: non-target digits must act as pass-through
    const std::vector<double> coeff{1.0, 0.0, -3.0, 0.0, 1.5}; // quartic
    std::mt19937_64 rng(26);
    for (const char* name : {"comb", "coupled-binary", "path-interleaved"}) {
        auto tree = make_tree(name, 3, 3);
        PolynomialSpec<double> spec{coeff, 2, {2, 1}};
        auto net = build_polynomial(tree, spec);
        for (const auto& e : tree.edges()) CHECK(net.bond_dim(e) == 5);
        for (int t = 0; t < 40; ++t) {
            auto p = random_point(tree, rng);
            CHECK(evaluate(net, p) ==
                  doctest::Approx(horner(coeff, p.value(2))).epsilon(1e-12));
        }
    }
}

TEST_CASE("build_polynomial: different root digits agree") {
    const std::vector<double> coeff{0.0, 1.0, 1.0};
    auto tree = make_tree("path-sequential", 1, 5);
    PolynomialSpec<double> s1{coeff, 1, {1, 1}};
    PolynomialSpec<double> s2{coeff, 1, {1, 3}};
    auto a = build_polynomial(tree, s1);
    auto b = build_polynomial(tree, s2);
    for (int m = 0; m < 32; ++m) {
        auto p = encode_point(tree, {m / 32.0});
        CHECK(evaluate(a, p) == doctest::Approx(evaluate(b, p)).epsilon(1e-13));
    }
}

TEST_CASE("build_polynomial input validation") {
    auto tree = make_tree("path-sequential", 2, 3);
    CHECK_THROWS_AS(
        build_polynomial(tree, PolynomialSpec<double>{{}, 1, {1, 1}}),
        OutOfDomain);
    CHECK_THROWS_AS(
        build_polynomial(tree, PolynomialSpec<double>{{1.0}, 1, {2, 1}}),
        OutOfDomain);
    CHECK_THROWS_AS(
        build_polynomial(tree, PolynomialSpec<double>{{1.0}, 1, {1, 9}}),
        MissingDigit);
}

TEST_CASE("high-degree polynomial stays accurate") {
    // degree 12 Chebyshev-like alternating coefficients
    std::vector<double> coeff(13);
    for (int k = 0; k <= 12; ++k) coeff[k] = (k % 2 ? -1.0 : 1.0) / (1.0 + k);
    auto tree = make_tree("binary-tree", 1, 6);
    auto net = build_polynomial(tree, PolynomialSpec<double>{coeff, 1, {1, 1}});
    CHECK(net.max_bond_dim() == 13);
    for (int m = 0; m < 64; ++m) {
        const double x = m / 64.0;
        auto p = encode_point(tree, {x});
        CHECK(evaluate(net, p) ==
              doctest::Approx(horner(coeff, x)).epsilon(1e-11));
    }
}

TEST_CASE("build_hyperbolic matches cosh and sinh") {
    std::mt19937_64 rng(27);
    for (const char* name : {"path-sequential", "comb"}) {
        auto tree = make_tree(name, 2, 5);
        const std::vector<double> k{0.8, -1.2};
        auto ch = build_hyperbolic<double>(tree, 1.5, k, 0.3, Hyperbolic::cosh);
        auto sh = build_hyperbolic<double>(tree, 1.5, k, 0.3, Hyperbolic::sinh);
        CHECK(ch.max_bond_dim() == 2);
        CHECK(sh.max_bond_dim() == 2);
        for (int t = 0; t < 40; ++t) {
            auto p = random_point(tree, rng);
            const double arg = 0.3 + k[0] * p.value(1) + k[1] * p.value(2);
            CHECK(evaluate(ch, p) ==
                  doctest::Approx(1.5 * std::cosh(arg)).epsilon(1e-12));
            CHECK(evaluate(sh, p) ==
                  doctest::Approx(1.5 * std::sinh(arg)).epsilon(1e-12));
        }
    }
}

TEST_CASE("hyperbolic builders on a single-vertex tree") {
    auto tree = build_tree({{1, 1}}, {});
    auto ch = build_hyperbolic<double>(tree, 2.0, {1.0}, 0.1, Hyperbolic::cosh);
    for (int bit = 0; bit < 2; ++bit) {
        GridPoint p;
        p.set({1, 1}, bit);
        const double x = bit * 0.5;
        CHECK(evaluate(ch, p) ==
              doctest::Approx(2.0 * std::cosh(x + 0.1)).epsilon(1e-13));
    }
}

TEST_CASE("build_trigonometric matches cos and sin on any tree") {
    std::mt19937_64 rng(29);
    for (const char* name : {"path-sequential", "binary-tree", "comb", "star"}) {
        const int n = (std::string(name) == "comb") ? 2 : 1;
        auto tree = make_tree(name, n, n == 2 ? 4 : 6);
        const std::vector<double> k{7.3, -2.1};
        auto co = build_trigonometric<double>(tree, 1.4, k, 0.5, Trig::cos);
        auto si = build_trigonometric<double>(tree, 1.4, k, 0.5, Trig::sin);
        CHECK(co.max_bond_dim() == 2);
        for (int t = 0; t < 40; ++t) {
            auto p = random_point(tree, rng);
            double arg = 0.5;
            for (int i = 1; i <= n; ++i) arg += k[i - 1] * p.value(i);
            CHECK(evaluate(co, p) ==
                  doctest::Approx(1.4 * std::cos(arg)).epsilon(1e-12));
            CHECK(evaluate(si, p) ==
                  doctest::Approx(1.4 * std::sin(arg)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sin via complex sinh: sin t = -i sinh(i t)") {
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    auto tree = make_tree("binary-tree", 1, 8);
    auto net = build_hyperbolic<C>(tree, -i, {i * 2.5}, i * 0.2,
                                   Hyperbolic::sinh);
    std::mt19937_64 rng(28);
    for (int t = 0; t < 50; ++t) {
        auto p = random_point(tree, rng);
        const double want = std::sin(2.5 * p.value(1) + 0.2);
        CHECK(std::abs(evaluate(net, p) - C(want)) <= 1e-12);
    }
}
