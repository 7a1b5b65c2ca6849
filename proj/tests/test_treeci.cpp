#include "doctest.h"

#include <cmath>
#include <random>

#include "treeten/funcbuild.hpp"
#include "treeten/treeci.hpp"

using namespace treeten;

namespace {

GridPoint random_point(const LabeledTree& tree, std::mt19937_64& rng) {
    GridPoint p;
    for (const auto& v : tree.vertices())
        p.set(v, static_cast<int>(rng() % 2));
    return p;
}

} // namespace

TEST_CASE("init_gauge: exact rank-1 guess keeps center exact") {
    auto tree = make_tree("binary-tree", 1, 6);
    auto net = build_exponential<double>(tree, 1.0, {1.7}, 0.0);
    TargetFn f = [](const GridPoint& p) { return std::exp(1.7 * p.value(1)); };
    auto st = init_gauge(net, f, {1, 1});
    CHECK(st.center == DigitId{1, 1});
    CHECK(verify_gauge(st, 40, 7) <= 1e-12);
    for (const auto& e : st.net.tree.edges())
        CHECK(st.net.bond_dim(e) <= net.bond_dim(e));
}

TEST_CASE("init_gauge: constant guess against cosh stays valid") {
    auto tree = make_tree("path-sequential", 1, 6);
    auto guess = build_constant<double>(tree, 1.0);
    TargetFn f = [](const GridPoint& p) { return std::cosh(3.0 * p.value(1)); };
    auto st = init_gauge(guess, f, {1, 1});
    for (const auto& e : st.net.tree.edges()) CHECK(st.net.bond_dim(e) == 1);
    // center entries are exact f values by construction
    CHECK(verify_gauge(st, 20, 3) <= 1e-12);
    // pivot lists are complete partial configurations
    for (const auto& [edge, list] : st.pivots.lists) {
        CHECK(list.size() == st.net.bond_dim(make_edge(edge.first,
                                                       edge.second)));
        for (const auto& cfg : list)
            for (const auto& [d, b] : cfg.bits()) CHECK((b == 0 || b == 1));
    }
}

TEST_CASE("init_gauge rejects the zero network") {
    auto tree = make_tree("path-sequential", 1, 4);
    auto zero = build_constant<double>(tree, 0.0);
    TargetFn f = [](const GridPoint&) { return 1.0; };
    CHECK_THROWS_AS(init_gauge(zero, f, {1, 1}), DegenerateInit);
}

TEST_CASE("two_site_update: fixed point when f is captured exactly") {
    auto tree = make_tree("path-sequential", 1, 5);
    auto net = build_exponential<double>(tree, 2.0, {-0.9}, 0.1);
    TargetFn f = [](const GridPoint& p) {
        return 2.0 * std::exp(-0.9 * p.value(1) + 0.1);
    };
    auto st = init_gauge(net, f, {1, 1});
    const double dev = two_site_update(st, {1, 2}, 4, 1e-12);
    CHECK(dev <= 1e-12);
    CHECK(st.center == DigitId{1, 2});
    for (const auto& e : st.net.tree.edges()) CHECK(st.net.bond_dim(e) == 1);
    CHECK(verify_gauge(st, 20, 9) <= 1e-12);
}

TEST_CASE("two_site_update: cosh grows the visited edge to rank 2") {
    auto tree = make_tree("path-sequential", 1, 5);
    auto guess = build_constant<double>(tree, std::cosh(0.0));
    TargetFn f = [](const GridPoint& p) { return std::cosh(2.0 * p.value(1)); };
    auto st = init_gauge(guess, f, {1, 1});
    two_site_update(st, {1, 2}, 2, 1e-12);
    CHECK(st.net.bond_dim(make_edge({1, 1}, {1, 2})) == 2);
    CHECK(st.pivots.lists.at({{1, 1}, {1, 2}}).size() == 2);
    CHECK(verify_gauge(st, 20, 11) <= 1e-12);
}

TEST_CASE("sweep: error collapses once the function is captured") {
    auto tree = make_tree("binary-tree", 1, 6);
    TargetFn f = [](const GridPoint& p) { return std::cosh(2.5 * p.value(1)); };
    auto guess = build_constant<double>(tree, f(GridPoint([&] {
        std::map<DigitId, int> m;
        for (const auto& v : tree.vertices()) m[v] = 0;
        return m;
    }())));
    auto st = init_gauge(guess, f, {1, 1});
    sweep(st, 2, 1e-12);
    sweep(st, 2, 1e-12);
    const double err = sweep(st, 2, 1e-12);
    CHECK(err <= 1e-10);
    CHECK(st.center == DigitId{1, 1}); // euler tour returns home
    for (const auto& e : st.net.tree.edges()) CHECK(st.net.bond_dim(e) <= 2);
}

TEST_CASE("gauge invariant holds at checkpoints during sweeping") {
    auto tree = make_tree("comb", 2, 3);
    TargetFn f = [](const GridPoint& p) {
        const auto x = p.values(2);
        return std::cosh(x[0] + 0.5 * x[1]) + 0.3 * x[0] * x[1];
    };
    auto guess = build_constant<double>(tree, f(GridPoint([&] {
        std::map<DigitId, int> m;
        for (const auto& v : tree.vertices()) m[v] = 0;
        return m;
    }())));
    auto st = init_gauge(guess, f, {1, 1});
    for (int s = 0; s < 4; ++s) {
        sweep(st, 4, 1e-12);
        CHECK(verify_gauge(st, 20, 100 + s) <= 1e-12);
    }
}

TEST_CASE("tci_learn: cosh at chi_max 2 reaches 1e-10") {
    auto tree = make_tree("path-sequential", 1, 16);
    TargetFn f = [](const GridPoint& p) { return std::cosh(3.0 * p.value(1)); };
    auto [net, report] = tci_learn(f, tree, 2, 1e-13, 5);
    REQUIRE(report.sweeps.size() == 5);
    CHECK(net.max_bond_dim() <= 2);
    std::mt19937_64 rng(31);
    double emax = 0;
    for (int t = 0; t < 1000; ++t) {
        auto p = random_point(tree, rng);
        emax = std::max(emax, std::abs(evaluate(net, p) - f(p)));
    }
    CHECK(emax <= 1e-10);
    CHECK(report.sweeps.back().call_count > 0);
}

TEST_CASE("tci_learn: cubic polynomial at chi_max 4") {
    auto tree = make_tree("binary-tree", 1, 10);
    TargetFn f = [](const GridPoint& p) {
        const double x = p.value(1);
        return 0.2 - x + 3.0 * x * x - 0.7 * x * x * x;
    };
    auto [net, report] = tci_learn(f, tree, 4, 1e-13, 5);
    CHECK(net.max_bond_dim() <= 4);
    std::mt19937_64 rng(32);
    double esum = 0;
    const int N = 1000;
    for (int t = 0; t < N; ++t) {
        auto p = random_point(tree, rng);
        esum += std::abs(evaluate(net, p) - f(p));
    }
    CHECK(esum / N <= 1e-10);
}

TEST_CASE("tci_learn: bivariate target on a comb, bond cap respected") {
    auto tree = make_tree("comb", 2, 6);
    TargetFn f = [](const GridPoint& p) {
        const auto x = p.values(2);
        return std::exp(-x[0] * x[0] - 0.8 * x[0] * x[1] - x[1] * x[1]);
    };
    auto [net, report] = tci_learn(f, tree, 6, 1e-12, 5);
    for (const auto& e : net.tree.edges()) CHECK(net.bond_dim(e) <= 6);
    std::mt19937_64 rng(33);
    double emax = 0;
    for (int t = 0; t < 500; ++t) {
        auto p = random_point(tree, rng);
        emax = std::max(emax, std::abs(evaluate(net, p) - f(p)));
    }
    CHECK(emax <= 1e-6); // smooth gaussian: low rank suffices
    // sweep errors should settle down rather than diverge
    CHECK(report.sweeps.back().error <= report.sweeps.front().error + 1e-12);
}

TEST_CASE("tci_learn: zero at the origin falls back to a usable guess") {
    auto tree = make_tree("path-sequential", 1, 8);
    TargetFn f = [](const GridPoint& p) { return std::sin(3.0 * p.value(1)); };
    auto [net, report] = tci_learn(f, tree, 3, 1e-13, 5);
    std::mt19937_64 rng(34);
    double emax = 0;
    for (int t = 0; t < 500; ++t) {
        auto p = random_point(tree, rng);
        emax = std::max(emax, std::abs(evaluate(net, p) - f(p)));
    }
    CHECK(emax <= 1e-9); // sin has exact rank 2; chi_max 3 is ample
}
