#include "doctest.h"

#include <cmath>
#include <set>

#include "treeten/analysis.hpp"
#include "treeten/funcbuild.hpp"

using namespace treeten;

TEST_CASE("draw_samples: deterministic, unique on small grids") {
    auto tree = make_tree("path-sequential", 1, 4);
    auto a = draw_samples(tree, 12, 99);
    auto b = draw_samples(tree, 12, 99);
    REQUIRE(a.points.size() == 12);
    CHECK(a.points == b.points);
    std::set<std::vector<int>> uniq;
    for (const auto& p : a.points) {
        std::vector<int> bits;
        for (const auto& [d, v] : p.bits()) bits.push_back(v);
        uniq.insert(bits);
    }
    CHECK(uniq.size() == 12); // without replacement
    auto c = draw_samples(tree, 12, 100);
    CHECK(!(a.points == c.points));
}

TEST_CASE("error_metrics: exact net and constant offset") {
    auto tree = make_tree("binary-tree", 1, 8);
    auto net = build_exponential<double>(tree, 1.0, {1.0}, 0.0);
    TargetFn f = [](const GridPoint& p) { return std::exp(p.value(1)); };
    auto samples = draw_samples(tree, 200, 5);
    auto [eps, eps_inf] = error_metrics(net, f, samples);
    CHECK(eps <= 1e-12);
    CHECK(eps_inf <= 1e-12);

    auto shifted = add(net, build_constant<double>(tree, 0.1));
    auto [e2, e2i] = error_metrics(shifted, f, samples);
    CHECK(e2 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(e2i == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(e2 <= e2i);

    CHECK_THROWS_AS(error_metrics(net, f, SampleSet{}), InsufficientSamples);
}

TEST_CASE("eps <= eps_inf on arbitrary data") {
    auto tree = make_tree("comb", 2, 3);
    auto net = build_hyperbolic<double>(tree, 1.0, {1.0, -2.0}, 0.0,
                                        Hyperbolic::cosh);
    TargetFn f = [](const GridPoint& p) {
        const auto x = p.values(2);
        return std::sin(5 * x[0]) + x[1];
    };
    auto samples = draw_samples(tree, 50, 17);
    auto [eps, eps_inf] = error_metrics(net, f, samples);
    CHECK(eps <= eps_inf);
}

TEST_CASE("mutual information: product function decorrelates") {
    auto tree = make_tree("path-sequential", 2, 4);
    TargetFn f = [](const GridPoint& p) {
        const auto x = p.values(2);
        return (1.0 + std::sin(4 * x[0])) * std::exp(-x[1]);
    };
    const double m = mutual_information(f, tree, {1, 1}, {2, 1}, 10000, 7);
    CHECK(m >= -1e-10);
    CHECK(m <= 0.05);
}

TEST_CASE("mutual information: maximally correlated two-bit case") {
    auto tree = make_tree("path-sequential", 2, 1); // one digit per variable
    const double r = 1.0 / std::sqrt(2.0);
    TargetFn f = [r](const GridPoint& p) {
        return p.bit({1, 1}) == p.bit({2, 1}) ? r : 0.0;
    };
    // no environment digits: a single sample already gives the exact trace
    const double m = mutual_information(f, tree, {1, 1}, {2, 1}, 1, 1);
    CHECK(m == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("rdm estimate: unit trace, PSD, Hermitian") {
    auto tree = make_tree("path-sequential", 1, 5);
    TargetFn f = [](const GridPoint& p) {
        return std::cos(7 * p.value(1)) + 1.2;
    };
    auto est = estimate_rdm(f, tree, {1, 1}, {1, 3}, 500, 3);
    CHECK(std::abs(est.rho_ab.trace() - 1.0) <= 1e-10);
    CHECK((est.rho_ab - est.rho_ab.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(est.rho_ab);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);

    TargetFn zero = [](const GridPoint&) { return 0.0; };
    CHECK_THROWS_AS(estimate_rdm(zero, tree, {1, 1}, {1, 2}, 10, 3),
                    InsufficientSamples);
    CHECK_THROWS_AS(estimate_rdm(f, tree, {1, 1}, {1, 1}, 10, 3),
                    DimensionMismatch);
}

TEST_CASE("mi_matrix: symmetry, zero diagonal, product decorrelation") {
    auto tree = make_tree("path-sequential", 2, 3);
    TargetFn f = [](const GridPoint& p) {
        const auto x = p.values(2);
        return std::exp(x[0]) * (2.0 + std::cos(6 * x[1]));
    };
    auto mi = mi_matrix(f, tree, 2000, 11);
    const std::size_t nd = mi.digits.size();
    REQUIRE(nd == 6);
    for (std::size_t i = 0; i < nd; ++i) {
        CHECK(mi.values[i][i] == 0.0);
        for (std::size_t j = 0; j < nd; ++j) {
            CHECK(mi.values[i][j] == mi.values[j][i]); // exact symmetry
            if (mi.digits[i].variable != mi.digits[j].variable)
                CHECK(mi.values[i][j] <= 0.05);
        }
    }
    auto mi2 = mi_matrix(f, tree, 2000, 11);
    CHECK(mi.values == mi2.values); // deterministic under fixed seed
}

TEST_CASE("mi_matrix: symmetric function gives mirrored correlations") {
    auto tree = make_tree("path-sequential", 2, 2);
    TargetFn f = [](const GridPoint& p) {
        const auto x = p.values(2);
        return std::exp(-(x[0] - x[1]) * (x[0] - x[1]) * 8.0);
    };
    auto mi = mi_matrix(f, tree, 20000, 13);
    // digits sorted: (1,1) (1,2) (2,1) (2,2)
    const double m_x1_y2 = mi.values[0][3]; // M(x digit1, y digit2)
    const double m_y1_x2 = mi.values[2][1]; // M(y digit1, x digit2)
    CHECK(std::abs(m_x1_y2 - m_y1_x2) <= 0.05);
}
