#include "treeten/instances.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace treeten {

namespace {

std::vector<std::vector<double>> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open data table " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

DigitId variable_root(const LabeledTree& tree, int variable) {
    for (const auto& v : tree.vertices())
        if (v.variable == variable) return v; // vertices sorted by digit
    throw MissingDigit("variable " + std::to_string(variable) +
                       " not in tree");
}

} // namespace

std::string data_dir() {
    if (const char* env = std::getenv("TREETEN_DATA_DIR")) return env;
    return TREETEN_DATA_DIR;
}

std::vector<double> laguerre_coefficients(int n) {
    // Pascal triangle keeps the binomials exact in double up to n = 40
    std::vector<std::vector<double>> binom(n + 1,
                                           std::vector<double>(n + 1, 0.0));
    for (int m = 0; m <= n; ++m) {
        binom[m][0] = 1.0;
        for (int j = 1; j <= m; ++j)
            binom[m][j] = binom[m - 1][j - 1] + (j < m ? binom[m - 1][j] : 0.0);
    }
    std::vector<double> c(n + 1);
    double fact = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        c[k] = binom[n][k] * (k % 2 ? -1.0 : 1.0) / fact;
    }
    return c;
}

TargetFn laguerre_target() {
    auto c = laguerre_coefficients();
    return [c](const GridPoint& p) {
        const double x = p.value(1);
        double acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
}

TreeTensorNetwork<double> build_laguerre(const LabeledTree& tree) {
    PolynomialSpec<double> spec{laguerre_coefficients(), 1,
                                variable_root(tree, 1)};
    return build_polynomial(tree, spec);
}

TargetFn weierstrass_target() {
    return [](const GridPoint& p) {
        const double x = p.value(1);
        double acc = 0;
        for (int k = 1; k <= 25; ++k) {
            const double w = std::numbers::pi * k * k * k;
            acc += std::sin(w * x) / w;
        }
        return acc;
    };
}

TreeTensorNetwork<double> build_weierstrass(const LabeledTree& tree) {
    TreeTensorNetwork<double> net;
    for (int k = 1; k <= 25; ++k) {
        const double w = std::numbers::pi * k * k * k;
        auto term =
            build_trigonometric<double>(tree, 1.0 / w, {w}, 0.0, Trig::sin);
        net = k == 1 ? std::move(term) : add(net, term);
    }
    return net;
}

TargetFn planewaves_target() {
    auto k = load_csv(data_dir() + "/planewave_frequencies.csv");
    return [k](const GridPoint& p) {
        const auto r = p.values(3);
        double acc = 0;
        for (std::size_t j = 0; j < k.size(); ++j) {
            const double phase = static_cast<double>(j + 1) *
                                 (k[j][0] * r[0] + k[j][1] * r[1] +
                                  k[j][2] * r[2]);
            acc += std::cos(phase);
        }
        return acc;
    };
}

TreeTensorNetwork<std::complex<double>> build_planewaves(
    const LabeledTree& tree) {
    using C = std::complex<double>;
    const C i{0.0, 1.0};
    auto k = load_csv(data_dir() + "/planewave_frequencies.csv");
    TreeTensorNetwork<C> net;
    for (std::size_t j = 0; j < k.size(); ++j) {
        const double jj = static_cast<double>(j + 1);
        auto term = build_exponential<C>(
            tree, C(1),
            {i * jj * k[j][0], i * jj * k[j][1], i * jj * k[j][2]}, C(0));
        net = j == 0 ? std::move(term) : add(net, term);
    }
    return net;
}

TargetFn multinormal_target() {
    auto rows = load_csv(data_dir() + "/multinormal_covariance.csv");
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M(i, j) = rows[i][j];
    const Eigen::Matrix3d Minv = M.inverse();
    return [Minv](const GridPoint& p) {
        const auto u = p.values(3);
        Eigen::Vector3d d;
        for (int i = 0; i < 3; ++i) d(i) = 10.0 * u[i] - 5.0; // [0,10) - mu
        return std::exp(-d.dot(Minv * d));
    };
}

FredholmInstance make_fredholm_ex1(int L) {
    auto tx = make_tree("coupled-binary", 2, L);
    auto doubled = build_doubled_tree(tx, {1, 1}, {3, 1});

    const auto mono = [&](const LabeledTree& tree, int var,
                          std::vector<double> coeff) {
        return build_polynomial(tree, PolynomialSpec<double>{
                                          std::move(coeff), var,
                                          variable_root(tree, var)});
    };
    auto kernel = truncate(
        multiply(multiply(mono(doubled, 1, {0.0, 1.0 / 6.0}),
                          mono(doubled, 2, {0.0, 0.0, 1.0})),
                 mono(doubled, 3, {0.0, 1.0})),
        64, 1e-14);

    const double c =
        (1.0 - std::cos(1.0) * (std::sin(1.0) * std::sin(1.0) / 2.0 + 1.0)) /
        18.0;
    // c equals (int t1 dt1)(int sin^3 t2 dt2) / 6, so the identity pins the
    // sine term of g to the x2 variable
    auto g = truncate(
        add(build_trigonometric<double>(tx, 1.0, {0.0, 1.0}, 0.0, Trig::sin),
            multiply(mono(tx, 1, {0.0, -c}), mono(tx, 2, {0.0, 0.0, 1.0}))),
        64, 1e-14);

    FredholmInstance inst;
    inst.problem.g_net = std::move(g);
    inst.problem.kernel_net = std::move(kernel);
    inst.problem.alpha = 3;
    inst.problem.n_iters = 20;
    inst.problem.chi_max = 64;
    inst.problem.tol = 1e-14;
    inst.problem.L = L;
    inst.f1 = build_constant<double>(tx, 1.0);
    inst.exact = [](const GridPoint& p) { return std::sin(p.value(2)); };
    return inst;
}

FredholmInstance make_fredholm_ex2(int L) {
    auto tx = make_tree("coupled-binary", 2, L);
    auto doubled = build_doubled_tree(tx, {1, 1}, {3, 1});

    TargetFn kernel_f = [](const GridPoint& p) {
        const double x1 = p.value(1), x2 = p.value(2);
        const double t1 = p.value(3), t2 = p.value(4);
        return x1 * (1.0 + t1 + t2) / (1.0 + x2);
    };
    TargetFn g_f = [](const GridPoint& p) {
        const double x1 = p.value(1), x2 = p.value(2);
        const double s = 1.0 + x1 + x2;
        return 1.0 / (s * s) - x1 / (1.0 + x2) / 6.0;
    };
    auto [kernel, krep] = tci_learn(kernel_f, doubled, 10, 1e-12, 6);
    auto [g, grep] = tci_learn(g_f, tx, 10, 1e-12, 6);

    FredholmInstance inst;
    inst.problem.g_net = std::move(g);
    inst.problem.kernel_net = std::move(kernel);
    inst.problem.alpha = 2;
    inst.problem.n_iters = 40; // the ex2 map contracts slowly (~0.35/step)
    inst.problem.chi_max = 64;
    inst.problem.tol = 1e-14;
    inst.problem.L = L;
    inst.f1 = build_constant<double>(tx, 1.0);
    inst.exact = [](const GridPoint& p) {
        const double s = 1.0 + p.value(1) + p.value(2);
        return 1.0 / (s * s);
    };
    return inst;
}

} // namespace treeten
