#include "treeten/analysis.hpp"

#include <cmath>
#include <random>
#include <set>

namespace treeten {

namespace {

GridPoint point_from_mask(const LabeledTree& tree, std::uint64_t mask) {
    GridPoint p;
    std::size_t k = 0;
    for (const auto& v : tree.vertices()) p.set(v, (mask >> k++) & 1);
    return p;
}

GridPoint random_point(const LabeledTree& tree, std::mt19937_64& rng) {
    GridPoint p;
    for (const auto& v : tree.vertices())
        p.set(v, static_cast<int>(rng() % 2));
    return p;
}

/// Von Neumann entropy of a Hermitian PSD matrix with unit trace, with
/// sampling-noise eigenvalues clipped at zero and renormalized.
double entropy(const Eigen::MatrixXd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const double total = ev.sum();
    if (total <= 0.0) return 0.0;
    double s = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double l = ev(i) / total;
        if (l > 0.0) s -= l * std::log(l);
    }
    return s;
}

double mi_from_rdm(const Eigen::Matrix4d& rho_ab) {
    Eigen::Matrix2d rho_a = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d rho_b = Eigen::Matrix2d::Zero();
    // basis index = 2 * bit_a + bit_b
    for (int ia = 0; ia < 2; ++ia)
        for (int ja = 0; ja < 2; ++ja)
            for (int kb = 0; kb < 2; ++kb)
                rho_a(ia, ja) += rho_ab(2 * ia + kb, 2 * ja + kb);
    for (int ib = 0; ib < 2; ++ib)
        for (int jb = 0; jb < 2; ++jb)
            for (int ka = 0; ka < 2; ++ka)
                rho_b(ib, jb) += rho_ab(2 * ka + ib, 2 * ka + jb);
    return entropy(rho_a) + entropy(rho_b) - entropy(rho_ab);
}

} // namespace

SampleSet draw_samples(const LabeledTree& tree, std::size_t n,
                       std::uint64_t seed) {
    const std::size_t nd = tree.vertices().size();
    std::mt19937_64 rng(seed);
    SampleSet out;
    out.seed = seed;
    if (nd <= 62 && n <= (std::uint64_t{1} << nd)) {
        const std::uint64_t mask =
            nd == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nd) - 1;
        std::set<std::uint64_t> seen;
        while (seen.size() < n) seen.insert(rng() & mask);
        // iterate in draw-independent sorted order for determinism
        for (const auto m : seen) out.points.push_back(point_from_mask(tree, m));
    } else {
        for (std::size_t k = 0; k < n; ++k)
            out.points.push_back(random_point(tree, rng));
    }
    return out;
}

std::pair<double, double> error_metrics(const TreeTensorNetwork<double>& net,
                                        const TargetFn& f,
                                        const SampleSet& samples) {
    if (samples.points.empty())
        throw InsufficientSamples("error_metrics: empty sample set");
    double sum = 0, inf = 0;
    for (const auto& p : samples.points) {
        const double d = std::abs(evaluate(net, p) - f(p));
        sum += d;
        inf = std::max(inf, d);
    }
    return {sum / static_cast<double>(samples.points.size()), inf};
}

RdmEstimate estimate_rdm(const TargetFn& f, const LabeledTree& tree,
                         const DigitId& a, const DigitId& b,
                         std::size_t n_samples, std::uint64_t seed) {
    if (a == b) throw DimensionMismatch("estimate_rdm: digits must differ");
    if (n_samples < 1)
        throw InsufficientSamples("estimate_rdm: need at least one sample");
    std::mt19937_64 rng(seed);
    Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
    for (std::size_t s = 0; s < n_samples; ++s) {
        auto p = random_point(tree, rng);
        Eigen::Vector4d psi;
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib) {
                p.set(a, ia);
                p.set(b, ib);
                psi(2 * ia + ib) = f(p);
            }
        acc += psi * psi.transpose();
    }
    const double tr = acc.trace();
    if (!(tr > 0.0))
        throw InsufficientSamples("estimate_rdm: trace underflow");
    RdmEstimate est;
    est.rho_ab = acc / tr;
    est.sample_count = n_samples;
    return est;
}

double mutual_information(const TargetFn& f, const LabeledTree& tree,
                          const DigitId& a, const DigitId& b,
                          std::size_t n_samples, std::uint64_t seed) {
    return mi_from_rdm(estimate_rdm(f, tree, a, b, n_samples, seed).rho_ab);
}

MiMatrix mi_matrix(const TargetFn& f, const LabeledTree& tree,
                   std::size_t n_samples, std::uint64_t seed) {
    MiMatrix out;
    out.digits = tree.vertices();
    const std::size_t nd = out.digits.size();
    out.values.assign(nd, std::vector<double>(nd, 0.0));
    for (std::size_t i = 0; i < nd; ++i)
        for (std::size_t j = i + 1; j < nd; ++j) {
            // pair-specific but run-stable seed
            const std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (i * nd + j));
            const double m = mutual_information(f, tree, out.digits[i],
                                                out.digits[j], n_samples, s);
            out.values[i][j] = m;
            out.values[j][i] = m;
        }
    return out;
}

} // namespace treeten
