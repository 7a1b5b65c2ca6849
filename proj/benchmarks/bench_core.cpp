#include <benchmark/benchmark.h>

#include <random>

#include "treeten/funcbuild.hpp"
#include "treeten/ttn.hpp"

using namespace treeten;

namespace {

DenseTensor<double> random_tensor(std::mt19937_64& rng,
                                  const std::vector<IndexInfo>& idx) {
    DenseTensor<double> t(idx);
    std::uniform_real_distribution<double> dist(-1, 1);
    for (std::size_t k = 0; k < t.size(); ++k) t.at_flat(k) = dist(rng);
    return t;
}

TreeTensorNetwork<double> random_net(std::mt19937_64& rng,
                                     const LabeledTree& tree,
                                     std::size_t chi) {
    TreeTensorNetwork<double> net;
    net.tree = tree;
    for (const auto& v : tree.vertices()) {
        std::vector<IndexInfo> idx{{external_index_name(v), 2}};
        for (const auto& w : tree.neighbors(v))
            idx.push_back({bond_index_name(v, w), chi});
        net.tensors.emplace(v, random_tensor(rng, idx));
    }
    return net;
}

void bm_contract(benchmark::State& state) {
    const std::size_t chi = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    auto a = random_tensor(rng, {{"i", chi}, {"j", chi}, {"k", chi}});
    auto b = random_tensor(rng, {{"j", chi}, {"k", chi}, {"l", chi}});
    for (auto _ : state) benchmark::DoNotOptimize(contract(a, b));
}
BENCHMARK(bm_contract)->Arg(8)->Arg(32)->Arg(64);

void bm_evaluate(benchmark::State& state) {
    const std::size_t chi = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    auto tree = make_tree("comb", 3, 10);
    auto net = random_net(rng, tree, chi);
    auto p = encode_point(tree, {0.37, 0.55, 0.91});
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(net, p));
}
BENCHMARK(bm_evaluate)->Arg(4)->Arg(16)->Arg(32);

void bm_truncate(benchmark::State& state) {
    const std::size_t chi = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    auto tree = make_tree("comb", 2, 8);
    auto net = random_net(rng, tree, chi);
    for (auto _ : state)
        benchmark::DoNotOptimize(truncate(net, chi / 2, 0.0));
}
BENCHMARK(bm_truncate)->Arg(8)->Arg(16)->Arg(32);

void bm_multiply_truncate(benchmark::State& state) {
    auto tree = make_tree("binary-tree", 1, 10);
    auto a = build_hyperbolic<double>(tree, 1.0, {2.0}, 0.0, Hyperbolic::cosh);
    auto b = build_hyperbolic<double>(tree, 1.0, {-1.0}, 0.3, Hyperbolic::cosh);
    for (auto _ : state) {
        auto m = multiply(a, b);
        benchmark::DoNotOptimize(truncate(m, 4, 1e-12));
    }
}
BENCHMARK(bm_multiply_truncate);

} // namespace

BENCHMARK_MAIN();
