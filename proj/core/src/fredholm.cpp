#include "treeten/fredholm.hpp"

#include <cmath>
#include <random>

#include "treeten/funcbuild.hpp"

namespace treeten {

namespace {

DigitId remap_digit(const DigitId& d, const std::map<int, int>& mapping) {
    return {mapping.at(d.variable), d.digit};
}

GridPoint random_point(const LabeledTree& tree, std::mt19937_64& rng) {
    GridPoint p;
    for (const auto& v : tree.vertices())
        p.set(v, static_cast<int>(rng() % 2));
    return p;
}

/// Extend a t-tree network to the doubled tree: ones with dim-1 bonds on the
/// x side, a dim-1 bridge stub on the t-side bridge vertex.
TreeTensorNetwork<double> lift_to_doubled(const TreeTensorNetwork<double>& pt,
                                          const LabeledTree& doubled,
                                          const DigitId& bridge_x,
                                          const DigitId& bridge_t) {
    TreeTensorNetwork<double> out;
    out.tree = doubled;
    const auto bridge_bond = bond_index_name(bridge_x, bridge_t);
    for (const auto& v : doubled.vertices()) {
        if (pt.tree.has_vertex(v)) {
            const auto& src = pt.tensors.at(v);
            std::vector<IndexInfo> idx(src.indices());
            auto vals = src.values();
            if (v == bridge_t) idx.push_back({bridge_bond, 1});
            out.tensors.emplace(v,
                                DenseTensor<double>(std::move(idx),
                                                    std::move(vals)));
        } else {
            std::vector<IndexInfo> idx{{external_index_name(v), 2}};
            for (const auto& w : doubled.neighbors(v))
                idx.push_back({bond_index_name(v, w), 1});
            DenseTensor<double> t(idx);
            t.at_flat(0) = 1.0;
            t.at_flat(1) = 1.0;
            out.tensors.emplace(v, std::move(t));
        }
    }
    return out;
}

} // namespace

TreeTensorNetwork<double> remap_variables(const TreeTensorNetwork<double>& net,
                                          const std::map<int, int>& mapping) {
    std::set<int> targets;
    for (const auto& [from, to] : mapping)
        if (!targets.insert(to).second)
            throw LabelCollision("remap_variables: duplicate target variable " +
                                 std::to_string(to));
    for (const auto& v : net.tree.vertices())
        if (mapping.find(v.variable) == mapping.end())
            throw LabelCollision("remap_variables: variable " +
                                 std::to_string(v.variable) + " unmapped");

    std::vector<DigitId> vs;
    std::vector<Edge> es;
    for (const auto& v : net.tree.vertices())
        vs.push_back(remap_digit(v, mapping));
    for (const auto& e : net.tree.edges())
        es.push_back(make_edge(remap_digit(e.first, mapping),
                               remap_digit(e.second, mapping)));
    TreeTensorNetwork<double> out;
    out.tree = build_tree(vs, es);
    for (const auto& v : net.tree.vertices()) {
        const auto nv = remap_digit(v, mapping);
        const auto& src = net.tensors.at(v);
        std::vector<IndexInfo> idx;
        for (const auto& ix : src.indices()) {
            if (ix.name == external_index_name(v)) {
                idx.push_back({external_index_name(nv), ix.dim});
                continue;
            }
            bool found = false;
            for (const auto& w : net.tree.neighbors(v))
                if (ix.name == bond_index_name(v, w)) {
                    idx.push_back({bond_index_name(nv, remap_digit(w, mapping)),
                                   ix.dim});
                    found = true;
                    break;
                }
            if (!found)
                throw DimensionMismatch("remap_variables: stray index " +
                                        ix.name);
        }
        out.tensors.emplace(nv, DenseTensor<double>(std::move(idx),
                                                    src.values()));
    }
    return out;
}

LabeledTree build_doubled_tree(const LabeledTree& tx, const DigitId& bridge_x,
                               const DigitId& bridge_t) {
    const int n = tx.num_variables();
    if (!tx.has_vertex(bridge_x))
        throw MissingDigit("build_doubled_tree: bridge_x not in the x tree");
    if (bridge_t.variable <= n)
        throw LabelCollision("build_doubled_tree: bridge_t must carry a t "
                             "label (variable > n)");
    std::vector<DigitId> vs = tx.vertices();
    std::vector<Edge> es = tx.edges();
    for (const auto& v : tx.vertices())
        vs.push_back({v.variable + n, v.digit});
    for (const auto& e : tx.edges())
        es.push_back(make_edge({e.first.variable + n, e.first.digit},
                               {e.second.variable + n, e.second.digit}));
    es.push_back(make_edge(bridge_x, bridge_t));
    return build_tree(vs, es); // rejects a duplicate bridge as a cycle
}

std::pair<TreeTensorNetwork<double>, SolveTrace> solve(
    const FredholmProblem& problem, const TreeTensorNetwork<double>& f1,
    const std::optional<TargetFn>& reference, std::uint64_t sample_seed) {
    if (problem.alpha < 1)
        throw DimensionMismatch("solve: alpha must be positive");
    const auto& tx = problem.g_net.tree;
    if (!(f1.tree == tx)) throw TreeMismatch("solve: f1 not on the x tree");
    const int n = tx.num_variables();

    // locate the single bridge edge of the kernel tree
    const auto& tk = problem.kernel_net.tree;
    DigitId bridge_x{0, 0}, bridge_t{0, 0};
    int bridges = 0;
    for (const auto& e : tk.edges()) {
        const bool fx = e.first.variable <= n;
        const bool sx = e.second.variable <= n;
        if (fx != sx) {
            ++bridges;
            bridge_x = fx ? e.first : e.second;
            bridge_t = fx ? e.second : e.first;
        }
    }
    if (bridges != 1)
        throw TreeMismatch("solve: kernel tree must have exactly one bridge");

    std::map<int, int> x_to_t, t_to_x;
    for (int i = 1; i <= n; ++i) {
        x_to_t[i] = i + n;
        t_to_x[i + n] = i;
    }
    std::vector<int> t_vars;
    for (int i = 1; i <= n; ++i) t_vars.push_back(i + n);

    // per-edge rank bound chi_g + chi_{K,T} on the x tree
    std::map<Edge, std::size_t> bound;
    for (const auto& e : tx.edges())
        bound[e] = problem.g_net.bond_dim(e) + problem.kernel_net.bond_dim(e);

    // fixed sample set for convergence/divergence monitoring
    std::mt19937_64 rng(sample_seed);
    std::vector<GridPoint> probes;
    for (int k = 0; k < 100; ++k) probes.push_back(random_point(tx, rng));
    const double floor = problem.L > 0 ? std::ldexp(1.0, -problem.L) : 0.0;

    auto sample_vals = [&](const TreeTensorNetwork<double>& net) {
        std::vector<double> vals;
        for (const auto& p : probes) vals.push_back(evaluate(net, p));
        return vals;
    };

    TreeTensorNetwork<double> f = f1;
    auto f_vals = sample_vals(f);
    SolveTrace trace;
    int growing = 0;
    double prev_change = 0;

    for (int it = 0; it < problem.n_iters; ++it) {
        auto ft = remap_variables(f, x_to_t);
        // f(t)^alpha by staged multiplication
        auto p = ft;
        for (int a = 1; a < problem.alpha; ++a)
            p = truncate(multiply(p, ft), problem.chi_max, 1e-14);
        auto lifted = lift_to_doubled(p, tk, bridge_x, bridge_t);
        auto kf = truncate(multiply(problem.kernel_net, lifted),
                           problem.chi_max, 1e-14);
        auto integrated = partial_integrate(kf, t_vars);
        auto& integral = std::get<TreeTensorNetwork<double>>(integrated);
        if (problem.lambda != 1.0) {
            // lambda folded into one tensor; kept for completeness
            auto& t0 = integral.tensors.begin()->second;
            for (std::size_t k = 0; k < t0.size(); ++k)
                t0.at_flat(k) *= problem.lambda;
        }
        auto next = truncate(add(problem.g_net, integral), problem.chi_max,
                             problem.tol);

        bool ok = true;
        for (const auto& e : tx.edges())
            if (next.bond_dim(e) > bound.at(e)) ok = false;
        trace.rank_bound_ok.push_back(ok);
        trace.max_bonds.push_back(next.max_bond_dim());

        const auto next_vals = sample_vals(next);
        double change = 0, scale = 0;
        for (std::size_t k = 0; k < probes.size(); ++k) {
            change = std::max(change, std::abs(next_vals[k] - f_vals[k]));
            scale = std::max(scale, std::abs(f_vals[k]));
        }
        const double rel = change / std::max(scale, 1e-300);
        trace.changes.push_back(rel);

        if (reference) {
            double err = 0;
            for (std::size_t k = 0; k < probes.size(); ++k)
                err = std::max(err,
                               std::abs(next_vals[k] - (*reference)(probes[k])));
            trace.errors.push_back(err);
        }

        if (it > 0 && rel > prev_change) {
            if (++growing >= 3) trace.diverged = true;
        } else {
            growing = 0;
        }
        prev_change = rel;

        f = std::move(next);
        f_vals = next_vals;
        if (floor > 0.0 && rel < floor) {
            trace.converged = true;
            break;
        }
    }
    return {std::move(f), std::move(trace)};
}

} // namespace treeten
