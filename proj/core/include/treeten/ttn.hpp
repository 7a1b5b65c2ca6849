#pragma once

#include <map>
#include <variant>
#include <vector>

#include "treeten/tensor.hpp"
#include "treeten/topology.hpp"

namespace treeten {

/// One DenseTensor per tree vertex. Every tensor carries the external index
/// of its digit (dim 2) plus one bond index per incident edge, named
/// canonically via bond_index_name.
template <class Scalar>
struct TreeTensorNetwork {
    LabeledTree tree;
    std::map<DigitId, DenseTensor<Scalar>> tensors;

    std::size_t bond_dim(const Edge& e) const {
        return tensors.at(e.first).dim(bond_index_name(e.first, e.second));
    }

    std::size_t max_bond_dim() const {
        std::size_t chi = tree.edges().empty() ? 1 : 0;
        for (const auto& e : tree.edges()) chi = std::max(chi, bond_dim(e));
        return chi;
    }
};

struct NetworkStats {
    std::size_t max_bond = 0;
    std::map<Edge, std::size_t> per_edge_bonds;
    std::size_t memory_bytes = 0; // 8 bytes per stored scalar
};

namespace detail {

template <class Scalar>
void check_consistent(const TreeTensorNetwork<Scalar>& net) {
    for (const auto& v : net.tree.vertices()) {
        const auto& t = net.tensors.at(v);
        if (t.dim(external_index_name(v)) != 2)
            throw DimensionMismatch("external index of " + to_string(v) +
                                    " must have dim 2");
        if (t.order() != static_cast<std::size_t>(net.tree.degree(v)) + 1)
            throw DimensionMismatch("tensor order mismatch at " + to_string(v));
    }
    for (const auto& e : net.tree.edges()) {
        const auto nm = bond_index_name(e.first, e.second);
        if (net.tensors.at(e.first).dim(nm) != net.tensors.at(e.second).dim(nm))
            throw DimensionMismatch("bond dim mismatch on " + nm);
    }
}

template <class Scalar>
DenseTensor<Scalar> contract_subtree(const TreeTensorNetwork<Scalar>& net,
                                     const GridPoint& p, const DigitId& u,
                                     const DigitId* parent) {
    DenseTensor<Scalar> acc =
        slice(net.tensors.at(u), external_index_name(u),
              static_cast<std::size_t>(p.bit(u)));
    for (const auto& v : net.tree.neighbors(u)) {
        if (parent && v == *parent) continue;
        acc = contract(acc, contract_subtree(net, p, v, &u));
    }
    return acc;
}

template <class Scalar>
DigitId default_root(const TreeTensorNetwork<Scalar>& net) {
    if (net.tree.has_vertex({1, 1})) return {1, 1};
    return net.tree.vertices().front();
}

/// Names of all indices of `t` except the bond toward `other`.
template <class Scalar>
std::vector<std::string> rows_away_from(const DenseTensor<Scalar>& t,
                                        const DigitId& u, const DigitId& other) {
    const auto skip = bond_index_name(u, other);
    std::vector<std::string> rows;
    for (const auto& ix : t.indices())
        if (ix.name != skip) rows.push_back(ix.name);
    return rows;
}

} // namespace detail

/// Contract the network at a full bit assignment: slice every tensor at its
/// bit value and contract leaves-to-root.
template <class Scalar>
Scalar evaluate(const TreeTensorNetwork<Scalar>& net, const GridPoint& p) {
    if (!p.complete_for(net.tree))
        throw IncompleteGridPoint("grid point does not cover the tree");
    const DigitId root = detail::default_root(net);
    const auto res = detail::contract_subtree(net, p, root, nullptr);
    return res.values().at(0);
}

/// Pointwise addition: per-vertex direct sum over slices; edge-wise bond dims
/// add.
template <class Scalar>
TreeTensorNetwork<Scalar> add(const TreeTensorNetwork<Scalar>& a,
                              const TreeTensorNetwork<Scalar>& b) {
    if (!(a.tree == b.tree)) throw TreeMismatch("add: trees differ");
    TreeTensorNetwork<Scalar> out;
    out.tree = a.tree;
    for (const auto& v : a.tree.vertices())
        out.tensors.emplace(
            v, direct_sum(a.tensors.at(v), b.tensors.at(v),
                          {external_index_name(v)}));
    return out;
}

/// Pointwise multiplication: per-vertex outer product with bond-pair fusion;
/// edge-wise bond dims multiply.
template <class Scalar>
TreeTensorNetwork<Scalar> multiply(const TreeTensorNetwork<Scalar>& a,
                                   const TreeTensorNetwork<Scalar>& b) {
    if (!(a.tree == b.tree)) throw TreeMismatch("multiply: trees differ");
    TreeTensorNetwork<Scalar> out;
    out.tree = a.tree;
    for (const auto& v : a.tree.vertices()) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& w : a.tree.neighbors(v)) {
            const auto nm = bond_index_name(v, w);
            pairs.push_back({nm, nm});
        }
        out.tensors.emplace(v, outer_fuse(a.tensors.at(v), b.tensors.at(v),
                                          {external_index_name(v)}, pairs));
    }
    return out;
}

/// SVD truncation sweep: orthogonalize toward the root (vertex (1,1) when
/// present), then visit every edge depth-first, splitting with svd_split and
/// restoring orthogonality on the way back up.
template <class Scalar>
TreeTensorNetwork<Scalar> truncate(const TreeTensorNetwork<Scalar>& net,
                                   std::size_t chi_max, double tol) {
    TreeTensorNetwork<Scalar> out = net;
    if (out.tree.edges().empty()) return out;
    const DigitId root = detail::default_root(out);
    const std::string tmp = "__split";

    // orthogonalize everything toward the root (children before parents)
    auto orthogonalize = [&](auto&& self, const DigitId& u,
                             const DigitId* parent) -> void {
        for (const auto& v : out.tree.neighbors(u))
            if (!parent || !(v == *parent)) self(self, v, &u);
        if (!parent) return;
        const auto e = bond_index_name(u, *parent);
        auto f = qr_split(out.tensors.at(u),
                          detail::rows_away_from(out.tensors.at(u), u, *parent),
                          tmp);
        f.left.rename_index(tmp, e + "#");
        f.right.rename_index(tmp, e + "#");
        out.tensors.at(u) = std::move(f.left);
        auto r = contract(f.right, out.tensors.at(*parent));
        r.rename_index(e + "#", e);
        out.tensors.at(u).rename_index(e + "#", e);
        out.tensors.at(*parent) = std::move(r);
    };
    orthogonalize(orthogonalize, root, nullptr);

    auto sweep = [&](auto&& self, const DigitId& u, const DigitId* parent)
        -> void {
        for (const auto& v : out.tree.neighbors(u)) {
            if (parent && v == *parent) continue;
            const auto e = bond_index_name(u, v);
            // center at u; truncate edge (u,v) and move the center to v
            auto f = svd_split(
                out.tensors.at(u),
                detail::rows_away_from(out.tensors.at(u), u, v), chi_max, tol,
                tmp);
            f.left.rename_index(tmp, e + "#");
            f.right.rename_index(tmp, e + "#");
            out.tensors.at(u) = std::move(f.left);
            auto r = contract(f.right, out.tensors.at(v));
            r.rename_index(e + "#", e);
            out.tensors.at(u).rename_index(e + "#", e);
            out.tensors.at(v) = std::move(r);
            self(self, v, &u);
            // re-orthogonalize v toward u
            auto g = qr_split(out.tensors.at(v),
                              detail::rows_away_from(out.tensors.at(v), v, u),
                              tmp);
            g.left.rename_index(tmp, e + "#");
            g.right.rename_index(tmp, e + "#");
            out.tensors.at(v) = std::move(g.left);
            auto s = contract(g.right, out.tensors.at(u));
            s.rename_index(e + "#", e);
            out.tensors.at(v).rename_index(e + "#", e);
            out.tensors.at(u) = std::move(s);
        }
    };
    sweep(sweep, root, nullptr);
    return out;
}

/// Integrate the listed variables over [0,1) by the left-endpoint Riemann sum
/// on the 2^L grid: contract each selected external index with (1/2, 1/2) and
/// absorb the vertex into a neighbor. Returns a scalar when every variable is
/// integrated out.
template <class Scalar>
std::variant<TreeTensorNetwork<Scalar>, Scalar> partial_integrate(
    const TreeTensorNetwork<Scalar>& net, const std::vector<int>& variables) {
    std::map<DigitId, DenseTensor<Scalar>> tensors = net.tensors;
    std::map<DigitId, std::vector<DigitId>> adj;
    for (const auto& v : net.tree.vertices()) adj[v] = net.tree.neighbors(v);

    const auto selected = [&](const DigitId& d) {
        return std::find(variables.begin(), variables.end(), d.variable) !=
               variables.end();
    };

    std::vector<DigitId> todo;
    for (const auto& v : net.tree.vertices())
        if (selected(v)) todo.push_back(v);

    // weight vector contraction: T(x) -> (T(0) + T(1)) / 2
    for (const auto& v : todo) {
        const auto nm = external_index_name(v);
        auto t0 = slice(tensors.at(v), nm, 0);
        const auto t1 = slice(tensors.at(v), nm, 1);
        for (std::size_t k = 0; k < t0.size(); ++k)
            t0.at_flat(k) = Scalar(0.5) * (t0.at_flat(k) + t1.at_flat(k));
        tensors.at(v) = std::move(t0);
    }

    Scalar scalar_acc(1);
    bool all_gone = false;
    // absorb leaf-most selected vertices first
    while (!todo.empty()) {
        std::sort(todo.begin(), todo.end(), [&](const DigitId& a,
                                                const DigitId& b) {
            return adj[a].size() < adj[b].size() ||
                   (adj[a].size() == adj[b].size() && a < b);
        });
        const DigitId v = todo.front();
        todo.erase(todo.begin());
        if (adj[v].empty()) {
            scalar_acc *= tensors.at(v).values().at(0);
            tensors.erase(v);
            adj.erase(v);
            all_gone = adj.empty();
            continue;
        }
        // prefer an unselected neighbor as the absorption target
        DigitId u = adj[v].front();
        for (const auto& w : adj[v])
            if (!selected(w)) {
                u = w;
                break;
            }
        auto merged = contract(tensors.at(v), tensors.at(u));
        // re-route v's other edges to u
        for (const auto& w : adj[v]) {
            if (w == u) continue;
            merged.rename_index(bond_index_name(v, w), bond_index_name(u, w));
            tensors.at(w).rename_index(bond_index_name(v, w),
                                       bond_index_name(u, w));
            std::replace(adj[w].begin(), adj[w].end(), v, u);
            adj[u].push_back(w);
        }
        std::erase(adj[u], v);
        tensors.at(u) = std::move(merged);
        tensors.erase(v);
        adj.erase(v);
    }
    if (all_gone) return scalar_acc;

    std::vector<DigitId> vs;
    std::vector<Edge> es;
    for (const auto& [v, nbrs] : adj) {
        vs.push_back(v);
        for (const auto& w : nbrs)
            if (v < w) es.push_back({v, w});
    }
    TreeTensorNetwork<Scalar> out;
    out.tree = build_tree(vs, es);
    out.tensors = std::move(tensors);
    return out;
}

template <class Scalar>
NetworkStats stats(const TreeTensorNetwork<Scalar>& net) {
    NetworkStats s;
    s.max_bond = net.max_bond_dim();
    for (const auto& e : net.tree.edges()) s.per_edge_bonds[e] = net.bond_dim(e);
    std::size_t count = 0;
    for (const auto& [v, t] : net.tensors) count += t.size();
    s.memory_bytes = 8 * count;
    return s;
}

} // namespace treeten
