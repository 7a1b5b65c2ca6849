#include "treeten/treeci.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>
#include <random>

#include "treeten/funcbuild.hpp"

namespace treeten {

namespace {

using Frag = std::vector<std::pair<DigitId, int>>; // partial bit assignment

Frag to_frag(const GridPoint& p) {
    Frag f;
    for (const auto& [d, b] : p.bits()) f.push_back({d, b});
    return f;
}

/// Per-axis, per-value bit fragments for a tensor living on the vertex set
/// {u} (+ optionally {v}): the external axis toggles the vertex's own bit,
/// each bond axis substitutes the far-side pivot configuration.
std::vector<std::vector<Frag>> axis_fragments(const TciState& st,
                                              const DenseTensor<double>& t,
                                              const std::vector<DigitId>& own) {
    std::vector<std::vector<Frag>> frags(t.order());
    for (std::size_t k = 0; k < t.order(); ++k) {
        const auto& nm = t.indices()[k].name;
        bool found = false;
        for (const auto& u : own) {
            if (nm == external_index_name(u)) {
                frags[k] = {{{{u, 0}}}, {{{u, 1}}}};
                found = true;
                break;
            }
            for (const auto& w : st.net.tree.neighbors(u)) {
                if (nm != bond_index_name(u, w)) continue;
                const auto it = st.pivots.lists.find({w, u});
                if (it == st.pivots.lists.end()) continue;
                if (it->second.size() != t.indices()[k].dim)
                    throw DimensionMismatch("pivot list length != bond dim on " +
                                            nm);
                for (const auto& cfg : it->second)
                    frags[k].push_back(to_frag(cfg));
                found = true;
                break;
            }
            if (found) break;
        }
        if (!found)
            throw DimensionMismatch("no pivot fragments for index " + nm);
    }
    return frags;
}

/// Walk every entry of `t` in storage order, maintaining the grid point
/// induced by the axis fragments incrementally; compare against the target
/// and (optionally) overwrite with the exact value.
double scan_exact(TciState& st, DenseTensor<double>& t,
                  const std::vector<std::vector<Frag>>& frags, bool replace) {
    std::vector<std::size_t> dims(t.order());
    for (std::size_t k = 0; k < t.order(); ++k) dims[k] = t.indices()[k].dim;
    GridPoint p;
    for (std::size_t k = 0; k < t.order(); ++k)
        for (const auto& [d, b] : frags[k][0]) p.set(d, b);

    std::vector<std::size_t> multi(t.order(), 0);
    double dev = 0;
    std::size_t flat = 0;
    while (true) {
        const double fv = st.target(p);
        ++st.call_count;
        dev = std::max(dev, std::abs(t.at_flat(flat) - fv));
        if (replace) t.at_flat(flat) = fv;
        ++flat;
        std::size_t k = t.order();
        bool done = true;
        while (k-- > 0) {
            const std::size_t next = multi[k] + 1;
            const std::size_t val = next < dims[k] ? next : 0;
            multi[k] = val;
            for (const auto& [d, b] : frags[k][val]) p.set(d, b);
            if (val != 0) {
                done = false;
                break;
            }
        }
        if (done) break;
    }
    return dev;
}

using Mat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row interpolative decomposition M ~= Zt * M[P,:]; Zt restricts to the
/// identity on the pivot rows.
struct RowId {
    Mat Zt;                          // m x r
    Mat Crows;                       // r x n, exact rows of M
    std::vector<Eigen::Index> rows;  // pivot row ids
};

RowId row_id(const Eigen::Map<const Mat>& M, double tol, Eigen::Index r_max) {
    const auto id =
        interpolative_decomposition(M.transpose(), tol, r_max);
    RowId out;
    out.Zt = id.Z.transpose();
    out.rows = id.pivots;
    out.Crows.resize(static_cast<Eigen::Index>(id.pivots.size()), M.cols());
    for (Eigen::Index i = 0; i < out.Crows.rows(); ++i)
        out.Crows.row(i) = M.row(id.pivots[i]);
    return out;
}

/// Decode a flat row id of a matricization back into per-axis values.
std::vector<std::size_t> decode_row(std::size_t row,
                                    const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> multi(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        multi[k] = row % dims[k];
        row /= dims[k];
    }
    return multi;
}

/// Assemble the u-side configuration selected by one pivot row: the vertex's
/// own bit plus the far-side pivot configs of its non-split bonds.
GridPoint row_config(const TciState& st, const DigitId& u,
                     const std::vector<std::string>& row_names,
                     const std::vector<std::size_t>& multi) {
    GridPoint cfg;
    for (std::size_t k = 0; k < row_names.size(); ++k) {
        const auto& nm = row_names[k];
        if (nm == external_index_name(u)) {
            cfg.set(u, static_cast<int>(multi[k]));
            continue;
        }
        bool found = false;
        for (const auto& w : st.net.tree.neighbors(u)) {
            if (nm != bond_index_name(u, w)) continue;
            for (const auto& [d, b] :
                 st.pivots.lists.at({w, u})[multi[k]].bits())
                cfg.set(d, b);
            found = true;
            break;
        }
        if (!found)
            throw DimensionMismatch("row_config: unknown index " + nm);
    }
    return cfg;
}

const std::string kTmpBond = "__id";

} // namespace

TciState init_gauge(const TreeTensorNetwork<double>& net, TargetFn f,
                    const DigitId& root) {
    detail::check_consistent(net);
    if (!net.tree.has_vertex(root))
        throw MissingDigit("init_gauge: root not in tree");
    for (const auto& [v, t] : net.tensors)
        if (t.max_abs() == 0.0)
            throw DegenerateInit("init_gauge: guess vanishes at " +
                                 to_string(v));
    TciState st;
    st.net = net;
    st.center = root;
    st.target = std::move(f);

    auto rec = [&](auto&& self, const DigitId& u, const DigitId* parent)
        -> void {
        for (const auto& w : st.net.tree.neighbors(u))
            if (!parent || !(w == *parent)) self(self, w, &u);
        if (!parent) return;

        auto& T = st.net.tensors.at(u);
        const auto e = bond_index_name(u, *parent);
        std::vector<std::string> rows;
        for (const auto& ix : T.indices())
            if (ix.name != e) rows.push_back(ix.name);
        auto [p, shape] = detail::matricize(T, rows);
        const auto [m, n] = shape;
        Eigen::Map<const Mat> M(p.values().data(), m, n);
        if (M.cwiseAbs().maxCoeff() == 0.0)
            throw DegenerateInit("init_gauge: zero block at " + to_string(u));
        const auto id = row_id(M, 1e-14, static_cast<Eigen::Index>(n));
        const std::size_t r = id.rows.size();

        auto z = detail::from_matrix_rows(p, rows.size(), id.Zt, kTmpBond);
        z.rename_index(kTmpBond, e);

        DenseTensor<double> R(
            {{kTmpBond, r}, {e, n}},
            std::vector<double>(id.Crows.data(), id.Crows.data() + r * n));
        auto merged = contract(R, st.net.tensors.at(*parent));
        merged.rename_index(kTmpBond, e);

        // pivot configurations of the u-side subtree, one per kept row
        std::vector<std::size_t> row_dims;
        for (const auto& nm : rows) row_dims.push_back(T.dim(nm));
        std::vector<GridPoint> cfgs;
        for (const auto rid : id.rows)
            cfgs.push_back(row_config(
                st, u, rows,
                decode_row(static_cast<std::size_t>(rid), row_dims)));

        st.net.tensors.at(u) = std::move(z);
        st.net.tensors.at(*parent) = std::move(merged);
        st.pivots.lists[{u, *parent}] = std::move(cfgs);
    };
    rec(rec, root, nullptr);

    auto& center = st.net.tensors.at(root);
    const auto frags = axis_fragments(st, center, {root});
    scan_exact(st, center, frags, true);
    return st;
}

double two_site_update(TciState& st, const DigitId& v, std::size_t chi_max,
                       double tol, std::size_t growth_cap) {
    const DigitId u = st.center;
    if (!st.net.tree.has_edge(u, v))
        throw MissingDigit("two_site_update: neighbor not adjacent to center");
    const auto e = bond_index_name(u, v);
    const std::size_t old_dim = st.net.tensors.at(u).dim(e);
    if (growth_cap == 0) growth_cap = 2 * old_dim;

    auto pi = contract(st.net.tensors.at(u), st.net.tensors.at(v));
    const auto frags = axis_fragments(st, pi, {u, v});
    const double dev = scan_exact(st, pi, frags, true);

    std::vector<std::string> rows{external_index_name(u)};
    for (const auto& w : st.net.tree.neighbors(u))
        if (!(w == v)) rows.push_back(bond_index_name(u, w));
    auto [p, shape] = detail::matricize(pi, rows);
    const auto [m, n] = shape;
    Eigen::Map<const Mat> M(p.values().data(), m, n);
    const auto r_max = static_cast<Eigen::Index>(
        std::min({chi_max, growth_cap, m, n}));
    const auto id = row_id(M, tol, std::max<Eigen::Index>(r_max, 1));
    const std::size_t r = id.rows.size();

    auto z = detail::from_matrix_rows(p, rows.size(), id.Zt, kTmpBond);
    auto c = detail::from_matrix_cols(p, rows.size(), id.Crows, kTmpBond);
    z.rename_index(kTmpBond, e);
    c.rename_index(kTmpBond, e);

    std::vector<std::size_t> row_dims;
    for (const auto& nm : rows) row_dims.push_back(pi.dim(nm));
    std::vector<GridPoint> cfgs;
    for (const auto rid : id.rows)
        cfgs.push_back(row_config(
            st, u, rows, decode_row(static_cast<std::size_t>(rid), row_dims)));
    (void)r;

    st.net.tensors.at(u) = std::move(z);
    st.net.tensors.at(v) = std::move(c);
    st.pivots.lists[{u, v}] = std::move(cfgs);
    st.pivots.lists.erase({v, u});
    st.center = v;
    return dev;
}

double sweep(TciState& st, std::size_t chi_max, double tol) {
    std::map<Edge, std::size_t> cap;
    for (const auto& e : st.net.tree.edges())
        cap[e] = std::min(chi_max, 2 * st.net.bond_dim(e));
    double err = 0;
    auto tour = [&](auto&& self, const DigitId& u, const DigitId* parent)
        -> void {
        for (const auto& w : st.net.tree.neighbors(u)) {
            if (parent && w == *parent) continue;
            const auto c = cap.at(make_edge(u, w));
            err = std::max(err, two_site_update(st, w, chi_max, tol, c));
            self(self, w, &u);
            err = std::max(err, two_site_update(st, u, chi_max, tol, c));
        }
    };
    const DigitId start = st.center;
    tour(tour, start, nullptr);
    return err;
}

double verify_gauge(TciState& st, int n_checks, std::uint64_t seed) {
    auto& center = st.net.tensors.at(st.center);
    const auto frags = axis_fragments(st, center, {st.center});
    std::mt19937_64 rng(seed);
    double dev = 0;
    for (int t = 0; t < n_checks; ++t) {
        std::vector<std::size_t> multi(center.order());
        GridPoint p;
        for (std::size_t k = 0; k < center.order(); ++k) {
            multi[k] = rng() % center.indices()[k].dim;
            for (const auto& [d, b] : frags[k][multi[k]]) p.set(d, b);
        }
        const double fv = st.target(p);
        ++st.call_count;
        dev = std::max(dev, std::abs(center.at(multi) - fv));
        // interpolation consistency at pivot-assembled points
        dev = std::max(dev, std::abs(evaluate(st.net, p) - fv));
    }
    return dev;
}

std::pair<TreeTensorNetwork<double>, TciReport> tci_learn(
    TargetFn f, const LabeledTree& tree, std::size_t chi_max, double tol,
    int n_sweeps, std::ostream* progress) {
    GridPoint origin;
    for (const auto& v : tree.vertices()) origin.set(v, 0);
    double f0 = f(origin);
    if (f0 == 0.0) f0 = 1.0; // constant guess must not be degenerate
    auto guess = build_constant<double>(tree, f0);
    const DigitId root =
        tree.has_vertex({1, 1}) ? DigitId{1, 1} : tree.vertices().front();
    auto st = init_gauge(guess, std::move(f), root);

    TciReport report;
    for (int k = 0; k < n_sweeps; ++k) {
        const double err = sweep(st, chi_max, tol);
        report.sweeps.push_back({err, st.net.max_bond_dim(), st.call_count});
        if (progress)
            (*progress) << k + 1 << ',' << err << ','
                        << st.net.max_bond_dim() << ',' << st.call_count
                        << '\n';
    }
    return {std::move(st.net), std::move(report)};
}

} // namespace treeten
