#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "treeten/ttn.hpp"

namespace treeten {

template <class Scalar>
struct PolynomialSpec {
    std::vector<Scalar> coefficients; // c_0 .. c_d
    int target_variable = 1;
    DigitId root_digit{1, 1};
};

namespace detail {

template <class T>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

/// Per-vertex multipliers realizing an overall scalar c on a rank-1 product:
/// c^{1/V} on every vertex when that root is real, the full scalar on the
/// first vertex otherwise.
template <class Scalar>
std::vector<Scalar> scalar_factors(std::size_t V, Scalar c) {
    std::vector<Scalar> f(V, Scalar(1));
    if constexpr (is_complex_v<Scalar>) {
        f[0] = c;
    } else {
        if (c > 0) {
            const Scalar root = std::pow(c, Scalar(1) / static_cast<Scalar>(V));
            std::fill(f.begin(), f.end(), root);
        } else {
            f[0] = c;
        }
    }
    return f;
}

/// Rank-1 network from per-vertex slice values f_v(x) (all bonds dim 1).
template <class Scalar, class SliceFn>
TreeTensorNetwork<Scalar> rank_one_net(const LabeledTree& tree, SliceFn&& fv) {
    TreeTensorNetwork<Scalar> net;
    net.tree = tree;
    for (const auto& v : tree.vertices()) {
        std::vector<IndexInfo> idx{{external_index_name(v), 2}};
        for (const auto& w : tree.neighbors(v))
            idx.push_back({bond_index_name(v, w), 1});
        DenseTensor<Scalar> t(idx);
        t.at_flat(0) = fv(v, 0);
        t.at_flat(1) = fv(v, 1);
        net.tensors.emplace(v, std::move(t));
    }
    return net;
}

} // namespace detail

/// f(x) = c as a rank-1 network.
template <class Scalar>
TreeTensorNetwork<Scalar> build_constant(const LabeledTree& tree, Scalar c) {
    const auto& vs = tree.vertices();
    const auto factors = detail::scalar_factors(vs.size(), c);
    std::size_t pos = 0;
    std::map<DigitId, Scalar> fac;
    for (const auto& v : vs) fac[v] = factors[pos++];
    return detail::rank_one_net<Scalar>(
        tree, [&](const DigitId& v, int) { return fac.at(v); });
}

/// f(x) = c exp(k . x + a) as a rank-1 network; exact on every grid point.
/// The additive constant a is the total constant (each vertex carries a/V).
template <class Scalar>
TreeTensorNetwork<Scalar> build_exponential(const LabeledTree& tree, Scalar c,
                                            const std::vector<Scalar>& k,
                                            Scalar a) {
    const auto& vs = tree.vertices();
    if (tree.num_variables() > static_cast<int>(k.size()))
        throw OutOfDomain("build_exponential: k has too few components");
    const auto factors = detail::scalar_factors(vs.size(), c);
    std::size_t pos = 0;
    std::map<DigitId, Scalar> fac;
    for (const auto& v : vs) fac[v] = factors[pos++];
    const Scalar a_local = a / static_cast<double>(vs.size());
    return detail::rank_one_net<Scalar>(tree, [&](const DigitId& v, int bit) {
        const Scalar kx = k[v.variable - 1] *
                          (bit ? std::ldexp(1.0, -v.digit) : 0.0);
        return fac.at(v) * std::exp(kx + a_local);
    });
}

///// Grid Dirac delta at a grid point: evaluates to 2^{nL} at the point, 0
/// elsewhere; its full integral is exactly 1.
template <class Scalar>
TreeTensorNetwork<Scalar> build_delta(const LabeledTree& tree,
                                      const GridPoint& point) {
    if (!point.complete_for(tree))
        throw OffGridPoint("delta point does not assign every digit");
    return detail::rank_one_net<Scalar>(tree, [&](const DigitId& v, int bit) {
        return Scalar(bit == point.bit(v) ? 2.0 : 0.0);
    });
}

/// Degree-d polynomial p(x) = sum_k c_k x^k of one target variable on an
/// arbitrary tree; every bond dimension is exactly d + 1. Digits of other
/// variables carry copy tensors that route the accumulated power toward the
/// designated root digit.
template <class Scalar>
TreeTensorNetwork<Scalar> build_polynomial(const LabeledTree& tree,
                                           const PolynomialSpec<Scalar>& spec) {
    if (spec.coefficients.empty())
        throw OutOfDomain("build_polynomial: empty coefficient list");
    if (spec.root_digit.variable != spec.target_variable)
        throw OutOfDomain("build_polynomial: root digit must belong to the "
                          "target variable");
    if (!tree.has_vertex(spec.root_digit))
        throw MissingDigit("build_polynomial: root digit not in tree");
    const std::size_t d = spec.coefficients.size() - 1;
    const std::size_t chi = d + 1;

    // Pascal triangle, exact integers for d <= 60
    std::vector<std::vector<double>> binom(chi, std::vector<double>(chi, 0.0));
    for (std::size_t m = 0; m < chi; ++m) {
        binom[m][0] = 1.0;
        for (std::size_t j = 1; j <= m; ++j)
            binom[m][j] = binom[m - 1][j - 1] + (j <= m - 1 ? binom[m - 1][j] : 0.0);
    }
    // multinomial prefactor: prod_k binom(rem_k, a_k) with rem decreasing;
    // zero when the exponent b - sum(a) would go negative
    const auto coeff = [&](std::size_t b, const std::vector<std::size_t>& as) {
        double c = 1.0;
        std::size_t rem = b;
        for (const auto a : as) {
            if (a > rem) return std::pair<double, std::size_t>{0.0, 0};
            c *= binom[rem][a];
            rem -= a;
        }
        return std::pair<double, std::size_t>{c, rem};
    };
    const auto xpow = [](int bit, int digit, std::size_t p) {
        if (bit == 0) return p == 0 ? 1.0 : 0.0;
        return std::ldexp(1.0, -digit * static_cast<int>(p));
    };

    // orient every vertex toward the root digit
    std::map<DigitId, DigitId> parent;
    {
        std::vector<DigitId> stack{spec.root_digit};
        std::set<DigitId> seen{spec.root_digit};
        while (!stack.empty()) {
            const DigitId u = stack.back();
            stack.pop_back();
            for (const auto& w : tree.neighbors(u))
                if (seen.insert(w).second) {
                    parent.emplace(w, u);
                    stack.push_back(w);
                }
        }
    }

    TreeTensorNetwork<Scalar> net;
    net.tree = tree;
    for (const auto& v : tree.vertices()) {
        const bool is_root = v == spec.root_digit;
        const bool on_target = v.variable == spec.target_variable;
        // index order: external, child bonds (by neighbor id), then beta
        std::vector<IndexInfo> idx{{external_index_name(v), 2}};
        std::vector<DigitId> children;
        for (const auto& w : tree.neighbors(v))
            if (is_root || !(w == parent.at(v))) children.push_back(w);
        for (const auto& w : children)
            idx.push_back({bond_index_name(v, w), chi});
        if (!is_root) idx.push_back({bond_index_name(v, parent.at(v)), chi});

        DenseTensor<Scalar> t(idx);
        const std::size_t na = children.size();
        std::vector<std::size_t> dims(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) dims[k] = idx[k].dim;
        std::vector<std::size_t> multi(idx.size(), 0);
        std::size_t flat = 0;
        do {
            const int bit = static_cast<int>(multi[0]);
            const std::vector<std::size_t> as(multi.begin() + 1,
                                              multi.begin() + 1 + na);
            Scalar val(0);
            if (is_root) {
                for (std::size_t b = 0; b <= d; ++b) {
                    const auto [c, f] = coeff(b, as);
                    if (c != 0.0)
                        val += spec.coefficients[b] *
                               Scalar(c * xpow(bit, v.digit, f));
                }
            } else if (on_target) {
                const std::size_t beta = multi.back();
                const auto [c, f] = coeff(beta, as);
                if (c != 0.0) val = Scalar(c * xpow(bit, v.digit, f));
            } else {
                const std::size_t beta = multi.back();
                std::size_t sum = 0;
                for (const auto a : as) sum += a;
                val = Scalar(sum == beta ? 1.0 : 0.0);
            }
            t.at_flat(flat++) = val;
        } while (detail::advance_multi(multi, dims));
        net.tensors.emplace(v, std::move(t));
    }
    return net;
}

enum class Hyperbolic { cosh, sinh };

/// f(x) = c cosh(k . x + a) (or sinh) as a chi = 2 network: the direct sum of
/// the two opposite-sign exponentials, realized as a diagonal block tensor on
/// every vertex.
template <class Scalar>
TreeTensorNetwork<Scalar> build_hyperbolic(const LabeledTree& tree, Scalar c,
                                           const std::vector<Scalar>& k,
                                           Scalar a, Hyperbolic kind) {
    const auto& vs = tree.vertices();
    if (tree.num_variables() > static_cast<int>(k.size()))
        throw OutOfDomain("build_hyperbolic: k has too few components");
    const auto factors = detail::scalar_factors(vs.size(), c / Scalar(2));
    std::size_t pos = 0;
    std::map<DigitId, std::size_t> vpos;
    for (const auto& v : vs) vpos[v] = pos++;
    const Scalar a_local = a / static_cast<double>(vs.size());
    const Scalar minus_sign =
        kind == Hyperbolic::sinh ? Scalar(-1) : Scalar(1);

    TreeTensorNetwork<Scalar> net;
    net.tree = tree;
    for (const auto& v : vs) {
        std::vector<IndexInfo> idx{{external_index_name(v), 2}};
        for (const auto& w : tree.neighbors(v))
            idx.push_back({bond_index_name(v, w), 2});
        DenseTensor<Scalar> t(idx);
        const Scalar theta =
            k[v.variable - 1] * std::ldexp(1.0, -v.digit);
        const std::size_t z = tree.neighbors(v).size();
        for (int bit = 0; bit < 2; ++bit) {
            const Scalar th = (bit ? theta : Scalar(0)) + a_local;
            // all-zero bond entry
            std::vector<std::size_t> m(idx.size(), 0);
            m[0] = static_cast<std::size_t>(bit);
            Scalar plus = factors[vpos.at(v)] * std::exp(th);
            Scalar minus = factors[vpos.at(v)] * std::exp(-th);
            if (vpos.at(v) == 0) minus *= minus_sign;
            if (z == 0) {
                t.at(m) = plus + minus;
            } else {
                t.at(m) = plus;
                for (std::size_t kk = 1; kk <= z; ++kk) m[kk] = 1;
                t.at(m) = minus;
            }
        }
        net.tensors.emplace(v, std::move(t));
    }
    return net;
}

enum class Trig { cos, sin };

/// f(x) = c trig(k . x + a) as a real chi = 2 network on any tree. Bond
/// value 0 carries the cosine of the subtree angle sum, value 1 the sine;
/// angle addition turns into counting sine legs modulo 4.
template <class Scalar>
TreeTensorNetwork<Scalar> build_trigonometric(const LabeledTree& tree, Scalar c,
                                              const std::vector<double>& k,
                                              double a, Trig kind) {
    if (tree.num_variables() > static_cast<int>(k.size()))
        throw OutOfDomain("build_trigonometric: k has too few components");
    const DigitId root =
        tree.has_vertex({1, 1}) ? DigitId{1, 1} : tree.vertices().front();
    std::map<DigitId, DigitId> parent;
    {
        std::vector<DigitId> stack{root};
        std::set<DigitId> seen{root};
        while (!stack.empty()) {
            const DigitId u = stack.back();
            stack.pop_back();
            for (const auto& w : tree.neighbors(u))
                if (seen.insert(w).second) {
                    parent.emplace(w, u);
                    stack.push_back(w);
                }
        }
    }
    const double half_pi = std::acos(0.0);
    TreeTensorNetwork<Scalar> net;
    net.tree = tree;
    for (const auto& v : tree.vertices()) {
        const bool is_root = v == root;
        std::vector<IndexInfo> idx{{external_index_name(v), 2}};
        std::vector<DigitId> children;
        for (const auto& w : tree.neighbors(v))
            if (is_root || !(w == parent.at(v))) children.push_back(w);
        for (const auto& w : children)
            idx.push_back({bond_index_name(v, w), 2});
        if (!is_root) idx.push_back({bond_index_name(v, parent.at(v)), 2});

        DenseTensor<Scalar> t(idx);
        std::vector<std::size_t> dims(idx.size());
        for (std::size_t p = 0; p < idx.size(); ++p) dims[p] = idx[p].dim;
        std::vector<std::size_t> multi(idx.size(), 0);
        std::size_t flat = 0;
        do {
            const int bit = static_cast<int>(multi[0]);
            const double theta =
                k[v.variable - 1] * (bit ? std::ldexp(1.0, -v.digit) : 0.0);
            std::size_t nsin = 0;
            for (std::size_t p = 0; p < children.size(); ++p)
                nsin += multi[1 + p];
            if (is_root) {
                const double arg = theta + a + half_pi * nsin;
                t.at_flat(flat++) =
                    c * Scalar(kind == Trig::cos ? std::cos(arg)
                                                 : std::sin(arg));
            } else {
                const double arg = theta + half_pi * nsin;
                const bool out_sin = multi.back() == 1;
                t.at_flat(flat++) =
                    Scalar(out_sin ? std::sin(arg) : std::cos(arg));
            }
        } while (detail::advance_multi(multi, dims));
        net.tensors.emplace(v, std::move(t));
    }
    return net;
}

} // namespace treeten
