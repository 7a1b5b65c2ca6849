#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "treeten/errors.hpp"

namespace treeten {

struct IndexInfo {
    std::string name;
    std::size_t dim = 0;

    bool operator==(const IndexInfo&) const = default;
};

/// Dense multi-index tensor with named indices and row-major storage over the
/// listed index order.
template <class Scalar>
class DenseTensor {
  public:
    DenseTensor() = default;

    explicit DenseTensor(std::vector<IndexInfo> indices)
        : indices_(std::move(indices)) {
        check_indices();
        values_.assign(total_size(), Scalar(0));
    }

    DenseTensor(std::vector<IndexInfo> indices, std::vector<Scalar> values)
        : indices_(std::move(indices)), values_(std::move(values)) {
        check_indices();
        if (values_.size() != total_size())
            throw DimensionMismatch("value count does not match index dims");
    }

    static DenseTensor scalar(Scalar v) { return DenseTensor({}, {v}); }

    const std::vector<IndexInfo>& indices() const { return indices_; }
    std::size_t order() const { return indices_.size(); }
    std::size_t size() const { return values_.size(); }
    const std::vector<Scalar>& values() const { return values_; }
    std::vector<Scalar>& values() { return values_; }

    int position(const std::string& name) const {
        for (std::size_t k = 0; k < indices_.size(); ++k)
            if (indices_[k].name == name) return static_cast<int>(k);
        return -1;
    }

    bool has_index(const std::string& name) const { return position(name) >= 0; }

    std::size_t dim(const std::string& name) const {
        const int p = position(name);
        if (p < 0) throw DimensionMismatch("no index named '" + name + "'");
        return indices_[p].dim;
    }

    /// Row-major strides over the listed indices.
    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> s(indices_.size(), 1);
        for (int k = static_cast<int>(indices_.size()) - 2; k >= 0; --k)
            s[k] = s[k + 1] * indices_[k + 1].dim;
        return s;
    }

    Scalar& at_flat(std::size_t off) { return values_[off]; }
    const Scalar& at_flat(std::size_t off) const { return values_[off]; }

    std::size_t offset(const std::vector<std::size_t>& multi) const {
        std::size_t off = 0;
        const auto s = strides();
        for (std::size_t k = 0; k < multi.size(); ++k) off += multi[k] * s[k];
        return off;
    }

    Scalar& at(const std::vector<std::size_t>& multi) {
        return values_[offset(multi)];
    }
    const Scalar& at(const std::vector<std::size_t>& multi) const {
        return values_[offset(multi)];
    }

    void rename_index(const std::string& from, const std::string& to) {
        const int p = position(from);
        if (p < 0) throw DimensionMismatch("no index named '" + from + "'");
        if (from != to && has_index(to))
            throw DimensionMismatch("index '" + to + "' already present");
        indices_[p].name = to;
    }

    double frobenius_norm() const {
        double s = 0;
        for (const auto& v : values_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    std::size_t total_size() const {
        std::size_t n = 1;
        for (const auto& ix : indices_) n *= ix.dim;
        return n;
    }

    void check_indices() const {
        for (std::size_t a = 0; a < indices_.size(); ++a) {
            if (indices_[a].dim == 0)
                throw DimensionMismatch("index '" + indices_[a].name +
                                        "' has dimension 0");
            for (std::size_t b = a + 1; b < indices_.size(); ++b)
                if (indices_[a].name == indices_[b].name)
                    throw DimensionMismatch("duplicate index '" +
                                            indices_[a].name + "'");
        }
    }

    std::vector<IndexInfo> indices_;
    std::vector<Scalar> values_;
};

namespace detail {

/// Odometer over a dimension list; returns false when exhausted.
inline bool advance_multi(std::vector<std::size_t>& multi,
                          const std::vector<std::size_t>& dims) {
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        if (++multi[k] < dims[k]) return true;
        multi[k] = 0;
    }
    return false;
}

} // namespace detail

/// Reorder indices to the given name order (a permutation of the existing
/// names).
template <class Scalar>
DenseTensor<Scalar> permute(const DenseTensor<Scalar>& t,
                            const std::vector<std::string>& order) {
    if (order.size() != t.order())
        throw DimensionMismatch("permute: order size mismatch");
    std::vector<int> src_pos(order.size());
    std::vector<IndexInfo> new_indices(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int p = t.position(order[k]);
        if (p < 0) throw DimensionMismatch("permute: unknown index " + order[k]);
        src_pos[k] = p;
        new_indices[k] = t.indices()[p];
    }
    DenseTensor<Scalar> out(new_indices);
    if (t.size() == 0) return out;
    const auto src_strides = t.strides();
    std::vector<std::size_t> dims(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) dims[k] = new_indices[k].dim;
    std::vector<std::size_t> multi(order.size(), 0);
    std::size_t dst = 0;
    do {
        std::size_t src = 0;
        for (std::size_t k = 0; k < multi.size(); ++k)
            src += multi[k] * src_strides[src_pos[k]];
        out.at_flat(dst++) = t.at_flat(src);
    } while (detail::advance_multi(multi, dims));
    return out;
}

/// Fix one index at a value; the result drops that index.
template <class Scalar>
DenseTensor<Scalar> slice(const DenseTensor<Scalar>& t, const std::string& name,
                          std::size_t value) {
    const int p = t.position(name);
    if (p < 0) throw DimensionMismatch("slice: unknown index " + name);
    if (value >= t.indices()[p].dim)
        throw DimensionMismatch("slice: value out of range for " + name);
    std::vector<IndexInfo> new_indices;
    for (std::size_t k = 0; k < t.order(); ++k)
        if (static_cast<int>(k) != p) new_indices.push_back(t.indices()[k]);
    DenseTensor<Scalar> out(new_indices);
    const auto s = t.strides();
    // outer block before p, inner block after p
    std::size_t outer = 1, inner = 1;
    for (int k = 0; k < p; ++k) outer *= t.indices()[k].dim;
    for (std::size_t k = p + 1; k < t.order(); ++k) inner *= t.indices()[k].dim;
    const std::size_t pdim = t.indices()[p].dim;
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i)
            out.at_flat(o * inner + i) =
                t.at_flat((o * pdim + value) * inner + i);
    return out;
}

/// Contraction over all shared index names; result carries the symmetric
/// difference of the index sets. No shared indices means the outer product.
template <class Scalar>
DenseTensor<Scalar> contract(const DenseTensor<Scalar>& a,
                             const DenseTensor<Scalar>& b) {
    std::vector<std::string> shared, free_a, free_b;
    for (const auto& ix : a.indices()) {
        if (b.has_index(ix.name)) {
            if (b.dim(ix.name) != ix.dim)
                throw DimensionMismatch("contract: dim mismatch on '" + ix.name +
                                        "'");
            shared.push_back(ix.name);
        } else {
            free_a.push_back(ix.name);
        }
    }
    for (const auto& ix : b.indices())
        if (!a.has_index(ix.name)) free_b.push_back(ix.name);

    std::vector<std::string> order_a = free_a;
    order_a.insert(order_a.end(), shared.begin(), shared.end());
    std::vector<std::string> order_b = shared;
    order_b.insert(order_b.end(), free_b.begin(), free_b.end());
    const auto pa = permute(a, order_a);
    const auto pb = permute(b, order_b);

    std::size_t m = 1, k = 1, n = 1;
    for (const auto& nm : free_a) m *= a.dim(nm);
    for (const auto& nm : shared) k *= a.dim(nm);
    for (const auto& nm : free_b) n *= b.dim(nm);

    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>;
    Eigen::Map<const Mat> A(pa.values().data(), m, k);
    Eigen::Map<const Mat> B(pb.values().data(), k, n);
    Mat C = A * B;

    std::vector<IndexInfo> out_indices;
    for (const auto& nm : free_a) out_indices.push_back({nm, a.dim(nm)});
    for (const auto& nm : free_b) out_indices.push_back({nm, b.dim(nm)});
    std::vector<Scalar> vals(C.data(), C.data() + m * n);
    return DenseTensor<Scalar>(std::move(out_indices), std::move(vals));
}

/// Direct sum over the non-shared indices: both tensors must carry the same
/// index names; shared indices keep their (equal) dimension, all other
/// dimensions add, off-block entries are zero.
template <class Scalar>
DenseTensor<Scalar> direct_sum(const DenseTensor<Scalar>& a,
                               const DenseTensor<Scalar>& b,
                               const std::vector<std::string>& shared) {
    if (a.order() != b.order())
        throw DimensionMismatch("direct_sum: index sets differ");
    std::vector<std::string> order;
    for (const auto& ix : a.indices()) {
        if (!b.has_index(ix.name))
            throw DimensionMismatch("direct_sum: index sets differ on '" +
                                    ix.name + "'");
        order.push_back(ix.name);
    }
    const auto is_shared = [&](const std::string& nm) {
        return std::find(shared.begin(), shared.end(), nm) != shared.end();
    };
    std::vector<IndexInfo> out_indices;
    for (const auto& ix : a.indices()) {
        if (is_shared(ix.name)) {
            if (b.dim(ix.name) != ix.dim)
                throw DimensionMismatch("direct_sum: shared dim mismatch on '" +
                                        ix.name + "'");
            out_indices.push_back(ix);
        } else {
            out_indices.push_back({ix.name, ix.dim + b.dim(ix.name)});
        }
    }
    DenseTensor<Scalar> out(out_indices);
    const auto pb = permute(b, order);
    const auto out_strides = out.strides();

    const auto copy_block = [&](const DenseTensor<Scalar>& src, bool offset) {
        std::vector<std::size_t> dims(src.order());
        for (std::size_t k = 0; k < src.order(); ++k)
            dims[k] = src.indices()[k].dim;
        std::vector<std::size_t> shift(src.order(), 0);
        if (offset)
            for (std::size_t k = 0; k < src.order(); ++k)
                if (!is_shared(order[k])) shift[k] = a.dim(order[k]);
        std::vector<std::size_t> multi(src.order(), 0);
        std::size_t flat = 0;
        if (src.size() == 0) return;
        do {
            std::size_t dst = 0;
            for (std::size_t k = 0; k < multi.size(); ++k)
                dst += (multi[k] + shift[k]) * out_strides[k];
            out.at_flat(dst) += src.at_flat(flat++);
        } while (detail::advance_multi(multi, dims));
    };
    const auto pa = permute(a, order);
    copy_block(pa, false);
    copy_block(pb, true);
    return out;
}

/// Outer product at fixed shared-index values, with the listed index pairs
/// fused into single indices of product dimension. The fused index keeps the
/// a-side name; the pairing order is (alpha_a, alpha_b) -> alpha_a * d_b +
/// alpha_b. Every non-shared index must belong to exactly one fuse pair.
template <class Scalar>
DenseTensor<Scalar> outer_fuse(
    const DenseTensor<Scalar>& a, const DenseTensor<Scalar>& b,
    const std::vector<std::string>& shared,
    const std::vector<std::pair<std::string, std::string>>& fuse_pairs) {
    for (const auto& nm : shared)
        if (a.dim(nm) != b.dim(nm))
            throw DimensionMismatch("outer_fuse: shared dim mismatch on '" + nm +
                                    "'");
    if (a.order() != shared.size() + fuse_pairs.size() ||
        b.order() != shared.size() + fuse_pairs.size())
        throw DimensionMismatch("outer_fuse: indices not covered by shared + "
                                "fuse pairs");

    std::vector<std::string> order_a = shared, order_b = shared;
    std::vector<std::size_t> da, db;
    for (const auto& [na, nb] : fuse_pairs) {
        order_a.push_back(na);
        order_b.push_back(nb);
        da.push_back(a.dim(na));
        db.push_back(b.dim(nb));
    }
    const auto pa = permute(a, order_a);
    const auto pb = permute(b, order_b);

    std::vector<IndexInfo> out_indices;
    std::size_t S = 1;
    for (const auto& nm : shared) {
        out_indices.push_back({nm, a.dim(nm)});
        S *= a.dim(nm);
    }
    for (std::size_t k = 0; k < fuse_pairs.size(); ++k)
        out_indices.push_back({fuse_pairs[k].first, da[k] * db[k]});

    DenseTensor<Scalar> out(out_indices);
    std::size_t FA = 1, FB = 1;
    for (auto d : da) FA *= d;
    for (auto d : db) FB *= d;

    // fused-group strides (row-major over the pair dims)
    const std::size_t P = fuse_pairs.size();
    std::vector<std::size_t> fstr(P, 1);
    for (int k = static_cast<int>(P) - 2; k >= 0; --k)
        fstr[k] = fstr[k + 1] * (da[k + 1] * db[k + 1]);
    const std::size_t F = FA * FB;

    std::vector<std::size_t> ma(P, 0);
    for (std::size_t s = 0; s < S; ++s) {
        std::fill(ma.begin(), ma.end(), 0);
        std::size_t fa = 0;
        do {
            const Scalar va = pa.at_flat(s * FA + fa);
            std::vector<std::size_t> mb(P, 0);
            std::size_t fb = 0;
            do {
                std::size_t fused = 0;
                for (std::size_t k = 0; k < P; ++k)
                    fused += (ma[k] * db[k] + mb[k]) * fstr[k];
                out.at_flat(s * F + fused) = va * pb.at_flat(s * FB + fb);
                ++fb;
            } while (detail::advance_multi(mb, db));
            ++fa;
        } while (detail::advance_multi(ma, da));
    }
    return out;
}

template <class Scalar>
struct Factorization {
    DenseTensor<Scalar> left;  // rows + bond
    DenseTensor<Scalar> right; // bond + cols
    std::size_t kept_rank = 0;
    double discarded_weight = 0.0;
};

namespace detail {

template <class Scalar>
std::pair<DenseTensor<Scalar>, std::pair<std::size_t, std::size_t>> matricize(
    const DenseTensor<Scalar>& t, const std::vector<std::string>& row_names) {
    if (row_names.empty() || row_names.size() == t.order())
        throw EmptyIndexSet("matricize: row set must be a proper subset");
    std::vector<std::string> order = row_names, cols;
    for (const auto& ix : t.indices())
        if (std::find(row_names.begin(), row_names.end(), ix.name) ==
            row_names.end())
            cols.push_back(ix.name);
    for (const auto& nm : row_names)
        if (!t.has_index(nm))
            throw DimensionMismatch("matricize: unknown row index " + nm);
    order.insert(order.end(), cols.begin(), cols.end());
    auto p = permute(t, order);
    std::size_t m = 1;
    for (const auto& nm : row_names) m *= t.dim(nm);
    const std::size_t n = t.size() / m;
    return {std::move(p), {m, n}};
}

template <class Scalar>
DenseTensor<Scalar> from_matrix_rows(
    const DenseTensor<Scalar>& permuted, std::size_t nrow_indices,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic,
                        Eigen::RowMajor>& M,
    const std::string& bond_name) {
    // row indices of `permuted` + trailing bond index of dim M.cols()
    std::vector<IndexInfo> idx(permuted.indices().begin(),
                               permuted.indices().begin() + nrow_indices);
    idx.push_back({bond_name, static_cast<std::size_t>(M.cols())});
    std::vector<Scalar> vals(M.data(), M.data() + M.size());
    return DenseTensor<Scalar>(std::move(idx), std::move(vals));
}

template <class Scalar>
DenseTensor<Scalar> from_matrix_cols(
    const DenseTensor<Scalar>& permuted, std::size_t nrow_indices,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic,
                        Eigen::RowMajor>& M,
    const std::string& bond_name) {
    // leading bond index of dim M.rows() + column indices of `permuted`
    std::vector<IndexInfo> idx{{bond_name, static_cast<std::size_t>(M.rows())}};
    idx.insert(idx.end(), permuted.indices().begin() + nrow_indices,
               permuted.indices().end());
    std::vector<Scalar> vals(M.data(), M.data() + M.size());
    return DenseTensor<Scalar>(std::move(idx), std::move(vals));
}

} // namespace detail

/// SVD-based split: matricize over (rows | cols), keep at most chi_max
/// singular values and drop a tail of relative Frobenius weight <= tol.
/// left = U, right = S V^H sharing the new bond index.
template <class Scalar>
Factorization<Scalar> svd_split(const DenseTensor<Scalar>& t,
                                const std::vector<std::string>& row_names,
                                std::size_t chi_max, double tol,
                                const std::string& bond_name) {
    if (chi_max < 1) throw DimensionMismatch("svd_split: chi_max must be >= 1");
    auto [p, shape] = detail::matricize(t, row_names);
    const auto [m, n] = shape;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>;
    Eigen::Map<const Mat> M(p.values().data(), m, n);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw SvdFailure("svd_split: decomposition did not converge");
    const auto& sv = svd.singularValues();
    const std::size_t full = static_cast<std::size_t>(sv.size());
    double total = 0;
    for (std::size_t i = 0; i < full; ++i) total += sv(i) * sv(i);

    std::size_t r = full;
    if (total > 0) {
        double tail = 0;
        while (r > 1) {
            const double cand = tail + sv(r - 1) * sv(r - 1);
            if (std::sqrt(cand) > tol * std::sqrt(total)) break;
            tail = cand;
            --r;
        }
    } else {
        r = 1;
    }
    r = std::min(r, chi_max);
    r = std::max<std::size_t>(r, 1);

    double discarded = 0;
    for (std::size_t i = r; i < full; ++i) discarded += sv(i) * sv(i);

    Mat U = svd.matrixU().leftCols(r);
    Mat SV = sv.head(r).asDiagonal() *
             svd.matrixV().leftCols(r).adjoint();

    Factorization<Scalar> f;
    f.left = detail::from_matrix_rows(p, row_names.size(), U, bond_name);
    f.right = detail::from_matrix_cols(p, row_names.size(), SV, bond_name);
    f.kept_rank = r;
    f.discarded_weight = total > 0 ? discarded / total : 0.0;
    return f;
}

/// Thin QR split used for orthogonalization pushes; left = Q, right = R.
template <class Scalar>
Factorization<Scalar> qr_split(const DenseTensor<Scalar>& t,
                               const std::vector<std::string>& row_names,
                               const std::string& bond_name) {
    auto [p, shape] = detail::matricize(t, row_names);
    const auto [m, n] = shape;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>;
    Eigen::Map<const Mat> M(p.values().data(), m, n);
    const std::size_t k = std::min(m, n);
    Eigen::HouseholderQR<Mat> qr(M);
    Mat Q = qr.householderQ() * Mat::Identity(m, k);
    Mat R = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();

    Factorization<Scalar> f;
    f.left = detail::from_matrix_rows(p, row_names.size(), Q, bond_name);
    f.right = detail::from_matrix_cols(p, row_names.size(), R, bond_name);
    f.kept_rank = k;
    return f;
}

/// Interpolative decomposition M ~= C Z: C is a subset of M's columns, Z
/// interpolates and restricts to the identity on the pivot columns.
struct IdResult {
    Eigen::MatrixXd C;
    Eigen::MatrixXd Z;
    std::vector<Eigen::Index> pivots;
    bool rank_exceeded = false;
};

/// Greedy column selection by largest residual norm, ties broken toward the
/// lowest column id; Z from least squares on the selected columns.
inline IdResult interpolative_decomposition(const Eigen::MatrixXd& M,
                                            double tol, Eigen::Index r_max) {
    const Eigen::Index ncols = M.cols();
    if (ncols == 0 || M.rows() == 0)
        throw EmptyIndexSet("interpolative_decomposition: empty matrix");
    if (r_max < 1) r_max = 1;
    const double scale = M.cwiseAbs().maxCoeff();
    const double threshold = tol * scale;

    Eigen::MatrixXd R = M;
    Eigen::MatrixXd Q(M.rows(), std::min<Eigen::Index>(r_max, ncols));
    std::vector<Eigen::Index> pivots;

    IdResult res;
    while (static_cast<Eigen::Index>(pivots.size()) <
           std::min<Eigen::Index>(r_max, ncols)) {
        if (!pivots.empty() && R.cwiseAbs().maxCoeff() <= threshold) break;
        Eigen::Index best = 0;
        double best_norm = -1;
        for (Eigen::Index j = 0; j < ncols; ++j) {
            const double nj = R.col(j).norm();
            if (nj > best_norm) {
                best_norm = nj;
                best = j;
            }
        }
        if (best_norm <= 0) break;
        Eigen::VectorXd q = R.col(best);
        const double nq = q.norm();
        if (nq == 0) break;
        q /= nq;
        Q.col(static_cast<Eigen::Index>(pivots.size())) = q;
        pivots.push_back(best);
        R -= q * (q.transpose() * R);
    }
    if (pivots.empty()) pivots.push_back(0); // all-zero matrix: keep one column
    const Eigen::Index r = static_cast<Eigen::Index>(pivots.size());
    res.rank_exceeded = R.cwiseAbs().maxCoeff() > threshold &&
                        r >= std::min<Eigen::Index>(r_max, ncols);

    res.C.resize(M.rows(), r);
    for (Eigen::Index k = 0; k < r; ++k) res.C.col(k) = M.col(pivots[k]);
    res.Z = res.C.colPivHouseholderQr().solve(M);
    for (Eigen::Index k = 0; k < r; ++k) {
        res.Z.col(pivots[k]).setZero();
        res.Z(k, pivots[k]) = 1.0;
    }
    res.pivots = std::move(pivots);
    return res;
}

} // namespace treeten
