#pragma once

#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "treeten/ttn.hpp"

namespace treeten {

/// Self-describing binary container for tree tensor networks: tree topology,
/// per-vertex index names and dims, row-major scalar payload.
namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) os.put(static_cast<char>((v >> (8 * k)) & 0xff));
}

inline std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) {
        const int c = is.get();
        if (c == EOF) throw Error("truncated network file");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * k);
    }
    return v;
}

inline void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

inline double get_f64(std::istream& is) {
    const std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

inline void put_str(std::ostream& os, const std::string& s) {
    put_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_str(std::istream& is) {
    const auto n = get_u64(is);
    std::string s(n, '\0');
    is.read(s.data(), static_cast<std::streamsize>(n));
    if (!is) throw Error("truncated network file");
    return s;
}

template <class Scalar>
struct ScalarTag;
template <>
struct ScalarTag<double> {
    static constexpr std::uint64_t value = 0;
    static void put(std::ostream& os, double v) { put_f64(os, v); }
    static double get(std::istream& is) { return get_f64(is); }
};
template <>
struct ScalarTag<std::complex<double>> {
    static constexpr std::uint64_t value = 1;
    static void put(std::ostream& os, std::complex<double> v) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    static std::complex<double> get(std::istream& is) {
        const double re = get_f64(is);
        return {re, get_f64(is)};
    }
};

} // namespace detail

template <class Scalar>
void save_net(const TreeTensorNetwork<Scalar>& net, std::ostream& os) {
    os.write("TTNB", 4);
    detail::put_u64(os, 1); // version
    detail::put_u64(os, detail::ScalarTag<Scalar>::value);
    detail::put_u64(os, net.tree.vertices().size());
    for (const auto& v : net.tree.vertices()) {
        detail::put_u64(os, static_cast<std::uint64_t>(v.variable));
        detail::put_u64(os, static_cast<std::uint64_t>(v.digit));
    }
    detail::put_u64(os, net.tree.edges().size());
    for (const auto& [a, b] : net.tree.edges()) {
        detail::put_u64(os, static_cast<std::uint64_t>(a.variable));
        detail::put_u64(os, static_cast<std::uint64_t>(a.digit));
        detail::put_u64(os, static_cast<std::uint64_t>(b.variable));
        detail::put_u64(os, static_cast<std::uint64_t>(b.digit));
    }
    for (const auto& v : net.tree.vertices()) {
        const auto& t = net.tensors.at(v);
        detail::put_u64(os, t.order());
        for (const auto& ix : t.indices()) {
            detail::put_str(os, ix.name);
            detail::put_u64(os, ix.dim);
        }
        detail::put_u64(os, t.size());
        for (const auto& x : t.values()) detail::ScalarTag<Scalar>::put(os, x);
    }
}

template <class Scalar>
TreeTensorNetwork<Scalar> load_net(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "TTNB")
        throw Error("not a network file (bad magic)");
    if (detail::get_u64(is) != 1) throw Error("unsupported network file version");
    if (detail::get_u64(is) != detail::ScalarTag<Scalar>::value)
        throw Error("scalar type mismatch in network file");
    std::vector<DigitId> vs(detail::get_u64(is));
    for (auto& v : vs) {
        v.variable = static_cast<int>(detail::get_u64(is));
        v.digit = static_cast<int>(detail::get_u64(is));
    }
    std::vector<Edge> es(detail::get_u64(is));
    for (auto& e : es) {
        e.first.variable = static_cast<int>(detail::get_u64(is));
        e.first.digit = static_cast<int>(detail::get_u64(is));
        e.second.variable = static_cast<int>(detail::get_u64(is));
        e.second.digit = static_cast<int>(detail::get_u64(is));
    }
    TreeTensorNetwork<Scalar> net;
    net.tree = build_tree(vs, es);
    for (const auto& v : net.tree.vertices()) {
        std::vector<IndexInfo> idx(detail::get_u64(is));
        for (auto& ix : idx) {
            ix.name = detail::get_str(is);
            ix.dim = detail::get_u64(is);
        }
        std::vector<Scalar> vals(detail::get_u64(is));
        for (auto& x : vals) x = detail::ScalarTag<Scalar>::get(is);
        net.tensors.emplace(v,
                            DenseTensor<Scalar>(std::move(idx), std::move(vals)));
    }
    detail::check_consistent(net);
    return net;
}

template <class Scalar>
void save_net_file(const TreeTensorNetwork<Scalar>& net,
                   const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    save_net(net, os);
}

template <class Scalar>
TreeTensorNetwork<Scalar> load_net_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "'");
    return load_net<Scalar>(is);
}

} // namespace treeten
