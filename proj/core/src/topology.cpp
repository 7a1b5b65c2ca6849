#include "treeten/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace treeten {

std::string to_string(const DigitId& d) {
    return std::to_string(d.variable) + "." + std::to_string(d.digit);
}

std::ostream& operator<<(std::ostream& os, const DigitId& d) {
    return os << to_string(d);
}

std::string external_index_name(const DigitId& d) { return "x:" + to_string(d); }

std::string bond_index_name(const DigitId& a, const DigitId& b) {
    const Edge e = make_edge(a, b);
    return "b:" + to_string(e.first) + "-" + to_string(e.second);
}

Edge make_edge(const DigitId& a, const DigitId& b) {
    return a < b ? Edge{a, b} : Edge{b, a};
}

LabeledTree::LabeledTree(std::vector<DigitId> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    for (auto& e : edges_) e = make_edge(e.first, e.second);
    std::sort(edges_.begin(), edges_.end());
    for (const auto& v : vertices_) adjacency_[v];
    for (const auto& [a, b] : edges_) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& [v, nbrs] : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

const std::vector<DigitId>& LabeledTree::neighbors(const DigitId& v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end()) throw MissingDigit("no vertex " + to_string(v));
    return it->second;
}

int LabeledTree::degree(const DigitId& v) const {
    return static_cast<int>(neighbors(v).size());
}

bool LabeledTree::has_vertex(const DigitId& v) const {
    return adjacency_.count(v) != 0;
}

bool LabeledTree::has_edge(const DigitId& a, const DigitId& b) const {
    return std::binary_search(edges_.begin(), edges_.end(), make_edge(a, b));
}

int LabeledTree::num_variables() const {
    int n = 0;
    for (const auto& v : vertices_) n = std::max(n, v.variable);
    return n;
}

int LabeledTree::max_digit() const {
    int L = 0;
    for (const auto& v : vertices_) L = std::max(L, v.digit);
    return L;
}

LabeledTree build_tree(const std::vector<DigitId>& vertices,
                       const std::vector<Edge>& edges) {
    if (vertices.empty()) throw MissingDigit("tree has no vertices");
    std::set<DigitId> vset;
    for (const auto& v : vertices)
        if (!vset.insert(v).second)
            throw DuplicateDigit("digit " + to_string(v) + " listed twice");
    std::set<Edge> eset;
    for (const auto& e : edges) {
        const Edge ce = make_edge(e.first, e.second);
        if (ce.first == ce.second)
            throw CycleDetected("self-loop at " + to_string(ce.first));
        if (!vset.count(ce.first) || !vset.count(ce.second))
            throw MissingDigit("edge endpoint not in vertex set");
        if (!eset.insert(ce).second)
            throw CycleDetected("duplicate edge " + to_string(ce.first) + "-" +
                                to_string(ce.second));
    }
    if (eset.size() + 1 > vset.size())
        throw CycleDetected("|edges| > |vertices| - 1");
    if (eset.size() + 1 < vset.size())
        throw DisconnectedTree("|edges| < |vertices| - 1");

    // BFS connectivity check
    std::map<DigitId, std::vector<DigitId>> adj;
    for (const auto& [a, b] : eset) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::set<DigitId> seen{*vset.begin()};
    std::vector<DigitId> stack{*vset.begin()};
    while (!stack.empty()) {
        const DigitId u = stack.back();
        stack.pop_back();
        for (const auto& w : adj[u])
            if (seen.insert(w).second) stack.push_back(w);
    }
    if (seen.size() != vset.size())
        throw DisconnectedTree("edge set does not connect all vertices");

    return LabeledTree(std::vector<DigitId>(vset.begin(), vset.end()),
                       std::vector<Edge>(eset.begin(), eset.end()));
}

LabeledTree make_tree(const std::string& name, int n, int L) {
    if (n < 1 || L < 1) throw OutOfDomain("make_tree requires n >= 1, L >= 1");
    std::vector<DigitId> vs;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= L; ++j) vs.push_back({i, j});
    std::vector<Edge> es;

    if (name == "path-sequential") {
        // x_{1,1}..x_{1,L}, x_{2,1}.., chained in that order
        for (std::size_t k = 0; k + 1 < vs.size(); ++k)
            es.push_back(make_edge(vs[k], vs[k + 1]));
    } else if (name == "path-interleaved") {
        std::vector<DigitId> order;
        for (int j = 1; j <= L; ++j)
            for (int i = 1; i <= n; ++i) order.push_back({i, j});
        for (std::size_t k = 0; k + 1 < order.size(); ++k)
            es.push_back(make_edge(order[k], order[k + 1]));
    } else if (name == "binary-tree" || name == "coupled-binary") {
        if (name == "binary-tree" && n != 1)
            throw OutOfDomain("binary-tree is a single-variable layout");
        // heap order within each variable, most significant digit at the root
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= L; ++j)
                for (int c : {2 * j, 2 * j + 1})
                    if (c <= L) es.push_back(make_edge({i, j}, {i, c}));
        // couple the per-variable roots in a path
        for (int i = 1; i < n; ++i) es.push_back(make_edge({i, 1}, {i + 1, 1}));
    } else if (name == "comb") {
        // backbone of most significant digits, one sequential branch each
        for (int i = 1; i < n; ++i) es.push_back(make_edge({i, 1}, {i + 1, 1}));
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j < L; ++j) es.push_back(make_edge({i, j}, {i, j + 1}));
    } else if (name == "star") {
        for (const auto& v : vs)
            if (!(v == DigitId{1, 1})) es.push_back(make_edge({1, 1}, v));
    } else {
        throw OutOfDomain("unknown tree generator '" + name + "'");
    }
    return build_tree(vs, es);
}

namespace {
DigitId parse_digit(const std::string& tok) {
    const auto dot = tok.find('.');
    if (dot == std::string::npos)
        throw OutOfDomain("bad digit token '" + tok + "', expected i.j");
    return {std::stoi(tok.substr(0, dot)), std::stoi(tok.substr(dot + 1))};
}
} // namespace

LabeledTree parse_tree_spec(std::istream& in) {
    std::vector<DigitId> vs;
    std::vector<Edge> es;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "vertex") {
            std::string t;
            ls >> t;
            vs.push_back(parse_digit(t));
        } else if (kw == "edge") {
            std::string a, b;
            ls >> a >> b;
            es.push_back(make_edge(parse_digit(a), parse_digit(b)));
        } else {
            throw OutOfDomain("unknown tree spec keyword '" + kw + "'");
        }
    }
    return build_tree(vs, es);
}

LabeledTree load_tree_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw OutOfDomain("cannot open tree spec '" + path + "'");
    return parse_tree_spec(in);
}

void write_tree_spec(const LabeledTree& tree, std::ostream& out) {
    for (const auto& v : tree.vertices()) out << "vertex " << v << "\n";
    for (const auto& [a, b] : tree.edges())
        out << "edge " << a << " " << b << "\n";
}

int GridPoint::bit(const DigitId& d) const {
    auto it = bits_.find(d);
    if (it == bits_.end())
        throw IncompleteGridPoint("no bit for digit " + to_string(d));
    return it->second;
}

bool GridPoint::complete_for(const LabeledTree& tree) const {
    for (const auto& v : tree.vertices())
        if (!bits_.count(v)) return false;
    return true;
}

double GridPoint::value(int variable) const {
    double x = 0.0;
    for (const auto& [d, b] : bits_)
        if (d.variable == variable && b) x += std::ldexp(1.0, -d.digit);
    return x;
}

std::vector<double> GridPoint::values(int n) const {
    std::vector<double> xs(n);
    for (int i = 1; i <= n; ++i) xs[i - 1] = value(i);
    return xs;
}

std::vector<int> encode(double x, int L) {
    if (!(x >= 0.0 && x < 1.0)) throw OutOfDomain("encode: x must lie in [0,1)");
    if (L < 1) throw OutOfDomain("encode: L must be >= 1");
    auto m = static_cast<std::uint64_t>(std::floor(std::ldexp(x, L)));
    const std::uint64_t top = (std::uint64_t{1} << L) - 1;
    if (m > top) m = top;
    std::vector<int> bits(L);
    for (int j = 0; j < L; ++j) bits[j] = static_cast<int>((m >> (L - 1 - j)) & 1);
    return bits;
}

double decode(const std::vector<int>& bits) {
    if (bits.empty()) throw OutOfDomain("decode: empty bit sequence");
    double x = 0.0;
    for (std::size_t j = 0; j < bits.size(); ++j)
        if (bits[j]) x += std::ldexp(1.0, -static_cast<int>(j) - 1);
    return x;
}

GridPoint encode_point(const LabeledTree& tree, const std::vector<double>& xs) {
    const int L = tree.max_digit();
    std::map<DigitId, int> bits;
    std::vector<std::vector<int>> enc;
    enc.reserve(xs.size());
    for (double x : xs) enc.push_back(encode(x, L));
    for (const auto& v : tree.vertices()) {
        if (v.variable < 1 || v.variable > static_cast<int>(xs.size()))
            throw IncompleteGridPoint("no coordinate for variable " +
                                      std::to_string(v.variable));
        bits[v] = enc[v.variable - 1][v.digit - 1];
    }
    return GridPoint(std::move(bits));
}

} // namespace treeten
