#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treeten/errors.hpp"

namespace treeten {

/// One binary digit x_{i,j}: digit j (1 = most significant) of continuous
/// variable i.
struct DigitId {
    int variable = 0;
    int digit = 0;

    auto operator<=>(const DigitId&) const = default;
};

std::string to_string(const DigitId& d);
std::ostream& operator<<(std::ostream& os, const DigitId& d);

/// Canonical index names used by the tensor layer.
std::string external_index_name(const DigitId& d);
std::string bond_index_name(const DigitId& a, const DigitId& b);

using Edge = std::pair<DigitId, DigitId>; // stored with first < second

Edge make_edge(const DigitId& a, const DigitId& b);

/// A labelled tree over binary digits: vertices are (variable, digit) pairs,
/// edges connect tensors that share a bond index. Connected and acyclic by
/// construction.
class LabeledTree {
  public:
    LabeledTree() = default;
    LabeledTree(std::vector<DigitId> vertices, std::vector<Edge> edges);

    const std::vector<DigitId>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<DigitId>& neighbors(const DigitId& v) const;
    int degree(const DigitId& v) const;
    bool has_vertex(const DigitId& v) const;
    bool has_edge(const DigitId& a, const DigitId& b) const;

    /// Number of distinct variables and max digit index present.
    int num_variables() const;
    int max_digit() const;

    bool operator==(const LabeledTree& other) const {
        return vertices_ == other.vertices_ && edges_ == other.edges_;
    }

  private:
    std::vector<DigitId> vertices_; // sorted
    std::vector<Edge> edges_;       // sorted, canonical orientation
    std::map<DigitId, std::vector<DigitId>> adjacency_;
};

/// Validating builder; throws DisconnectedTree / CycleDetected /
/// DuplicateDigit on a bad spec.
LabeledTree build_tree(const std::vector<DigitId>& vertices,
                       const std::vector<Edge>& edges);

/// Built-in tree generators parameterized by (n, L).
/// Names: "path-sequential", "path-interleaved", "binary-tree", "comb",
/// "coupled-binary", "star".
LabeledTree make_tree(const std::string& name, int n, int L);

/// Tree spec documents: "vertex i.j" and "edge i.j i'.j'" lines.
LabeledTree parse_tree_spec(std::istream& in);
LabeledTree load_tree_spec(const std::string& path);
void write_tree_spec(const LabeledTree& tree, std::ostream& out);

/// A full assignment of all binary digits of a tree.
class GridPoint {
  public:
    GridPoint() = default;
    explicit GridPoint(std::map<DigitId, int> bits) : bits_(std::move(bits)) {}

    int bit(const DigitId& d) const;
    bool has(const DigitId& d) const { return bits_.count(d) != 0; }
    void set(const DigitId& d, int b) { bits_[d] = b; }
    const std::map<DigitId, int>& bits() const { return bits_; }
    std::size_t size() const { return bits_.size(); }

    bool complete_for(const LabeledTree& tree) const;

    /// Decoded value of one variable: sum_j bits(i,j) / 2^j.
    double value(int variable) const;
    /// Decoded coordinates for variables 1..n.
    std::vector<double> values(int n) const;

    bool operator==(const GridPoint& other) const = default;

  private:
    std::map<DigitId, int> bits_;
};

/// Truncating binary encoding of x in [0,1): returns L bits, most significant
/// first, such that sum_j bits[j-1]/2^j is the largest grid value <= x.
std::vector<int> encode(double x, int L);

/// Inverse of encode on grid values: sum_j bits[j-1]/2^j.
double decode(const std::vector<int>& bits);

/// Assemble a GridPoint for a tree from per-variable coordinates.
GridPoint encode_point(const LabeledTree& tree, const std::vector<double>& xs);

} // namespace treeten
