#pragma once

#include <map>
#include <optional>

#include "treeten/treeci.hpp"
#include "treeten/ttn.hpp"

namespace treeten {

/// Relabel the variables of a network (pure renaming of vertices and index
/// names); the mapping must cover every variable and be injective.
TreeTensorNetwork<double> remap_variables(const TreeTensorNetwork<double>& net,
                                          const std::map<int, int>& mapping);

/// Union of an x tree and its t copy (variables i -> i + n) joined by a
/// single bridge edge. bridge_x lives in the x tree; bridge_t is named in the
/// t labels (variable > n).
LabeledTree build_doubled_tree(const LabeledTree& tx, const DigitId& bridge_x,
                               const DigitId& bridge_t);

/// f(x) = g(x) + lambda * Int K(x, t) f(t)^alpha dt over [0,1)^n.
struct FredholmProblem {
    TreeTensorNetwork<double> g_net;      // on the x tree
    TreeTensorNetwork<double> kernel_net; // on the doubled tree
    int alpha = 1;
    double lambda = 1.0; // kept at 1 throughout
    int n_iters = 20;
    std::size_t chi_max = 64;
    double tol = 1e-12;
    int L = 0; // digits per variable; sets the convergence floor
};

struct SolveTrace {
    std::vector<double> errors;          // vs reference when supplied
    std::vector<double> changes;         // relative iterate change
    std::vector<std::size_t> max_bonds;
    std::vector<bool> rank_bound_ok;     // chi_iter <= chi_g + chi_K per edge
    bool diverged = false;
    bool converged = false;
};

std::pair<TreeTensorNetwork<double>, SolveTrace> solve(
    const FredholmProblem& problem, const TreeTensorNetwork<double>& f1,
    const std::optional<TargetFn>& reference = std::nullopt,
    std::uint64_t sample_seed = 2024);

} // namespace treeten
