#pragma once

#include <functional>
#include <iosfwd>
#include <utility>

#include "treeten/ttn.hpp"

namespace treeten {

using TargetFn = std::function<double(const GridPoint&)>;

/// For each directed edge u->v: one bit configuration of the u-side subtree
/// per bond value. At any time every edge stores the list for the side facing
/// away from the current center.
struct PivotTable {
    std::map<std::pair<DigitId, DigitId>, std::vector<GridPoint>> lists;
};

/// Cross-interpolation session. Away from the center every tensor is an
/// interpolation factor (identity on its pivot rows); the center tensor holds
/// exact target values at the configurations induced by the pivots.
struct TciState {
    TreeTensorNetwork<double> net;
    PivotTable pivots;
    DigitId center;
    TargetFn target;
    std::size_t call_count = 0;
};

struct SweepRecord {
    double error = 0.0; // max pointwise deviation seen during the sweep
    std::size_t max_bond = 0;
    std::size_t call_count = 0; // cumulative
};

struct TciReport {
    std::vector<SweepRecord> sweeps;
};

/// Bring an initial guess into the interpolative gauge by leaves-to-root ID
/// passes, then overwrite the center (root) with exact target values.
TciState init_gauge(const TreeTensorNetwork<double>& net, TargetFn f,
                    const DigitId& root);

/// Move the center across one edge: form the two-site tensor, replace its
/// entries by exact target values (returning the max deviation found), and
/// re-split with an interpolative decomposition of rank <= chi_max (and
/// <= growth_cap when nonzero).
double two_site_update(TciState& state, const DigitId& neighbor,
                       std::size_t chi_max, double tol,
                       std::size_t growth_cap = 0);

/// Euler-tour sweep from the current center touching every edge (twice: on
/// the way down and back); per-edge rank growth is capped at 2x the dimension
/// at sweep start. Returns the max deviation over the sweep.
double sweep(TciState& state, std::size_t chi_max, double tol);

/// Sampled gauge check: max |center entry - f| over n_checks random center
/// configurations assembled from stored pivots.
double verify_gauge(TciState& state, int n_checks, std::uint64_t seed);

/// Full learning loop: constant initial guess at f(0,...,0), init_gauge,
/// n_sweeps sweeps. Optional progress stream receives one
/// "sweep,eps_inf,max_chi,calls" line per sweep.
std::pair<TreeTensorNetwork<double>, TciReport> tci_learn(
    TargetFn f, const LabeledTree& tree, std::size_t chi_max, double tol,
    int n_sweeps, std::ostream* progress = nullptr);

} // namespace treeten
