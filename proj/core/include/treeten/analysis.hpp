#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "treeten/treeci.hpp"
#include "treeten/ttn.hpp"

namespace treeten {

/// A reusable batch of grid points; the same set is meant to be shared across
/// every network being compared.
struct SampleSet {
    std::vector<GridPoint> points;
    std::uint64_t seed = 0;
};

/// Uniform draw from the 2^{nL} grid; without replacement whenever the grid
/// has at least n points and at most 62 digits, with replacement otherwise.
SampleSet draw_samples(const LabeledTree& tree, std::size_t n,
                       std::uint64_t seed);

/// (eps, eps_inf): mean and max absolute deviation over the sample set.
std::pair<double, double> error_metrics(const TreeTensorNetwork<double>& net,
                                        const TargetFn& f,
                                        const SampleSet& samples);

/// Sampled two-bit reduced density matrix for digits (a, b): basis order
/// (bit_a, bit_b) row-major, unit trace.
struct RdmEstimate {
    Eigen::Matrix4d rho_ab;
    std::size_t sample_count = 0;
};

RdmEstimate estimate_rdm(const TargetFn& f, const LabeledTree& tree,
                         const DigitId& a, const DigitId& b,
                         std::size_t n_samples, std::uint64_t seed);

/// Mutual information M = S_A + S_B - S_AB (natural log) of the sampled RDM.
double mutual_information(const TargetFn& f, const LabeledTree& tree,
                          const DigitId& a, const DigitId& b,
                          std::size_t n_samples, std::uint64_t seed);

/// All-pairs MI over the tree's digits; symmetric, zero diagonal.
struct MiMatrix {
    std::vector<DigitId> digits;
    std::vector<std::vector<double>> values;
};

MiMatrix mi_matrix(const TargetFn& f, const LabeledTree& tree,
                   std::size_t n_samples, std::uint64_t seed);

} // namespace treeten
