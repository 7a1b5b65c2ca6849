#pragma once

#include <complex>

#include "treeten/analysis.hpp"
#include "treeten/fredholm.hpp"
#include "treeten/funcbuild.hpp"

namespace treeten {

/// Directory holding the fixed benchmark tables; the TREETEN_DATA_DIR
/// environment variable overrides the compiled-in default.
std::string data_dir();

/// L_40 coefficients: binom(40, k) (-1)^k / k!.
std::vector<double> laguerre_coefficients(int n = 40);
TargetFn laguerre_target();
TreeTensorNetwork<double> build_laguerre(const LabeledTree& tree);

/// Truncated Weierstrass series sum_{k=1}^{25} sin(pi k^3 x) / (pi k^3);
/// exact real network of bond dimension 2 * 25.
TargetFn weierstrass_target();
TreeTensorNetwork<double> build_weierstrass(const LabeledTree& tree);

/// Fixed 30-wave instance of sum_j cos(j k_j . r), r in [0,1)^3, with the
/// frequency table shipped in data/. The network is the complex sum of 30
/// rank-1 exponentials; evaluate its real part.
TargetFn planewaves_target();
TreeTensorNetwork<std::complex<double>> build_planewaves(
    const LabeledTree& tree);

/// Trivariate multinormal exp(-(r-mu)^T M^{-1} (r-mu)) with the fixed
/// covariance table, mu = (5,5,5), r in [0,10)^3 mapped affinely onto the
/// unit cube.
TargetFn multinormal_target();

struct FredholmInstance {
    FredholmProblem problem;
    TreeTensorNetwork<double> f1;
    TargetFn exact;
};

/// K = x1 x2^2 t1 / 6, alpha = 3, g = sin(x2) - c x1 x2^2; exact solution
/// sin(x2). All parts built directly from polynomials.
FredholmInstance make_fredholm_ex1(int L);

/// K = x1 (1 + t1 + t2) / (1 + x2), alpha = 2,
/// g = 1/(1+x1+x2)^2 - x1/((1+x2) 6); exact solution 1/(1+x1+x2)^2.
/// Kernel and g learned by cross interpolation at chi <= 10.
FredholmInstance make_fredholm_ex2(int L);

} // namespace treeten
