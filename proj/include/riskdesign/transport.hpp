#pragma once

#include <vector>

#include "riskdesign/core_model.hpp"

namespace riskdesign {

/// Maximizer of the Kantorovich-Rubinstein dual of W1 over the Lipschitz
/// set B = { b : |b_i - b_j| <= |i - j| }, normalized so the last entry is
/// zero. The potential is the gradient of W1 with respect to the first
/// argument wherever the maximizer is unique.
struct DualPotential {
    std::vector<double> b;
    double value = 0.0;
};

/// Order-1 Wasserstein distance between distributions on the ordered type
/// space with ground metric |i - j|. Closed form: the sum of absolute
/// cumulative differences.
double w1(const TypeDistribution& mu, const TypeDistribution& mu0);

/// Same distance via the dual linear program; returns the potential b*.
DualPotential w1_dual(const TypeDistribution& mu, const TypeDistribution& mu0);

/// Euclidean projection onto the probability simplex.
TypeDistribution project_simplex(const std::vector<double>& v);

}  // namespace riskdesign
