#pragma once

#include <vector>

#include "droplet/basis.hpp"

namespace droplet {

/// Joint scaling of the ensemble parameters:
///   beta = (N-1)/tau,  theta = beta/(2(N-1)) = 1/(2 tau).
/// Constructing from any one of {tau, beta, theta} with N fixes the others.
struct ScalingParams {
    int N = 0;
    double tau = 0.0;
    double beta = 0.0;
    double theta = 0.0;
};

ScalingParams make_scaling_from_tau(int N, double tau);
ScalingParams make_scaling_from_beta(int N, double beta);
ScalingParams make_scaling_from_theta(int N, double theta);

struct CorrelationPair {
    double gamma_n = 0.0; // n-point correlation density
    double pi_n = 0.0;    // n-point marginal density = gamma_n (N-n)!/N!
};

/// Correlation and marginal densities at a configuration; the factorial
/// ratio is carried in log space (never overflows).
CorrelationPair correlation_vs_marginal(const WeightedBasis& basis,
                                        const ScalingParams& params,
                                        const std::vector<Complex>& zs);

} // namespace droplet
