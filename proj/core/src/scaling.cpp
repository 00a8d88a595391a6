#include "droplet/scaling.hpp"

#include <cmath>

namespace droplet {

namespace {

void check_N(int N) {
    if (N < 2)
        throw ArgumentError("make_scaling: N must be >= 2 (beta degenerates)");
}

} // namespace

ScalingParams make_scaling_from_tau(int N, double tau) {
    check_N(N);
    if (!(tau > 0))
        throw ArgumentError("make_scaling: tau must be positive");
    return {N, tau, double(N - 1) / tau, 1.0 / (2.0 * tau)};
}

ScalingParams make_scaling_from_beta(int N, double beta) {
    check_N(N);
    if (!(beta > 0))
        throw ArgumentError("make_scaling: beta must be positive");
    return make_scaling_from_tau(N, double(N - 1) / beta);
}

ScalingParams make_scaling_from_theta(int N, double theta) {
    check_N(N);
    if (!(theta > 0))
        throw ArgumentError("make_scaling: theta must be positive");
    return make_scaling_from_tau(N, 1.0 / (2.0 * theta));
}

CorrelationPair correlation_vs_marginal(const WeightedBasis& basis,
                                        const ScalingParams& params,
                                        const std::vector<Complex>& zs) {
    const int n = int(zs.size());
    if (n < 1 || n > params.N)
        throw ArgumentError("correlation_vs_marginal: need 1 <= n <= N");
    if (basis.N != params.N || basis.beta != params.beta)
        throw ArgumentError("correlation_vs_marginal: basis/scaling mismatch");
    CorrelationPair out;
    out.gamma_n = correlation_density(basis, zs);
    // (N-n)!/N! in log space
    double log_ratio =
        std::lgamma(params.N - n + 1.0) - std::lgamma(params.N + 1.0);
    out.pi_n = out.gamma_n * std::exp(log_ratio);
    return out;
}

} // namespace droplet
