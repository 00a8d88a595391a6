#pragma once

#include <cstdint>
#include <vector>

#include "droplet/basis.hpp"
#include "droplet/fekete.hpp"
#include "droplet/grid.hpp"

namespace droplet {

/// log of the unnormalized joint density of the eigenvalue ensemble:
///   -beta sum Phi(z_j) + 2 sum_{j<k} log|z_j - z_k|.
/// Returns -inf when two points coincide. Equals -N(N-1) energy_sharp
/// with theta = beta / (2(N-1)).
double log_unnormalized_density(const Potential& pot, double beta,
                                const Configuration& config);

struct McmcParams {
    long burn_in = -1;     // < 0: default 200 * N proposals
    long thin = -1;        // < 0: default N proposals
    double step_scale = -1.0; // < 0: droplet radius estimate / 4
    long recompute_every = 10000; // accepted moves between full recomputes
};

struct McmcResult {
    std::vector<Configuration> samples; // thinned post-burn-in states
    double acceptance_rate = 0.0;       // post-burn-in
    double step_scale = 0.0;            // frozen after adaptation
    double max_drift = 0.0;             // incremental vs full log-density
    bool mixing_warning = false;        // acceptance outside [0.05, 0.8]
    std::vector<double> log_density_trace; // one entry per thinned sample
};

/// Single-particle random-walk Metropolis targeting the unnormalized
/// density at explicit beta (N >= 1). The step scale adapts toward 30%
/// acceptance during burn-in, then freezes. Fixed seed => identical stream.
McmcResult mcmc_run_beta(const Potential& pot, int N, double beta, long steps,
                         std::uint64_t seed, const McmcParams& params = {});

/// Scaling wrapper: beta = (N-1)/tau; requires N >= 2 (the scaling
/// degenerates to a flat density at N = 1).
McmcResult mcmc_run(const Potential& pot, int N, double tau, long steps,
                    std::uint64_t seed, const McmcParams& params = {});

struct MarginalHistogram {
    DiscreteMeasure measure; // normalized so that in-grid + overflow = 1
    double overflow_mass = 0.0;
};

/// Pools every particle of every thinned sample into grid cells
/// (exchangeability makes per-particle and pooled marginals coincide).
MarginalHistogram marginal_histogram(const std::vector<Configuration>& samples,
                                     const BoxGrid& grid);

struct KernelCrosscheck {
    double max_bin_deviation = 0.0; // MCMC marginal vs (1/N) K(z,z) e^{-b Phi}
    double diagonality_stat = 0.0;  // mean |K(zj,zk)|^2/(K(zj,zj)K(zk,zk))
};

/// Compares the sampled 1-point marginal against the determinantal
/// prediction on coarse_bins x coarse_bins cells of the given box, and
/// reports the off-diagonal kernel correlation statistic over sample pairs.
KernelCrosscheck kernel_crosscheck(const WeightedBasis& basis,
                                   const std::vector<Configuration>& samples,
                                   double box_half_width, int coarse_bins = 16,
                                   int fine_per_bin = 8);

} // namespace droplet
