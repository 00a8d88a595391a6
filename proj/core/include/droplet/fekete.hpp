#pragma once

#include <cstdint>
#include <vector>

#include "droplet/grid.hpp"
#include "droplet/potential.hpp"

namespace droplet {

using Configuration = std::vector<Complex>;

/// Discrete weighted energy
///   (1/(N(N-1))) sum_{j!=k} log(1/E_Phi(z_j, z_k; theta))
/// = (2 theta / N) sum Phi(z_j) + (1/(N(N-1))) sum_{j!=k} log(1/|z_j-z_k|).
/// Returns +inf when two points coincide.
double energy_sharp(const Potential& pot, const Configuration& config,
                    double theta);

/// Gradient of energy_sharp with respect to (Re z_j, Im z_j), packed as a
/// complex number per point.
std::vector<Complex> energy_sharp_gradient(const Potential& pot,
                                           const Configuration& config,
                                           double theta);

/// Max deviation between the analytic gradient and central finite
/// differences of energy_sharp, relative to max(1, ||grad||_inf) so the
/// metric stays meaningful at critical points (step 1e-6 by default).
double gradient_fd_deviation(const Potential& pot, const Configuration& config,
                             double theta, double step = 1e-6);

struct FeketeResult {
    Configuration config;
    double energy_sharp = 0.0;
    double M_estimate = 0.0; // exp(-energy_sharp)
    int restarts_used = 0;
    double gradient_norm = 0.0;
    double fd_deviation = 0.0;
};

struct FeketeParams {
    int restarts = 8;
    int max_iters = 50000;
    double grad_tol = 1e-8;      // scaled by (1 + |energy|)
    double min_separation = 1e-9;
    double init_radius = -1.0;   // <= 0: estimated from the potential
};

/// Multi-start gradient descent with backtracking line search; restarts
/// draw initial configurations uniformly from a disk around the expected
/// droplet. Deterministic for a fixed seed; ties broken by restart index.
FeketeResult optimize_fekete(const Potential& pot, int N, double theta,
                             std::uint64_t seed,
                             const FeketeParams& params = {});

/// M_estimate nonincreasing along the given increasing N values
/// (1e-6 slack; the estimates are only lower bounds on the true maxima).
bool m_decreasing_check(const Potential& pot, double theta,
                        const std::vector<int>& Ns, std::uint64_t seed,
                        const FeketeParams& params = {});

/// config in A_{Phi,N}(eps, theta): energy_sharp <= log(1/M_ref) + eps.
bool membership_A(const Potential& pot, const Configuration& config,
                  double theta, double eps, double M_ref);

/// Fraction of points with |z| <= K_radius.
double fraction_in_K(const Configuration& config, double K_radius);

/// Empirical probability measure: mass 1/N per point, nearest-node binning.
DiscreteMeasure empirical_measure(const Configuration& config,
                                  const BoxGrid& grid);

} // namespace droplet
