#pragma once

#include <functional>

#include <Eigen/Core>

#include "droplet/grid.hpp"
#include "droplet/potential.hpp"

namespace droplet {

/// Midpoint rule over the box: h^2 * sum of f at every node.
/// Error O(h^2) for C^2 integrands. Throws NumericError (with node index)
/// on a non-finite integrand value. Deterministic compensated summation.
double integrate(const BoxGrid& grid, const std::function<double(Complex)>& f);

/// Moment integral  <e_{j+1}, e_{k+1}>  of the weighted space:
///   int z^j conj(z)^k exp(-beta Phi(z)) dlambda_2(z)
/// by the midpoint rule. The grid half-width must be at least
/// truncation_radius(pot, beta/2, 1); otherwise a TruncationError is thrown.
Complex weighted_inner_product(const BoxGrid& grid, const Potential& pot,
                               double beta, int j, int k);

/// Gram matrix G(j,k) = <e_{j+1}, e_{k+1}> for j,k = 0..N-1 in one pass
/// over the grid. Radial potentials take a diagonal fast path; the generic
/// path is used otherwise (and in tests for cross-validation).
Eigen::MatrixXcd gram_matrix(const BoxGrid& grid, const Potential& pot,
                             double beta, int N, bool force_generic = false);

/// Pick a grid big enough for all moments up to degree 2(N-1) of the
/// weight exp(-beta Phi): covers the certified truncation radius and the
/// region where the largest-degree integrand is non-negligible.
BoxGrid default_moment_grid(const Potential& pot, double beta, int N,
                            int nodes_per_side = 512);

} // namespace droplet
