#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "droplet/potential.hpp"
#include "droplet/quadrature.hpp"

namespace droplet {

/// Orthonormal polynomial basis of the weighted space of polynomials of
/// degree < N under  d mu = exp(-beta Phi) dlambda_2.
///
/// Row k of `coeffs` holds the monomial coefficients of the orthonormal
/// phi_{k+1}; the matrix is lower triangular with positive real diagonal.
/// `norms[k]` is the norm of the monic orthogonal polynomial of degree k
/// before normalization.
struct WeightedBasis {
    Potential pot;
    double beta = 0.0;
    int N = 0;
    Eigen::MatrixXcd coeffs;   // N x N lower triangular
    std::vector<double> norms; // size N, strictly positive

    /// phi_{j+1}(z), Horner evaluation of row j.
    Complex eval_phi_j(int j, Complex z) const;
};

/// Gram-Schmidt via Cholesky of the (diagonally scaled) Gram matrix.
/// Throws NumericError with the offending pivot index when the moments are
/// numerically rank deficient, or when the scaled Gram condition number
/// exceeds 1e12.
WeightedBasis build_basis(const Potential& pot, double beta, int N,
                          const BoxGrid& grid, bool force_generic = false);

/// K_{mu,N}(z, w) = sum_j phi_j(z) conj(phi_j(w)).
Complex eval_kernel(const WeightedBasis& basis, Complex z, Complex w);

/// Matrix kernel [K(z_j, w_k)]_{j,k}.
Eigen::MatrixXcd kernel_matrix(const WeightedBasis& basis,
                               const std::vector<Complex>& zs,
                               const std::vector<Complex>& ws);

/// Density of the n-point correlation measure w.r.t. lambda_{2n}:
///   det[K(z_j, z_k)] * prod_j exp(-beta Phi(z_j)).
double correlation_density(const WeightedBasis& basis,
                           const std::vector<Complex>& zs);

/// Normalizing constant Z_N = N! * prod_k norms[k]^2, and its logarithm
/// (usable when Z_N itself would under- or overflow).
double compute_Z(const WeightedBasis& basis);
double compute_log_Z(const WeightedBasis& basis);

/// det K^n_{mu,N}(zs,zs) <= det K^n_{mu,N+1}(zs,zs) + slack ?
bool check_monotone_growth(const WeightedBasis& basis_N,
                           const WeightedBasis& basis_N1,
                           const std::vector<Complex>& zs);

/// Basis cache: JSON {N, beta, potential, norms[], coeffs[[re,im],...]}.
void save_basis(const std::string& path, const WeightedBasis& basis);
WeightedBasis load_basis(const std::string& path, const Potential& pot);

} // namespace droplet
