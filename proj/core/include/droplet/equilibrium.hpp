#pragma once

#include <vector>

#include "droplet/obstacle.hpp"

namespace droplet {

/// Coincidence set of the obstacle problem: indicator is true on
/// C \ D_Phi(tau), the compact set carrying the equilibrium measure.
/// `fraction` holds the per-cell contact fraction in [0,1] read off the
/// complementarity defect (LapPhi - Lap_h u) / LapPhi, snapped to 0 and 1
/// away from the free boundary; it resolves the boundary below cell size
/// (plain thresholding of u misplaces it by ~h/3).
struct Droplet {
    BoxGrid grid;
    std::vector<bool> indicator; // fraction >= 1/2
    std::vector<double> fraction;
    double tau = 0.0;
    double mass = 0.0; // h^2 sum fraction * Lap Phi / (4 pi)
};

/// delta (default 10x the PSOR tolerance) is the u-threshold fallback for
/// cells where Lap Phi <= 0 and the defect ratio is undefined.
Droplet extract_droplet(const Potential& pot, const ObstacleSolution& sol,
                        double delta = -1.0);

/// Equilibrium measure density  fraction * Lap Phi / (4 pi tau)  on the
/// coincidence set (exactly Lap Phi / (4 pi tau) away from the free
/// boundary), with nodes where Lap Phi <= eps_h trimmed (pseudo-interior
/// to D_Phi(tau) united with the harmonicity set).
DiscreteMeasure equilibrium_measure(const Potential& pot, const Droplet& droplet);

/// Self-interaction radius of a square cell of side h, as a multiple of h:
/// log(1/(CELL_SELF_RADIUS * h)) equals the mean of log(1/|p-q|) over
/// independent uniform points of the cell. Derivation: tests/oracles
/// (4-D quadrature); value = exp(-0.8050866).
inline constexpr double CELL_SELF_RADIUS = 0.44707;

/// L[sigma](z) = int log(1/|z-w|) dsigma(w) by direct summation; the
/// self-cell term uses the CELL_SELF_RADIUS regularization.
double log_potential(const DiscreteMeasure& measure, Complex z);

/// L[sigma] on every grid node via FFT convolution (same regularization).
ScalarField log_potential_field(const DiscreteMeasure& measure);

struct EnergyResult {
    double value = 0.0;      // E_Phi[sigma](theta)
    double field_term = 0.0; // int Phi dsigma
    double log_term = 0.0;   // double integral of log(1/|z-w|)
    double C_tau = 0.0;      // constant of the potential identity
};

/// E_Phi[sigma](theta) = 2 theta int Phi dsigma + log double-sum, and the
/// constant C_tau = (1/(2 tau)) int Phi dsigma + log double-sum with
/// tau = 1/(2 theta).
EnergyResult energy(const DiscreteMeasure& measure, const Potential& pot,
                    double theta);

enum class HarmonicTest { one, re_inv_pow };

/// Defect of  4 pi (tau2 - tau1) h(inf) = int_{annulus} h LapPhi dlambda_2
/// between two converged solves; h is 1 or Re(z^-k).
double harmonic_moment_check(const Potential& pot, const Droplet& d1,
                             const Droplet& d2, HarmonicTest h_id, int k = 1);

/// Nested coincidence sets (1-cell tolerance band) with increasing mass.
bool monotone_tau_check(const std::vector<Droplet>& droplets);

} // namespace droplet
