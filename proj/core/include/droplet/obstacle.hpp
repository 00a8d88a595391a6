#pragma once

#include "droplet/grid.hpp"
#include "droplet/potential.hpp"

namespace droplet {

struct PsorParams {
    /// Over-relaxation factor; <= 0 selects 2 / (1 + sin(pi/M)), which is
    /// near-optimal for the 5-point Laplacian at every grid size.
    double omega = 0.0;
    double tol = 1e-9;       // max node update < tol * (1 + max|u|)
    int max_sweeps = 200000;
    double mass_rel_tol = 1e-3; // |coincidence mass - tau| <= tol * tau
    int max_bisect = 60;
};

/// Converged linear complementarity solution for the gap u = Vhat_tau - V:
///   u >= 0,  Lap_h u <= Lap Phi,  u (Lap Phi - Lap_h u) = 0
/// with Dirichlet data u = -2 tau log|z| + c + Phi(z) on the box edge.
/// The additive constant c is fixed by bisection so that the coincidence
/// set {u ~ 0} carries mass  h^2 sum Lap Phi / (4 pi) = tau.
struct ObstacleSolution {
    BoxGrid grid;
    ScalarField u;
    double tau = 0.0;
    double boundary_constant = 0.0; // c
    long iterations = 0;            // PSOR sweeps, summed over bisection
    double residual = 0.0;          // final complementarity residual
    double psor_tol = 0.0;          // absolute node-update tolerance at exit
};

ObstacleSolution solve_obstacle(const Potential& pot, double tau,
                                const BoxGrid& grid,
                                const PsorParams& params = {});

/// Max violation of min(u, Lap Phi - Lap_h u) >= 0 over interior nodes.
double complementarity_residual(const Potential& pot, const ObstacleSolution& sol);

} // namespace droplet
