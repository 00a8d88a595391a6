#include "droplet/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace droplet {

namespace {

// h^2 sum of LapPhi^+ / (4 pi) over |z| < R
double plus_mass_within(const Potential& pot, const BoxGrid& grid, double R) {
    const int m = grid.nodes_per_side();
    double s = 0.0;
    double R2 = R * R;
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix) {
            Complex z = grid.node(ix, iy);
            if (std::norm(z) < R2)
                s += std::max(pot.laplacian(z), 0.0);
        }
    return s * grid.spacing() * grid.spacing() / (4.0 * M_PI);
}

// radius where the positive-Laplacian mass first reaches `target`
double mass_radius(const Potential& pot, const BoxGrid& grid, double target) {
    double lo = 0.0, hi = grid.half_width();
    if (plus_mass_within(pot, grid, hi * std::sqrt(2.0)) < target)
        return -1.0;
    hi *= std::sqrt(2.0);
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        (plus_mass_within(pot, grid, mid) >= target ? hi : lo) = mid;
    }
    return hi;
}

double ring_mean_phi(const Potential& pot, double R) {
    double s = 0.0;
    const int n = 64;
    for (int k = 0; k < n; ++k)
        s += pot.phi(std::polar(R, 2.0 * M_PI * k / n));
    return s / n;
}

class PsorSolver {
  public:
    PsorSolver(const Potential& pot, double tau, const BoxGrid& grid,
               const PsorParams& params)
        : pot_(pot), grid_(grid), tau_(tau), params_(params),
          m_(grid.nodes_per_side()), h_(grid.spacing()),
          u_(grid.node_count(), 0.0), f_(grid.node_count(), 0.0) {
        omega_ = params.omega > 0.0 ? params.omega
                                    : 2.0 / (1.0 + std::sin(M_PI / m_));
        for (int iy = 0; iy < m_; ++iy)
            for (int ix = 0; ix < m_; ++ix)
                f_[idx(ix, iy)] = h_ * h_ * pot_.laplacian(grid_.node(ix, iy));
    }

    void set_boundary(double c) {
        auto dirichlet = [&](int ix, int iy) {
            Complex z = grid_.node(ix, iy);
            u_[idx(ix, iy)] =
                -2.0 * tau_ * std::log(std::abs(z)) + c + pot_.phi(z);
        };
        for (int ix = 0; ix < m_; ++ix) {
            dirichlet(ix, 0);
            dirichlet(ix, m_ - 1);
        }
        for (int iy = 0; iy < m_; ++iy) {
            dirichlet(0, iy);
            dirichlet(m_ - 1, iy);
        }
    }

    void initial_guess(double c, double r0) {
        for (int iy = 1; iy < m_ - 1; ++iy)
            for (int ix = 1; ix < m_ - 1; ++ix) {
                Complex z = grid_.node(ix, iy);
                double r = std::max(std::abs(z), r0);
                double v = -2.0 * tau_ * std::log(r) + c + pot_.phi(z);
                u_[idx(ix, iy)] = std::max(0.0, v);
            }
        set_boundary(c);
    }

    void shift(double dc) {
        for (int iy = 1; iy < m_ - 1; ++iy)
            for (int ix = 1; ix < m_ - 1; ++ix) {
                std::size_t i = idx(ix, iy);
                u_[i] = std::max(0.0, u_[i] + dc);
            }
    }

    // red-black projected SOR until max node update < tol * (1 + max|u|)
    long relax() {
        long sweeps = 0;
        double* u = u_.data();
        const double* f = f_.data();
        while (sweeps < params_.max_sweeps) {
            double maxchange = 0.0, maxu = 0.0;
            for (int color = 0; color < 2; ++color) {
                for (int iy = 1; iy < m_ - 1; ++iy) {
                    int ix0 = 1 + ((iy + color) & 1);
                    std::size_t row = std::size_t(iy) * m_;
                    for (int ix = ix0; ix < m_ - 1; ix += 2) {
                        std::size_t i = row + ix;
                        double nb = u[i - 1] + u[i + 1] + u[i - m_] + u[i + m_];
                        double unew = (1.0 - omega_) * u[i] +
                                      omega_ * 0.25 * (nb - f[i]);
                        if (unew < 0.0)
                            unew = 0.0;
                        double d = std::abs(unew - u[i]);
                        if (d > maxchange)
                            maxchange = d;
                        if (unew > maxu)
                            maxu = unew;
                        u[i] = unew;
                    }
                }
            }
            ++sweeps;
            tol_abs_ = params_.tol * (1.0 + maxu);
            if (maxchange < tol_abs_)
                return sweeps;
        }
        throw NumericError("PSOR failed to converge within " +
                           std::to_string(params_.max_sweeps) +
                           " sweeps (last tolerance " + std::to_string(tol_abs_) +
                           ")");
    }

    // (1/4pi) sum (h^2 LapPhi - h^2 Lap_h u): zero on the exterior where
    // Lap_h u = LapPhi, so this measures the contact set with sub-cell
    // resolution (cell counting against a threshold is biased by ~h/3)
    double coincidence_mass() const {
        double s = 0.0;
        for (int iy = 1; iy < m_ - 1; ++iy)
            for (int ix = 1; ix < m_ - 1; ++ix) {
                std::size_t i = idx(ix, iy);
                double lap = u_[i - 1] + u_[i + 1] + u_[i - m_] + u_[i + m_] -
                             4.0 * u_[i];
                s += f_[i] - lap;
            }
        return s / (4.0 * M_PI);
    }

    const std::vector<double>& u() const { return u_; }
    double tol_abs() const { return tol_abs_; }

  private:
    std::size_t idx(int ix, int iy) const { return std::size_t(iy) * m_ + ix; }

    const Potential& pot_;
    BoxGrid grid_;
    double tau_;
    PsorParams params_;
    int m_;
    double h_;
    double omega_;
    double tol_abs_ = 0.0;
    std::vector<double> u_, f_;
};

} // namespace

ObstacleSolution solve_obstacle(const Potential& pot, double tau,
                                const BoxGrid& grid, const PsorParams& params) {
    if (!(tau > 0))
        throw ArgumentError("solve_obstacle: tau must be positive");

    // a-priori droplet radius estimate with a factor-2 mass margin
    double r_est = mass_radius(pot, grid, 2.0 * tau);
    if (r_est < 0.0 || grid.half_width() < r_est)
        throw TruncationError(
            "solve_obstacle: grid half-width below the droplet radius estimate");

    double r0 = mass_radius(pot, grid, tau);
    double c0 = 2.0 * tau * std::log(r0) - ring_mean_phi(pot, r0);

    PsorSolver solver(pot, tau, grid, params);
    solver.initial_guess(c0, r0);

    long total_sweeps = 0;
    double c = c0;
    auto mass_at = [&](double cnew, double cprev) {
        solver.shift(cnew - cprev);
        solver.set_boundary(cnew);
        total_sweeps += solver.relax();
        return solver.coincidence_mass();
    };

    double mass = [&] {
        total_sweeps += solver.relax();
        return solver.coincidence_mass();
    }();

    // bracket: coincidence mass decreases as c grows
    double c_lo, c_hi, prev = c0;
    if (mass > tau) {
        c_lo = c0;
        double step = std::max(0.25, 0.25 * tau);
        do {
            c_hi = prev + step;
            if (c_hi > c0 + 20.0 * tau)
                throw NumericError("solve_obstacle: mass-matching bracket not "
                                   "found within c0 + 20 tau");
            mass = mass_at(c_hi, prev);
            prev = c_hi;
            step *= 2.0;
        } while (mass > tau);
    } else {
        c_hi = c0;
        double step = std::max(0.25, 0.25 * tau);
        do {
            c_lo = prev - step;
            if (c_lo < c0 - 20.0 * tau)
                throw NumericError("solve_obstacle: mass-matching bracket not "
                                   "found within c0 - 20 tau");
            mass = mass_at(c_lo, prev);
            prev = c_lo;
            step *= 2.0;
        } while (mass < tau);
    }

    for (int it = 0; it < params.max_bisect; ++it) {
        c = 0.5 * (c_lo + c_hi);
        mass = mass_at(c, prev);
        prev = c;
        if (std::abs(mass - tau) <= params.mass_rel_tol * tau)
            break;
        (mass > tau ? c_lo : c_hi) = c;
    }
    if (std::abs(mass - tau) > 3.0 * params.mass_rel_tol * tau &&
        std::abs(mass - tau) > 0.03 * tau)
        throw NumericError("solve_obstacle: mass-matching failed, residual mass " +
                           std::to_string(mass));

    ObstacleSolution sol{grid, ScalarField(grid), tau, c, total_sweeps, 0.0,
                         solver.tol_abs()};
    sol.u.values = solver.u();
    sol.residual = complementarity_residual(pot, sol);
    return sol;
}

double complementarity_residual(const Potential& pot,
                                const ObstacleSolution& sol) {
    const BoxGrid& grid = sol.grid;
    const int m = grid.nodes_per_side();
    const double h2 = grid.spacing() * grid.spacing();
    const auto& u = sol.u.values;
    double worst = 0.0;
    for (int iy = 1; iy < m - 1; ++iy)
        for (int ix = 1; ix < m - 1; ++ix) {
            std::size_t i = std::size_t(iy) * m + ix;
            double lap_u =
                (u[i - 1] + u[i + 1] + u[i - m] + u[i + m] - 4.0 * u[i]) / h2;
            double comp =
                std::min(u[i], pot.laplacian(grid.node(ix, iy)) - lap_u);
            worst = std::max(worst, -comp);
        }
    return worst;
}

} // namespace droplet
