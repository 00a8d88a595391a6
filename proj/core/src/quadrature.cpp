#include "droplet/quadrature.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace droplet {

double integrate(const BoxGrid& grid, const std::function<double(Complex)>& f) {
    const int m = grid.nodes_per_side();
    double s = 0.0, c = 0.0;
    for (int iy = 0; iy < m; ++iy) {
        for (int ix = 0; ix < m; ++ix) {
            double v = f(grid.node(ix, iy));
            if (!std::isfinite(v))
                throw NumericError("integrate: non-finite integrand at node (" +
                                   std::to_string(ix) + "," + std::to_string(iy) +
                                   ")");
            double y = v - c;
            double t = s + y;
            c = (t - s) - y;
            s = t;
        }
    }
    return grid.spacing() * grid.spacing() * s;
}

namespace {

void check_truncation(const BoxGrid& grid, const Potential& pot, double beta) {
    double R = pot.truncation_radius(beta / 2.0, 1.0);
    if (grid.half_width() < R)
        throw TruncationError(
            "grid half-width " + std::to_string(grid.half_width()) +
            " is below the truncation radius " + std::to_string(R));
}

} // namespace

Complex weighted_inner_product(const BoxGrid& grid, const Potential& pot,
                               double beta, int j, int k) {
    if (!(beta > 0))
        throw ArgumentError("weighted_inner_product: beta must be positive");
    if (j < 0 || k < 0)
        throw ArgumentError("weighted_inner_product: negative exponent");
    check_truncation(grid, pot, beta);

    const int m = grid.nodes_per_side();
    Complex s = 0.0, c = 0.0;
    for (int iy = 0; iy < m; ++iy) {
        for (int ix = 0; ix < m; ++ix) {
            Complex z = grid.node(ix, iy);
            Complex v = std::pow(z, j) * std::pow(std::conj(z), k) *
                        std::exp(-beta * pot.phi(z));
            Complex y = v - c;
            Complex t = s + y;
            c = (t - s) - y;
            s = t;
        }
    }
    return grid.spacing() * grid.spacing() * s;
}

Eigen::MatrixXcd gram_matrix(const BoxGrid& grid, const Potential& pot,
                             double beta, int N, bool force_generic) {
    if (N < 1)
        throw ArgumentError("gram_matrix: N must be >= 1");
    check_truncation(grid, pot, beta);

    const int m = grid.nodes_per_side();
    const double h2 = grid.spacing() * grid.spacing();
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(N, N);

    if (pot.radial() && !force_generic) {
        // angular orthogonality makes the Gram diagonal; accumulate the
        // radial moments |z|^(2j) on the same 2-D grid so that the fast
        // path agrees with the generic one to rounding
        std::vector<double> diag(N, 0.0), comp(N, 0.0);
        for (int iy = 0; iy < m; ++iy) {
            for (int ix = 0; ix < m; ++ix) {
                Complex z = grid.node(ix, iy);
                double w = std::exp(-beta * pot.phi(z));
                double r2 = std::norm(z);
                double p = 1.0;
                for (int j = 0; j < N; ++j) {
                    double v = p * w;
                    double y = v - comp[j];
                    double t = diag[j] + y;
                    comp[j] = (t - diag[j]) - y;
                    diag[j] = t;
                    p *= r2;
                }
            }
        }
        for (int j = 0; j < N; ++j)
            G(j, j) = h2 * diag[j];
        return G;
    }

    std::vector<Complex> powers(N);
    for (int iy = 0; iy < m; ++iy) {
        for (int ix = 0; ix < m; ++ix) {
            Complex z = grid.node(ix, iy);
            double w = std::exp(-beta * pot.phi(z));
            if (w == 0.0)
                continue;
            Complex p = 1.0;
            for (int j = 0; j < N; ++j) {
                powers[j] = p;
                p *= z;
            }
            for (int j = 0; j < N; ++j)
                for (int k = 0; k <= j; ++k)
                    G(j, k) += powers[j] * std::conj(powers[k]) * w;
        }
    }
    G *= h2;
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k)
            G(j, k) = std::conj(G(k, j));
    return G;
}

BoxGrid default_moment_grid(const Potential& pot, double beta, int N,
                            int nodes_per_side) {
    double R = pot.truncation_radius(beta / 2.0, 1.0);
    // enlarge until the top-degree integrand |z|^(4N) exp(-beta Phi) is
    // below exp(-60) relative to scale on the bounding ring
    double L = R;
    auto ring_ok = [&](double r) {
        for (int k = 0; k < 32; ++k) {
            Complex z = std::polar(r, 2.0 * M_PI * k / 32);
            double logv;
            try {
                logv = (4.0 * N + 2.0) * std::log1p(r) - beta * pot.phi(z);
            } catch (const DomainError&) {
                return false;
            }
            if (logv > -60.0)
                return false;
        }
        return true;
    };
    int guard = 0;
    while (!ring_ok(L)) {
        L *= 1.25;
        if (++guard > 200)
            throw GrowthConditionError("default_moment_grid: weight decays too slowly");
    }
    return BoxGrid(L, nodes_per_side);
}

} // namespace droplet
