#include "droplet/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fftw3.h>

namespace droplet {

Droplet extract_droplet(const Potential& pot, const ObstacleSolution& sol,
                        double delta) {
    if (delta < 0.0)
        delta = 10.0 * sol.psor_tol;
    const BoxGrid& grid = sol.grid;
    const int m = grid.nodes_per_side();
    const int margin = 10;

    Droplet d{grid, std::vector<bool>(grid.node_count(), false),
              std::vector<double>(grid.node_count(), 0.0), sol.tau, 0.0};
    double mass = 0.0;
    const double h2 = grid.spacing() * grid.spacing();
    const auto& u = sol.u.values;
    for (int iy = 1; iy < m - 1; ++iy)
        for (int ix = 1; ix < m - 1; ++ix) {
            std::size_t i = grid.index(ix, iy);
            double lap = pot.laplacian(grid.node(ix, iy));
            double frac;
            if (lap * h2 > 0.0) {
                double lap_u = u[i - 1] + u[i + 1] + u[i - std::size_t(m)] +
                               u[i + std::size_t(m)] - 4.0 * u[i];
                frac = std::clamp((lap * h2 - lap_u) / (lap * h2), 0.0, 1.0);
            } else {
                frac = u[i] <= delta ? 1.0 : 0.0;
            }
            // snap away the solver noise so interior cells are exact
            if (frac > 0.999)
                frac = 1.0;
            else if (frac < 1e-3)
                frac = 0.0;
            if (frac == 0.0)
                continue;
            if (ix < margin || iy < margin || ix >= m - margin ||
                iy >= m - margin)
                throw TruncationError(
                    "extract_droplet: coincidence set touches the boundary "
                    "margin; enlarge the grid");
            d.fraction[i] = frac;
            d.indicator[i] = frac >= 0.5;
            mass += frac * lap;
        }
    d.mass = mass * h2 / (4.0 * M_PI);
    return d;
}

DiscreteMeasure equilibrium_measure(const Potential& pot, const Droplet& droplet) {
    const BoxGrid& grid = droplet.grid;
    const int m = grid.nodes_per_side();
    double max_lap = 0.0;
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix)
            max_lap = std::max(max_lap, std::abs(pot.laplacian(grid.node(ix, iy))));
    const double eps_h = 1e-10 * max_lap;
    const double neg_tol = 1e-8 * max_lap;

    DiscreteMeasure sigma(grid);
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix) {
            std::size_t i = grid.index(ix, iy);
            if (droplet.fraction[i] == 0.0)
                continue;
            double lap = pot.laplacian(grid.node(ix, iy));
            if (droplet.indicator[i] && lap < -neg_tol)
                throw NumericError(
                    "equilibrium_measure: negative Laplacian on the coincidence "
                    "set ({LapPhi<0} must lie in the droplet)");
            if (lap <= eps_h)
                continue; // pseudo-interior trim
            sigma.weights[i] =
                droplet.fraction[i] * lap / (4.0 * M_PI * droplet.tau);
        }
    return sigma;
}

double log_potential(const DiscreteMeasure& measure, Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ArgumentError("log_potential: non-finite point");
    const BoxGrid& grid = measure.grid;
    const int m = grid.nodes_per_side();
    const double h = grid.spacing();
    const double self_log = -std::log(CELL_SELF_RADIUS * h);
    double s = 0.0;
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix) {
            double w = measure.weights[grid.index(ix, iy)];
            if (w == 0.0)
                continue;
            double d = std::abs(z - grid.node(ix, iy));
            s += w * (d < 0.5 * h ? self_log : -std::log(d));
        }
    return s * h * h;
}

ScalarField log_potential_field(const DiscreteMeasure& measure) {
    const BoxGrid& grid = measure.grid;
    const int m = grid.nodes_per_side();
    const int n = 2 * m; // zero padding for linear convolution
    const double h = grid.spacing();

    std::vector<std::complex<double>> a(std::size_t(n) * n, 0.0);
    std::vector<std::complex<double>> b(std::size_t(n) * n, 0.0);
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix)
            a[std::size_t(iy) * n + ix] = measure.weights[grid.index(ix, iy)];
    for (int dy = -m + 1; dy < m; ++dy)
        for (int dx = -m + 1; dx < m; ++dx) {
            double g = (dx == 0 && dy == 0)
                           ? -std::log(CELL_SELF_RADIUS * h)
                           : -std::log(h * std::hypot(double(dx), double(dy)));
            b[std::size_t((dy + n) % n) * n + (dx + n) % n] = g;
        }

    auto fft = [&](std::vector<std::complex<double>>& v, int sign) {
        fftw_plan plan = fftw_plan_dft_2d(
            n, n, reinterpret_cast<fftw_complex*>(v.data()),
            reinterpret_cast<fftw_complex*>(v.data()), sign, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    };
    fft(a, FFTW_FORWARD);
    fft(b, FFTW_FORWARD);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] *= b[i];
    fft(a, FFTW_BACKWARD);

    ScalarField out(grid);
    const double scale = h * h / (double(n) * n);
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix)
            out.at(ix, iy) = scale * a[std::size_t(iy) * n + ix].real();
    return out;
}

EnergyResult energy(const DiscreteMeasure& measure, const Potential& pot,
                    double theta) {
    if (!(theta > 0))
        throw ArgumentError("energy: theta must be positive");
    const BoxGrid& grid = measure.grid;
    const int m = grid.nodes_per_side();
    const double h2 = grid.spacing() * grid.spacing();
    ScalarField L = log_potential_field(measure);

    double field_term = 0.0, log_term = 0.0;
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix) {
            double w = measure.weights[grid.index(ix, iy)];
            if (w == 0.0)
                continue;
            field_term += w * pot.phi(grid.node(ix, iy));
            log_term += w * L.at(ix, iy);
        }
    field_term *= h2;
    log_term *= h2;

    EnergyResult res;
    res.field_term = field_term;
    res.log_term = log_term;
    res.value = 2.0 * theta * field_term + log_term;
    res.C_tau = theta * field_term + log_term; // 1/(2 tau) = theta
    return res;
}

double harmonic_moment_check(const Potential& pot, const Droplet& d1,
                             const Droplet& d2, HarmonicTest h_id, int k) {
    if (!(d1.grid == d2.grid))
        throw ArgumentError("harmonic_moment_check: grids differ");
    if (!(d1.tau < d2.tau))
        throw ArgumentError("harmonic_moment_check: requires tau1 < tau2");
    const BoxGrid& grid = d1.grid;
    if (h_id == HarmonicTest::re_inv_pow) {
        if (k < 1)
            throw ArgumentError("harmonic_moment_check: k must be >= 1");
        auto [ix, iy] = grid.locate(Complex(0, 0));
        if (!d1.indicator[grid.index(ix, iy)])
            throw ArgumentError("harmonic_moment_check: origin must lie inside "
                                "the tau1 coincidence set");
    }
    const int m = grid.nodes_per_side();
    const double h2 = grid.spacing() * grid.spacing();
    double rhs = 0.0;
    for (int iy = 0; iy < m; ++iy)
        for (int ix = 0; ix < m; ++ix) {
            std::size_t i = grid.index(ix, iy);
            // D(tau1) \ D(tau2) = coincidence(tau2) \ coincidence(tau1),
            // weighted by the sub-cell contact fractions
            double w = d2.fraction[i] - d1.fraction[i];
            if (w <= 0.0)
                continue;
            Complex z = grid.node(ix, iy);
            double hval = h_id == HarmonicTest::one
                              ? 1.0
                              : (std::pow(Complex(1, 0) / z, k)).real();
            rhs += w * hval * pot.laplacian(z);
        }
    rhs *= h2;
    double h_inf = h_id == HarmonicTest::one ? 1.0 : 0.0;
    double lhs = 4.0 * M_PI * (d2.tau - d1.tau) * h_inf;
    return std::abs(lhs - rhs);
}

bool monotone_tau_check(const std::vector<Droplet>& droplets) {
    if (droplets.size() < 2)
        return true;
    const BoxGrid& grid = droplets.front().grid;
    const int m = grid.nodes_per_side();
    for (std::size_t s = 0; s + 1 < droplets.size(); ++s) {
        const Droplet& a = droplets[s];
        const Droplet& b = droplets[s + 1];
        if (!(a.grid == grid) || !(b.grid == grid))
            throw ArgumentError("monotone_tau_check: grids differ");
        if (!(a.tau < b.tau) || !(a.mass < b.mass))
            return false;
        // a must be contained in b up to a 1-cell band
        for (int iy = 0; iy < m; ++iy)
            for (int ix = 0; ix < m; ++ix) {
                if (!a.indicator[grid.index(ix, iy)])
                    continue;
                bool covered = false;
                for (int dy = -1; dy <= 1 && !covered; ++dy)
                    for (int dx = -1; dx <= 1 && !covered; ++dx) {
                        int jx = ix + dx, jy = iy + dy;
                        if (jx >= 0 && jy >= 0 && jx < m && jy < m &&
                            b.indicator[grid.index(jx, jy)])
                            covered = true;
                    }
                if (!covered)
                    return false;
            }
    }
    return true;
}

} // namespace droplet
