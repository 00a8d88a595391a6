#include "droplet/fekete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace droplet {

double energy_sharp(const Potential& pot, const Configuration& config,
                    double theta) {
    const int N = int(config.size());
    if (N < 2)
        throw ArgumentError("energy_sharp: need at least two points");
    double field = 0.0;
    for (Complex z : config)
        field += pot.phi(z);
    double logsum = 0.0;
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) {
            double d = std::abs(config[j] - config[k]);
            if (d == 0.0)
                return std::numeric_limits<double>::infinity();
            logsum -= std::log(d);
        }
    return 2.0 * theta * field / N + 2.0 * logsum / (double(N) * (N - 1));
}

std::vector<Complex> energy_sharp_gradient(const Potential& pot,
                                           const Configuration& config,
                                           double theta) {
    const int N = int(config.size());
    if (N < 2)
        throw ArgumentError("energy_sharp_gradient: need at least two points");
    std::vector<Complex> g(N);
    const double pair_coef = 2.0 / (double(N) * (N - 1));
    for (int j = 0; j < N; ++j) {
        Complex acc = (2.0 * theta / N) * pot.gradient(config[j]);
        for (int k = 0; k < N; ++k) {
            if (k == j)
                continue;
            Complex d = config[j] - config[k];
            double r2 = std::norm(d);
            if (r2 == 0.0)
                throw NumericError("energy_sharp_gradient: coincident points");
            acc -= pair_coef * d / r2;
        }
        g[j] = acc;
    }
    return g;
}

double gradient_fd_deviation(const Potential& pot, const Configuration& config,
                             double theta, double step) {
    auto g = energy_sharp_gradient(pot, config, theta);
    Configuration c = config;
    double worst = 0.0;
    double scale = 0.0;
    for (Complex v : g)
        scale = std::max({scale, std::abs(v.real()), std::abs(v.imag())});
    // absolute near critical points (else FD noise divided by ~0 explodes)
    scale = std::max(scale, 1.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (int comp = 0; comp < 2; ++comp) {
            Complex dz = comp == 0 ? Complex(step, 0) : Complex(0, step);
            Complex orig = c[j];
            c[j] = orig + dz;
            double fp = energy_sharp(pot, c, theta);
            c[j] = orig - dz;
            double fm = energy_sharp(pot, c, theta);
            c[j] = orig;
            double fd = (fp - fm) / (2.0 * step);
            double an = comp == 0 ? g[j].real() : g[j].imag();
            worst = std::max(worst, std::abs(fd - an) / scale);
        }
    }
    return worst;
}

namespace {

double grad_inf_norm(const std::vector<Complex>& g) {
    double m = 0.0;
    for (Complex v : g)
        m = std::max({m, std::abs(v.real()), std::abs(v.imag())});
    return m;
}

double min_separation_of(const Configuration& c) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c.size(); ++j)
        for (std::size_t k = j + 1; k < c.size(); ++k)
            m = std::min(m, std::abs(c[j] - c[k]));
    return m;
}

struct LocalResult {
    Configuration config;
    double energy = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
};

LocalResult descend(const Potential& pot, Configuration c, double theta,
                    const FeketeParams& params) {
    double f = energy_sharp(pot, c, theta);
    double t = 1.0;
    LocalResult res;
    for (int it = 0; it < params.max_iters; ++it) {
        auto g = energy_sharp_gradient(pot, c, theta);
        double gnorm = grad_inf_norm(g);
        if (gnorm <= params.grad_tol * (1.0 + std::abs(f))) {
            res = {c, f, gnorm, true};
            return res;
        }
        // backtracking line search on the steepest descent direction
        double g2 = 0.0;
        for (Complex v : g)
            g2 += std::norm(v);
        t = std::min(t * 2.0, 1e3 / (gnorm + 1e-30));
        bool moved = false;
        Configuration trial(c.size());
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < c.size(); ++j)
                trial[j] = c[j] - t * g[j];
            if (min_separation_of(trial) >= params.min_separation) {
                double ft = energy_sharp(pot, trial, theta);
                if (ft <= f - 1e-4 * t * g2) {
                    c = std::move(trial);
                    trial.resize(c.size());
                    f = ft;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!moved) {
            res = {c, f, gnorm, false};
            return res;
        }
    }
    res = {c, f, grad_inf_norm(energy_sharp_gradient(pot, c, theta)), false};
    return res;
}

} // namespace

FeketeResult optimize_fekete(const Potential& pot, int N, double theta,
                             std::uint64_t seed, const FeketeParams& params) {
    if (N < 2)
        throw ArgumentError("optimize_fekete: N must be >= 2");
    if (params.restarts < 1)
        throw ArgumentError("optimize_fekete: restarts must be >= 1");

    double r_init = params.init_radius > 0.0
                        ? params.init_radius
                        : 1.5 * droplet_radius_estimate(pot, theta);

    LocalResult best;
    best.energy = std::numeric_limits<double>::infinity();
    int best_restart = -1;
    std::string failures;
    for (int r = 0; r < params.restarts; ++r) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * std::uint64_t(r));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Configuration c(N);
        for (int j = 0; j < N; ++j) {
            double rad = r_init * std::sqrt(unif(rng));
            double ang = 2.0 * M_PI * unif(rng);
            c[j] = std::polar(rad, ang);
        }
        LocalResult loc = descend(pot, c, theta, params);
        if (!loc.converged)
            failures += " restart " + std::to_string(r) + " grad " +
                        std::to_string(loc.grad_norm) + ";";
        if (loc.converged && loc.energy < best.energy) {
            best = loc;
            best_restart = r;
        }
    }
    if (best_restart < 0)
        throw NumericError("optimize_fekete: all restarts failed line search:" +
                           failures);

    double rtrunc = pot.truncation_radius(theta, 1.0);
    for (Complex z : best.config)
        if (!(std::abs(z) < rtrunc))
            throw NumericError(
                "optimize_fekete: optimum escaped the truncation radius");

    FeketeResult res;
    res.config = best.config;
    res.energy_sharp = best.energy;
    res.M_estimate = std::exp(-best.energy);
    res.restarts_used = params.restarts;
    res.gradient_norm = best.grad_norm;
    res.fd_deviation = gradient_fd_deviation(pot, best.config, theta);
    return res;
}

bool m_decreasing_check(const Potential& pot, double theta,
                        const std::vector<int>& Ns, std::uint64_t seed,
                        const FeketeParams& params) {
    double prev = std::numeric_limits<double>::infinity();
    for (int N : Ns) {
        FeketeResult r = optimize_fekete(pot, N, theta, seed, params);
        if (r.M_estimate > prev + 1e-6)
            return false;
        prev = r.M_estimate;
    }
    return true;
}

bool membership_A(const Potential& pot, const Configuration& config,
                  double theta, double eps, double M_ref) {
    if (!(M_ref > 0))
        throw ArgumentError("membership_A: M_ref must be positive");
    if (!(eps >= 0))
        throw ArgumentError("membership_A: eps must be nonnegative");
    double e = energy_sharp(pot, config, theta);
    return e <= std::log(1.0 / M_ref) + eps + 1e-9;
}

double fraction_in_K(const Configuration& config, double K_radius) {
    if (!(K_radius > 0))
        throw ArgumentError("fraction_in_K: radius must be positive");
    if (config.empty())
        throw ArgumentError("fraction_in_K: empty configuration");
    std::size_t n = 0;
    for (Complex z : config)
        if (std::abs(z) <= K_radius)
            ++n;
    return double(n) / double(config.size());
}

DiscreteMeasure empirical_measure(const Configuration& config,
                                  const BoxGrid& grid) {
    if (config.empty())
        throw ArgumentError("empirical_measure: empty configuration");
    DiscreteMeasure m(grid);
    const double h2 = grid.spacing() * grid.spacing();
    const double w = 1.0 / (double(config.size()) * h2);
    for (Complex z : config) {
        if (!grid.contains(z))
            throw ArgumentError("empirical_measure: point outside the grid box");
        auto [ix, iy] = grid.locate(z);
        m.weights[grid.index(ix, iy)] += w;
    }
    return m;
}

} // namespace droplet
