#include "droplet/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace droplet {

double log_unnormalized_density(const Potential& pot, double beta,
                                const Configuration& config) {
    if (config.empty())
        throw ArgumentError("log_unnormalized_density: empty configuration");
    double s = 0.0;
    for (Complex z : config)
        s -= beta * pot.phi(z);
    const int N = int(config.size());
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) {
            double d = std::abs(config[j] - config[k]);
            if (d == 0.0)
                return -std::numeric_limits<double>::infinity();
            s += 2.0 * std::log(d);
        }
    return s;
}

namespace {

// log-density terms touching particle j only
double particle_terms(const Potential& pot, double beta,
                      const Configuration& c, int j, Complex zj) {
    double s = -beta * pot.phi(zj);
    for (int k = 0; k < int(c.size()); ++k) {
        if (k == j)
            continue;
        double d = std::abs(zj - c[k]);
        if (d == 0.0)
            return -std::numeric_limits<double>::infinity();
        s += 2.0 * std::log(d);
    }
    return s;
}

} // namespace

McmcResult mcmc_run_beta(const Potential& pot, int N, double beta, long steps,
                         std::uint64_t seed, const McmcParams& params) {
    if (N < 1)
        throw ArgumentError("mcmc_run_beta: N must be >= 1");
    long burn_in = params.burn_in >= 0 ? params.burn_in : 200L * N;
    long thin = params.thin > 0 ? params.thin : N;
    if (steps <= burn_in)
        throw ArgumentError("mcmc_run_beta: steps must exceed burn_in");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, N - 1);

    double theta_like = beta > 0 ? beta / std::max(1, 2 * (N - 1)) : 0.5;
    double r0 = droplet_radius_estimate(pot, std::max(theta_like, 1e-3));
    double scale = params.step_scale > 0 ? params.step_scale : r0 / 4.0;
    const double scale_lo = scale * 1e-4, scale_hi = scale * 1e4;

    Configuration c(N);
    for (int j = 0; j < N; ++j) {
        double rad = r0 * std::sqrt(unif(rng));
        double ang = 2.0 * M_PI * unif(rng);
        c[j] = std::polar(rad, ang);
    }
    double logd = log_unnormalized_density(pot, beta, c);

    McmcResult res;
    long accepted_post = 0, proposed_post = 0;
    long accepted_since_recompute = 0;
    long window_acc = 0, window_prop = 0;
    // several adaptation updates must fit inside even the shortest burn-in
    const long window = std::clamp(burn_in / 20, 50L, 200L);

    for (long step = 0; step < steps; ++step) {
        int j = pick(rng);
        Complex dz(scale * gauss(rng), scale * gauss(rng));
        Complex znew = c[j] + dz;
        double before = particle_terms(pot, beta, c, j, c[j]);
        double after = particle_terms(pot, beta, c, j, znew);
        double dlog = after - before;
        bool accept = dlog >= 0.0 || unif(rng) < std::exp(dlog);
        ++window_prop;
        if (step >= burn_in)
            ++proposed_post;
        if (accept) {
            c[j] = znew;
            logd += dlog;
            ++window_acc;
            ++accepted_since_recompute;
            if (step >= burn_in)
                ++accepted_post;
            if (accepted_since_recompute >= params.recompute_every) {
                double full = log_unnormalized_density(pot, beta, c);
                res.max_drift = std::max(res.max_drift, std::abs(full - logd));
                if (res.max_drift > 1e-8 * (1.0 + std::abs(full)))
                    throw NumericError(
                        "mcmc_run: incremental log-density drift exceeded 1e-8");
                logd = full;
                accepted_since_recompute = 0;
            }
        }
        if (step < burn_in && window_prop >= window) {
            double rate = double(window_acc) / double(window_prop);
            scale = std::clamp(scale * std::exp(0.7 * (rate - 0.3)), scale_lo,
                               scale_hi);
            window_acc = window_prop = 0;
        }
        if (step >= burn_in && (step - burn_in) % thin == thin - 1) {
            res.samples.push_back(c);
            res.log_density_trace.push_back(logd);
        }
    }

    res.acceptance_rate =
        proposed_post > 0 ? double(accepted_post) / double(proposed_post) : 0.0;
    res.step_scale = scale;
    res.mixing_warning =
        res.acceptance_rate < 0.05 || res.acceptance_rate > 0.8;
    return res;
}

McmcResult mcmc_run(const Potential& pot, int N, double tau, long steps,
                    std::uint64_t seed, const McmcParams& params) {
    if (N < 2)
        throw ArgumentError(
            "mcmc_run: N must be >= 2 (beta = (N-1)/tau degenerates at N = 1)");
    if (!(tau > 0))
        throw ArgumentError("mcmc_run: tau must be positive");
    return mcmc_run_beta(pot, N, double(N - 1) / tau, steps, seed, params);
}

MarginalHistogram marginal_histogram(const std::vector<Configuration>& samples,
                                     const BoxGrid& grid) {
    if (samples.empty())
        throw ArgumentError("marginal_histogram: no samples");
    MarginalHistogram out{DiscreteMeasure(grid), 0.0};
    const double h2 = grid.spacing() * grid.spacing();
    std::size_t total = 0, overflow = 0;
    for (const Configuration& c : samples)
        for (Complex z : c) {
            ++total;
            if (!grid.contains(z)) {
                ++overflow;
                continue;
            }
            auto [ix, iy] = grid.locate(z);
            out.measure.weights[grid.index(ix, iy)] += 1.0;
        }
    const double norm = 1.0 / (double(total) * h2);
    for (double& w : out.measure.weights)
        w *= norm;
    out.overflow_mass = double(overflow) / double(total);
    return out;
}

KernelCrosscheck kernel_crosscheck(const WeightedBasis& basis,
                                   const std::vector<Configuration>& samples,
                                   double box_half_width, int coarse_bins,
                                   int fine_per_bin) {
    if (samples.empty())
        throw ArgumentError("kernel_crosscheck: no samples");
    if (int(samples.front().size()) != basis.N)
        throw ArgumentError(
            "kernel_crosscheck: sample size does not match basis N");

    const int nb = coarse_bins;
    const double L = box_half_width;
    const double bw = 2.0 * L / nb;

    // predicted bin mass: (1/N) K(z,z) e^{-beta Phi} integrated per bin
    std::vector<double> predicted(std::size_t(nb) * nb, 0.0);
    const int nf = nb * fine_per_bin;
    const double hf = 2.0 * L / nf;
    for (int iy = 0; iy < nf; ++iy)
        for (int ix = 0; ix < nf; ++ix) {
            Complex z(-L + (ix + 0.5) * hf, -L + (iy + 0.5) * hf);
            double dens = eval_kernel(basis, z, z).real() *
                          std::exp(-basis.beta * basis.pot.phi(z)) / basis.N;
            predicted[std::size_t(iy / fine_per_bin) * nb + ix / fine_per_bin] +=
                dens * hf * hf;
        }

    std::vector<double> observed(std::size_t(nb) * nb, 0.0);
    std::size_t total = 0;
    for (const Configuration& c : samples)
        for (Complex z : c) {
            ++total;
            int ix = int(std::floor((z.real() + L) / bw));
            int iy = int(std::floor((z.imag() + L) / bw));
            if (ix < 0 || iy < 0 || ix >= nb || iy >= nb)
                continue;
            observed[std::size_t(iy) * nb + ix] += 1.0;
        }
    for (double& v : observed)
        v /= double(total);

    KernelCrosscheck out;
    for (std::size_t i = 0; i < observed.size(); ++i)
        out.max_bin_deviation =
            std::max(out.max_bin_deviation, std::abs(observed[i] - predicted[i]));

    // off-diagonal correlation statistic over sampled pairs
    std::mt19937_64 rng(12345);
    const std::size_t nconf = std::min<std::size_t>(samples.size(), 200);
    const std::size_t stride = std::max<std::size_t>(1, samples.size() / nconf);
    double acc = 0.0;
    std::size_t count = 0;
    std::uniform_int_distribution<int> pick(0, basis.N - 1);
    for (std::size_t s = 0; s < samples.size(); s += stride) {
        const Configuration& c = samples[s];
        for (int rep = 0; rep < 20; ++rep) {
            int j = pick(rng), k = pick(rng);
            if (j == k)
                continue;
            double num = std::norm(eval_kernel(basis, c[j], c[k]));
            double den = eval_kernel(basis, c[j], c[j]).real() *
                         eval_kernel(basis, c[k], c[k]).real();
            if (den > 0.0) {
                acc += num / den;
                ++count;
            }
        }
    }
    out.diagonality_stat = count > 0 ? acc / double(count) : 0.0;
    return out;
}

} // namespace droplet
