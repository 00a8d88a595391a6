#include <cmath>
#include <random>

#include "doctest.h"

#include "droplet/sampler.hpp"

using namespace droplet;

TEST_SUITE("sampler") {

TEST_CASE("log density closed forms and the energy identity") {
    Potential pot = Potential::gaussian();
    CHECK(log_unnormalized_density(pot, 3.0, {{0.5, 0.5}}) ==
          doctest::Approx(-3.0 * 0.5)); // N=1: just -beta Phi
    CHECK(log_unnormalized_density(pot, 2.0, {{0, 0}, {0, 1}}) ==
          doctest::Approx(-2.0));
    CHECK(std::isinf(log_unnormalized_density(pot, 1.0, {{1, 0}, {1, 0}})));

    // identity: log density = -N(N-1) energy_sharp with theta = beta/(2(N-1))
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        int N = 3 + rep;
        double beta = 2.5;
        double theta = beta / (2.0 * (N - 1));
        Configuration zs;
        for (int j = 0; j < N; ++j)
            zs.push_back({u(rng), u(rng)});
        double lhs = log_unnormalized_density(pot, beta, zs);
        double rhs = -double(N) * (N - 1) * energy_sharp(pot, zs, theta);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("N=1 chain samples the gaussian weight (detailed balance check)") {
    Potential pot = Potential::gaussian();
    const double beta = 2.0;
    McmcResult res = mcmc_run_beta(pot, 1, beta, 400000, 42);
    // target e^{-beta |z|^2}: E|z|^2 = 1/beta, Var|z|^2 = 1/beta^2
    double mean = 0.0;
    for (const Configuration& c : res.samples)
        mean += std::norm(c[0]);
    mean /= double(res.samples.size());
    // crude effective-sample-size guard: 3 sigma with n_eff = n / 20
    double se = (1.0 / beta) / std::sqrt(double(res.samples.size()) / 20.0);
    CHECK(std::abs(mean - 1.0 / beta) <= 3.0 * se);
    CHECK(!res.mixing_warning);
    CHECK(res.max_drift <= 1e-8 * 10);
}

TEST_CASE("scaling wrapper rejects N=1 and nonpositive tau") {
    Potential pot = Potential::gaussian();
    CHECK_THROWS_AS(mcmc_run(pot, 1, 1.0, 1000, 1), ArgumentError);
    CHECK_THROWS_AS(mcmc_run(pot, 4, 0.0, 1000, 1), ArgumentError);
}

TEST_CASE("fixed seed gives a bitwise-identical sample stream") {
    Potential pot = Potential::gaussian();
    McmcResult a = mcmc_run(pot, 4, 1.0, 20000, 77);
    McmcResult b = mcmc_run(pot, 4, 1.0, 20000, 77);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t s = 0; s < a.samples.size(); ++s)
        for (std::size_t p = 0; p < a.samples[s].size(); ++p)
            CHECK(a.samples[s][p] == b.samples[s][p]);
}

TEST_CASE("N=2 marginal matches 2-D quadrature of the exact density") {
    // exact n=1 density for N=2 via the kernel: (1/2) K(z,z) e^{-beta Phi}
    Potential pot = Potential::gaussian();
    const int N = 2;
    const double tau = 1.0, beta = (N - 1) / tau;
    McmcResult res = mcmc_run(pot, N, tau, 1500000, 5);

    WeightedBasis basis =
        build_basis(pot, beta, N, default_moment_grid(pot, beta, N));
    KernelCrosscheck kc = kernel_crosscheck(basis, res.samples, 2.0, 8, 8);
    CHECK(kc.max_bin_deviation <= 0.03);

    // radial symmetry of the pooled histogram
    BoxGrid g(4.0, 64);
    MarginalHistogram hist = marginal_histogram(res.samples, g);
    CHECK(hist.overflow_mass <= 1e-3);
    double left = 0.0, right = 0.0;
    for (int iy = 0; iy < 64; ++iy)
        for (int ix = 0; ix < 64; ++ix)
            (g.node(ix, iy).real() < 0 ? left : right) +=
                hist.measure.weights[g.index(ix, iy)];
    CHECK(left == doctest::Approx(right).epsilon(0.05));
}

TEST_CASE("exchangeability: particle indices are statistically alike") {
    Potential pot = Potential::gaussian();
    const int N = 4;
    McmcResult res = mcmc_run(pot, N, 1.0, 400000, 13);
    // chi-square over particle-index mean radii: exchangeable => equal means
    std::vector<double> mean(N, 0.0);
    for (const Configuration& c : res.samples)
        for (int j = 0; j < N; ++j)
            mean[j] += std::abs(c[j]);
    double grand = 0.0;
    for (double& m : mean) {
        m /= double(res.samples.size());
        grand += m / N;
    }
    for (int j = 0; j < N; ++j)
        CHECK(mean[j] == doctest::Approx(grand).epsilon(0.05));
}

TEST_CASE("diagonality statistic decreases from N=4 to N=16") {
    Potential pot = Potential::gaussian();
    double stats[2];
    int idx = 0;
    for (int N : {4, 16}) {
        double beta = (N - 1) / 1.0;
        McmcResult res = mcmc_run(pot, N, 1.0, 400000, 21);
        WeightedBasis basis =
            build_basis(pot, beta, N, default_moment_grid(pot, beta, N));
        stats[idx++] =
            kernel_crosscheck(basis, res.samples, 2.0).diagonality_stat;
    }
    CHECK(stats[1] < stats[0]);
}

TEST_CASE("marginal histogram validation") {
    BoxGrid g(2.0, 16);
    CHECK_THROWS_AS(marginal_histogram({}, g), ArgumentError);
    std::vector<Configuration> one = {{{0.0, 0.0}}};
    MarginalHistogram h = marginal_histogram(one, g);
    std::size_t occupied = 0;
    for (double w : h.measure.weights)
        occupied += w > 0;
    CHECK(occupied == 1);
    CHECK(h.measure.total() + h.overflow_mass == doctest::Approx(1.0));
}

} // TEST_SUITE
