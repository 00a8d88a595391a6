#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "droplet/fekete.hpp"

using namespace droplet;

TEST_SUITE("fekete") {

TEST_CASE("energy of the exact N=2 optimum") {
    Potential pot = Potential::gaussian();
    double r = std::sqrt(0.5); // 1-D calculus: maximize 2r e^{-2 theta r^2}
    Configuration zs = {{r, 0}, {-r, 0}};
    double e = energy_sharp(pot, zs, 0.5);
    double M = std::sqrt(2.0) * std::exp(-0.5); // max of 2r e^{-r^2}
    CHECK(e == doctest::Approx(std::log(1.0 / M)).epsilon(1e-12));

    // dense 1-D grid search confirms r = sqrt(1/2) is the minimizer
    double best_r = 0, best = 1e300;
    for (int i = 1; i <= 4000; ++i) {
        double rr = 2.0 * i / 4000.0;
        double v = energy_sharp(pot, {{rr, 0}, {-rr, 0}}, 0.5);
        if (v < best) {
            best = v;
            best_r = rr;
        }
    }
    CHECK(best_r == doctest::Approx(r).epsilon(1e-3));
}

TEST_CASE("energy sharp properties") {
    Potential pot = Potential::gaussian();
    Configuration zs = {{0.5, 0.1}, {-0.3, 0.4}, {0.0, -0.6}};
    double e = energy_sharp(pot, zs, 0.5);
    Configuration perm = {zs[2], zs[0], zs[1]};
    CHECK(energy_sharp(pot, perm, 0.5) == e); // permutation symmetry

    // global rotation invariance for radial potentials
    Complex rot = std::polar(1.0, 1.234);
    Configuration rzs;
    for (Complex z : zs)
        rzs.push_back(rot * z);
    CHECK(energy_sharp(pot, rzs, 0.5) == doctest::Approx(e).epsilon(1e-12));

    CHECK(std::isinf(energy_sharp(pot, {{1, 0}, {1, 0}}, 0.5)));
    CHECK_THROWS_AS(energy_sharp(pot, {{1, 0}}, 0.5), ArgumentError);

    // far-separated points deep in the weight tail: huge positive energy
    CHECK(energy_sharp(pot, {{8, 0}, {-8, 0}}, 0.5) > 10.0);
}

TEST_CASE("analytic gradient matches finite differences") {
    Potential pot = Potential::elbau_felder(0.4);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Configuration zs;
    for (int j = 0; j < 5; ++j)
        zs.push_back({u(rng), u(rng)});
    CHECK(gradient_fd_deviation(pot, zs, 0.5) < 1e-5);
}

TEST_CASE("N=2 optimum is an antipodal pair at radius sqrt(tau/2)") {
    Potential pot = Potential::gaussian();
    FeketeResult res = optimize_fekete(pot, 2, 0.5, 7);
    REQUIRE(res.config.size() == 2);
    for (Complex z : res.config)
        CHECK(std::abs(z) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
    CHECK(std::abs(res.config[0] + res.config[1]) < 1e-4); // antipodal
    CHECK(res.fd_deviation < 1e-4);
    CHECK(res.M_estimate ==
          doctest::Approx(std::sqrt(2.0) * std::exp(-0.5)).epsilon(1e-5));
}

TEST_CASE("N=3 optimum is equilateral") {
    Potential pot = Potential::gaussian();
    FeketeResult res = optimize_fekete(pot, 3, 0.5, 7);
    double d01 = std::abs(res.config[0] - res.config[1]);
    double d02 = std::abs(res.config[0] - res.config[2]);
    double d12 = std::abs(res.config[1] - res.config[2]);
    CHECK(d01 == doctest::Approx(d02).epsilon(1e-5));
    CHECK(d01 == doctest::Approx(d12).epsilon(1e-5));
    CHECK(res.gradient_norm < 1e-6);
}

TEST_CASE("fixed seed is reproducible") {
    Potential pot = Potential::gaussian();
    FeketeParams p;
    p.restarts = 1;
    FeketeResult a = optimize_fekete(pot, 4, 0.5, 123, p);
    FeketeResult b = optimize_fekete(pot, 4, 0.5, 123, p);
    REQUIRE(a.config.size() == b.config.size());
    for (std::size_t i = 0; i < a.config.size(); ++i)
        CHECK(a.config[i] == b.config[i]);
}

TEST_CASE("M estimates are nonincreasing in N") {
    Potential pot = Potential::gaussian();
    FeketeParams p;
    p.restarts = 4;
    CHECK(m_decreasing_check(pot, 0.5, {2, 3, 4, 6}, 7, p));
    CHECK(m_decreasing_check(pot, 0.5, {2}, 7, p)); // vacuous
    CHECK(m_decreasing_check(Potential::radial_monomial(2), 0.5, {2, 4}, 7, p));
}

TEST_CASE("membership in the near-minimizer class") {
    Potential pot = Potential::gaussian();
    FeketeResult res = optimize_fekete(pot, 4, 0.5, 7);
    double Mref = res.M_estimate;
    CHECK(membership_A(pot, res.config, 0.5, 0.1, Mref));
    CHECK(membership_A(pot, res.config, 0.5, 0.0, Mref)); // 1e-9 slack
    Configuration moved = res.config;
    moved[0] = {10.0, 0.0};
    CHECK(!membership_A(pot, moved, 0.5, 0.1, Mref));
}

TEST_CASE("fraction in K") {
    Configuration zs = {{0.5, 0}, {-0.5, 0}, {0, 1.4}};
    CHECK(fraction_in_K(zs, 1.5) == 1.0);
    CHECK(fraction_in_K(zs, 0.0001) == 0.0);
    CHECK(fraction_in_K(zs, std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("empirical measure") {
    BoxGrid g(2.0, 32);
    DiscreteMeasure m = empirical_measure({{0, 0}}, g);
    CHECK(m.total() == doctest::Approx(1.0));
    std::size_t occupied = 0;
    for (double w : m.weights)
        occupied += w > 0;
    CHECK(occupied == 1);

    DiscreteMeasure a = empirical_measure({{0.5, 0}, {-0.5, 0.3}}, g);
    DiscreteMeasure b = empirical_measure({{-0.5, 0.3}, {0.5, 0}}, g);
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        CHECK(a.weights[i] == b.weights[i]); // permutation invariance

    CHECK_THROWS_AS(empirical_measure({{5, 5}}, g), ArgumentError);
}

} // TEST_SUITE
