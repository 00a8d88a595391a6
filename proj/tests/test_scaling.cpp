#include <cmath>

#include "doctest.h"

#include "droplet/scaling.hpp"

using namespace droplet;

TEST_SUITE("scaling") {

TEST_CASE("the three constructors agree on the linked parameters") {
    ScalingParams a = make_scaling_from_tau(5, 1.0);
    CHECK(a.beta == doctest::Approx(4.0));
    CHECK(a.theta == doctest::Approx(0.5));

    ScalingParams b = make_scaling_from_beta(2, 1.0);
    CHECK(b.tau == doctest::Approx(1.0));
    CHECK(b.theta == doctest::Approx(0.5));

    ScalingParams c = make_scaling_from_theta(3, 0.25);
    CHECK(c.tau == doctest::Approx(2.0));
    CHECK(c.beta == doctest::Approx(1.0));

    CHECK_THROWS_AS(make_scaling_from_tau(1, 1.0), ArgumentError);
    CHECK_THROWS_AS(make_scaling_from_tau(3, 0.0), ArgumentError);
    CHECK_THROWS_AS(make_scaling_from_beta(3, -1.0), ArgumentError);
    CHECK_THROWS_AS(make_scaling_from_theta(3, 0.0), ArgumentError);
}

TEST_CASE("marginal pi_2 integrates to 1, correlation gamma_1 to N") {
    Potential pot = Potential::gaussian();
    ScalingParams p = make_scaling_from_tau(3, 1.0);
    WeightedBasis basis =
        build_basis(pot, p.beta, p.N, default_moment_grid(pot, p.beta, p.N));

    BoxGrid g(4.0, 96);
    const double h2 = g.spacing() * g.spacing();

    double mass1 = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        mass1 += correlation_vs_marginal(basis, p, {g.node(i)}).gamma_n;
    CHECK(mass1 * h2 == doctest::Approx(3.0).epsilon(1e-2));

    // 4-D midpoint quadrature of pi_2 over a coarser grid
    BoxGrid g2(3.0, 40);
    const double h2b = g2.spacing() * g2.spacing();
    double mass2 = 0.0;
    for (std::size_t a = 0; a < g2.node_count(); ++a)
        for (std::size_t b = 0; b < g2.node_count(); ++b)
            mass2 +=
                correlation_vs_marginal(basis, p, {g2.node(a), g2.node(b)}).pi_n;
    CHECK(mass2 * h2b * h2b == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("coincident points give zero for both densities") {
    Potential pot = Potential::gaussian();
    ScalingParams p = make_scaling_from_tau(4, 1.0);
    WeightedBasis basis =
        build_basis(pot, p.beta, p.N, default_moment_grid(pot, p.beta, p.N));
    CorrelationPair pr =
        correlation_vs_marginal(basis, p, {{0.2, 0.1}, {0.2, 0.1}});
    CHECK(pr.gamma_n == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(pr.pi_n == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("basis and scaling parameters must match") {
    Potential pot = Potential::gaussian();
    ScalingParams p = make_scaling_from_tau(4, 1.0);
    WeightedBasis basis =
        build_basis(pot, 2.0, 4, default_moment_grid(pot, 2.0, 4));
    CHECK_THROWS_AS(correlation_vs_marginal(basis, p, {{0, 0}}), ArgumentError);
}

} // TEST_SUITE
