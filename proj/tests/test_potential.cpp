#include <cmath>

#include "doctest.h"

#include "droplet/potential.hpp"

using namespace droplet;

namespace {

// central-difference Laplacian oracle
double lap_fd(const Potential& pot, Complex z, double h = 1e-4) {
    return (pot.phi(z + Complex(h, 0)) + pot.phi(z - Complex(h, 0)) +
            pot.phi(z + Complex(0, h)) + pot.phi(z - Complex(0, h)) -
            4.0 * pot.phi(z)) /
           (h * h);
}

// scalar-bisection oracle for the growth radius: root of
// theta r^2-ish growth vs (1+slack) log(1+r), evaluated through phi itself
double growth_root(const Potential& pot, double theta, double slack) {
    auto g = [&](double r) {
        return theta * pot.phi(Complex(r, 0)) - (1.0 + slack) * std::log1p(r);
    };
    double lo = 0.5, hi = 0.5;
    while (g(hi) < 0.0)
        hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? hi : lo) = mid;
    }
    return hi;
}

} // namespace

TEST_SUITE("potential") {

TEST_CASE("gaussian values") {
    Potential pot = Potential::gaussian();
    CHECK(pot.phi({0, 0}) == 0.0);
    CHECK(pot.phi({1, 1}) == doctest::Approx(2.0));
    CHECK(pot.radial());
}

TEST_CASE("elbau_felder values and parameter range") {
    Potential pot = Potential::elbau_felder(0.5);
    CHECK(pot.phi({1, 0}) == doctest::Approx(1.5));
    CHECK(!pot.radial());
    CHECK_THROWS_AS(Potential::elbau_felder(1.5), ArgumentError);
    CHECK_THROWS_AS(Potential::elbau_felder(-1.0), ArgumentError);
}

TEST_CASE("laplacians against the central-difference oracle") {
    Potential g = Potential::gaussian();
    Potential ef = Potential::elbau_felder(0.3);
    Potential rm = Potential::radial_monomial(2);
    for (Complex z : {Complex(0.3, -0.7), Complex(1.0, 0.0), Complex(-1.2, 0.4)}) {
        CHECK(g.laplacian(z) == doctest::Approx(4.0));
        CHECK(g.laplacian(z) == doctest::Approx(lap_fd(g, z)).epsilon(1e-5));
        CHECK(ef.laplacian(z) == doctest::Approx(4.0));
        CHECK(ef.laplacian(z) == doctest::Approx(lap_fd(ef, z)).epsilon(1e-5));
        CHECK(rm.laplacian(z) ==
              doctest::Approx(lap_fd(rm, z)).epsilon(1e-5));
    }
    CHECK(rm.laplacian({1, 0}) == doctest::Approx(16.0)); // 4 p^2 |z|^{2p-2}
}

TEST_CASE("gradients against finite differences") {
    const double h = 1e-6;
    for (const Potential& pot :
         {Potential::gaussian(), Potential::elbau_felder(0.5),
          Potential::radial_monomial(3)}) {
        Complex z(0.8, -0.3);
        Complex grad = pot.gradient(z);
        double gx = (pot.phi(z + Complex(h, 0)) - pot.phi(z - Complex(h, 0))) / (2 * h);
        double gy = (pot.phi(z + Complex(0, h)) - pot.phi(z - Complex(0, h))) / (2 * h);
        CHECK(grad.real() == doctest::Approx(gx).epsilon(1e-6));
        CHECK(grad.imag() == doctest::Approx(gy).epsilon(1e-6));
    }
}

TEST_CASE("pair energy") {
    Potential pot = Potential::gaussian();
    CHECK(pot.pair_energy({1, 0}, {-1, 0}, 0.5) ==
          doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(pot.pair_energy({0, 0}, {1, 0}, 1.0) ==
          doctest::Approx(std::exp(-1.0)));
    CHECK(pot.pair_energy({0.4, 0.2}, {0.4, 0.2}, 0.7) == 0.0);
    CHECK_THROWS_AS(pot.pair_energy({0, 0}, {1, 0}, 0.0), ArgumentError);
}

TEST_CASE("truncation radius against the bisection oracle") {
    Potential g = Potential::gaussian();
    double R = g.truncation_radius(0.5, 1.0);
    CHECK(R <= 8.0);
    CHECK(R >= growth_root(g, 0.5, 1.0) * 0.99);

    Potential rm = Potential::radial_monomial(1);
    double R2 = rm.truncation_radius(1.0, 1.0);
    CHECK(R2 <= 4.0);
    CHECK(R2 >= growth_root(rm, 1.0, 1.0) * 0.99);
}

TEST_CASE("decaying tabulated potential violates the growth condition") {
    BoxGrid grid(3.0, 32);
    ScalarField phi(grid), lap(grid);
    for (int iy = 0; iy < 32; ++iy)
        for (int ix = 0; ix < 32; ++ix)
            phi.at(ix, iy) = std::exp(-std::norm(grid.node(ix, iy)));
    CHECK_THROWS_AS(
        Potential::tabulated(phi, lap).truncation_radius(1.0, 1.0, 1e3),
        GrowthConditionError);
}

TEST_CASE("tabulated interpolation reproduces smooth data") {
    BoxGrid grid(2.0, 128);
    ScalarField phi(grid), lap(grid);
    for (int iy = 0; iy < 128; ++iy)
        for (int ix = 0; ix < 128; ++ix) {
            phi.at(ix, iy) = std::norm(grid.node(ix, iy));
            lap.at(ix, iy) = 4.0;
        }
    Potential pot = Potential::tabulated(phi, lap);
    CHECK(pot.phi({0.37, -0.61}) ==
          doctest::Approx(std::norm(Complex(0.37, -0.61))).epsilon(1e-3));
    CHECK(pot.laplacian({0.5, 0.5}) == doctest::Approx(4.0));
    CHECK_THROWS_AS(pot.phi({5, 5}), DomainError);
    CHECK(!(pot == Potential::gaussian()));
}

TEST_CASE("non-finite input is rejected") {
    Potential pot = Potential::gaussian();
    CHECK_THROWS_AS(pot.phi({std::nan(""), 0.0}), ArgumentError);
}

TEST_CASE("droplet radius estimate lands at the gaussian droplet edge") {
    // tau = 1: theta = 1/2, edge at r = 1
    double r = droplet_radius_estimate(Potential::gaussian(), 0.5);
    CHECK(r == doctest::Approx(1.0).epsilon(0.05));
}

} // TEST_SUITE
