#include <cmath>

#include "doctest.h"

#include "droplet/quadrature.hpp"

using namespace droplet;

namespace {
constexpr double PI = 3.14159265358979323846;

// closed-form moment oracle: <z^j, z^k> = delta_jk pi j! / beta^{j+1}
double moment_oracle(double beta, int j) {
    return PI * std::tgamma(j + 1.0) / std::pow(beta, j + 1);
}
} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("constant integrand gives the box area") {
    BoxGrid g(1.0, 64);
    CHECK(integrate(g, [](Complex) { return 1.0; }) == doctest::Approx(4.0));
}

TEST_CASE("gaussian integral") {
    BoxGrid g(6.0, 256);
    double v = integrate(g, [](Complex z) { return std::exp(-std::norm(z)); });
    CHECK(v == doctest::Approx(PI).epsilon(1e-4));
}

TEST_CASE("disk indicator carries first-order boundary error") {
    BoxGrid g(2.0, 512);
    double v =
        integrate(g, [](Complex z) { return std::abs(z) <= 1.0 ? 1.0 : 0.0; });
    CHECK(v == doctest::Approx(PI).epsilon(2e-2));
}

TEST_CASE("non-finite integrand raises a numeric error naming the node") {
    BoxGrid g(1.0, 16);
    try {
        integrate(g, [&](Complex z) {
            return std::abs(z - g.node(3, 4)) < 1e-12 ? std::nan("") : 0.0;
        });
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("node") != std::string::npos);
    }
}

TEST_CASE("weighted inner products against the moment oracle") {
    Potential pot = Potential::gaussian();
    BoxGrid g(6.0, 512);
    CHECK(weighted_inner_product(g, pot, 1.0, 0, 0).real() ==
          doctest::Approx(PI).epsilon(1e-4));
    CHECK(std::abs(weighted_inner_product(g, pot, 1.0, 1, 0)) < 1e-8);
    CHECK(weighted_inner_product(g, pot, 2.0, 1, 1).real() ==
          doctest::Approx(PI / 4.0).epsilon(1e-4));
    for (int j = 0; j < 5; ++j)
        CHECK(weighted_inner_product(g, pot, 1.5, j, j).real() ==
              doctest::Approx(moment_oracle(1.5, j)).epsilon(1e-6));
}

TEST_CASE("grid below the truncation radius is rejected") {
    Potential pot = Potential::gaussian();
    BoxGrid tiny(1.0, 16);
    CHECK_THROWS_AS(weighted_inner_product(tiny, pot, 1.0, 0, 0),
                    TruncationError);
}

TEST_CASE("radial fast path agrees with the generic path") {
    Potential pot = Potential::gaussian();
    BoxGrid g = default_moment_grid(pot, 1.0, 6, 256);
    auto fast = gram_matrix(g, pot, 1.0, 6, false);
    auto slow = gram_matrix(g, pot, 1.0, 6, true);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-10 * fast.cwiseAbs().maxCoeff());
}

TEST_CASE("non-radial gram matrix is hermitian") {
    Potential pot = Potential::elbau_felder(0.5);
    BoxGrid g = default_moment_grid(pot, 2.0, 4, 128);
    auto G = gram_matrix(g, pot, 2.0, 4);
    CHECK((G - G.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    // even-degree coupling through Re z^2: <1, z^2> nonzero
    CHECK(std::abs(G(0, 2)) > 1e-4);
}

TEST_CASE("default moment grid covers high degrees") {
    Potential pot = Potential::gaussian();
    BoxGrid g = default_moment_grid(pot, 1.0, 16);
    // largest diagonal moment still accurate
    CHECK(weighted_inner_product(g, pot, 1.0, 15, 15).real() ==
          doctest::Approx(moment_oracle(1.0, 15)).epsilon(1e-6));
}

} // TEST_SUITE
