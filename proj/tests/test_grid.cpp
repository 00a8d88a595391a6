#include <cstdio>
#include <fstream>

#include "doctest.h"

#include "droplet/grid.hpp"

using namespace droplet;

TEST_SUITE("grid") {

TEST_CASE("node layout is cell-centered") {
    BoxGrid g(2.0, 16);
    CHECK(g.spacing() == doctest::Approx(0.25));
    CHECK(g.x(0) == doctest::Approx(-2.0 + 0.125));
    CHECK(g.x(15) == doctest::Approx(2.0 - 0.125));
    CHECK(g.node(g.index(3, 5)) == g.node(3, 5));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(BoxGrid(0.0, 16), ArgumentError);
    CHECK_THROWS_AS(BoxGrid(1.0, 15), ArgumentError);
    CHECK_THROWS_AS(BoxGrid(1.0, 8), ArgumentError);
}

TEST_CASE("locate and contains") {
    BoxGrid g(1.0, 16);
    CHECK(g.contains({0.5, -0.5}));
    CHECK(!g.contains({1.5, 0.0}));
    auto [ix, iy] = g.locate({0.0, 0.0});
    CHECK(std::abs(g.node(ix, iy)) <= g.spacing());
    CHECK_THROWS_AS(g.locate({2.0, 0.0}), DomainError);
}

TEST_CASE("measure total is h^2 times the weight sum") {
    BoxGrid g(1.0, 16);
    DiscreteMeasure m(g);
    for (double& w : m.weights)
        w = 1.0; // uniform density 1 on [-1,1]^2
    CHECK(m.total() == doctest::Approx(4.0));
}

TEST_CASE("field round-trip is byte-exact") {
    BoxGrid g(3.0, 32);
    ScalarField f(g);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] = std::sin(double(i)) * 1e-7 + double(i);
    const std::string path = "test_field_roundtrip.f64";
    write_field(path, f);

    // header is a single JSON line
    {
        std::ifstream in(path, std::ios::binary);
        std::string line;
        std::getline(in, line);
        CHECK(line.find("\"dtype\":\"f64-le\"") != std::string::npos);
        CHECK(line.find("\"half_width\":3.0") != std::string::npos);
    }

    ScalarField f2 = read_field(path);
    REQUIRE(f2.grid == g);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(f.values[i] == f2.values[i]); // bitwise
    std::remove(path.c_str());
}

TEST_CASE("truncated field file is rejected") {
    BoxGrid g(1.0, 16);
    ScalarField f(g);
    const std::string path = "test_field_truncated.f64";
    write_field(path, f);
    // chop the file
    {
        std::ifstream in(path, std::ios::binary);
        std::string all((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(all.data(), std::streamsize(all.size() / 2));
    }
    CHECK_THROWS_AS(read_field(path), Error);
    std::remove(path.c_str());
}

} // TEST_SUITE
