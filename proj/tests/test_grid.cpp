#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lsseg/grid.hpp"

using namespace lsseg;

namespace {

ScalarField2D sample(const GridSpec& g, double (*f)(double, double)) {
    ScalarField2D u(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) u(j, i) = f(g.x(j), g.y(i));
    return u;
}

}  // namespace

TEST_CASE("make_grid computes spacings and rejects degenerate input") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 102, 102);
    CHECK(g.dx == Catch::Approx(4.0 / 101).epsilon(1e-15));
    CHECK(g.dy == Catch::Approx(4.0 / 101).epsilon(1e-15));
    CHECK(g.x(0) == -2.0);
    CHECK(g.y(101) == Catch::Approx(2.0).margin(1e-14));

    const GridSpec r = make_grid(0, 1, 0, 2, 11, 21);
    CHECK(r.dx == Catch::Approx(0.1).epsilon(1e-15));
    CHECK(r.dy == Catch::Approx(0.1).epsilon(1e-15));

    CHECK_THROWS_AS(make_grid(0, 1, 0, 1, 2, 11), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 1, 0, 1, 11, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 1, 0, 1, 11, 11), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 1, 2, 1, 11, 11), std::invalid_argument);
}

TEST_CASE("stencil_at is exact on affine fields") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 21, 21);
    const ScalarField2D u = sample(g, [](double x, double y) { return 2.0 + 3.0 * x - y; });
    for (int i = 1; i < g.ny - 1; ++i)
        for (int j = 1; j < g.nx - 1; ++j) {
            const DiffStencil st = stencil_at(u, j, i);
            CHECK(st.d_minus_x == Catch::Approx(3.0).margin(1e-12));
            CHECK(st.d_plus_x == Catch::Approx(3.0).margin(1e-12));
            CHECK(st.d_central_x == Catch::Approx(3.0).margin(1e-12));
            CHECK(st.d_central_y == Catch::Approx(-1.0).margin(1e-12));
            CHECK(std::abs(st.d2_x) < 1e-11);
            CHECK(std::abs(st.d2_y) < 1e-11);
            CHECK(std::abs(st.d2_xy) < 1e-11);
        }
}

TEST_CASE("mixed difference is exact on bilinear data, second on quadratics") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 21, 21);
    const ScalarField2D uxy = sample(g, [](double x, double y) { return x * y; });
    const ScalarField2D ux2 = sample(g, [](double x, double y) { (void)y; return x * x; });
    for (int i = 2; i < g.ny - 2; ++i)
        for (int j = 2; j < g.nx - 2; ++j) {
            CHECK(stencil_at(uxy, j, i).d2_xy == Catch::Approx(1.0).margin(1e-11));
            const DiffStencil st = stencil_at(ux2, j, i);
            CHECK(st.d2_x == Catch::Approx(2.0).margin(1e-10));
            CHECK(std::abs(st.d2_xy) < 1e-11);
        }
}

TEST_CASE("central difference is exactly the mean of the one-sided ones") {
    const GridSpec g = make_grid(0, 1, 0, 1, 9, 9);
    ScalarField2D u(g);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) u(j, i) = dist(rng);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const DiffStencil st = stencil_at(u, j, i);
            CHECK(st.d_central_x == 0.5 * (st.d_minus_x + st.d_plus_x));
            CHECK(st.d_central_y == 0.5 * (st.d_minus_y + st.d_plus_y));
        }
}

TEST_CASE("mirror ghosts zero the inward one-sided difference at the boundary") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 11, 11);
    const ScalarField2D u = sample(g, [](double x, double y) { (void)y; return x; });
    for (int i = 0; i < g.ny; ++i) {
        CHECK(stencil_at(u, 0, i).d_minus_x == 0.0);
        CHECK(stencil_at(u, g.nx - 1, i).d_plus_x == 0.0);
    }
    // constant field: every stencil entry vanishes everywhere, boundary included
    const ScalarField2D c = sample(g, [](double, double) { return 5.0; });
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const DiffStencil st = stencil_at(c, j, i);
            CHECK(st.d_minus_x == 0.0);
            CHECK(st.d_plus_x == 0.0);
            CHECK(st.d2_x == 0.0);
            CHECK(st.d2_y == 0.0);
            CHECK(st.d2_xy == 0.0);
        }
}

TEST_CASE("stencil evaluation at every node stays finite") {
    const GridSpec g = make_grid(-1, 1, -1, 3, 7, 9);
    ScalarField2D u(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) u(j, i) = dist(rng);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const DiffStencil st = stencil_at(u, j, i);
            for (double v : {st.d_minus_x, st.d_plus_x, st.d_central_x, st.d_minus_y,
                             st.d_plus_y, st.d_central_y, st.d2_x, st.d2_y, st.d2_xy})
                CHECK(std::isfinite(v));
        }
}

TEST_CASE("reflect_index mirrors up to depth two") {
    CHECK(reflect_index(-1, 10) == 0);
    CHECK(reflect_index(-2, 10) == 1);
    CHECK(reflect_index(10, 10) == 9);
    CHECK(reflect_index(11, 10) == 8);
    CHECK(reflect_index(3, 10) == 3);
}
