#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lsseg/velocity.hpp"

using namespace lsseg;

namespace {

ScalarField2D sample(const GridSpec& g, double (*f)(double, double)) {
    ScalarField2D u(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) u(j, i) = f(g.x(j), g.y(i));
    return u;
}

double mean(const ScalarField2D& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.values().size());
}

ScalarField2D random_field(const GridSpec& g, unsigned seed, double lo = -1.0, double hi = 1.0) {
    ScalarField2D u(g);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) u(j, i) = dist(rng);
    return u;
}

}  // namespace

TEST_CASE("gaussian_regularize basics") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 33, 33);
    const ScalarField2D u = random_field(g, 11);

    const ScalarField2D same = gaussian_regularize(u, 0);
    CHECK(same.values() == u.values());

    const ScalarField2D flat = sample(g, [](double, double) { return 3.25; });
    const ScalarField2D still = gaussian_regularize(flat, 7);
    for (double v : still.values()) CHECK(v == 3.25);

    CHECK_THROWS_AS(gaussian_regularize(u, -1), std::invalid_argument);
}

TEST_CASE("heat steps preserve the field mean under mirror boundaries") {
    const GridSpec g = make_grid(-2, 2, -1, 1, 48, 24);
    ScalarField2D u = random_field(g, 23, -5.0, 5.0);
    const double m0 = mean(u);
    for (int step = 1; step <= 5; ++step) {
        u = gaussian_regularize(u, 1);
        CHECK(std::abs(mean(u) - m0) < 1e-12);
    }
}

TEST_CASE("gradient_magnitude on reference fields") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 41, 41);

    const ScalarField2D flat = sample(g, [](double, double) { return 2.0; });
    for (double v : gradient_magnitude(flat).values()) CHECK(v == 0.0);

    const ScalarField2D ramp = sample(g, [](double x, double) { return x; });
    const ScalarField2D gr = gradient_magnitude(ramp);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 1; j < g.nx - 1; ++j)
            CHECK(gr(j, i) == Catch::Approx(1.0).margin(1e-12));

    const ScalarField2D diag =
        sample(g, [](double x, double y) { return (x + y) / std::sqrt(2.0); });
    const ScalarField2D gd = gradient_magnitude(diag);
    for (int i = 1; i < g.ny - 1; ++i)
        for (int j = 1; j < g.nx - 1; ++j)
            CHECK(gd(j, i) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("classical velocity c1") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 41, 41);

    const ScalarField2D flat = sample(g, [](double, double) { return 0.5; });
    for (double v : classical_velocity_c1(flat, 2.0, 0).values()) CHECK(v == 1.0);

    const ScalarField2D ramp = sample(g, [](double x, double) { return x; });
    const ScalarField2D c_mu2 = classical_velocity_c1(ramp, 2.0, 0);
    const ScalarField2D ramp3 = sample(g, [](double x, double) { return 3.0 * x; });
    const ScalarField2D c_mu1 = classical_velocity_c1(ramp3, 1.0, 0);
    for (int i = 1; i < g.ny - 1; ++i)
        for (int j = 1; j < g.nx - 1; ++j) {
            CHECK(c_mu2(j, i) == Catch::Approx(0.5).margin(1e-12));   // g = 1, mu = 2
            CHECK(c_mu1(j, i) == Catch::Approx(0.25).margin(1e-12));  // g = 3, mu = 1
        }

    CHECK_THROWS_AS(classical_velocity_c1(ramp, 0.5, 0), std::invalid_argument);

    const ScalarField2D c = classical_velocity_c1(random_field(g, 3, 0.0, 1.0), 2.0, 2);
    CHECK(c.min() > 0.0);
    CHECK(c.max() <= 1.0);
}

TEST_CASE("classical velocity c2") {
    // |x| tent: smoothed gradient magnitude is 1 in the interior, 0 on the
    // kink column, 1/2 on the x-boundary columns -> M1 = 1, M2 = 0.
    const GridSpec g = make_grid(-2, 2, -2, 2, 101, 101);
    const ScalarField2D tent = sample(g, [](double x, double) { return std::abs(x); });
    const ScalarField2D c2 = classical_velocity_c2(tent, 0);

    const int kink = 50;  // x = 0 column
    for (int i = 1; i < g.ny - 1; ++i) {
        CHECK(c2(kink, i) == Catch::Approx(1.0).margin(1e-12));      // g = M2
        CHECK(c2(kink / 2, i) == Catch::Approx(0.0).margin(1e-12));  // g = M1
        CHECK(c2(0, i) == Catch::Approx(0.5).margin(1e-12));         // g = (M1+M2)/2
    }
    CHECK(c2.min() >= 0.0);
    CHECK(c2.max() <= 1.0);

    const ScalarField2D flat = sample(g, [](double, double) { return 0.7; });
    CHECK_THROWS_AS(classical_velocity_c2(flat, 0), std::domain_error);
}

TEST_CASE("DMap clamps and satisfies d(0) = 0") {
    const DMap para = DMap::paraboloid(0.5, 0.125);
    CHECK(para(0.0) == 0.0);
    CHECK(para(-0.25) == Catch::Approx(-0.5).margin(1e-14));
    CHECK(para(-1.0) == Catch::Approx(-0.5).margin(1e-14));  // clamped at the vertex level
    CHECK(para(0.125) == Catch::Approx(std::sqrt(0.375) - 0.5).margin(1e-14));
    CHECK(para(5.0) == para(0.125));  // clamped at the cap

    const DMap lin = DMap::linear(2.0, -0.2, 0.0);
    CHECK(lin(0.0) == 0.0);
    CHECK(lin(-0.1) == Catch::Approx(-0.05).margin(1e-15));
    CHECK(lin(-1.0) == Catch::Approx(-0.1).margin(1e-15));  // clamped at the cap level

    CHECK(DMap::zero()(0.3) == 0.0);
}

TEST_CASE("extend_velocity degenerate and identity cases") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 41, 41);
    const ScalarField2D c = random_field(g, 5, 0.0, 1.0);

    // d == 0 reproduces c exactly in both modes
    const ScalarField2D u = sample(g, [](double x, double y) { return x + 2.0 * y; });
    CHECK(extend_velocity(c, u, DMap::zero(), SelectionMode::bilinear).values() == c.values());
    CHECK(extend_velocity(c, u, DMap::zero(), SelectionMode::min_abs_neighbor).values() ==
          c.values());

    // degenerate gradient falls back to c
    const ScalarField2D flat = sample(g, [](double, double) { return 0.25; });
    const DMap big = DMap::linear(1.0, -10.0, 10.0);
    CHECK(extend_velocity(c, flat, big, SelectionMode::min_abs_neighbor).values() == c.values());

    // constant velocity is a fixed point whatever the displacement
    const ScalarField2D cflat = sample(g, [](double, double) { return 0.7; });
    const ScalarField2D dist =
        sample(g, [](double x, double y) { return std::sqrt(x * x + y * y) - 1.0; });
    for (double v :
         extend_velocity(cflat, dist, DMap::linear(1.0, -1.0, 4.0), SelectionMode::bilinear)
             .values())
        CHECK(v == Catch::Approx(0.7).margin(1e-14));
}

TEST_CASE("extend_velocity reads the velocity at the zero level set") {
    // c equals the radius, u is the signed distance to the circle r0 = 1:
    // the extension should pull the value at the front, i.e. ~1, everywhere.
    const GridSpec g = make_grid(-2, 2, -2, 2, 101, 101);
    const ScalarField2D c = sample(g, [](double x, double y) { return std::hypot(x, y); });
    const ScalarField2D u =
        sample(g, [](double x, double y) { return std::hypot(x, y) - 1.0; });
    const DMap d = DMap::linear(1.0, -1.0, 4.0);

    for (SelectionMode mode : {SelectionMode::bilinear, SelectionMode::min_abs_neighbor}) {
        const ScalarField2D ext = extend_velocity(c, u, d, mode);
        for (int i = 0; i < g.ny; ++i)
            for (int j = 0; j < g.nx; ++j) {
                const double r = std::hypot(g.x(j), g.y(i));
                if (r < 0.2 || r > 1.7) continue;
                CHECK(ext(j, i) == Catch::Approx(1.0).margin(2.5 * g.dx));
            }
    }
}

TEST_CASE("extend_velocity output stays within the velocity range") {
    const GridSpec g = make_grid(-2, 2, -2, 2, 33, 33);
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const ScalarField2D c = random_field(g, seed, 0.0, 1.0);
        const ScalarField2D u = random_field(g, seed + 100, -0.5, 0.5);
        const double lo = c.min(), hi = c.max();
        for (SelectionMode mode : {SelectionMode::bilinear, SelectionMode::min_abs_neighbor}) {
            const ScalarField2D ext =
                extend_velocity(c, u, DMap::linear(1.0, -1.0, 1.0), mode);
            CHECK(ext.min() >= lo - 1e-15);
            CHECK(ext.max() <= hi + 1e-15);
        }
    }
}
