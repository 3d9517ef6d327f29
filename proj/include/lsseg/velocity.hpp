#pragma once

// Edge-stopping velocity construction: heat-equation regularization of the
// intensity, gradient magnitude, the classical velocities c1 and c2 and the
// characteristic-based extension that reads the velocity at the foot point
// on the zero level set, displaced by the level-distance map d(v).

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsseg/grid.hpp"

namespace lsseg {

// k_reg explicit heat steps with step size min(dx,dy)^2/4 and mirror-Neumann
// boundaries; surrogate for a Gaussian convolution. Preserves the field mean.
inline ScalarField2D gaussian_regularize(const ScalarField2D& field, int k_reg) {
    if (k_reg < 0) throw std::invalid_argument("gaussian_regularize: k_reg must be >= 0");
    const GridSpec& g = field.grid();
    const double h = std::min(g.dx, g.dy);
    const double tau = 0.25 * h * h;
    const double cx = tau / (g.dx * g.dx), cy = tau / (g.dy * g.dy);

    ScalarField2D cur = field;
    ScalarField2D next(g);
    for (int step = 0; step < k_reg; ++step) {
        for (int i = 0; i < g.ny; ++i)
            for (int j = 0; j < g.nx; ++j) {
                const double u0 = cur(j, i);
                next(j, i) = u0 +
                             cx * (cur.mirror(j + 1, i) - 2.0 * u0 + cur.mirror(j - 1, i)) +
                             cy * (cur.mirror(j, i + 1) - 2.0 * u0 + cur.mirror(j, i - 1));
            }
        std::swap(cur, next);
    }
    return cur;
}

inline ScalarField2D gradient_magnitude(const ScalarField2D& field) {
    const GridSpec& g = field.grid();
    ScalarField2D out(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const double gx = (field.mirror(j + 1, i) - field.mirror(j - 1, i)) / (2.0 * g.dx);
            const double gy = (field.mirror(j, i + 1) - field.mirror(j, i - 1)) / (2.0 * g.dy);
            out(j, i) = std::sqrt(gx * gx + gy * gy);
        }
    return out;
}

// c1 = 1 / (1 + |grad(G*I)|^mu), values in (0,1].
inline ScalarField2D classical_velocity_c1(const ScalarField2D& image_field, double mu,
                                           int k_reg) {
    if (mu < 1.0) throw std::invalid_argument("classical_velocity_c1: mu must be >= 1");
    ScalarField2D g = gradient_magnitude(gaussian_regularize(image_field, k_reg));
    const GridSpec& grid = g.grid();
    for (int i = 0; i < grid.ny; ++i)
        for (int j = 0; j < grid.nx; ++j)
            g(j, i) = 1.0 / (1.0 + std::pow(g(j, i), mu));
    return g;
}

// c2 = 1 - (|grad(G*I)| - M2)/(M1 - M2) with M1, M2 the extrema of the
// smoothed gradient magnitude; undefined on flat images.
inline ScalarField2D classical_velocity_c2(const ScalarField2D& image_field, int k_reg) {
    ScalarField2D g = gradient_magnitude(gaussian_regularize(image_field, k_reg));
    const double m1 = g.max(), m2 = g.min();
    if (!(m1 > m2))
        throw std::domain_error("classical_velocity_c2: flat image (gradient extrema coincide)");
    const GridSpec& grid = g.grid();
    const double inv = 1.0 / (m1 - m2);
    for (int i = 0; i < grid.ny; ++i)
        for (int j = 0; j < grid.nx; ++j)
            g(j, i) = 1.0 - (g(j, i) - m2) * inv;
    return g;
}

// Level-distance map: d(C) is the signed distance from the C-level set of the
// initial datum to its zero level set, with d(0) = 0. Inputs are clamped to
// the validity interval [lo, hi].
struct DMap {
    enum class Kind { zero, linear, paraboloid };
    Kind kind = Kind::zero;
    double inv_slope = 1.0;  // linear: d(C) = C * inv_slope
    double radius = 0.0;     // paraboloid: d(C) = sqrt(C + r^2) - r
    double lo = 0.0, hi = 0.0;

    double operator()(double level) const {
        const double c = std::clamp(level, lo, hi);
        switch (kind) {
            case Kind::zero: return 0.0;
            case Kind::linear: return c * inv_slope;
            case Kind::paraboloid: return std::sqrt(c + radius * radius) - radius;
        }
        return 0.0;
    }

    static DMap zero() { return DMap{}; }
    static DMap linear(double slope, double lo, double hi) {
        DMap d;
        d.kind = Kind::linear;
        d.inv_slope = 1.0 / slope;
        d.lo = lo; d.hi = hi;
        return d;
    }
    static DMap paraboloid(double radius, double cap) {
        DMap d;
        d.kind = Kind::paraboloid;
        d.radius = radius;
        d.lo = -radius * radius;  // level of the paraboloid vertex
        d.hi = cap;
        return d;
    }
};

enum class SelectionMode { bilinear, min_abs_neighbor };

// Extended velocity: at each node the foot point on the zero level set is
//   (x_j, y_i) - d(u) * grad(u)/|grad(u)|,
// clamped to the domain rectangle. The velocity there is recovered either by
// bilinear interpolation from the four surrounding nodes or by reading c at
// the neighbor minimizing |u|. Nodes with a degenerate gradient keep c.
inline ScalarField2D extend_velocity(const ScalarField2D& c, const ScalarField2D& u,
                                     const DMap& dmap, SelectionMode mode) {
    const GridSpec& g = c.grid();
    if (u.grid().nx != g.nx || u.grid().ny != g.ny)
        throw std::invalid_argument("extend_velocity: c and u live on different grids");

    ScalarField2D out(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const double ux = (u.mirror(j + 1, i) - u.mirror(j - 1, i)) / (2.0 * g.dx);
            const double uy = (u.mirror(j, i + 1) - u.mirror(j, i - 1)) / (2.0 * g.dy);
            const double norm = std::sqrt(ux * ux + uy * uy);
            if (norm < kGradientEps) {
                out(j, i) = c(j, i);
                continue;
            }
            const double d = dmap(u(j, i));
            // Fractional node coordinates of the foot point, built from the
            // displacement so that d = 0 reproduces the node exactly.
            double rx = j - d * ux / (norm * g.dx);
            double ry = i - d * uy / (norm * g.dy);
            rx = std::clamp(rx, 0.0, static_cast<double>(g.nx - 1));
            ry = std::clamp(ry, 0.0, static_cast<double>(g.ny - 1));

            const int j0 = static_cast<int>(rx);
            const int i0 = static_cast<int>(ry);
            const double wx = rx - j0, wy = ry - i0;
            const int j1 = wx > 0.0 ? j0 + 1 : j0;
            const int i1 = wy > 0.0 ? i0 + 1 : i0;

            if (mode == SelectionMode::bilinear) {
                out(j, i) = (1.0 - wx) * (1.0 - wy) * c(j0, i0) + wx * (1.0 - wy) * c(j1, i0) +
                            (1.0 - wx) * wy * c(j0, i1) + wx * wy * c(j1, i1);
            } else {
                int bj = j0, bi = i0;
                double best = std::abs(u(j0, i0));
                const int cand[3][2] = {{j1, i0}, {j0, i1}, {j1, i1}};
                for (const auto& p : cand) {
                    const double a = std::abs(u(p[0], p[1]));
                    if (a < best) { best = a; bj = p[0]; bi = p[1]; }
                }
                out(j, i) = c(bj, bi);
            }
        }
    return out;
}

}  // namespace lsseg
