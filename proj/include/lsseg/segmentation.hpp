#pragma once

// End-to-end segmentation loop: initial datum with its level-distance map,
// per-iteration velocity extension, scheme update, front tracking and the
// stopping rules, plus the pixel-error evaluation against a thresholded mask.

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lsseg/grid.hpp"
#include "lsseg/image.hpp"
#include "lsseg/schemes.hpp"
#include "lsseg/velocity.hpp"

namespace lsseg {

enum class Norm { inf, l1 };
enum class EvolutionCase { expand, shrink };

struct VelocityModel {
    enum class Base { c1, c2 };
    Base base = Base::c1;
    double mu = 2.0;  // exponent of c1, >= 1
    bool modified = true;
    SelectionMode selection = SelectionMode::min_abs_neighbor;
};

struct InitialDatum {
    enum class Kind { paraboloid, truncated_pyramid, signed_distance_circle, signed_distance_frame };
    Kind kind = Kind::paraboloid;
    double cx = 0.0, cy = 0.0;  // seed center (paraboloid, circle)
    double radius = 0.5;        // paraboloid, circle
    double slope = 2.0;         // pyramid face steepness
    double cap = -0.2;          // pyramid truncation value
};

// Builds the level-set initial datum sampled on the grid together with the
// level-distance map d(C) derived from its profile. The field is a proper
// representation of the seed front: it changes sign across it, with the
// region the front will sweep on the far side of zero.
inline std::pair<ScalarField2D, DMap> build_initial_datum(const InitialDatum& datum,
                                                          const GridSpec& grid) {
    ScalarField2D u(grid);
    const double diag = std::hypot(grid.x_max - grid.x_min, grid.y_max - grid.y_min);
    switch (datum.kind) {
        case InitialDatum::Kind::paraboloid: {
            if (datum.radius <= 0.0)
                throw std::invalid_argument("build_initial_datum: radius must be positive");
            const double r2 = datum.radius * datum.radius;
            const double cap = 0.5 * r2;  // cut the surface from above
            for (int i = 0; i < grid.ny; ++i)
                for (int j = 0; j < grid.nx; ++j) {
                    const double px = grid.x(j) - datum.cx, py = grid.y(i) - datum.cy;
                    u(j, i) = std::min(px * px + py * py - r2, cap);
                }
            return {std::move(u), DMap::paraboloid(datum.radius, cap)};
        }
        case InitialDatum::Kind::signed_distance_circle: {
            if (datum.radius <= 0.0)
                throw std::invalid_argument("build_initial_datum: radius must be positive");
            for (int i = 0; i < grid.ny; ++i)
                for (int j = 0; j < grid.nx; ++j) {
                    const double px = grid.x(j) - datum.cx, py = grid.y(i) - datum.cy;
                    u(j, i) = std::sqrt(px * px + py * py) - datum.radius;
                }
            return {std::move(u), DMap::linear(1.0, -datum.radius, diag)};
        }
        case InitialDatum::Kind::truncated_pyramid: {
            if (datum.slope <= 0.0)
                throw std::invalid_argument("build_initial_datum: slope must be positive");
            if (datum.cap >= 0.0)
                throw std::invalid_argument("build_initial_datum: pyramid cap must be negative");
            for (int i = 0; i < grid.ny; ++i)
                for (int j = 0; j < grid.nx; ++j) {
                    const double x = grid.x(j), y = grid.y(i);
                    const double dist = std::min(std::min(x - grid.x_min, grid.x_max - x),
                                                 std::min(y - grid.y_min, grid.y_max - y));
                    u(j, i) = std::max(-datum.slope * dist, datum.cap);
                }
            return {std::move(u), DMap::linear(datum.slope, datum.cap, 0.0)};
        }
        case InitialDatum::Kind::signed_distance_frame: {
            for (int i = 0; i < grid.ny; ++i)
                for (int j = 0; j < grid.nx; ++j) {
                    const double x = grid.x(j), y = grid.y(i);
                    const double dist = std::min(std::min(x - grid.x_min, grid.x_max - x),
                                                 std::min(y - grid.y_min, grid.y_max - y));
                    u(j, i) = -dist;
                }
            return {std::move(u), DMap::linear(1.0, -diag, diag)};
        }
    }
    throw std::logic_error("build_initial_datum: unknown datum kind");
}

// dt = lambda * min(dx, dy); velocities are bounded by 1, so lambda <= 1/2
// keeps the monotone scheme monotone.
inline double cfl_timestep(const GridSpec& grid, double lambda) {
    if (!(lambda > 0.0 && lambda <= 0.5))
        throw std::invalid_argument("cfl_timestep: lambda must lie in (0, 1/2]");
    return lambda * std::min(grid.dx, grid.dy);
}

// Marks the grid nodes closest to the zero level set: a node enters the front
// mask iff u <= 0 there while u > 0 at one of its 4 axis neighbors, i.e. the
// node hugging each sign change from the object side. The mask is empty iff
// u has a single sign on the whole grid.
inline Mask2D track_front(const ScalarField2D& u) {
    const GridSpec& g = u.grid();
    Mask2D mask(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            if (u(j, i) > 0.0) continue;
            bool marked = false;
            if (j > 0) marked |= u(j - 1, i) > 0.0;
            if (!marked && j + 1 < g.nx) marked |= u(j + 1, i) > 0.0;
            if (!marked && i > 0) marked |= u(j, i - 1) > 0.0;
            if (!marked && i + 1 < g.ny) marked |= u(j, i + 1) > 0.0;
            mask(j, i) = marked ? 1 : 0;
        }
    return mask;
}

// The paper's F matrix: u values at the marked front nodes, zero elsewhere.
// Comparing these between iterations measures how much the front strip still
// moves, which the binary mask alone cannot see once node flips synchronize
// with the grid.
inline ScalarField2D front_values(const ScalarField2D& u, const Mask2D& mask) {
    ScalarField2D f(u.grid());
    const auto& m = mask.values();
    for (std::size_t k = 0; k < m.size(); ++k)
        if (m[k]) f.data()[k] = u.data()[k];
    return f;
}

inline double stopping_error(const ScalarField2D& f_now, const ScalarField2D& f_prev,
                             Norm norm) {
    const GridSpec& g = f_now.grid();
    if (f_prev.grid().nx != g.nx || f_prev.grid().ny != g.ny)
        throw std::invalid_argument("stopping_error: fronts live on different grids");
    const auto& a = f_now.values();
    const auto& b = f_prev.values();
    if (norm == Norm::inf) {
        double m = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
        return m;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return g.dx * g.dy * s;
}

// Binary-mask variant: entries compared as 0/1 occupancies.
inline double stopping_error(const Mask2D& f_now, const Mask2D& f_prev, Norm norm) {
    const GridSpec& g = f_now.grid();
    if (f_prev.grid().nx != g.nx || f_prev.grid().ny != g.ny)
        throw std::invalid_argument("stopping_error: masks live on different grids");
    std::size_t diff = 0;
    const auto& a = f_now.values();
    const auto& b = f_prev.values();
    for (std::size_t k = 0; k < a.size(); ++k) diff += (a[k] != b[k]);
    if (norm == Norm::inf) return diff > 0 ? 1.0 : 0.0;
    return g.dx * g.dy * static_cast<double>(diff);
}

// Exact-object mask from the normalized intensity: object pixels sit on the
// configured side of the threshold.
inline Mask2D exact_mask_from_threshold(const ScalarField2D& image_field, double threshold,
                                        bool object_below = true) {
    const GridSpec& g = image_field.grid();
    Mask2D mask(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const double v = image_field(j, i);
            mask(j, i) = (object_below ? v <= threshold : v >= threshold) ? 1 : 0;
        }
    return mask;
}

// P_a counts nodes with u <= 0; returns (P-Err_rel, P-Err_1).
inline std::pair<double, double> pixel_errors(const ScalarField2D& u_final,
                                              const Mask2D& exact_mask) {
    const GridSpec& g = u_final.grid();
    const std::size_t p_ex = exact_mask.count();
    if (p_ex == 0) throw std::invalid_argument("pixel_errors: exact mask is empty");
    std::size_t p_a = 0;
    for (double v : u_final.values()) p_a += (v <= 0.0);
    const double diff = std::abs(static_cast<double>(p_ex) - static_cast<double>(p_a));
    return {diff / static_cast<double>(p_ex), diff * g.dx * g.dy};
}

struct RunConfig {
    GridSpec grid;
    VelocityModel velocity;
    SchemeParams scheme;
    InitialDatum datum;
    int k_reg = 0;
    double tol = 5e-4;
    Norm norm = Norm::inf;
    int n_max = 2000;
    EvolutionCase mode = EvolutionCase::expand;
    double mask_threshold = 0.5;
    bool object_below_threshold = true;  // dark object on light background
};

struct RunReport {
    int iterations = 0;
    bool converged = false;
    ScalarField2D final_field;
    Mask2D final_front;
    std::vector<double> errors;  // stopping error per iteration
    double p_err_rel = std::numeric_limits<double>::quiet_NaN();
    double p_err_1 = std::numeric_limits<double>::quiet_NaN();
    double seconds = 0.0;
};

inline RunReport run_segmentation(const RunConfig& config, const IntensityImage& image) {
    if (!(config.tol > 0.0)) throw std::invalid_argument("run_segmentation: tol must be positive");
    if (config.n_max < 1) throw std::invalid_argument("run_segmentation: n_max must be >= 1");
    const auto t_start = std::chrono::steady_clock::now();

    const GridSpec& grid = config.grid;
    const ScalarField2D intensity = normalize(image, grid);

    ScalarField2D c_base = config.velocity.base == VelocityModel::Base::c1
                               ? classical_velocity_c1(intensity, config.velocity.mu, config.k_reg)
                               : classical_velocity_c2(intensity, config.k_reg);
    if (config.mode == EvolutionCase::shrink)
        for (int i = 0; i < grid.ny; ++i)
            for (int j = 0; j < grid.nx; ++j) c_base(j, i) = -c_base(j, i);

    auto [u, dmap] = build_initial_datum(config.datum, grid);
    Mask2D front_prev = track_front(u);
    ScalarField2D fvals_prev = front_values(u, front_prev);
    const double dt = cfl_timestep(grid, config.scheme.lambda);

    RunReport report;
    double err = 1.0;
    int n = 0;
    while (err >= config.tol && n < config.n_max) {
        // Step 1: refresh the extended velocity from the current level sets.
        const ScalarField2D c_tilde =
            config.velocity.modified
                ? extend_velocity(c_base, u, dmap, config.velocity.selection)
                : c_base;

        // Step 2: one scheme update.
        if (config.scheme.scheme == SchemeKind::af_lw) {
            const Mask2D phi = indicator_field(u, config.scheme.M);
            const double eps = epsilon_n(u, c_tilde, phi, dt, config.scheme.K,
                                         config.scheme.epsilon_floor);
            u = af_update(u, c_tilde, phi, eps, dt);
        } else {
            u = monotone_update(u, c_tilde, dt);
        }
        ++n;

        // Step 3: track the front and evaluate the stopping rule.
        Mask2D front = track_front(u);
        ScalarField2D fvals = front_values(u, front);
        err = stopping_error(fvals, fvals_prev, config.norm);
        report.errors.push_back(err);
        front_prev = std::move(front);
        fvals_prev = std::move(fvals);
    }

    report.iterations = n;
    report.converged = err < config.tol;
    report.final_front = std::move(front_prev);
    report.final_field = std::move(u);

    const Mask2D exact =
        exact_mask_from_threshold(intensity, config.mask_threshold, config.object_below_threshold);
    if (exact.count() > 0) {
        const auto [rel, abs1] = pixel_errors(report.final_field, exact);
        report.p_err_rel = rel;
        report.p_err_1 = abs1;
    }

    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace lsseg
