#pragma once

// Numerical hamiltonians and one-step update operators for the eikonal-type
// level-set equation v_t + c(x,y)|grad v| = 0 with isotropic velocity:
// monotone local Lax-Friedrichs, second-order Lax-Wendroff, the discontinuous
// filter, the adaptive switching threshold and the blended update.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsseg/grid.hpp"
#include "lsseg/smoothness.hpp"

namespace lsseg {

enum class SchemeKind { monotone, af_lw };

struct SchemeParams {
    SchemeKind scheme = SchemeKind::af_lw;
    double lambda = 0.5;         // CFL number dt/min(dx,dy)
    double K = 1.0;              // threshold multiplier, > 1/2
    double M = 0.1;              // indicator threshold, in (0, 1/2)
    double epsilon_floor = 1e-12;
};

// Monotone hamiltonian for the plain eikonal equation v_t + |grad v| = 0.
inline double hm_eikonal(double p_minus, double p_plus, double q_minus, double q_plus) {
    const double a = std::max({p_minus, -p_plus, 0.0});
    const double b = std::max({q_minus, -q_plus, 0.0});
    return std::sqrt(a * a + b * b);
}

// Local Lax-Friedrichs hamiltonian for H = c|p| with explicit one-sided slopes.
inline double hm_llf_args(double c, double alpha_x, double alpha_y, double p_minus,
                          double p_plus, double q_minus, double q_plus) {
    const double px = 0.5 * (p_minus + p_plus);
    const double py = 0.5 * (q_minus + q_plus);
    return c * std::sqrt(px * px + py * py) - 0.5 * alpha_x * (p_plus - p_minus) -
           0.5 * alpha_y * (q_plus - q_minus);
}

inline double hm_llf(double c_node, const DiffStencil& st, double alpha_x, double alpha_y) {
    return c_node * std::sqrt(st.d_central_x * st.d_central_x +
                              st.d_central_y * st.d_central_y) -
           0.5 * alpha_x * (st.d_plus_x - st.d_minus_x) -
           0.5 * alpha_y * (st.d_plus_y - st.d_minus_y);
}

namespace detail {

// H = c|grad u| and the second-order Lax-Wendroff correction at one node.
// H_x, H_y come from the second-order quotient applied to the stored velocity
// field; H_p, H_q are set to zero where the gradient degenerates.
struct LwTerms {
    double h = 0.0;
    double correction = 0.0;
};

inline LwTerms lw_terms(const ScalarField2D& c, const ScalarField2D& u, int j, int i,
                        double dt) {
    const GridSpec& g = u.grid();
    const DiffStencil st = stencil_at(u, j, i);
    const double norm = std::sqrt(st.d_central_x * st.d_central_x +
                                  st.d_central_y * st.d_central_y);
    if (norm < kGradientEps) return {};

    const double cv = c(j, i);
    const double hp = cv * st.d_central_x / norm;
    const double hq = cv * st.d_central_y / norm;
    const double hx = (c.mirror(j + 1, i) - c.mirror(j - 1, i)) / (2.0 * g.dx) * norm;
    const double hy = (c.mirror(j, i + 1) - c.mirror(j, i - 1)) / (2.0 * g.dy) * norm;

    LwTerms t;
    t.h = cv * norm;
    t.correction = 0.5 * dt *
                   (hp * (hp * st.d2_x + hx) + hq * (hq * st.d2_y + hy) +
                    2.0 * hp * hq * st.d2_xy);
    return t;
}

// Differences of the monotone hamiltonian under one-sided/centered argument
// swaps, entering the switching threshold.
inline double hm_tilde_sum(double c, const DiffStencil& st) {
    const double ax = std::abs(c), ay = ax;
    const double dx = st.d_central_x, dy = st.d_central_y;

    const double hp_plus = hm_llf_args(c, ax, ay, dx, st.d_plus_x, dy, dy) -
                           hm_llf_args(c, ax, ay, dx, st.d_minus_x, dy, dy);
    const double hp_minus = hm_llf_args(c, ax, ay, st.d_plus_x, dx, dy, dy) -
                            hm_llf_args(c, ax, ay, st.d_minus_x, dx, dy, dy);
    const double hq_plus = hm_llf_args(c, ax, ay, dx, dx, dy, st.d_plus_y) -
                           hm_llf_args(c, ax, ay, dx, dx, dy, st.d_minus_y);
    const double hq_minus = hm_llf_args(c, ax, ay, dx, dx, st.d_plus_y, dy) -
                            hm_llf_args(c, ax, ay, dx, dx, st.d_minus_y, dy);
    return (hp_plus - hp_minus) + (hq_plus - hq_minus);
}

}  // namespace detail

// Lax-Wendroff hamiltonian h^A at a node.
inline double ha_lw(const ScalarField2D& c, const ScalarField2D& u, int j, int i, double dt) {
    const detail::LwTerms t = detail::lw_terms(c, u, j, i, dt);
    return t.h - t.correction;
}

// Discontinuous filter: identity on [-1,1], zero outside.
inline double filter_discontinuous(double r) {
    return std::abs(r) <= 1.0 ? r : 0.0;
}

// Adaptive switching threshold: max over the regularity region {phi = 1} of
// K |LW correction + h~ differences|, clamped below by the floor.
inline double epsilon_n(const ScalarField2D& u, const ScalarField2D& c, const Mask2D& phi,
                        double dt, double K, double floor_value) {
    if (!(K > 0.5)) throw std::invalid_argument("epsilon_n: K must exceed 1/2");
    const GridSpec& g = u.grid();
    double eps = 0.0;
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            if (!phi(j, i)) continue;
            const DiffStencil st = stencil_at(u, j, i);
            const double norm = std::sqrt(st.d_central_x * st.d_central_x +
                                          st.d_central_y * st.d_central_y);
            double corr = 0.0;
            if (norm >= kGradientEps) {
                const double cv = c(j, i);
                const double hp = cv * st.d_central_x / norm;
                const double hq = cv * st.d_central_y / norm;
                const double hx = (c.mirror(j + 1, i) - c.mirror(j - 1, i)) / (2.0 * g.dx) * norm;
                const double hy = (c.mirror(j, i + 1) - c.mirror(j, i - 1)) / (2.0 * g.dy) * norm;
                corr = 0.5 * dt *
                       (hp * (hx + hp * st.d2_x) + hq * (hy + hq * st.d2_y) +
                        2.0 * hp * hq * st.d2_xy);
            }
            eps = std::max(eps, K * std::abs(corr + detail::hm_tilde_sum(c(j, i), st)));
        }
    return std::max(eps, floor_value);
}

// One monotone step: u - dt * h^M with alpha_x = alpha_y = |c| at the node.
inline ScalarField2D monotone_update(const ScalarField2D& u, const ScalarField2D& c_tilde,
                                     double dt) {
    const GridSpec& g = u.grid();
    ScalarField2D out(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const double cv = c_tilde(j, i);
            const double a = std::abs(cv);
            out(j, i) = u(j, i) - dt * hm_llf(cv, stencil_at(u, j, i), a, a);
        }
    return out;
}

// One adaptive filtered step. The discontinuous filter admits no intermediate
// blend, so each node's output is exactly the high-order value where phi = 1
// and |S^A - S^M| <= eps*dt, and exactly the monotone value otherwise.
inline ScalarField2D af_update(const ScalarField2D& u, const ScalarField2D& c_tilde,
                               const Mask2D& phi, double eps, double dt) {
    if (!(eps > 0.0)) throw std::invalid_argument("af_update: eps must be positive");
    const GridSpec& g = u.grid();
    const double limit = eps * dt;
    ScalarField2D out(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j) {
            const double cv = c_tilde(j, i);
            const double a = std::abs(cv);
            const double u0 = u(j, i);
            const double s_m = u0 - dt * hm_llf(cv, stencil_at(u, j, i), a, a);
            if (!phi(j, i)) {
                out(j, i) = s_m;
                continue;
            }
            const double s_a = u0 - dt * ha_lw(c_tilde, u, j, i, dt);
            out(j, i) = std::abs(s_a - s_m) <= limit ? s_a : s_m;
        }
    return out;
}

}  // namespace lsseg
