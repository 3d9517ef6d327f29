#pragma once

// Per-node regularity detection: multivariate undivided differences on four
// ordered subcell stencil pairs, smoothness coefficients beta, nonlinear
// weights, the M-WENO mapping and the binary indicator field phi.

#include <algorithm>
#include <array>
#include <cmath>

#include "lsseg/grid.hpp"

namespace lsseg {

// One ordered 3x3 stencil: offsets from the node, listed in evaluation order.
struct QuadrantStencil {
    std::array<int, 3> dx;
    std::array<int, 3> dy;
};

// The four quadrant pairs (inner stencil S0, outer stencil S1), ordered
// --, +-, ++, -+. The point order matters: undivided differences are taken
// over the first t points in x and the first s points in y.
inline constexpr std::array<std::array<QuadrantStencil, 2>, 4> kQuadrantStencils = {{
    {{{{-1, 0, 1}, {-1, 0, 1}}, {{0, -1, -2}, {0, -1, -2}}}},
    {{{{1, 0, -1}, {-1, 0, 1}}, {{0, 1, 2}, {0, -1, -2}}}},
    {{{{1, 0, -1}, {1, 0, -1}}, {{0, 1, 2}, {0, 1, 2}}}},
    {{{{-1, 0, 1}, {1, 0, -1}}, {{0, -1, -2}, {0, 1, 2}}}},
}};

// u_[t][s] = undivided difference over the first t stencil points in x and
// the first s in y (1-based orders, no division by spacing).
struct UndividedTable {
    double v[3][3] = {};
    double operator()(int t, int s) const { return v[t - 1][s - 1]; }
};

namespace detail {

inline void gather3x3(const ScalarField2D& u, int j, int i, const QuadrantStencil& st,
                      double s[3][3]) {
    const int nx = u.nx(), ny = u.ny();
    const bool interior = (j >= 2 && j < nx - 2 && i >= 2 && i < ny - 2);
    if (interior) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                s[a][b] = u(j + st.dx[a], i + st.dy[b]);
    } else {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                s[a][b] = u.mirror(j + st.dx[a], i + st.dy[b]);
    }
}

// The six undivided differences entering the smoothness coefficient,
// computed from the gathered 3x3 samples s[x-order][y-order].
struct BetaTerms {
    double u31, u13, u22, u32, u23, u33;
};

inline BetaTerms beta_terms(const double s[3][3]) {
    BetaTerms t;
    // second differences per column/row of the ordered stencil
    const double dxx0 = s[0][0] - 2.0 * s[1][0] + s[2][0];
    const double dxx1 = s[0][1] - 2.0 * s[1][1] + s[2][1];
    const double dxx2 = s[0][2] - 2.0 * s[1][2] + s[2][2];
    const double dyy0 = s[0][0] - 2.0 * s[0][1] + s[0][2];
    t.u31 = dxx0;
    t.u13 = dyy0;
    t.u22 = (s[1][1] - s[0][1]) - (s[1][0] - s[0][0]);
    t.u32 = dxx1 - dxx0;
    t.u23 = (s[1][2] - 2.0 * s[1][1] + s[1][0]) - (s[0][2] - 2.0 * s[0][1] + s[0][0]);
    t.u33 = dxx2 - 2.0 * dxx1 + dxx0;
    return t;
}

inline double beta_from_terms(const BetaTerms& t, double inv_dxdy) {
    const double q = t.u31 * t.u31 + t.u13 * t.u13 + t.u22 * t.u22 +
                     (17.0 / 12.0) * (t.u32 * t.u32 + t.u23 * t.u23) +
                     (317.0 / 720.0) * t.u33 * t.u33 + t.u31 * t.u32 + t.u13 * t.u23 -
                     (1.0 / 6.0) * (t.u31 * t.u33 + t.u13 * t.u33) -
                     (1.0 / 12.0) * (t.u32 * t.u33 + t.u23 * t.u33);
    return std::max(q * inv_dxdy, 0.0);  // clamp tiny negative rounding
}

}  // namespace detail

inline UndividedTable undivided_table(const ScalarField2D& u, int j, int i,
                                      const QuadrantStencil& st) {
    double s[3][3];
    detail::gather3x3(u, j, i, st, s);
    // coefficient vectors of the 1-, 2- and 3-point undivided differences
    static constexpr double coeff[3][3] = {{1, 0, 0}, {-1, 1, 0}, {1, -2, 1}};
    UndividedTable tab;
    for (int t = 0; t < 3; ++t)
        for (int sdeg = 0; sdeg < 3; ++sdeg) {
            double acc = 0.0;
            for (int a = 0; a < 3; ++a) {
                if (coeff[t][a] == 0.0) continue;
                double row = 0.0;
                for (int b = 0; b < 3; ++b) {
                    if (coeff[sdeg][b] == 0.0) continue;
                    row += coeff[sdeg][b] * s[a][b];
                }
                acc += coeff[t][a] * row;
            }
            tab.v[t][sdeg] = acc;
        }
    return tab;
}

inline double smoothness_beta(const ScalarField2D& u, int j, int i, const QuadrantStencil& st) {
    double s[3][3];
    detail::gather3x3(u, j, i, st, s);
    const GridSpec& g = u.grid();
    return detail::beta_from_terms(detail::beta_terms(s), 1.0 / (g.dx * g.dy));
}

// omega = alpha0/(alpha0+alpha1) with alpha_k = (beta_k + sigma_h)^-2.
inline double quadrant_weight(double beta0, double beta1, double sigma_h) {
    const double q0 = (beta0 + sigma_h) * (beta0 + sigma_h);
    const double q1 = (beta1 + sigma_h) * (beta1 + sigma_h);
    return q1 / (q0 + q1);
}

// M-WENO mapping g(w) = 4w(3/4 - 3w/2 + w^2); fixes 0, 1/2 and 1.
inline double map_weno(double omega) {
    return 4.0 * omega * (0.75 - 1.5 * omega + omega * omega);
}

struct SubcellIndicators {
    std::array<double, 4> beta0, beta1, omega;
    double omega_min = 0.0;
    double omega_star = 0.0;
    bool phi = false;
};

inline SubcellIndicators subcell_indicators(const ScalarField2D& u, int j, int i, double M) {
    const GridSpec& g = u.grid();
    const double sigma = g.dx * g.dx + g.dy * g.dy;
    const double inv_dxdy = 1.0 / (g.dx * g.dy);

    SubcellIndicators ind;
    double wmin = 1.0;
    for (int q = 0; q < 4; ++q) {
        double s0[3][3], s1[3][3];
        detail::gather3x3(u, j, i, kQuadrantStencils[q][0], s0);
        detail::gather3x3(u, j, i, kQuadrantStencils[q][1], s1);
        ind.beta0[q] = detail::beta_from_terms(detail::beta_terms(s0), inv_dxdy);
        ind.beta1[q] = detail::beta_from_terms(detail::beta_terms(s1), inv_dxdy);
        ind.omega[q] = quadrant_weight(ind.beta0[q], ind.beta1[q], sigma);
        wmin = std::min(wmin, ind.omega[q]);
    }
    ind.omega_min = wmin;
    ind.omega_star = map_weno(wmin);
    ind.phi = ind.omega_star >= M;
    return ind;
}

// Binary regularity flag per node: phi = 1 where the mapped minimal quadrant
// weight clears the threshold M (0 < M < 1/2).
inline Mask2D indicator_field(const ScalarField2D& u, double M) {
    if (!(M > 0.0 && M < 0.5))
        throw std::invalid_argument("indicator_field: M must lie in (0, 1/2)");
    const GridSpec& g = u.grid();
    Mask2D phi(g);
    for (int i = 0; i < g.ny; ++i)
        for (int j = 0; j < g.nx; ++j)
            phi(j, i) = subcell_indicators(u, j, i, M).phi ? 1 : 0;
    return phi;
}

}  // namespace lsseg
