#pragma once

// Uniform node-centered 2D grid, scalar fields and finite-difference
// stencils shared by the velocity, smoothness and scheme kernels.
//
// Conventions used everywhere in this library:
//   * node (j,i) sits at (x_min + j*dx, y_min + i*dy), j indexes x, i indexes y
//   * fields are stored row-major, index = i*nx + j
//   * out-of-range reads resolve through mirror ghosts (homogeneous Neumann):
//     index -1 maps to 0, -2 to 1, nx to nx-1, nx+1 to nx-2

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsseg {

// Below this threshold the front normal is considered undefined and the
// degenerate-gradient fallbacks kick in (velocity extension, LW hamiltonian).
inline constexpr double kGradientEps = 1e-10;

struct GridSpec {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;

    double x(int j) const { return x_min + j * dx; }
    double y(int i) const { return y_min + i * dy; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

// Minimum node count per axis: the indicator stencils reach offset +-2, so
// anything below 5 nodes cannot host a single interior evaluation.
inline constexpr int kMinNodes = 5;

inline GridSpec make_grid(double x_min, double x_max, double y_min, double y_max,
                          int nx, int ny) {
    if (nx < kMinNodes || ny < kMinNodes)
        throw std::invalid_argument("make_grid: node counts must be >= " +
                                    std::to_string(kMinNodes));
    if (!(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument("make_grid: degenerate domain rectangle");
    GridSpec g;
    g.x_min = x_min; g.x_max = x_max;
    g.y_min = y_min; g.y_max = y_max;
    g.nx = nx; g.ny = ny;
    g.dx = (x_max - x_min) / (nx - 1);
    g.dy = (y_max - y_min) / (ny - 1);
    return g;
}

// Mirror rule for ghost indices, valid for offsets up to two cells.
inline int reflect_index(int k, int n) {
    if (k < 0) return -k - 1;
    if (k >= n) return 2 * n - 1 - k;
    return k;
}

class ScalarField2D {
public:
    ScalarField2D() = default;
    explicit ScalarField2D(const GridSpec& grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}

    const GridSpec& grid() const { return grid_; }
    int nx() const { return grid_.nx; }
    int ny() const { return grid_.ny; }

    double& operator()(int j, int i) {
        assert(j >= 0 && j < grid_.nx && i >= 0 && i < grid_.ny);
        return values_[static_cast<std::size_t>(i) * grid_.nx + j];
    }
    double operator()(int j, int i) const {
        assert(j >= 0 && j < grid_.nx && i >= 0 && i < grid_.ny);
        return values_[static_cast<std::size_t>(i) * grid_.nx + j];
    }

    // Read with the mirror-Neumann ghost rule; every (j,i) within two cells
    // of the grid is valid.
    double mirror(int j, int i) const {
        return values_[static_cast<std::size_t>(reflect_index(i, grid_.ny)) * grid_.nx +
                       reflect_index(j, grid_.nx)];
    }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    const std::vector<double>& values() const { return values_; }

    double min() const {
        double m = values_.front();
        for (double v : values_) m = std::min(m, v);
        return m;
    }
    double max() const {
        double m = values_.front();
        for (double v : values_) m = std::max(m, v);
        return m;
    }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

// Binary node mask on a grid (smoothness indicator phi, front occupancy).
class Mask2D {
public:
    Mask2D() = default;
    explicit Mask2D(const GridSpec& grid, std::uint8_t fill = 0)
        : grid_(grid), values_(grid.size(), fill) {}

    const GridSpec& grid() const { return grid_; }
    int nx() const { return grid_.nx; }
    int ny() const { return grid_.ny; }

    std::uint8_t& operator()(int j, int i) {
        return values_[static_cast<std::size_t>(i) * grid_.nx + j];
    }
    std::uint8_t operator()(int j, int i) const {
        return values_[static_cast<std::size_t>(i) * grid_.nx + j];
    }

    const std::vector<std::uint8_t>& values() const { return values_; }
    std::vector<std::uint8_t>& values() { return values_; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : values_) n += (v != 0);
        return n;
    }
    bool empty_mask() const { return count() == 0; }

private:
    GridSpec grid_;
    std::vector<std::uint8_t> values_;
};

// One-sided, centered, second and mixed differences at a node.
struct DiffStencil {
    double d_minus_x = 0.0, d_plus_x = 0.0, d_central_x = 0.0;
    double d_minus_y = 0.0, d_plus_y = 0.0, d_central_y = 0.0;
    double d2_x = 0.0, d2_y = 0.0, d2_xy = 0.0;
};

inline DiffStencil stencil_at(const ScalarField2D& u, int j, int i) {
    const GridSpec& g = u.grid();
    const double u0 = u(j, i);
    const double uxm = u.mirror(j - 1, i), uxp = u.mirror(j + 1, i);
    const double uym = u.mirror(j, i - 1), uyp = u.mirror(j, i + 1);

    DiffStencil st;
    st.d_minus_x = (u0 - uxm) / g.dx;
    st.d_plus_x = (uxp - u0) / g.dx;
    st.d_central_x = 0.5 * (st.d_minus_x + st.d_plus_x);
    st.d_minus_y = (u0 - uym) / g.dy;
    st.d_plus_y = (uyp - u0) / g.dy;
    st.d_central_y = 0.5 * (st.d_minus_y + st.d_plus_y);
    st.d2_x = (uxp - 2.0 * u0 + uxm) / (g.dx * g.dx);
    st.d2_y = (uyp - 2.0 * u0 + uym) / (g.dy * g.dy);
    st.d2_xy = (u.mirror(j + 1, i + 1) - u.mirror(j - 1, i + 1) -
                u.mirror(j + 1, i - 1) + u.mirror(j - 1, i - 1)) /
               (4.0 * g.dx * g.dy);
    return st;
}

}  // namespace lsseg
