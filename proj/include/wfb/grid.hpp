#pragma once

#include "core.hpp"

#include <vector>

namespace wfb {

struct Interval {
    double lo = 0, hi = 0;

    [[nodiscard]] constexpr double length() const noexcept { return hi - lo; }
    [[nodiscard]] constexpr bool contains(double t) const noexcept { return lo <= t && t <= hi; }
};

inline constexpr Interval default_x_range{-pi, pi};
inline constexpr Interval half_strip_y{0.0, 1.0};
inline constexpr Interval full_strip_y{-1.0, 1.0};

// Tensor-product grid over a rectangle in the (x, y) chart plane.
// Node (i, j) sits at (x(i), y(j)); storage is row-major with x fastest: index = j * nx + i.
class ParamGrid {
public:
    ParamGrid(std::size_t nx, std::size_t ny, Interval x_range = default_x_range, Interval y_range = half_strip_y)
        : nx_(nx), ny_(ny), xr_(x_range), yr_(y_range) {
        if (nx < 5 || ny < 5) throw Error(ErrorKind::invalid_grid, "need at least 5 nodes per direction");
        if (!(x_range.length() > 0) || !(y_range.length() > 0))
            throw Error(ErrorKind::invalid_grid, "empty parameter range");
        xs_ = linspace(x_range, nx);
        ys_ = linspace(y_range, ny);
    }

    // Grid with explicit y coordinates (used by reflection, which mirrors coordinates exactly).
    static ParamGrid with_y_coordinates(std::size_t nx, Interval x_range, std::vector<double> ys) {
        ParamGrid g(nx, ys.size(), x_range, Interval{ys.front(), ys.back()});
        g.ys_ = std::move(ys);
        return g;
    }

    [[nodiscard]] std::size_t nx() const noexcept { return nx_; }
    [[nodiscard]] std::size_t ny() const noexcept { return ny_; }
    [[nodiscard]] std::size_t size() const noexcept { return nx_ * ny_; }
    [[nodiscard]] Interval x_range() const noexcept { return xr_; }
    [[nodiscard]] Interval y_range() const noexcept { return yr_; }
    [[nodiscard]] double hx() const noexcept { return xr_.length() / static_cast<double>(nx_ - 1); }
    [[nodiscard]] double hy() const noexcept { return yr_.length() / static_cast<double>(ny_ - 1); }
    [[nodiscard]] double x(std::size_t i) const noexcept { return xs_[i]; }
    [[nodiscard]] double y(std::size_t j) const noexcept { return ys_[j]; }
    [[nodiscard]] const std::vector<double>& xs() const noexcept { return xs_; }
    [[nodiscard]] const std::vector<double>& ys() const noexcept { return ys_; }
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx_ + i; }

    // Row index of the boundary I = {y = 0}, if that row is a grid row.
    [[nodiscard]] std::optional<std::size_t> boundary_row() const noexcept {
        for (std::size_t j = 0; j < ny_; ++j)
            if (ys_[j] == 0.0) return j;
        return std::nullopt;
    }

    // Composite trapezoid weights (without the spacing factor).
    [[nodiscard]] double wx(std::size_t i) const noexcept { return (i == 0 || i + 1 == nx_) ? 0.5 : 1.0; }
    [[nodiscard]] double wy(std::size_t j) const noexcept { return (j == 0 || j + 1 == ny_) ? 0.5 : 1.0; }

    [[nodiscard]] bool is_edge(std::size_t i, std::size_t j) const noexcept {
        return i == 0 || j == 0 || i + 1 == nx_ || j + 1 == ny_;
    }

    // Odd row count with coordinates mirror-symmetric about y = 0.
    [[nodiscard]] bool y_symmetric() const noexcept {
        if (ny_ % 2 == 0) return false;
        for (std::size_t j = 0; j < ny_; ++j)
            if (ys_[j] != -ys_[ny_ - 1 - j]) return false;
        return true;
    }

private:
    static std::vector<double> linspace(Interval r, std::size_t n) {
        // Symmetric ranges use hi * (2j - m) / m so that t(n-1-j) == -t(j) exactly, and
        // ranges starting at 0 use hi * (j / m); the two agree bitwise on shared nodes.
        std::vector<double> v(n);
        const double m = static_cast<double>(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            const double jj = static_cast<double>(j);
            if (r.lo == -r.hi) v[j] = r.hi * ((2.0 * jj - m) / m);
            else if (r.lo == 0.0) v[j] = r.hi * (jj / m);
            else v[j] = r.lo + r.length() * (jj / m);
        }
        v.front() = r.lo;
        v.back() = r.hi;
        return v;
    }

    std::size_t nx_, ny_;
    Interval xr_, yr_;
    std::vector<double> xs_, ys_;
};

// ---------------------------------------------------------------------------
// Second-order finite differences: central in the interior, one-sided at edges.
// T must support T + T, T - T and double * T.
// ---------------------------------------------------------------------------

namespace fd {

template <class T>
T first(const T* v, std::size_t n, std::size_t k, std::ptrdiff_t stride, double h) {
    auto at = [&](std::ptrdiff_t o) -> const T& { return v[static_cast<std::ptrdiff_t>(k) * stride + o * stride]; };
    if (k == 0) return (1.0 / (2.0 * h)) * ((-3.0) * at(0) + 4.0 * at(1) - at(2));
    if (k + 1 == n) return (1.0 / (2.0 * h)) * (3.0 * at(0) - 4.0 * at(-1) + at(-2));
    return (1.0 / (2.0 * h)) * (at(1) - at(-1));
}

template <class T>
T second(const T* v, std::size_t n, std::size_t k, std::ptrdiff_t stride, double h) {
    auto at = [&](std::ptrdiff_t o) -> const T& { return v[static_cast<std::ptrdiff_t>(k) * stride + o * stride]; };
    const double s = 1.0 / (h * h);
    if (k == 0) return s * (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3));
    if (k + 1 == n) return s * (2.0 * at(0) - 5.0 * at(-1) + 4.0 * at(-2) - at(-3));
    return s * ((at(1) + at(-1)) - 2.0 * at(0));
}

} // namespace fd

template <class T>
std::vector<T> diff_x(const ParamGrid& g, std::span<const T> v) {
    std::vector<T> out(g.size());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            out[g.index(i, j)] = fd::first(v.data() + g.index(0, j), g.nx(), i, 1, g.hx());
    return out;
}

template <class T>
std::vector<T> diff_y(const ParamGrid& g, std::span<const T> v) {
    std::vector<T> out(g.size());
    const auto stride = static_cast<std::ptrdiff_t>(g.nx());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            out[g.index(i, j)] = fd::first(v.data() + i, g.ny(), j, stride, g.hy());
    return out;
}

template <class T>
std::vector<T> diff_xx(const ParamGrid& g, std::span<const T> v) {
    std::vector<T> out(g.size());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            out[g.index(i, j)] = fd::second(v.data() + g.index(0, j), g.nx(), i, 1, g.hx());
    return out;
}

template <class T>
std::vector<T> diff_yy(const ParamGrid& g, std::span<const T> v) {
    std::vector<T> out(g.size());
    const auto stride = static_cast<std::ptrdiff_t>(g.nx());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            out[g.index(i, j)] = fd::second(v.data() + i, g.ny(), j, stride, g.hy());
    return out;
}

// Finite-difference jets of a sampled vector field.
inline std::vector<Jet> fd_jets(const ParamGrid& g, std::span<const Vec3> v) {
    const auto fx = diff_x<Vec3>(g, v);
    const auto fy = diff_y<Vec3>(g, v);
    const auto fxx = diff_xx<Vec3>(g, v);
    const auto fxy = diff_y<Vec3>(g, fx);
    const auto fyy = diff_yy<Vec3>(g, v);
    std::vector<Jet> out(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) out[n] = {v[n], fx[n], fy[n], fxx[n], fxy[n], fyy[n]};
    return out;
}

inline std::vector<ScalarJet> fd_jets(const ParamGrid& g, std::span<const double> v) {
    const auto fx = diff_x<double>(g, v);
    const auto fy = diff_y<double>(g, v);
    const auto fxx = diff_xx<double>(g, v);
    const auto fxy = diff_y<double>(g, fx);
    const auto fyy = diff_yy<double>(g, v);
    std::vector<ScalarJet> out(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) out[n] = {v[n], fx[n], fy[n], fxx[n], fxy[n], fyy[n]};
    return out;
}

inline std::vector<Jet> sample_jets(const ParamGrid& g, const JetFn& fn) {
    std::vector<Jet> out(g.size());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) out[g.index(i, j)] = fn(g.x(i), g.y(j));
    return out;
}

// Composite trapezoid rule over the grid of per-node integrand values (already
// multiplied by the area element where applicable). On a y-symmetric grid mirrored
// rows are added first, so integrands that are odd in y sum to exactly zero.
inline double integrate(const ParamGrid& g, std::span<const double> values) {
    const std::size_t nx = g.nx(), ny = g.ny();
    std::vector<double> w;
    w.reserve(g.size());
    if (g.y_symmetric()) {
        const std::size_t m = (ny - 1) / 2;
        for (std::size_t j = 0; j <= m; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const std::size_t lo = g.index(i, m - j), hi = g.index(i, m + j);
                const double v = (j == 0) ? values[lo] : (values[hi] + values[lo]);
                w.push_back(g.wx(i) * g.wy(m + j) * v);
            }
    } else {
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) w.push_back(g.wx(i) * g.wy(j) * values[g.index(i, j)]);
    }
    return pairwise_sum(w) * g.hx() * g.hy();
}

// Trapezoid rule along a grid row.
inline double integrate_row(const ParamGrid& g, std::span<const double> row_values) {
    std::vector<double> w(g.nx());
    for (std::size_t i = 0; i < g.nx(); ++i) w[i] = g.wx(i) * row_values[i];
    return pairwise_sum(w) * g.hx();
}

} // namespace wfb
