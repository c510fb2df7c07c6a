#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfb {

inline constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
    invalid_grid,
    degenerate_metric,
    non_finite,
    insufficient_grid,
    support_violation,
    step_too_large,
    not_orthogonal,
    constraint_violated,
    not_conformal,
    quadrature_fail,
    singularity_sampled,
    singularity_hit,
    not_minimal,
    window_too_wide,
    invalid_argument,
};

inline const char* to_string(ErrorKind k) noexcept {
    switch (k) {
    case ErrorKind::invalid_grid: return "InvalidGrid";
    case ErrorKind::degenerate_metric: return "DegenerateMetric";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::insufficient_grid: return "InsufficientGrid";
    case ErrorKind::support_violation: return "SupportViolation";
    case ErrorKind::step_too_large: return "StepTooLarge";
    case ErrorKind::not_orthogonal: return "NotOrthogonal";
    case ErrorKind::constraint_violated: return "ConstraintViolated";
    case ErrorKind::not_conformal: return "NotConformal";
    case ErrorKind::quadrature_fail: return "QuadratureFail";
    case ErrorKind::singularity_sampled: return "SingularitySampled";
    case ErrorKind::singularity_hit: return "SingularityHit";
    case ErrorKind::not_minimal: return "NotMinimal";
    case ErrorKind::window_too_wide: return "WindowTooWide";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> node = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), node_(node) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<std::size_t> node() const noexcept { return node_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> node_;
};

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0, y = 0;

    constexpr double operator[](std::size_t i) const noexcept { return i == 0 ? x : y; }
    constexpr double& operator[](std::size_t i) noexcept { return i == 0 ? x : y; }
};

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr double operator[](std::size_t i) const noexcept { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](std::size_t i) noexcept { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr bool operator==(const Vec3&) const noexcept = default;
};

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Vec3 operator-(const Vec3& a, const Vec3& b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Vec3 operator-(const Vec3& a) noexcept { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, const Vec3& a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
constexpr Vec3 operator*(const Vec3& a, double s) noexcept { return s * a; }
constexpr Vec3 operator/(const Vec3& a, double s) noexcept { return {a.x / s, a.y / s, a.z / s}; }
constexpr Vec3& operator+=(Vec3& a, const Vec3& b) noexcept { a = a + b; return a; }
constexpr Vec3& operator-=(Vec3& a, const Vec3& b) noexcept { a = a - b; return a; }

constexpr double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }
inline bool is_finite(const Vec3& a) noexcept {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Diagonal sign matrix, used for the reflections diag(1,1,-1) and diag(-1,-1,1).
struct SignMatrix {
    std::array<double, 3> d{1, 1, 1};

    constexpr Vec3 operator()(const Vec3& v) const noexcept { return {d[0] * v.x, d[1] * v.y, d[2] * v.z}; }
};

// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
    double xx = 0, xy = 0, yy = 0;

    constexpr double operator()(std::size_t a, std::size_t b) const noexcept {
        return a == 0 ? (b == 0 ? xx : xy) : (b == 0 ? xy : yy);
    }
};

constexpr double det(const Sym2& m) noexcept { return m.xx * m.yy - m.xy * m.xy; }
constexpr double trace(const Sym2& m) noexcept { return m.xx + m.yy; }
constexpr Sym2 inverse(const Sym2& m) noexcept {
    const double d = det(m);
    return {m.yy / d, -m.xy / d, m.xx / d};
}
constexpr Sym2 operator-(const Sym2& a, const Sym2& b) noexcept { return {a.xx - b.xx, a.xy - b.xy, a.yy - b.yy}; }
constexpr Sym2 operator+(const Sym2& a, const Sym2& b) noexcept { return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy}; }
constexpr Sym2 operator*(double s, const Sym2& a) noexcept { return {s * a.xx, s * a.xy, s * a.yy}; }

// Bilinear form m(v, w).
constexpr double apply(const Sym2& m, const Vec2& v, const Vec2& w) noexcept {
    return m.xx * v.x * w.x + m.xy * (v.x * w.y + v.y * w.x) + m.yy * v.y * w.y;
}
constexpr Vec2 mul(const Sym2& m, const Vec2& v) noexcept { return {m.xx * v.x + m.xy * v.y, m.xy * v.x + m.yy * v.y}; }

// Full contraction a^{ij} b_{ij} of two symmetric forms, with raised indices taken from inv.
// Returns g^{ik} g^{jl} a_{ij} b_{kl}.
constexpr double contract(const Sym2& inv, const Sym2& a, const Sym2& b) noexcept {
    // (inv a) and (inv b) as general 2x2, trace of the product
    const double p00 = inv.xx * a.xx + inv.xy * a.xy, p01 = inv.xx * a.xy + inv.xy * a.yy;
    const double p10 = inv.xy * a.xx + inv.yy * a.xy, p11 = inv.xy * a.xy + inv.yy * a.yy;
    const double q00 = inv.xx * b.xx + inv.xy * b.xy, q01 = inv.xx * b.xy + inv.xy * b.yy;
    const double q10 = inv.xy * b.xx + inv.yy * b.xy, q11 = inv.xy * b.xy + inv.yy * b.yy;
    return p00 * q00 + p01 * q10 + p10 * q01 + p11 * q11;
}

// g^{ij} a_{ij}
constexpr double trace_with(const Sym2& inv, const Sym2& a) noexcept {
    return inv.xx * a.xx + 2.0 * inv.xy * a.xy + inv.yy * a.yy;
}

// ---------------------------------------------------------------------------
// Jets: value plus first and second partials in the chart variables (x, y).
// ---------------------------------------------------------------------------

struct Jet {
    Vec3 f, fx, fy, fxx, fxy, fyy;
};

struct ScalarJet {
    double v = 0, vx = 0, vy = 0, vxx = 0, vxy = 0, vyy = 0;
};

using JetFn = std::function<Jet(double x, double y)>;

inline Jet operator+(const Jet& a, const Jet& b) {
    return {a.f + b.f, a.fx + b.fx, a.fy + b.fy, a.fxx + b.fxx, a.fxy + b.fxy, a.fyy + b.fyy};
}
inline Jet operator*(double s, const Jet& a) {
    return {s * a.f, s * a.fx, s * a.fy, s * a.fxx, s * a.fxy, s * a.fyy};
}

// Product rule: scalar jet times vector jet.
inline Jet operator*(const ScalarJet& s, const Jet& a) {
    return {s.v * a.f,
            s.v * a.fx + s.vx * a.f,
            s.v * a.fy + s.vy * a.f,
            s.v * a.fxx + 2.0 * s.vx * a.fx + s.vxx * a.f,
            s.v * a.fxy + s.vx * a.fy + s.vy * a.fx + s.vxy * a.f,
            s.v * a.fyy + 2.0 * s.vy * a.fy + s.vyy * a.f};
}

inline ScalarJet operator*(const ScalarJet& a, const ScalarJet& b) {
    return {a.v * b.v,
            a.v * b.vx + a.vx * b.v,
            a.v * b.vy + a.vy * b.v,
            a.v * b.vxx + 2.0 * a.vx * b.vx + a.vxx * b.v,
            a.v * b.vxy + a.vx * b.vy + a.vy * b.vx + a.vxy * b.v,
            a.v * b.vyy + 2.0 * a.vy * b.vy + a.vyy * b.v};
}

// Vector jet from three component jets.
inline Jet assemble(const ScalarJet& a, const ScalarJet& b, const ScalarJet& c) {
    return {{a.v, b.v, c.v},       {a.vx, b.vx, c.vx},    {a.vy, b.vy, c.vy},
            {a.vxx, b.vxx, c.vxx}, {a.vxy, b.vxy, c.vxy}, {a.vyy, b.vyy, c.vyy}};
}

inline ScalarJet component(const Jet& j, std::size_t k) {
    return {j.f[k], j.fx[k], j.fy[k], j.fxx[k], j.fxy[k], j.fyy[k]};
}

// Component-wise application of a sign matrix, flipping odd y-derivatives when mirror_y is set.
inline Jet transform(const SignMatrix& m, const Jet& j, bool mirror_y) {
    const double s = mirror_y ? -1.0 : 1.0;
    return {m(j.f), m(j.fx), s * m(j.fy), m(j.fxx), s * m(j.fxy), m(j.fyy)};
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

// Pairwise summation, fixed order for a fixed length.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double sup_abs(std::span<const double> v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace wfb
