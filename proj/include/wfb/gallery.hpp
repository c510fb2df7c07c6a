#pragma once

#include "geometry.hpp"

#include <complex>
#include <random>
#include <string_view>

namespace wfb {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Jet helpers
// ---------------------------------------------------------------------------

// Value, first and second complex derivative of a holomorphic G at w = x + iy.
struct HoloJet {
    cplx G, G1, G2;
};

inline ScalarJet re_jet(const HoloJet& h) {
    return {h.G.real(), h.G1.real(), -h.G1.imag(), h.G2.real(), -h.G2.imag(), -h.G2.real()};
}

inline ScalarJet im_jet(const HoloJet& h) {
    return {h.G.imag(), h.G1.imag(), h.G1.real(), h.G2.imag(), h.G2.real(), -h.G2.imag()};
}

// Jet of x -> center + r^2 (x - center) / |x - center|^2 composed with f.
inline Jet invert_jet(const Jet& j, const Vec3& c, double r) {
    const Vec3 P = j.f - c;
    const double n = dot(P, P), r2 = r * r;
    const double n2 = n * n, n3 = n2 * n;
    const Vec3* d1[2] = {&j.fx, &j.fy};
    Vec3 q1[2];
    double pp[2];
    for (int a = 0; a < 2; ++a) {
        pp[a] = dot(P, *d1[a]);
        q1[a] = r2 * (*d1[a] / n - (2.0 * pp[a] / n2) * P);
    }
    auto second = [&](const Vec3& Pab, int a, int b) {
        const Vec3& Pa = *d1[a];
        const Vec3& Pb = *d1[b];
        return r2 * (Pab / n - (2.0 * pp[b] / n2) * Pa - (2.0 * pp[a] / n2) * Pb -
                     (2.0 * (dot(Pa, Pb) + dot(P, Pab)) / n2) * P + (8.0 * pp[a] * pp[b] / n3) * P);
    };
    return {c + (r2 / n) * P, q1[0], q1[1], second(j.fxx, 0, 0), second(j.fxy, 0, 1), second(j.fyy, 1, 1)};
}

// 3x3 matrix stored by rows.
struct Mat3 {
    std::array<Vec3, 3> r{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    Vec3 operator()(const Vec3& v) const noexcept { return {dot(r[0], v), dot(r[1], v), dot(r[2], v)}; }
};

inline Mat3 rotation_about_e1(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {{Vec3{1, 0, 0}, Vec3{0, c, -s}, Vec3{0, s, c}}};
}

inline Jet rigid_jet(const Mat3& m, const Vec3& t, const Jet& j) {
    return {m(j.f) + t, m(j.fx), m(j.fy), m(j.fxx), m(j.fxy), m(j.fyy)};
}

// ---------------------------------------------------------------------------
// Closed-form charts
// ---------------------------------------------------------------------------

namespace charts {

// (sech y cos x, sech y sin x, tanh y)
inline Jet mercator(double x, double y) {
    const double s = 1.0 / std::cosh(y), t = std::tanh(y);
    const double s1 = -s * t, s2 = s * (t * t - s * s);
    const double c = std::cos(x), sn = std::sin(x);
    return {{s * c, s * sn, t},
            {-s * sn, s * c, 0},
            {s1 * c, s1 * sn, s * s},
            {-s * c, -s * sn, 0},
            {-s1 * sn, s1 * c, 0},
            {s2 * c, s2 * sn, -2.0 * s * s * t}};
}

// Latitude chart of the upper unit hemisphere, latitude pi y / 2.
inline Jet hemisphere(double x, double y) {
    const double a = pi / 2, th = a * y;
    const double ct = std::cos(th), st = std::sin(th);
    const double c = std::cos(x), s = std::sin(x);
    return {{ct * c, ct * s, st},
            {-ct * s, ct * c, 0},
            {-a * st * c, -a * st * s, a * ct},
            {-ct * c, -ct * s, 0},
            {a * st * s, -a * st * c, 0},
            {-a * a * ct * c, -a * a * ct * s, -a * a * st}};
}

// 2 (cosh y cos x, cosh y sin x, y)
inline Jet catenoid(double x, double y) {
    const double ch = 2.0 * std::cosh(y), sh = 2.0 * std::sinh(y);
    const double c = std::cos(x), s = std::sin(x);
    return {{ch * c, ch * s, 2.0 * y}, {-ch * s, ch * c, 0}, {sh * c, sh * s, 2.0},
            {-ch * c, -ch * s, 0},     {-sh * s, sh * c, 0}, {ch * c, ch * s, 0}};
}

// (sinh y cos x, sinh y sin x, x)
inline Jet helicoid(double x, double y) {
    const double ch = std::cosh(y), sh = std::sinh(y);
    const double c = std::cos(x), s = std::sin(x);
    return {{sh * c, sh * s, x}, {-sh * s, sh * c, 1}, {ch * c, ch * s, 0},
            {-sh * c, -sh * s, 0}, {-ch * s, ch * c, 0}, {sh * c, sh * s, 0}};
}

// Catenoid 2(cosh s cos t, cosh s sin t, s) written in w = e^{s + it} = u + iv.
inline Jet catenoid_w(double u, double v) {
    const cplx w{u, v};
    const HoloJet inv{1.0 / w, -1.0 / (w * w), 2.0 / (w * w * w)};
    const HoloJet lg{std::log(w), 1.0 / w, -1.0 / (w * w)};
    ScalarJet c1 = re_jet(inv);
    c1.v += u;
    c1.vx += 1;
    ScalarJet c2 = im_jet(inv);
    c2 = {-c2.v + v, -c2.vx, -c2.vy + 1, -c2.vxx, -c2.vxy, -c2.vyy};
    ScalarJet c3 = re_jet(lg);
    c3 = {2 * c3.v, 2 * c3.vx, 2 * c3.vy, 2 * c3.vxx, 2 * c3.vxy, 2 * c3.vyy};
    return assemble(c1, c2, c3);
}

// Inverted catenoid in canonical axes: chart (x, y) = (v, u), so y = 0 is the half
// |t| = pi/2 lying in the plane {first coordinate = 0}; components are permuted so that
// plane becomes z = 0.
inline Jet inverted_catenoid(double x, double y) {
    const Jet n = invert_jet(catenoid_w(y, x), {0, 0, 0}, 1.0);
    auto perm = [](const Vec3& p) { return Vec3{p.y, p.z, p.x}; };
    return {perm(n.f), perm(n.fy), perm(n.fx), perm(n.fyy), perm(n.fxy), perm(n.fxx)};
}

inline constexpr double sqrt3 = 1.7320508075688772;

// Re(i(w^3 - w), w^3 + w, (i/2)(w^4 + 1)) / (w^4 + 2 sqrt3 w^2 - 1)
inline Jet morin(double x, double y) {
    const cplx w{x, y}, I{0, 1};
    const cplx w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
    const cplx D = w4 + 2.0 * sqrt3 * w2 - 1.0, D1 = 4.0 * w3 + 4.0 * sqrt3 * w, D2 = 12.0 * w2 + 4.0 * sqrt3;
    const std::array<std::array<cplx, 3>, 3> N{{{I * (w3 - w), I * (3.0 * w2 - 1.0), I * (6.0 * w)},
                                                {w3 + w, 3.0 * w2 + 1.0, 6.0 * w},
                                                {0.5 * I * (w4 + 1.0), 2.0 * I * w3, 6.0 * I * w2}}};
    std::array<ScalarJet, 3> c;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& [n0, n1, n2] = N[k];
        const cplx q = n1 * D - n0 * D1;
        const cplx G = n0 / D, G1 = q / (D * D);
        const cplx G2 = (n2 * D - n0 * D2) / (D * D) - 2.0 * D1 * q / (D * D * D);
        c[k] = re_jet({G, G1, G2});
    }
    return assemble(c[0], c[1], c[2]);
}

// ((1 - y) cos x, (1 - y) sin x, 0)
inline Jet flat_disk(double x, double y) {
    const double r = 1.0 - y, c = std::cos(x), s = std::sin(x);
    return {{r * c, r * s, 0}, {-r * s, r * c, 0}, {-c, -s, 0}, {-r * c, -r * s, 0}, {s, -c, 0}, {0, 0, 0}};
}

// Unit sphere centred at (0, 0, d), d = sqrt(R^2 + 1), in a Mercator-type chart whose row
// y = 0 is the circle where it meets the sphere of radius R about the origin orthogonally.
inline JetFn spherical_cap(double R) {
    const double d = std::sqrt(R * R + 1.0), a = std::atanh(1.0 / d);
    return [d, a](double x, double y) {
        Jet j = mercator(x, y + a);
        auto flip = [](Vec3 v) { return Vec3{v.x, v.y, -v.z}; };
        return Jet{flip(j.f) + Vec3{0, 0, d}, flip(j.fx), flip(j.fy), flip(j.fxx), flip(j.fxy), flip(j.fyy)};
    };
}

} // namespace charts

// ---------------------------------------------------------------------------
// Gallery
// ---------------------------------------------------------------------------

struct AnalyticSurface {
    std::string id;
    JetFn chart;
    Interval x_range = default_x_range;
    Interval y_range = half_strip_y;
    std::vector<Vec2> singular_set;
    double exclusion_radius = 0.05;
    bool collapsed_far_edge = false;
};

inline const std::vector<std::string>& gallery_ids() {
    static const std::vector<std::string> ids{"mercator_sphere", "hemisphere", "catenoid",  "inverted_catenoid",
                                              "helicoid",        "morin",      "flat_disk", "spherical_cap"};
    return ids;
}

inline std::array<cplx, 4> morin_poles() {
    const double r = std::sqrt(2.0 - charts::sqrt3), s = std::sqrt(2.0 + charts::sqrt3);
    return {cplx{r, 0}, cplx{-r, 0}, cplx{0, s}, cplx{0, -s}};
}

// `param` is the support-sphere radius for spherical_cap (default 2) and unused otherwise.
inline AnalyticSurface analytic_surface(std::string_view id, double param = 0) {
    AnalyticSurface s;
    s.id = std::string(id);
    if (id == "mercator_sphere") {
        s.chart = charts::mercator;
    } else if (id == "hemisphere") {
        s.chart = charts::hemisphere;
        s.collapsed_far_edge = true;
    } else if (id == "catenoid") {
        s.chart = charts::catenoid;
    } else if (id == "inverted_catenoid") {
        s.chart = charts::inverted_catenoid;
        s.x_range = {0.05, 1.0};
        s.y_range = {0.0, 0.5};
        s.singular_set = {{0, 0}};
    } else if (id == "helicoid") {
        s.chart = charts::helicoid;
    } else if (id == "morin") {
        s.chart = charts::morin;
        s.x_range = {-0.45, 0.45};
        s.y_range = {-0.45, 0.45};
        for (const auto& p : morin_poles()) s.singular_set.push_back({p.real(), p.imag()});
    } else if (id == "flat_disk") {
        s.chart = charts::flat_disk;
        s.collapsed_far_edge = true;
    } else if (id == "spherical_cap") {
        s.chart = charts::spherical_cap(param > 0 ? param : 2.0);
    } else {
        throw Error(ErrorKind::invalid_argument, "unknown gallery surface '" + std::string(id) + "'");
    }
    return s;
}

inline Immersion sample(const AnalyticSurface& s, const ParamGrid& grid) {
    for (std::size_t j = 0; j < grid.ny(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i)
            for (const auto& p : s.singular_set)
                if (std::hypot(grid.x(i) - p.x, grid.y(j) - p.y) < s.exclusion_radius)
                    throw Error(ErrorKind::singularity_sampled,
                                "node (" + std::to_string(grid.x(i)) + ", " + std::to_string(grid.y(j)) +
                                    ") within exclusion radius of a singular point",
                                grid.index(i, j));
    Immersion f = make_immersion(grid, s.chart, s.id, s.id);
    f.collapsed_far_edge = s.collapsed_far_edge;
    return f;
}

inline Immersion sample(std::string_view id, std::size_t nx, std::size_t ny, double param = 0) {
    const auto s = analytic_surface(id, param);
    return sample(s, ParamGrid(nx, ny, s.x_range, s.y_range));
}

inline Immersion rigid_motion(const Immersion& f, const Mat3& m, const Vec3& t = {}) {
    Immersion out = f;
    for (auto& p : out.positions) p = m(p) + t;
    if (out.jets)
        for (auto& j : *out.jets) j = rigid_jet(m, t, j);
    if (f.chart) {
        JetFn c = f.chart;
        out.chart = [c, m, t](double x, double y) { return rigid_jet(m, t, c(x, y)); };
    }
    out.analytic_id.clear();
    return out;
}

// Ambient inversion x -> center + radius^2 (x - center) / |x - center|^2.
// delta defaults to 1e-6 times the bounding-box diameter.
inline Immersion invert(const Immersion& f, const Vec3& center = {}, double radius = 1.0,
                        std::optional<double> delta = std::nullopt) {
    const double d = delta.value_or(1e-6 * bbox_diameter(f.positions));
    for (std::size_t n = 0; n < f.positions.size(); ++n)
        if (norm(f.positions[n] - center) < d)
            throw Error(ErrorKind::singularity_hit, "surface passes within delta of the inversion centre", n);
    Immersion out = f;
    const double r2 = radius * radius;
    for (auto& p : out.positions) {
        const Vec3 P = p - center;
        p = center + (r2 / dot(P, P)) * P;
    }
    if (out.jets)
        for (auto& j : *out.jets) j = invert_jet(j, center, radius);
    if (f.chart) {
        JetFn c = f.chart;
        out.chart = [c, center, radius](double x, double y) { return invert_jet(c(x, y), center, radius); };
    }
    out.name = f.name.empty() ? "inverted" : "inverted " + f.name;
    out.analytic_id.clear();
    return out;
}

// ---------------------------------------------------------------------------
// Inversion density identity for a minimal f and its inversion in the unit sphere:
//   1/4 |H+|^2 dmu+ = (Lap_g log |f|^2) dmu-,  Lap_g log |f|^2 = 4 |f^perp|^2 / |f|^4.
// Densities are taken with respect to dx dy. Sups skip `margin` rows at each grid edge: the
// first interior row differences one-sided boundary fluxes and is only first order.
// ---------------------------------------------------------------------------

struct DensityIdentityReport {
    std::vector<double> residual;      // left minus right (stencil Laplacian)
    std::vector<double> perp_residual; // stencil Laplacian minus 4 |f^perp|^2 / |f|^4, times dmu-
    double sup_residual = 0, sup_perp_residual = 0;
    double sup_H_minus = 0;
};

inline DensityIdentityReport inversion_density_identity(const Immersion& f_minus, const Immersion& inverted,
                                                        DerivativeScheme scheme = DerivativeScheme::analytic_jet,
                                                        double minimal_tol = 1e-6, std::size_t margin = 2) {
    const auto gm = compute_geometry(f_minus, scheme);
    const auto gp = compute_geometry(inverted, scheme);
    DensityIdentityReport r;
    r.sup_H_minus = sup_abs(gm.H());
    if (r.sup_H_minus > minimal_tol)
        throw Error(ErrorKind::not_minimal, "mean curvature of the source surface is " + std::to_string(r.sup_H_minus));
    const ParamGrid& grid = gm.grid;
    std::vector<double> logr(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) logr[n] = std::log(dot(f_minus.positions[n], f_minus.positions[n]));
    const auto lap = laplace_beltrami(gm, logr);
    r.residual.assign(grid.size(), 0.0);
    r.perp_residual.assign(grid.size(), 0.0);
    std::vector<double> inner, inner_perp;
    for (std::size_t j = 0; j < grid.ny(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const std::size_t n = grid.index(i, j);
            const auto& qm = gm.nodes[n];
            const auto& qp = gp.nodes[n];
            const Vec3& x = f_minus.positions[n];
            const double r2 = dot(x, x), fp = dot(x, qm.nu);
            const double lhs = 0.25 * qp.H * qp.H * qp.area_elem;
            const double rhs = (0.25 * qm.H * qm.H + lap[n]) * qm.area_elem;
            r.residual[n] = lhs - rhs;
            r.perp_residual[n] = (lap[n] - 4.0 * fp * fp / (r2 * r2)) * qm.area_elem;
            if (i >= margin && j >= margin && i + margin < grid.nx() && j + margin < grid.ny()) {
                inner.push_back(r.residual[n]);
                inner_perp.push_back(r.perp_residual[n]);
            }
        }
    r.sup_residual = sup_abs(inner);
    r.sup_perp_residual = sup_abs(inner_perp);
    return r;
}

// ---------------------------------------------------------------------------
// Logarithmic fit of <H nu, axis> against log rho along a ray in the chart.
// ---------------------------------------------------------------------------

struct LogFit {
    double slope = 0, intercept = 0, rms_residual = 0;
    std::vector<double> rho, value;
};

inline LogFit log_fit(std::span<const double> rho, std::span<const double> value, double max_rel_rms = 0.1) {
    const std::size_t n = rho.size();
    if (n < 3 || value.size() != n) throw Error(ErrorKind::invalid_argument, "log fit needs at least 3 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lx = std::log(rho[k]);
        sx += lx;
        sy += value[k];
        sxx += lx * lx;
        sxy += lx * value[k];
    }
    const double dn = static_cast<double>(n);
    LogFit f;
    f.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / dn;
    double ss = 0, vmin = value[0], vmax = value[0];
    for (std::size_t k = 0; k < n; ++k) {
        const double e = value[k] - f.slope * std::log(rho[k]) - f.intercept;
        ss += e * e;
        vmin = std::min(vmin, value[k]);
        vmax = std::max(vmax, value[k]);
    }
    f.rms_residual = std::sqrt(ss / dn);
    f.rho.assign(rho.begin(), rho.end());
    f.value.assign(value.begin(), value.end());
    if (f.rms_residual > max_rel_rms * (vmax - vmin))
        throw Error(ErrorKind::window_too_wide, "fit residual " + std::to_string(f.rms_residual) +
                                                    " is not small against the log term");
    return f;
}

// Samples rho logarithmically in the window; `ray` maps rho to chart coordinates.
inline LogFit mean_curvature_log_fit(const JetFn& chart, const std::function<Vec2(double)>& ray, const Vec3& axis,
                                     Interval window = {1e-3, 1e-2}, std::size_t samples = 16) {
    std::vector<double> rho(samples), val(samples);
    const double l0 = std::log(window.lo), l1 = std::log(window.hi);
    for (std::size_t k = 0; k < samples; ++k) {
        rho[k] = std::exp(l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(samples - 1));
        const Vec2 p = ray(rho[k]);
        const auto q = node_geometry(chart(p.x, p.y));
        val[k] = q.H * dot(q.nu, axis);
    }
    return log_fit(rho, val);
}

// Inverted catenoid along the boundary ray (x, y) = (rho, 0); the catenoid axis e3 sits in
// the canonical second coordinate.
inline LogFit inverted_catenoid_log_fit(Interval window = {1e-3, 1e-2}, std::size_t samples = 16) {
    return mean_curvature_log_fit(charts::inverted_catenoid, [](double r) { return Vec2{r, 0.0}; }, {0, 1, 0},
                                  window, samples);
}

// Closed-form conformal factor g11 of the inverted catenoid in the w chart.
inline double inverted_catenoid_metric(double rho) {
    const double r2 = rho * rho, l = std::log(rho);
    const double a = 1.0 + 2.0 * r2 + r2 * r2;
    const double b = a + 4.0 * r2 * l * l;
    return a / (b * b);
}

// ---------------------------------------------------------------------------
// Random trigonometric fields with analytic jets, damped by a bump that vanishes on
// x = x_lo, x = x_hi and y = y_hi (the grid edges outside the admissible support).
// ---------------------------------------------------------------------------

struct TrigTerm {
    double amp = 0, kx = 0, px = 0, ky = 0, py = 0;
};

struct TrigBumpField {
    Interval x_range = default_x_range, y_range = half_strip_y;
    std::array<std::vector<TrigTerm>, 3> terms;

    [[nodiscard]] ScalarJet bump(double x, double y) const {
        // ((1 - cos s)/2)^2 in s = 2 pi (x - lo)/L, times (y_hi - y)^2 / L_y^2
        const double Lx = x_range.hi - x_range.lo, Ly = y_range.hi - y_range.lo;
        const double w = 2.0 * pi / Lx, s = w * (x - x_range.lo);
        const double c = 0.5 * (1.0 - std::cos(s)), c1 = 0.5 * w * std::sin(s), c2 = 0.5 * w * w * std::cos(s);
        const ScalarJet bx{c * c, 2.0 * c * c1, 0, 2.0 * (c1 * c1 + c * c2), 0, 0};
        const double t = (y_range.hi - y) / Ly;
        const ScalarJet by{t * t, 0, -2.0 * t / Ly, 0, 0, 2.0 / (Ly * Ly)};
        return bx * by;
    }

    [[nodiscard]] Jet operator()(double x, double y) const {
        std::array<ScalarJet, 3> c{};
        for (std::size_t k = 0; k < 3; ++k)
            for (const auto& t : terms[k]) {
                const double ax = t.kx * x + t.px, ay = t.ky * y + t.py;
                const double cx = std::cos(ax), sx = std::sin(ax), cy = std::cos(ay), sy = std::sin(ay);
                c[k].v += t.amp * cx * cy;
                c[k].vx += -t.amp * t.kx * sx * cy;
                c[k].vy += -t.amp * t.ky * cx * sy;
                c[k].vxx += -t.amp * t.kx * t.kx * cx * cy;
                c[k].vxy += t.amp * t.kx * t.ky * sx * sy;
                c[k].vyy += -t.amp * t.ky * t.ky * cx * cy;
            }
        return bump(x, y) * assemble(c[0], c[1], c[2]);
    }
};

inline TrigBumpField random_trig_field(std::mt19937_64& rng, Interval x_range = default_x_range,
                                       Interval y_range = half_strip_y, std::size_t terms = 3, double amplitude = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), ph(0.0, 2.0 * pi);
    std::uniform_int_distribution<int> kx(1, 3), ky(0, 2);
    TrigBumpField f{x_range, y_range, {}};
    for (auto& comp : f.terms)
        for (std::size_t t = 0; t < terms; ++t)
            comp.push_back({amplitude * u(rng), static_cast<double>(kx(rng)), ph(rng), static_cast<double>(ky(rng)), ph(rng)});
    return f;
}

// f + eps * field, with jets, sampled on f's grid.
inline Immersion perturb_with(const Immersion& f, const TrigBumpField& field, double eps) {
    if (!f.chart) throw Error(ErrorKind::invalid_argument, "perturbation needs an analytic chart");
    JetFn c = f.chart;
    JetFn chart = [c, field, eps](double x, double y) { return c(x, y) + eps * field(x, y); };
    Immersion out = make_immersion(f.grid, chart, f.name.empty() ? "perturbed" : "perturbed " + f.name);
    out.collapsed_far_edge = f.collapsed_far_edge;
    return out;
}

} // namespace wfb
