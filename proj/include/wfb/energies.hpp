#pragma once

#include "geometry.hpp"

namespace wfb {

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

struct Energies {
    double W = 0; // 1/4 int H^2
    double E = 0; // 1/2 int |h|^2
    double T = 0; // 1/2 int |h0|^2
    double area = 0;
};

inline Energies energies(const SurfaceGeometry& geom) {
    const std::size_t n = geom.nodes.size();
    std::vector<double> w(n), e(n), t(n), a(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& q = geom.nodes[k];
        w[k] = 0.25 * q.H * q.H * q.area_elem;
        e[k] = 0.5 * q.h_norm2 * q.area_elem;
        t[k] = 0.5 * q.h0_norm2 * q.area_elem;
        a[k] = q.area_elem;
    }
    return {integrate(geom.grid, w), integrate(geom.grid, e), integrate(geom.grid, t), integrate(geom.grid, a)};
}

inline double willmore_energy(const SurfaceGeometry& geom) { return energies(geom).W; }
inline double l2_energy(const SurfaceGeometry& geom) { return energies(geom).E; }
inline double thomsen_energy(const SurfaceGeometry& geom) { return energies(geom).T; }

// ---------------------------------------------------------------------------
// Willmore operator  Lap_g H + |h0|^2 H
// ---------------------------------------------------------------------------

struct OperatorField {
    std::vector<double> values;
    double sup_interior = 0; // over nodes at least `margin` rows away from every grid edge
};

// With FD jets the one-sided derivatives of H on the edge rows reach two rows in through the
// Laplacian stencil, hence the default margin of 3.
inline OperatorField willmore_operator(const SurfaceGeometry& geom, std::size_t margin = 3) {
    const ParamGrid& grid = geom.grid;
    if (grid.nx() < 7 || grid.ny() < 7) throw Error(ErrorKind::insufficient_grid, "need at least 5 interior rows");
    const auto H = geom.H();
    const auto lap = laplace_beltrami(geom, H);
    OperatorField r;
    r.values.resize(grid.size());
    std::vector<double> inner;
    for (std::size_t j = 0; j < grid.ny(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const std::size_t n = grid.index(i, j);
            const auto& q = geom.nodes[n];
            r.values[n] = q.collapsed ? 0.0 : lap[n] + q.h0_norm2 * q.H;
            const bool inside = i >= margin && j >= margin && i + margin < grid.nx() && j + margin < grid.ny();
            if (inside && !q.collapsed) inner.push_back(r.values[n]);
        }
    r.sup_interior = sup_abs(inner);
    return r;
}

// ---------------------------------------------------------------------------
// Variation fields
// ---------------------------------------------------------------------------

struct VariationField {
    std::vector<Vec3> values;
    std::optional<std::vector<Jet>> jets; // exact derivatives when the field is analytic
    std::vector<char> support_mask;
    std::vector<double> normal_part;  // <phi, nu>
    std::vector<Vec2> tangential_part; // xi with Df xi = phi - <phi, nu> nu
};

// Nodes that may carry a compactly supported field: all but the grid edges, except that
// the row y = 0 is allowed when it is the first row (the boundary I).
inline bool in_admissible_support(const ParamGrid& g, std::size_t i, std::size_t j) {
    if (i == 0 || i + 1 == g.nx() || j + 1 == g.ny()) return false;
    if (j == 0) return g.y(0) == 0.0;
    return true;
}

inline VariationField make_variation(const SurfaceGeometry& geom, std::vector<Vec3> values,
                                     std::optional<std::vector<Jet>> jets = std::nullopt, bool check_support = true) {
    const ParamGrid& grid = geom.grid;
    if (values.size() != grid.size()) throw Error(ErrorKind::invalid_grid, "field size does not match grid");
    VariationField v;
    v.support_mask.resize(grid.size());
    v.normal_part.resize(grid.size());
    v.tangential_part.resize(grid.size());
    for (std::size_t j = 0; j < grid.ny(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const std::size_t n = grid.index(i, j);
            const Vec3& p = values[n];
            v.support_mask[n] = (p.x != 0 || p.y != 0 || p.z != 0) ? 1 : 0;
            if (check_support && v.support_mask[n] && !in_admissible_support(grid, i, j))
                throw Error(ErrorKind::support_violation, "field does not vanish on an excluded grid edge", n);
            const auto& q = geom.nodes[n];
            if (q.det_g <= 0 || q.collapsed) continue;
            v.normal_part[n] = dot(p, q.nu);
            v.tangential_part[n] = mul(q.inv_g, Vec2{dot(p, q.jet.fx), dot(p, q.jet.fy)});
        }
    v.values = std::move(values);
    v.jets = std::move(jets);
    return v;
}

inline std::vector<Jet> variation_jets(const ParamGrid& grid, const VariationField& phi) {
    if (phi.jets) return *phi.jets;
    return fd_jets(grid, std::span<const Vec3>(phi.values));
}

// ---------------------------------------------------------------------------
// First variation of W in weak form,
//   1/2 <H nu, Lap_g phi> - H g^ik g^jl h_ij <d_k f, d_l phi> + 1/4 H^2 g^ij <d_i f, d_j phi>,
// integrated with dmu. Full inverse-metric formulas, no conformality assumed.
// ---------------------------------------------------------------------------

struct FirstVariation {
    double total = 0;
    std::array<double, 3> terms{};
};

struct VariationDensity {
    double laplace = 0, shape = 0, metric = 0;
};

inline VariationDensity first_variation_density(const NodeGeometry& q, const Jet& p) {
    const auto [G1, G2] = christoffel(q);
    const Vec3 dphi[2] = {p.fx, p.fy};
    auto hess = [&](const Vec3& pij, std::size_t a, std::size_t b) { return pij - G1(a, b) * dphi[0] - G2(a, b) * dphi[1]; };
    const Vec3 lap = q.inv_g.xx * hess(p.fxx, 0, 0) + (2.0 * q.inv_g.xy) * hess(p.fxy, 0, 1) +
                     q.inv_g.yy * hess(p.fyy, 1, 1);
    const Vec3 df[2] = {q.jet.fx, q.jet.fy};
    // M = g^-1 h g^-1
    const Sym2& gi = q.inv_g;
    const double m00 = gi.xx * (q.h.xx * gi.xx + q.h.xy * gi.xy) + gi.xy * (q.h.xy * gi.xx + q.h.yy * gi.xy);
    const double m01 = gi.xx * (q.h.xx * gi.xy + q.h.xy * gi.yy) + gi.xy * (q.h.xy * gi.xy + q.h.yy * gi.yy);
    const double m11 = gi.xy * (q.h.xx * gi.xy + q.h.xy * gi.yy) + gi.yy * (q.h.xy * gi.xy + q.h.yy * gi.yy);
    const double B00 = dot(df[0], dphi[0]), B01 = dot(df[0], dphi[1]);
    const double B10 = dot(df[1], dphi[0]), B11 = dot(df[1], dphi[1]);
    VariationDensity d;
    d.laplace = 0.5 * q.H * dot(q.nu, lap);
    d.shape = -q.H * (m00 * B00 + m01 * (B01 + B10) + m11 * B11);
    d.metric = 0.25 * q.H * q.H * (gi.xx * B00 + gi.xy * (B01 + B10) + gi.yy * B11);
    return d;
}

inline FirstVariation first_variation_willmore(const SurfaceGeometry& geom, const VariationField& phi) {
    const ParamGrid& grid = geom.grid;
    for (std::size_t j = 0; j < grid.ny(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i)
            if (phi.support_mask[grid.index(i, j)] && !in_admissible_support(grid, i, j))
                throw Error(ErrorKind::support_violation, "field does not vanish on an excluded grid edge",
                            grid.index(i, j));
    const auto pj = variation_jets(grid, phi);
    std::array<std::vector<double>, 3> dens;
    for (auto& d : dens) d.assign(grid.size(), 0.0);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const auto& q = geom.nodes[n];
        if (q.collapsed || q.area_elem == 0) continue;
        const auto d = first_variation_density(q, pj[n]);
        dens[0][n] = d.laplace * q.area_elem;
        dens[1][n] = d.shape * q.area_elem;
        dens[2][n] = d.metric * q.area_elem;
    }
    FirstVariation r;
    for (std::size_t k = 0; k < 3; ++k) r.terms[k] = integrate(grid, dens[k]);
    r.total = r.terms[0] + r.terms[1] + r.terms[2];
    return r;
}

// ---------------------------------------------------------------------------
// Boundary forms along the row y = 0 (first grid row), with phi the normal part of the field:
//   omega = phi dH/deta - dphi/deta H - 1/2 H^2 g(xi, eta)
//   alpha = 1/2 phi dH/deta - h0(grad phi, eta) - 1/2 |h0|^2 g(xi, eta)
//   tau   = phi dH/deta - h(grad phi, eta) - 1/2 |h|^2 g(xi, eta)
// ---------------------------------------------------------------------------

// eta = (g11 e2 - g12 e1) / sqrt(g11 det g)
inline Vec2 conormal_at(const Sym2& g) {
    const double d = det(g);
    if (!(d > 0) || !(g.xx > 0)) throw Error(ErrorKind::degenerate_metric, "conormal of a degenerate metric");
    const double s = 1.0 / std::sqrt(g.xx * d);
    return {-g.xy * s, g.xx * s};
}

inline std::size_t require_boundary_row(const ParamGrid& grid) {
    const auto row = grid.boundary_row();
    if (!row) throw Error(ErrorKind::invalid_grid, "grid has no row y = 0");
    return *row;
}

// Derivatives of a scalar grid field along the boundary row.
struct RowGradient {
    std::vector<double> value, dx, dy;
};

inline RowGradient row_gradient(const ParamGrid& grid, std::span<const double> u, std::size_t row) {
    const auto ux = diff_x<double>(grid, u);
    const auto uy = diff_y<double>(grid, u);
    RowGradient r;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::size_t n = grid.index(i, row);
        r.value.push_back(u[n]);
        r.dx.push_back(ux[n]);
        r.dy.push_back(uy[n]);
    }
    return r;
}

struct BoundaryForm {
    std::string kind;
    std::vector<double> values;
    double integral = 0; // int values sqrt(g11) dx
};

struct BoundaryForms {
    BoundaryForm omega, alpha, tau;
};

inline double line_integral(const SurfaceGeometry& geom, std::size_t row, std::span<const double> values) {
    std::vector<double> w(geom.grid.nx());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = values[i] * std::sqrt(geom.at(i, row).g.xx);
    return integrate_row(geom.grid, w);
}

inline BoundaryForms boundary_forms(const SurfaceGeometry& geom, const VariationField& phi) {
    const ParamGrid& grid = geom.grid;
    const std::size_t row = require_boundary_row(grid);
    const auto H = row_gradient(grid, geom.H(), row);
    const auto pn = row_gradient(grid, phi.normal_part, row);
    BoundaryForms out{{"omega", {}, 0}, {"alpha", {}, 0}, {"tau", {}, 0}};
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::size_t n = grid.index(i, row);
        const auto& q = geom.nodes[n];
        const Vec2 eta = conormal_at(q.g);
        const double dH = eta.x * H.dx[i] + eta.y * H.dy[i];
        const double dphi = eta.x * pn.dx[i] + eta.y * pn.dy[i];
        const Vec2 grad = mul(q.inv_g, Vec2{pn.dx[i], pn.dy[i]});
        const double xi_eta = apply(q.g, phi.tangential_part[n], eta);
        const double p = pn.value[i];
        out.omega.values.push_back(p * dH - dphi * q.H - 0.5 * q.H * q.H * xi_eta);
        out.alpha.values.push_back(0.5 * p * dH - apply(q.h0, grad, eta) - 0.5 * q.h0_norm2 * xi_eta);
        out.tau.values.push_back(p * dH - apply(q.h, grad, eta) - 0.5 * q.h_norm2 * xi_eta);
    }
    for (BoundaryForm* f : {&out.omega, &out.alpha, &out.tau}) f->integral = line_integral(geom, row, f->values);
    return out;
}

// ---------------------------------------------------------------------------
// Evolution identities under the normal variation f + t phi nu:
//   d_t g = -2 h phi,  d_t dmu = -H phi dmu,  d_t h = Hess phi - h g^-1 h phi.
// Numeric side: central differences in t of the geometry of f + t phi nu. First
// derivatives of phi nu are exact (Weingarten); second derivatives are grid differences
// of the first.
// ---------------------------------------------------------------------------

struct EvolutionResidual {
    double metric = 0, measure = 0, shape = 0;

    [[nodiscard]] double max() const noexcept { return std::max({metric, measure, shape}); }
};

struct EvolutionReport {
    double dt = 0;
    EvolutionResidual at_dt, at_half_dt;
};

namespace detail {

inline std::vector<Jet> normal_field_jets(const SurfaceGeometry& geom, std::span<const ScalarJet> phi) {
    const ParamGrid& grid = geom.grid;
    std::vector<Vec3> v(grid.size()), dx(grid.size()), dy(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const auto& q = geom.nodes[n];
        if (q.collapsed || q.det_g <= 0) continue;
        // Weingarten: d_a nu = -h_ab g^bc d_c f
        const Vec2 wx = mul(q.inv_g, Vec2{q.h.xx, q.h.xy});
        const Vec2 wy = mul(q.inv_g, Vec2{q.h.xy, q.h.yy});
        const Vec3 nx = -(wx.x * q.jet.fx + wx.y * q.jet.fy);
        const Vec3 ny = -(wy.x * q.jet.fx + wy.y * q.jet.fy);
        v[n] = phi[n].v * q.nu;
        dx[n] = phi[n].vx * q.nu + phi[n].v * nx;
        dy[n] = phi[n].vy * q.nu + phi[n].v * ny;
    }
    const auto dxx = diff_x<Vec3>(grid, dx);
    const auto dxy = diff_y<Vec3>(grid, dx);
    const auto dyy = diff_y<Vec3>(grid, dy);
    std::vector<Jet> out(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) out[n] = {v[n], dx[n], dy[n], dxx[n], dxy[n], dyy[n]};
    return out;
}

inline EvolutionResidual evolution_residual(const SurfaceGeometry& geom, std::span<const ScalarJet> phi,
                                            const std::vector<Jet>& pj, double dt) {
    EvolutionResidual r;
    for (std::size_t n = 0; n < geom.nodes.size(); ++n) {
        const auto& q = geom.nodes[n];
        if (q.collapsed || q.det_g <= 0) continue;
        const auto qp = node_geometry(q.jet + dt * pj[n]);
        const auto qm = node_geometry(q.jet + (-dt) * pj[n]);
        const double s = 1.0 / (2.0 * dt);
        const Sym2 dg = s * (qp.g - qm.g);
        const double dmu = s * (qp.area_elem - qm.area_elem);
        const Sym2 dh = s * (qp.h - qm.h);
        const double p = phi[n].v;
        const Sym2 g_expected = (-2.0 * p) * q.h;
        const double mu_expected = -q.H * p * q.area_elem;
        const auto [G1, G2] = christoffel(q);
        const ScalarJet& f = phi[n];
        const Sym2 hess{f.vxx - G1.xx * f.vx - G2.xx * f.vy, f.vxy - G1.xy * f.vx - G2.xy * f.vy,
                        f.vyy - G1.yy * f.vx - G2.yy * f.vy};
        // (h g^-1 h)_ab
        const Vec2 r0 = mul(q.inv_g, Vec2{q.h.xx, q.h.xy});
        const Vec2 r1 = mul(q.inv_g, Vec2{q.h.xy, q.h.yy});
        const Sym2 hgh{q.h.xx * r0.x + q.h.xy * r0.y, q.h.xx * r1.x + q.h.xy * r1.y, q.h.xy * r1.x + q.h.yy * r1.y};
        const Sym2 h_expected = hess - p * hgh;
        auto sup = [](const Sym2& a) { return std::max({std::abs(a.xx), std::abs(a.xy), std::abs(a.yy)}); };
        r.metric = std::max(r.metric, sup(dg - g_expected));
        r.measure = std::max(r.measure, std::abs(dmu - mu_expected));
        r.shape = std::max(r.shape, sup(dh - h_expected));
    }
    return r;
}

} // namespace detail

inline EvolutionReport evolution_identities_check(const SurfaceGeometry& geom, std::span<const ScalarJet> phi,
                                                  double dt = 1e-4) {
    if (phi.size() != geom.nodes.size()) throw Error(ErrorKind::invalid_grid, "field size does not match grid");
    const auto pj = detail::normal_field_jets(geom, phi);
    EvolutionReport r;
    r.dt = dt;
    r.at_dt = detail::evolution_residual(geom, phi, pj, dt);
    r.at_half_dt = detail::evolution_residual(geom, phi, pj, 0.5 * dt);
    if (r.at_half_dt.max() > 1.1 * r.at_dt.max() + 1e-12)
        throw Error(ErrorKind::step_too_large, "residual grows when the time step is halved");
    return r;
}

// ---------------------------------------------------------------------------
// tr(A^3) = 3/2 |A0|^2 tr A + 1/4 (tr A)^3 for symmetric 2x2 A
// ---------------------------------------------------------------------------

// h in an orthonormal frame.
inline double cubic_identity_residual(const Sym2& h) {
    const double H = trace(h);
    const double tr2 = h.xx * h.xx + 2.0 * h.xy * h.xy + h.yy * h.yy;
    const double tr3 = h.xx * h.xx * h.xx + 3.0 * h.xx * h.xy * h.xy + 3.0 * h.yy * h.xy * h.xy + h.yy * h.yy * h.yy;
    const double h0 = tr2 - 0.5 * H * H;
    return tr3 - (1.5 * h0 * H + 0.25 * H * H * H);
}

// h with respect to a metric g: expressed in the orthonormal eigenframe of g first.
inline double cubic_identity_residual(const Sym2& g, const Sym2& h) {
    // eigen-decomposition of g
    const double tr = trace(g), d = det(g);
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - d));
    const double l1 = 0.5 * tr + disc, l2 = 0.5 * tr - disc;
    Vec2 e1{1, 0}, e2{0, 1};
    if (std::abs(g.xy) > 0) {
        e1 = {g.xy, l1 - g.xx};
        const double n1 = std::hypot(e1.x, e1.y);
        e1 = {e1.x / n1, e1.y / n1};
        e2 = {-e1.y, e1.x};
    } else if (g.yy > g.xx) {
        std::swap(e1, e2);
    }
    const double s1 = 1.0 / std::sqrt(l1), s2 = 1.0 / std::sqrt(l2);
    const Vec2 b1{e1.x * s1, e1.y * s1}, b2{e2.x * s2, e2.y * s2};
    return cubic_identity_residual(Sym2{apply(h, b1, b1), apply(h, b1, b2), apply(h, b2, b2)});
}

} // namespace wfb
