#pragma once

#include "energies.hpp"
#include "spectral.hpp"

namespace wfb {

// ---------------------------------------------------------------------------
// Support surfaces in canonical axes
// ---------------------------------------------------------------------------

struct SupportSurface {
    enum class Kind { plane, sphere, line };
    Kind kind = Kind::plane;
    double R = 1; // sphere radius, centred at the origin

    static SupportSurface plane() { return {Kind::plane, 1}; }
    static SupportSurface sphere(double r) { return {Kind::sphere, r}; }
    static SupportSurface line() { return {Kind::line, 1}; }

    // Second fundamental form of S w.r.t. the interior normal; 0 for the plane and the line.
    [[nodiscard]] double h_S(const Vec3& /*p*/, const Vec3& v, const Vec3& w) const noexcept {
        return kind == Kind::sphere ? dot(v, w) / R : 0.0;
    }

    // Interior unit normal (towards the centre for the sphere); zero for the line.
    [[nodiscard]] Vec3 normal(const Vec3& p) const noexcept {
        switch (kind) {
        case Kind::plane: return {0, 0, 1};
        case Kind::sphere: return -(p / norm(p));
        case Kind::line: return {};
        }
        return {};
    }

    // Distance-type residual of p lying on S.
    [[nodiscard]] double on_surface(const Vec3& p) const noexcept {
        switch (kind) {
        case Kind::plane: return std::abs(p.z);
        case Kind::sphere: return std::abs(norm(p) - R);
        case Kind::line: return std::hypot(p.x, p.y);
        }
        return 0;
    }

    [[nodiscard]] std::string describe() const {
        switch (kind) {
        case Kind::plane: return "plane";
        case Kind::sphere: return "sphere:" + std::to_string(R);
        case Kind::line: return "line";
        }
        return "";
    }
};

inline SupportSurface parse_support(const std::string& s) {
    if (s == "plane") return SupportSurface::plane();
    if (s == "line") return SupportSurface::line();
    if (s.rfind("sphere:", 0) == 0) {
        const double r = std::stod(s.substr(7));
        if (!(r > 0)) throw Error(ErrorKind::invalid_argument, "sphere radius must be positive");
        return SupportSurface::sphere(r);
    }
    throw Error(ErrorKind::invalid_argument, "unknown support surface '" + s + "'");
}

// ---------------------------------------------------------------------------
// Conormal along I
// ---------------------------------------------------------------------------

inline std::vector<Vec2> conormal(const SurfaceGeometry& geom) {
    const std::size_t row = require_boundary_row(geom.grid);
    std::vector<Vec2> eta;
    for (std::size_t i = 0; i < geom.grid.nx(); ++i) eta.push_back(conormal_at(geom.at(i, row).g));
    return eta;
}

inline Vec3 push_forward(const Jet& j, const Vec2& v) { return v.x * j.fx + v.y * j.fy; }

struct OrthogonalityResidual {
    double on_surface = 0; // sup distance of I from S
    double normal = 0;     // sup |<nu, N_S>|

    [[nodiscard]] double max() const noexcept { return std::max(on_surface, normal); }
};

inline OrthogonalityResidual orthogonality(const SurfaceGeometry& geom, const SupportSurface& S) {
    const std::size_t row = require_boundary_row(geom.grid);
    OrthogonalityResidual r;
    for (std::size_t i = 0; i < geom.grid.nx(); ++i) {
        const auto& q = geom.at(i, row);
        r.on_surface = std::max(r.on_surface, S.on_surface(q.jet.f));
        r.normal = std::max(r.normal, std::abs(dot(q.nu, S.normal(q.jet.f))));
    }
    return r;
}

inline void require_orthogonal(const SurfaceGeometry& geom, const SupportSurface& S, double tol) {
    const auto o = orthogonality(geom, S);
    if (o.max() > tol)
        throw Error(ErrorKind::not_orthogonal,
                    "surface does not meet " + S.describe() + " orthogonally (residual " + std::to_string(o.max()) + ")");
}

// ---------------------------------------------------------------------------
// Free boundary residuals
// ---------------------------------------------------------------------------

struct FreeBoundaryResiduals {
    std::vector<double> x, dH_deta;
    std::vector<double> willmore; // dH/deta + h^S(nu,nu) H
    std::vector<double> navier;   // H
    std::vector<double> l2;       // dH/deta + h^S(nu,nu) h(eta,eta) - d_s[h^S(nu, d_s f)]
    std::vector<double> thomsen;  // dH/deta + h^S(nu,nu)(h(eta,eta) - h(tau,tau)) - d_s[h^S(nu, d_s f)]
    double sup_willmore = 0, sup_navier = 0, sup_l2 = 0, sup_thomsen = 0;
};

// The orthogonal-contact check applies to plane and sphere supports; for the line only the
// Navier residual is meaningful.
inline FreeBoundaryResiduals free_bc_residuals(const SurfaceGeometry& geom, const SupportSurface& S,
                                               double orth_tol = 1e-6) {
    const ParamGrid& grid = geom.grid;
    const std::size_t row = require_boundary_row(grid);
    if (S.kind != SupportSurface::Kind::line) require_orthogonal(geom, S, orth_tol);
    const auto H = row_gradient(grid, geom.H(), row);
    std::vector<double> q(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const auto& n = geom.at(i, row);
        q[i] = S.h_S(n.jet.f, n.nu, n.jet.fx / std::sqrt(n.g.xx));
    }
    FreeBoundaryResiduals r;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const auto& n = geom.at(i, row);
        const Vec2 eta = conormal_at(n.g);
        const double dH = eta.x * H.dx[i] + eta.y * H.dy[i];
        const double hSnn = S.h_S(n.jet.f, n.nu, n.nu);
        const double ds_q = fd::first(q.data(), q.size(), i, 1, grid.hx()) / std::sqrt(n.g.xx);
        const double h_ee = apply(n.h, eta, eta), h_tt = n.h.xx / n.g.xx;
        r.x.push_back(grid.x(i));
        r.dH_deta.push_back(dH);
        r.willmore.push_back(dH + hSnn * n.H);
        r.navier.push_back(n.H);
        r.l2.push_back(dH + hSnn * h_ee - ds_q);
        r.thomsen.push_back(dH + hSnn * (h_ee - h_tt) - ds_q);
    }
    r.sup_willmore = sup_abs(r.willmore);
    r.sup_navier = sup_abs(r.navier);
    r.sup_l2 = sup_abs(r.l2);
    r.sup_thomsen = sup_abs(r.thomsen);
    return r;
}

// ---------------------------------------------------------------------------
// Gauss-Bonnet relations along I
// ---------------------------------------------------------------------------

struct GeodesicCurvature {
    std::vector<double> intrinsic; // Gamma^2_11 sqrt(det g / g11) / g11
    std::vector<double> ambient;   // <f_xx, Df eta> / g11
    std::vector<double> support;   // h^S(d_s f, d_s f)
    double int_intrinsic = 0, int_ambient = 0, int_support = 0;
};

inline GeodesicCurvature geodesic_curvature(const SurfaceGeometry& geom, const SupportSurface& S) {
    const std::size_t row = require_boundary_row(geom.grid);
    GeodesicCurvature k;
    for (std::size_t i = 0; i < geom.grid.nx(); ++i) {
        const auto& q = geom.at(i, row);
        const auto [G1, G2] = christoffel(q);
        const Vec2 eta = conormal_at(q.g);
        const Vec3 t = q.jet.fx / std::sqrt(q.g.xx);
        k.intrinsic.push_back(G2.xx * std::sqrt(q.det_g / q.g.xx) / q.g.xx);
        k.ambient.push_back(dot(q.jet.fxx, push_forward(q.jet, eta)) / q.g.xx);
        k.support.push_back(S.h_S(q.jet.f, t, t));
    }
    k.int_intrinsic = line_integral(geom, row, k.intrinsic);
    k.int_ambient = line_integral(geom, row, k.ambient);
    k.int_support = line_integral(geom, row, k.support);
    return k;
}

struct EnergyReport {
    double W = 0, E = 0, T = 0, area = 0;
    double boundary_geodesic_integral = 0; // intrinsic route
    double boundary_geodesic_ambient = 0;
    double boundary_geodesic_support = 0;
    std::optional<int> euler_char; // absent: chart only, no topological relation asserted
    double orthogonality = 0;
    std::array<double, 3> identity_residuals{}; // E-T-W, E-2W-int k+2pi chi, T-W-int k+2pi chi
};

// chi is the Euler characteristic of the surface the chart closes up to; the boundary
// integral runs along the row y = 0, the only boundary of the gallery charts.
inline EnergyReport gauss_bonnet_relations(const SurfaceGeometry& geom, const SupportSurface& S,
                                           std::optional<int> chi, double orth_tol = 1e-6) {
    const auto e = energies(geom);
    EnergyReport r;
    r.W = e.W;
    r.E = e.E;
    r.T = e.T;
    r.area = e.area;
    r.euler_char = chi;
    r.identity_residuals[0] = e.E - e.T - e.W;
    if (!chi) return r;
    r.orthogonality = orthogonality(geom, S).max();
    if (r.orthogonality > orth_tol)
        throw Error(ErrorKind::not_orthogonal, "surface does not meet " + S.describe() + " orthogonally (residual " +
                                                   std::to_string(r.orthogonality) + ")");
    const auto k = geodesic_curvature(geom, S);
    r.boundary_geodesic_integral = k.int_intrinsic;
    r.boundary_geodesic_ambient = k.int_ambient;
    r.boundary_geodesic_support = k.int_support;
    const double topo = 2.0 * pi * static_cast<double>(*chi);
    r.identity_residuals[1] = e.E - 2.0 * e.W - k.int_intrinsic + topo;
    r.identity_residuals[2] = e.T - e.W - k.int_intrinsic + topo;
    return r;
}

// ---------------------------------------------------------------------------
// Admissibility and the trace operator L_f
// ---------------------------------------------------------------------------

struct AdmissibilityReport {
    double a_resid = 0, b_resid = 0;
    std::optional<double> classic_resid; // d phi_n / d eta + phi_n h^S(nu, nu), curved S only
    bool pass = false;
};

inline std::vector<Jet> field_jets(const ParamGrid& grid, const VariationField& phi) { return variation_jets(grid, phi); }

inline AdmissibilityReport admissibility(const SurfaceGeometry& geom, const VariationField& phi, ReflectionKind kind,
                                         double tol = 1e-8, std::optional<SupportSurface> S = std::nullopt) {
    const ParamGrid& grid = geom.grid;
    const std::size_t row = require_boundary_row(grid);
    const auto pj = field_jets(grid, phi);
    AdmissibilityReport r;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::size_t n = grid.index(i, row);
        const auto& q = geom.nodes[n];
        if (kind == ReflectionKind::plane) {
            const Vec2 eta = conormal_at(q.g);
            r.a_resid = std::max(r.a_resid, std::abs(phi.values[n].z));
            r.b_resid = std::max(r.b_resid, std::abs(dot(push_forward(pj[n], eta), q.nu)));
        } else {
            r.a_resid = std::max(r.a_resid, std::abs(phi.values[n].x));
            r.b_resid = std::max(r.b_resid, std::abs(phi.values[n].y));
        }
    }
    if (S && S->kind == SupportSurface::Kind::sphere) {
        const auto pn = row_gradient(grid, phi.normal_part, row);
        double m = 0;
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const auto& q = geom.at(i, row);
            const Vec2 eta = conormal_at(q.g);
            m = std::max(m, std::abs(eta.x * pn.dx[i] + eta.y * pn.dy[i] +
                                     pn.value[i] * S->h_S(q.jet.f, q.nu, q.nu)));
        }
        r.classic_resid = m;
    }
    r.pass = r.a_resid < tol && r.b_resid < tol;
    return r;
}

struct TracePair {
    std::vector<double> x, a, b;
};

inline std::vector<double> boundary_conformal_factor(const SurfaceGeometry& geom, std::size_t row) {
    std::vector<double> u;
    for (std::size_t i = 0; i < geom.grid.nx(); ++i) {
        const auto& q = geom.at(i, row);
        if (!q.u_conf) throw Error(ErrorKind::not_conformal, "chart not conformal on I", geom.grid.index(i, row));
        u.push_back(*q.u_conf);
    }
    return u;
}

// L_f phi = (<phi, e3>, e^{-u} <d_y phi, nu>) on I.
inline TracePair lf_operator(const SurfaceGeometry& geom, const VariationField& phi) {
    const ParamGrid& grid = geom.grid;
    const std::size_t row = require_boundary_row(grid);
    const auto u = boundary_conformal_factor(geom, row);
    const auto pj = field_jets(grid, phi);
    TracePair t;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const std::size_t n = grid.index(i, row);
        t.x.push_back(grid.x(i));
        t.a.push_back(phi.values[n].z);
        t.b.push_back(std::exp(-u[i]) * dot(pj[n].fy, geom.nodes[n].nu));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Phi_f(a, b) = chi (BH(0, e^u b nu_1), BH(0, e^u b nu_2), BH(a, 0)), the right inverse of
// L_f for data supported in K = [-pi/2, pi/2].
// ---------------------------------------------------------------------------

struct ExtensionOptions {
    std::size_t modes = 128;
    double support_tol = 1e-12;
};

inline VariationField phi_extension(const SurfaceGeometry& geom, std::span<const double> a, std::span<const double> b,
                                    const ExtensionOptions& opt = {}) {
    const ParamGrid& grid = geom.grid;
    const std::size_t row = require_boundary_row(grid);
    if (row != 0 || grid.x_range().lo != -pi || grid.x_range().hi != pi)
        throw Error(ErrorKind::invalid_grid, "extension needs the grid [-pi, pi] x [0, y_max]");
    if (a.size() != grid.nx() || b.size() != grid.nx())
        throw Error(ErrorKind::invalid_argument, "boundary data size does not match grid");
    for (std::size_t i = 0; i < grid.nx(); ++i)
        if (std::abs(grid.x(i)) > pi / 2 + 1e-12 &&
            (std::abs(a[i]) > opt.support_tol || std::abs(b[i]) > opt.support_tol))
            throw Error(ErrorKind::support_violation, "boundary data nonzero outside [-pi/2, pi/2]",
                        grid.index(i, row));
    const auto u = boundary_conformal_factor(geom, row);
    std::vector<double> psi1(grid.nx()), psi2(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const auto& q = geom.at(i, row);
        psi1[i] = std::exp(u[i]) * b[i] * q.nu.x;
        psi2[i] = std::exp(u[i]) * b[i] * q.nu.y;
    }
    const auto fa = fourier_decompose(a, opt.modes);
    const auto f1 = fourier_decompose(psi1, opt.modes);
    const auto f2 = fourier_decompose(psi2, opt.modes);
    const auto zero = FourierData::zero(opt.modes);
    const auto j1 = bh_jets(zero, f1, grid);
    const auto j2 = bh_jets(zero, f2, grid);
    const auto j3 = bh_jets(fa, zero, grid);
    std::vector<Jet> jets(grid.size());
    std::vector<Vec3> values(grid.size());
    for (std::size_t j = 0; j < grid.ny(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const std::size_t n = grid.index(i, j);
            const ScalarJet c = cutoff_jet(grid.x(i), grid.y(j));
            jets[n] = assemble(c * j1[n], c * j2[n], c * j3[n]);
            values[n] = jets[n].f;
        }
    return make_variation(geom, std::move(values), std::move(jets));
}

} // namespace wfb
