#pragma once

#include "grid.hpp"

#include <limits>
#include <string>
#include <utility>

namespace wfb {

enum class DerivativeScheme { analytic_jet, central_fd };

// Reflection across the plane z = 0 (R = diag(1,1,-1)) or the line {0} x R (S = diag(-1,-1,1)).
enum class ReflectionKind { plane, line };

inline constexpr SignMatrix reflection_matrix(ReflectionKind k) noexcept {
    return k == ReflectionKind::plane ? SignMatrix{{1, 1, -1}} : SignMatrix{{-1, -1, 1}};
}

// Sampled immersion f: grid -> R^3. When built from an analytic chart the per-node jets are
// stored alongside the positions.
struct Immersion {
    ParamGrid grid;
    std::vector<Vec3> positions;
    std::optional<std::vector<Jet>> jets;
    JetFn chart; // empty for numeric samples
    std::string name;
    std::string analytic_id;
    // Chart collapses the last row to a point (pole of a latitude chart, centre of a disk).
    bool collapsed_far_edge = false;

    [[nodiscard]] bool has_jets() const noexcept { return jets.has_value(); }
};

inline Immersion make_immersion(const ParamGrid& grid, const JetFn& chart, std::string name = {},
                                std::string analytic_id = {}) {
    Immersion f{grid, {}, sample_jets(grid, chart), chart, std::move(name), std::move(analytic_id)};
    f.positions.resize(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) f.positions[n] = (*f.jets)[n].f;
    return f;
}

inline Immersion make_immersion(const ParamGrid& grid, std::vector<Vec3> positions, std::string name = {}) {
    if (positions.size() != grid.size()) throw Error(ErrorKind::invalid_grid, "position count does not match grid");
    return Immersion{grid, std::move(positions), std::nullopt, {}, std::move(name), {}};
}

// f + t * phi, node-wise on positions and (when both carry them) on jets.
inline Immersion perturbed(const Immersion& f, std::span<const Vec3> phi, const std::vector<Jet>* phi_jets, double t) {
    Immersion out = f;
    out.chart = {};
    out.analytic_id.clear();
    for (std::size_t n = 0; n < f.positions.size(); ++n) out.positions[n] = f.positions[n] + t * phi[n];
    if (f.jets && phi_jets) {
        for (std::size_t n = 0; n < f.positions.size(); ++n) (*out.jets)[n] = (*f.jets)[n] + t * (*phi_jets)[n];
    } else {
        out.jets.reset();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise geometry
// ---------------------------------------------------------------------------

struct NodeGeometry {
    Jet jet;
    Sym2 g, inv_g;
    double det_g = 0;
    Vec3 nu;
    Sym2 h, h0;
    double H = 0;
    double h0_norm2 = 0, h_norm2 = 0;
    double K_gauss = 0;
    double area_elem = 0;
    std::optional<double> u_conf;
    bool collapsed = false;
};

inline Sym2 metric_of(const Jet& j) noexcept { return {dot(j.fx, j.fx), dot(j.fx, j.fy), dot(j.fy, j.fy)}; }

// Geometry at a node with non-degenerate metric. h_ab = <d_ab f, nu>, H = g^ab h_ab.
inline NodeGeometry node_geometry(const Jet& j, double conformal_tol = 1e-8) {
    NodeGeometry q;
    q.jet = j;
    q.g = metric_of(j);
    q.det_g = det(q.g);
    q.inv_g = inverse(q.g);
    const Vec3 n = cross(j.fx, j.fy);
    q.nu = n / norm(n);
    q.h = {dot(j.fxx, q.nu), dot(j.fxy, q.nu), dot(j.fyy, q.nu)};
    q.H = trace_with(q.inv_g, q.h);
    q.h0 = q.h - (0.5 * q.H) * q.g;
    q.h0_norm2 = contract(q.inv_g, q.h0, q.h0);
    q.h_norm2 = contract(q.inv_g, q.h, q.h);
    q.K_gauss = det(q.h) / q.det_g;
    q.area_elem = std::sqrt(q.det_g);
    if (std::abs(q.g.xx - q.g.yy) < conformal_tol * q.g.xx && std::abs(q.g.xy) < conformal_tol * q.g.xx)
        q.u_conf = 0.5 * std::log(q.g.xx);
    return q;
}

inline bool is_finite(const Jet& j) noexcept {
    return is_finite(j.f) && is_finite(j.fx) && is_finite(j.fy) && is_finite(j.fxx) && is_finite(j.fxy) &&
           is_finite(j.fyy);
}

struct GeometryOptions {
    double eps = 1e-6;             // DegenerateMetric floor: det g <= eps^2
    double conformal_tol = 1e-8;   // relative, for u_conf
    bool throw_on_degenerate = true;
};

struct SurfaceGeometry {
    ParamGrid grid;
    std::vector<NodeGeometry> nodes;
    DerivativeScheme scheme = DerivativeScheme::central_fd;

    [[nodiscard]] const NodeGeometry& at(std::size_t i, std::size_t j) const { return nodes[grid.index(i, j)]; }

    template <class Fn>
    [[nodiscard]] std::vector<double> field(Fn&& fn) const {
        std::vector<double> out(nodes.size());
        for (std::size_t n = 0; n < nodes.size(); ++n) out[n] = fn(nodes[n]);
        return out;
    }
    [[nodiscard]] std::vector<double> H() const {
        return field([](const NodeGeometry& q) { return q.H; });
    }
};

inline std::vector<Jet> immersion_jets(const Immersion& f, DerivativeScheme scheme) {
    if (scheme == DerivativeScheme::analytic_jet) {
        if (!f.jets) throw Error(ErrorKind::invalid_argument, "analytic scheme requested for a numeric immersion");
        return *f.jets;
    }
    return fd_jets(f.grid, std::span<const Vec3>(f.positions));
}

inline SurfaceGeometry compute_geometry(const Immersion& f, DerivativeScheme scheme, const GeometryOptions& opt = {}) {
    const ParamGrid& grid = f.grid;
    if (f.positions.size() != grid.size()) throw Error(ErrorKind::invalid_grid, "position count does not match grid");
    for (std::size_t n = 0; n < grid.size(); ++n)
        if (!is_finite(f.positions[n])) throw Error(ErrorKind::non_finite, "non-finite position", n);

    const auto jets = immersion_jets(f, scheme);
    SurfaceGeometry geom{grid, std::vector<NodeGeometry>(grid.size()), scheme};
    const std::size_t last = grid.ny() - 1;
    for (std::size_t j = 0; j < grid.ny(); ++j) {
        const bool collapsed_row = f.collapsed_far_edge && j == last;
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const std::size_t n = grid.index(i, j);
            const Jet& jet = jets[n];
            if (!is_finite(jet)) throw Error(ErrorKind::non_finite, "non-finite derivative", n);
            if (collapsed_row) continue;
            const double d = det(metric_of(jet));
            if (!(d > opt.eps * opt.eps)) {
                if (opt.throw_on_degenerate) throw Error(ErrorKind::degenerate_metric, "det g below floor", n);
                NodeGeometry q;
                q.jet = jet;
                q.g = metric_of(jet);
                q.det_g = std::max(d, 0.0);
                q.area_elem = std::sqrt(q.det_g);
                geom.nodes[n] = q;
                continue;
            }
            geom.nodes[n] = node_geometry(jet, opt.conformal_tol);
        }
    }
    if (f.collapsed_far_edge) {
        // Curvature data continued from the adjacent row; the node carries no area.
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            NodeGeometry q = geom.nodes[grid.index(i, last - 1)];
            q.jet = jets[grid.index(i, last)];
            q.area_elem = 0;
            q.u_conf.reset();
            q.collapsed = true;
            geom.nodes[grid.index(i, last)] = q;
        }
    }
    return geom;
}

// ---------------------------------------------------------------------------
// Reports on a computed geometry
// ---------------------------------------------------------------------------

struct ConformalityResidual {
    std::vector<double> diag;   // g11 - g22
    std::vector<double> offdiag; // g12
    double sup_diag = 0, sup_offdiag = 0;

    [[nodiscard]] double sup() const noexcept { return std::max(sup_diag, sup_offdiag); }
};

inline ConformalityResidual conformality_residual(const SurfaceGeometry& geom) {
    ConformalityResidual r;
    r.diag.reserve(geom.nodes.size());
    r.offdiag.reserve(geom.nodes.size());
    for (const auto& q : geom.nodes) {
        if (q.collapsed) {
            r.diag.push_back(0);
            r.offdiag.push_back(0);
            continue;
        }
        r.diag.push_back(q.g.xx - q.g.yy);
        r.offdiag.push_back(q.g.xy);
    }
    r.sup_diag = sup_abs(r.diag);
    r.sup_offdiag = sup_abs(r.offdiag);
    return r;
}

struct WeakImmersionCert {
    double min_det_g = 0;
    double lambda_low = 0; // 1/2 log min |f_x x f_y|
    double eps = 0;
    bool pass = false;
};

// Nodal minimum over non-collapsed nodes.
inline WeakImmersionCert weak_immersion_check(const SurfaceGeometry& geom, double eps = 1e-6) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& q : geom.nodes)
        if (!q.collapsed) m = std::min(m, q.det_g);
    WeakImmersionCert c;
    c.min_det_g = m;
    c.lambda_low = 0.5 * std::log(std::sqrt(m));
    c.eps = eps;
    c.pass = m >= eps * eps;
    return c;
}

// Divergence-form Laplace-Beltrami of a scalar field,
// (1/sqrt g) d_a (sqrt g g^ab d_b u). Collapsed nodes get 0.
inline std::vector<double> laplace_beltrami(const SurfaceGeometry& geom, std::span<const double> u) {
    const ParamGrid& grid = geom.grid;
    const auto ux = diff_x<double>(grid, u);
    const auto uy = diff_y<double>(grid, u);
    std::vector<double> fx(grid.size()), fy(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const auto& q = geom.nodes[n];
        if (q.collapsed || q.area_elem == 0) continue;
        fx[n] = q.area_elem * (q.inv_g.xx * ux[n] + q.inv_g.xy * uy[n]);
        fy[n] = q.area_elem * (q.inv_g.xy * ux[n] + q.inv_g.yy * uy[n]);
    }
    const auto dfx = diff_x<double>(grid, fx);
    const auto dfy = diff_y<double>(grid, fy);
    std::vector<double> out(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const auto& q = geom.nodes[n];
        if (q.collapsed || q.area_elem == 0) continue;
        out[n] = (dfx[n] + dfy[n]) / q.area_elem;
    }
    return out;
}

// Christoffel symbols Gamma^k_ij = g^kl <d_ij f, d_l f>, returned as (Gamma^1, Gamma^2).
inline std::pair<Sym2, Sym2> christoffel(const NodeGeometry& q) {
    const Jet& j = q.jet;
    const Sym2 low1{dot(j.fxx, j.fx), dot(j.fxy, j.fx), dot(j.fyy, j.fx)};
    const Sym2 low2{dot(j.fxx, j.fy), dot(j.fxy, j.fy), dot(j.fyy, j.fy)};
    return {q.inv_g.xx * low1 + q.inv_g.xy * low2, q.inv_g.xy * low1 + q.inv_g.yy * low2};
}

// Bounding-box diameter of the sampled positions.
inline double bbox_diameter(std::span<const Vec3> p) {
    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const auto& v : p)
        for (std::size_t k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], v[k]);
            hi[k] = std::max(hi[k], v[k]);
        }
    return norm(hi - lo);
}

} // namespace wfb
