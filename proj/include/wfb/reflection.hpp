#pragma once

#include "geometry.hpp"

#include <memory>

namespace wfb {

// ---------------------------------------------------------------------------
// Trace conditions on I for a surface over Q+ (row y = 0 first)
// ---------------------------------------------------------------------------

struct TraceReport {
    ReflectionKind kind = ReflectionKind::plane;
    // plane: sup |f3|, sup |<nu, e3>|; line: sup |f1|, sup |f2|
    double position_resid = 0, normal_resid = 0;
    // plane: (d_x f3), (d_y f1), (d_y f2); line: (d_x f1), (d_x f2), (d_y f3)
    std::array<double, 3> odd_traces{};
    double conformal_diag = 0, conformal_offdiag = 0; // |f_x|^2 - |f_y|^2, <f_x, f_y>
    double jacobian_floor = 0;                         // min |f_x x f_y|
    double scale = 0;                                  // bounding-box diameter

    // Residual gating the reflection; the normal condition is exact only with analytic jets.
    [[nodiscard]] double constraint_residual(bool include_normal) const noexcept {
        return include_normal ? std::max(position_resid, normal_resid) : position_resid;
    }
};

inline TraceReport check_constraints(const SurfaceGeometry& geom, ReflectionKind kind) {
    const ParamGrid& grid = geom.grid;
    const auto row = grid.boundary_row();
    if (!row || *row != 0) throw Error(ErrorKind::invalid_grid, "expected the half strip with y = 0 as first row");
    TraceReport r;
    r.kind = kind;
    r.jacobian_floor = std::numeric_limits<double>::infinity();
    std::vector<Vec3> pos;
    pos.reserve(grid.size());
    for (const auto& q : geom.nodes) pos.push_back(q.jet.f);
    r.scale = bbox_diameter(pos);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const auto& q = geom.at(i, 0);
        const Jet& j = q.jet;
        if (kind == ReflectionKind::plane) {
            r.position_resid = std::max(r.position_resid, std::abs(j.f.z));
            r.normal_resid = std::max(r.normal_resid, std::abs(q.nu.z));
            r.odd_traces[0] = std::max(r.odd_traces[0], std::abs(j.fx.z));
            r.odd_traces[1] = std::max(r.odd_traces[1], std::abs(j.fy.x));
            r.odd_traces[2] = std::max(r.odd_traces[2], std::abs(j.fy.y));
        } else {
            r.position_resid = std::max({r.position_resid, std::abs(j.f.x), std::abs(j.f.y)});
            r.odd_traces[0] = std::max(r.odd_traces[0], std::abs(j.fx.x));
            r.odd_traces[1] = std::max(r.odd_traces[1], std::abs(j.fx.y));
            r.odd_traces[2] = std::max(r.odd_traces[2], std::abs(j.fy.z));
        }
        r.conformal_diag = std::max(r.conformal_diag, std::abs(q.g.xx - q.g.yy));
        r.conformal_offdiag = std::max(r.conformal_offdiag, std::abs(q.g.xy));
        r.jacobian_floor = std::min(r.jacobian_floor, norm(cross(j.fx, j.fy)));
    }
    return r;
}

class ConstraintViolated : public Error {
public:
    explicit ConstraintViolated(const TraceReport& report, double residual, double tol)
        : Error(ErrorKind::constraint_violated, "trace residual " + std::to_string(residual) +
                                                    " exceeds tolerance " + std::to_string(tol)),
          report_(report) {}

    [[nodiscard]] const TraceReport& report() const noexcept { return report_; }

private:
    TraceReport report_;
};

// ---------------------------------------------------------------------------
// Reflection Q+ -> Q by exact index mirroring:
//   plane: f(x, -y) = R f(x, y),  line: f(x, -y) = S f(x, y).
// The row y = 0 is kept once, with the constrained components set to zero.
// ---------------------------------------------------------------------------

struct ReflectOptions {
    double tol_rel = 1e-8; // relative to the bounding-box diameter
};

inline Immersion reflect(const Immersion& upper, ReflectionKind kind, const ReflectOptions& opt = {}) {
    const ParamGrid& grid = upper.grid;
    const auto row = grid.boundary_row();
    if (!row || *row != 0) throw Error(ErrorKind::invalid_grid, "expected the half strip with y = 0 as first row");
    const bool analytic = upper.has_jets();
    const auto geom = compute_geometry(upper, analytic ? DerivativeScheme::analytic_jet : DerivativeScheme::central_fd);
    const auto report = check_constraints(geom, kind);
    const double tol = opt.tol_rel * report.scale;
    const double resid = report.constraint_residual(analytic);
    if (resid > tol) throw ConstraintViolated(report, resid, tol);

    const SignMatrix M = reflection_matrix(kind);
    // Components already zero are kept as sampled (signed zeros included).
    auto clamp = [kind](Vec3 p) {
        auto zero = [](double& c) {
            if (c != 0) c = 0;
        };
        if (kind == ReflectionKind::plane) zero(p.z);
        else zero(p.x), zero(p.y);
        return p;
    };
    const std::size_t nx = grid.nx(), m = grid.ny() - 1, ny = 2 * m + 1;
    std::vector<double> ys(ny);
    for (std::size_t j = 0; j <= m; ++j) {
        ys[m + j] = grid.y(j);
        ys[m - j] = -grid.y(j);
    }
    ys[m] = 0.0;
    Immersion out{ParamGrid::with_y_coordinates(nx, grid.x_range(), std::move(ys)), {}, std::nullopt, {}, {}, {}};
    out.positions.resize(out.grid.size());
    if (analytic) out.jets.emplace(out.grid.size());
    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t src = grid.index(i, j);
            const Vec3 p = j == 0 ? clamp(upper.positions[src]) : upper.positions[src];
            out.positions[out.grid.index(i, m + j)] = p;
            if (j > 0) out.positions[out.grid.index(i, m - j)] = M(p);
            if (analytic) {
                Jet jt = (*upper.jets)[src];
                jt.f = p;
                (*out.jets)[out.grid.index(i, m + j)] = jt;
                if (j > 0) (*out.jets)[out.grid.index(i, m - j)] = transform(M, jt, true);
            }
        }
    if (upper.chart) {
        JetFn c = upper.chart;
        out.chart = [c, M](double x, double y) { return y >= 0 ? c(x, y) : transform(M, c(x, -y), true); };
    }
    out.name = upper.name;
    out.analytic_id = upper.analytic_id;
    return out;
}

// Rows y >= 0 of a surface on the full strip.
inline Immersion restrict_to_upper(const Immersion& full) {
    const ParamGrid& grid = full.grid;
    const auto row = grid.boundary_row();
    if (!row) throw Error(ErrorKind::invalid_grid, "grid has no row y = 0");
    const std::size_t m = *row, ny = grid.ny() - m;
    std::vector<double> ys(grid.ys().begin() + static_cast<std::ptrdiff_t>(m), grid.ys().end());
    Immersion out{ParamGrid::with_y_coordinates(grid.nx(), grid.x_range(), std::move(ys)), {}, std::nullopt, {}, {}, {}};
    out.positions.resize(out.grid.size());
    if (full.jets) out.jets.emplace(out.grid.size());
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            out.positions[out.grid.index(i, j)] = full.positions[grid.index(i, m + j)];
            if (full.jets) (*out.jets)[out.grid.index(i, j)] = (*full.jets)[grid.index(i, m + j)];
        }
    out.chart = full.chart;
    out.name = full.name;
    out.analytic_id = full.analytic_id;
    out.collapsed_far_edge = full.collapsed_far_edge;
    return out;
}

// ---------------------------------------------------------------------------
// Parity audit on Q: f, d1 f, d11 f, d22 f even and d2 f, d12 f odd under
// (x, y) -> (x, -y) composed with M.
// ---------------------------------------------------------------------------

struct ParityTable {
    double f = 0, fx = 0, fy = 0, fxx = 0, fxy = 0, fyy = 0;

    [[nodiscard]] double max() const noexcept { return std::max({f, fx, fy, fxx, fxy, fyy}); }
};

inline ParityTable parity_audit(const Immersion& full, ReflectionKind kind, DerivativeScheme scheme) {
    const ParamGrid& grid = full.grid;
    if (!grid.y_symmetric()) throw Error(ErrorKind::invalid_grid, "parity audit needs a y-symmetric grid");
    const auto jets = immersion_jets(full, scheme);
    const SignMatrix M = reflection_matrix(kind);
    const std::size_t m = (grid.ny() - 1) / 2;
    ParityTable t;
    auto even = [&](const Vec3& lo, const Vec3& hi) { return norm(lo - M(hi)); };
    auto odd = [&](const Vec3& lo, const Vec3& hi) { return norm(lo + M(hi)); };
    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            const Jet& a = jets[grid.index(i, m - j)];
            const Jet& b = jets[grid.index(i, m + j)];
            t.f = std::max(t.f, even(a.f, b.f));
            t.fx = std::max(t.fx, even(a.fx, b.fx));
            t.fy = std::max(t.fy, odd(a.fy, b.fy));
            t.fxx = std::max(t.fxx, even(a.fxx, b.fxx));
            t.fxy = std::max(t.fxy, odd(a.fxy, b.fxy));
            t.fyy = std::max(t.fyy, even(a.fyy, b.fyy));
        }
    return t;
}

struct ConformalityComparison {
    double full = 0, upper = 0;
};

// Conformality residual sup over Q and over its rows y >= 0.
inline ConformalityComparison conformality_preserved(const SurfaceGeometry& geom) {
    ConformalityComparison c;
    for (std::size_t j = 0; j < geom.grid.ny(); ++j)
        for (std::size_t i = 0; i < geom.grid.nx(); ++i) {
            const auto& q = geom.at(i, j);
            const double r = std::max(std::abs(q.g.xx - q.g.yy), std::abs(q.g.xy));
            c.full = std::max(c.full, r);
            if (geom.grid.y(j) >= 0) c.upper = std::max(c.upper, r);
        }
    return c;
}

} // namespace wfb
