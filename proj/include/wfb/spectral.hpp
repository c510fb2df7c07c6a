#pragma once

#include "grid.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <functional>
#include <limits>

namespace wfb {

// ---------------------------------------------------------------------------
// Fourier data on I = (-pi, pi):  phi ~ a0 + sum_k (a_k cos kx + b_k sin kx)
// ---------------------------------------------------------------------------

struct FourierData {
    std::size_t K = 0;
    double a0 = 0;
    std::vector<double> a, b; // index k - 1
    bool alias_warning = false;

    [[nodiscard]] double ak(std::size_t k) const { return k == 0 ? a0 : a[k - 1]; }
    [[nodiscard]] double bk(std::size_t k) const { return k == 0 ? 0.0 : b[k - 1]; }

    // ||phi_k||^2 over I
    [[nodiscard]] double mode_norm2(std::size_t k) const {
        if (k == 0) return 2.0 * pi * a0 * a0;
        return pi * (a[k - 1] * a[k - 1] + b[k - 1] * b[k - 1]);
    }

    [[nodiscard]] double total_norm2() const {
        double s = 0;
        for (std::size_t k = 0; k <= K; ++k) s += mode_norm2(k);
        return s;
    }

    [[nodiscard]] double evaluate(double x) const {
        double s = a0;
        for (std::size_t k = 1; k <= K; ++k) {
            const double kx = static_cast<double>(k) * x;
            s += a[k - 1] * std::cos(kx) + b[k - 1] * std::sin(kx);
        }
        return s;
    }

    static FourierData zero(std::size_t K) { return {K, 0.0, std::vector<double>(K, 0.0), std::vector<double>(K, 0.0)}; }
};

// i-th derivative, mode by mode.
inline FourierData derivative(const FourierData& f, int order = 1) {
    FourierData d = FourierData::zero(f.K);
    for (std::size_t k = 1; k <= f.K; ++k) {
        double a = f.a[k - 1], b = f.b[k - 1];
        const double kk = static_cast<double>(k);
        for (int o = 0; o < order; ++o) {
            const double na = kk * b, nb = -kk * a;
            a = na;
            b = nb;
        }
        d.a[k - 1] = a;
        d.b[k - 1] = b;
    }
    return d;
}

// Trapezoid projection of samples at nx uniform nodes over [-pi, pi] (both endpoints
// included and averaged); requires K <= nx/2 - 1.
inline FourierData fourier_decompose(std::span<const double> samples, std::size_t K, double alias_threshold = 1e-10) {
    const std::size_t nx = samples.size();
    if (nx < 5) throw Error(ErrorKind::invalid_grid, "too few samples");
    if (K + 1 > nx / 2) throw Error(ErrorKind::invalid_argument, "K exceeds nx/2 - 1");
    const std::size_t N = nx - 1;
    std::vector<double> v(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(N));
    v[0] = 0.5 * (samples[0] + samples[N]);
    const double h = 2.0 * pi / static_cast<double>(N);
    FourierData f = FourierData::zero(K);
    std::vector<double> tc(N), ts(N);
    f.a0 = pairwise_sum(v) / static_cast<double>(N);
    for (std::size_t k = 1; k <= K; ++k) {
        for (std::size_t i = 0; i < N; ++i) {
            // angle reduced modulo the period keeps the argument small for large k
            const std::size_t m = (k * i) % N;
            const double ang = static_cast<double>(k) * (-pi) + h * static_cast<double>(m);
            tc[i] = v[i] * std::cos(ang);
            ts[i] = v[i] * std::sin(ang);
        }
        f.a[k - 1] = 2.0 * pairwise_sum(tc) / static_cast<double>(N);
        f.b[k - 1] = 2.0 * pairwise_sum(ts) / static_cast<double>(N);
    }
    const double total = f.total_norm2();
    f.alias_warning = total > 0 && f.mode_norm2(K) > alias_threshold * total;
    return f;
}

inline FourierData fourier_decompose(const std::function<double(double)>& phi, std::size_t nx, std::size_t K) {
    ParamGrid g(nx, 5, default_x_range, half_strip_y);
    std::vector<double> s(nx);
    for (std::size_t i = 0; i < nx; ++i) s[i] = phi(g.x(i));
    return fourier_decompose(s, K);
}

// ---------------------------------------------------------------------------
// Sobolev quantities:  [phi]_s^2 = sum_{k>=1} k^{2s} ||phi_k||^2,
// ||phi||_{W^{s,2}}^2 = ||phi_0||^2 + [phi]_s^2
// ---------------------------------------------------------------------------

inline double sobolev_seminorm2(const FourierData& f, double s) {
    double t = 0;
    for (std::size_t k = 1; k <= f.K; ++k) t += std::pow(static_cast<double>(k), 2.0 * s) * f.mode_norm2(k);
    return t;
}

inline double sobolev_seminorm(const FourierData& f, double s) { return std::sqrt(sobolev_seminorm2(f, s)); }

inline double sobolev_norm(const FourierData& f, double s) {
    return std::sqrt(f.mode_norm2(0) + sobolev_seminorm2(f, s));
}

// ---------------------------------------------------------------------------
// Fields over I x [0, y_max]
// ---------------------------------------------------------------------------

struct HalfplaneField {
    ParamGrid grid;
    std::vector<double> values;
};

inline HalfplaneField harmonic_extension_series(const FourierData& f, const ParamGrid& grid) {
    HalfplaneField out{grid, std::vector<double>(grid.size())};
    std::vector<double> ck(f.K * grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i)
        for (std::size_t k = 1; k <= f.K; ++k) {
            const double kx = static_cast<double>(k) * grid.x(i);
            ck[i * f.K + k - 1] = f.a[k - 1] * std::cos(kx) + f.b[k - 1] * std::sin(kx);
        }
    for (std::size_t j = 0; j < grid.ny(); ++j) {
        const double y = grid.y(j);
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            double s = f.a0;
            for (std::size_t k = 1; k <= f.K; ++k) s += ck[i * f.K + k - 1] * std::exp(-static_cast<double>(k) * y);
            out.values[grid.index(i, j)] = s;
        }
    }
    return out;
}

inline double harmonic_extension_series(const FourierData& f, double x, double y) {
    double s = f.a0;
    for (std::size_t k = 1; k <= f.K; ++k) {
        const double kk = static_cast<double>(k);
        s += (f.a[k - 1] * std::cos(kk * x) + f.b[k - 1] * std::sin(kk * x)) * std::exp(-kk * y);
    }
    return s;
}

// Periodic Poisson kernel of the half-strip, normalised to unit mass on I:
//   G(x, y) = sinh y / (2 pi (cosh y - cos x)),  sum over all k of e^{-|k| y} e^{ikx} / 2pi.
inline double poisson_kernel(double x, double y) {
    const double sy = std::sinh(0.5 * y), sx = std::sin(0.5 * x);
    const double denom = 2.0 * (sy * sy + sx * sx); // cosh y - cos x without cancellation
    return std::sinh(y) / (2.0 * pi * denom);
}

struct KernelOptions {
    double tol = 1e-13;
    unsigned max_depth = 18;
    double series_below = 0.05;
};

namespace detail {

template <class F>
double adaptive_integral(F&& f, double lo, double hi, const KernelOptions& opt) {
    double err = 0, l1 = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, opt.max_depth, opt.tol,
                                                                                   &err, &l1);
    if (!std::isfinite(v) || err > 1e3 * opt.tol * std::max(1.0, l1))
        throw Error(ErrorKind::quadrature_fail,
                    "adaptive quadrature did not converge (error estimate " + std::to_string(err) + ")");
    return v;
}

} // namespace detail

inline double kernel_mass(double y, const KernelOptions& opt = {}) {
    return detail::adaptive_integral([y](double x) { return poisson_kernel(x, y); }, -pi, 0.0, opt) +
           detail::adaptive_integral([y](double x) { return poisson_kernel(x, y); }, 0.0, pi, opt);
}

// Hphi(x, y) = int_I G(x - x', y) phi(x') dx'. Below opt.series_below the series in
// `fallback` is used instead (the kernel concentrates as y -> 0); without a fallback the
// quadrature is attempted and may fail.
inline double harmonic_extension_kernel(const std::function<double(double)>& phi, double x, double y,
                                        const FourierData* fallback = nullptr, const KernelOptions& opt = {}) {
    if (y < opt.series_below && fallback) return harmonic_extension_series(*fallback, x, y);
    if (!(y > 0)) throw Error(ErrorKind::quadrature_fail, "kernel route needs y > 0");
    auto integrand = [&](double t) { return poisson_kernel(x - t, y) * phi(t); };
    // split at the kernel peak and at the edges of K where compactly supported data bend
    std::vector<double> cuts{-pi, -pi / 2, pi / 2, pi};
    if (x > -pi && x < pi && std::abs(std::abs(x) - pi / 2) > 1e-12) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    double s = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        if (cuts[k + 1] > cuts[k]) s += detail::adaptive_integral(integrand, cuts[k], cuts[k + 1], opt);
    return s;
}

// ---------------------------------------------------------------------------
// Biharmonic extension  u = Hphi - y d_y(Hphi) + y Hpsi
// Mode k >= 1 of phi carries (1 + ky) e^{-ky}, of psi carries y e^{-ky}; the k = 0 modes
// carry 1 and y.
// ---------------------------------------------------------------------------

namespace detail {

struct ModeColumn {
    // c(x), c'(x) per mode; c'' = -k^2 c
    std::vector<double> pc, pd, qc, qd;
};

inline ModeColumn mode_column(const FourierData& phi, const FourierData& psi, double x) {
    const std::size_t K = phi.K;
    ModeColumn m{std::vector<double>(K), std::vector<double>(K), std::vector<double>(K), std::vector<double>(K)};
    for (std::size_t k = 1; k <= K; ++k) {
        const double kk = static_cast<double>(k), c = std::cos(kk * x), s = std::sin(kk * x);
        m.pc[k - 1] = phi.a[k - 1] * c + phi.b[k - 1] * s;
        m.pd[k - 1] = kk * (-phi.a[k - 1] * s + phi.b[k - 1] * c);
        m.qc[k - 1] = psi.a[k - 1] * c + psi.b[k - 1] * s;
        m.qd[k - 1] = kk * (-psi.a[k - 1] * s + psi.b[k - 1] * c);
    }
    return m;
}

struct ModeRow {
    std::vector<double> A, A1, A2, B, B1, B2;
};

inline ModeRow mode_row(std::size_t K, double y) {
    ModeRow r{std::vector<double>(K), std::vector<double>(K), std::vector<double>(K),
              std::vector<double>(K), std::vector<double>(K), std::vector<double>(K)};
    for (std::size_t k = 1; k <= K; ++k) {
        const double kk = static_cast<double>(k), e = std::exp(-kk * y), ky = kk * y;
        r.A[k - 1] = (1.0 + ky) * e;
        r.A1[k - 1] = -kk * ky * e;
        r.A2[k - 1] = kk * kk * (ky - 1.0) * e;
        r.B[k - 1] = y * e;
        r.B1[k - 1] = (1.0 - ky) * e;
        r.B2[k - 1] = kk * (ky - 2.0) * e;
    }
    return r;
}

inline ScalarJet bh_combine(const FourierData& phi, const FourierData& psi, const ModeColumn& c, const ModeRow& r,
                            double y) {
    ScalarJet u{phi.a0 + y * psi.a0, 0.0, psi.a0, 0.0, 0.0, 0.0};
    for (std::size_t m = 0; m < phi.K; ++m) {
        const double kk = static_cast<double>(m + 1), k2 = kk * kk;
        u.v += c.pc[m] * r.A[m] + c.qc[m] * r.B[m];
        u.vx += c.pd[m] * r.A[m] + c.qd[m] * r.B[m];
        u.vy += c.pc[m] * r.A1[m] + c.qc[m] * r.B1[m];
        u.vxx += -k2 * (c.pc[m] * r.A[m] + c.qc[m] * r.B[m]);
        u.vxy += c.pd[m] * r.A1[m] + c.qd[m] * r.B1[m];
        u.vyy += c.pc[m] * r.A2[m] + c.qc[m] * r.B2[m];
    }
    return u;
}

inline void require_same_order(const FourierData& phi, const FourierData& psi) {
    if (phi.K != psi.K) throw Error(ErrorKind::invalid_argument, "phi and psi truncated at different orders");
}

} // namespace detail

inline ScalarJet bh_jet(const FourierData& phi, const FourierData& psi, double x, double y) {
    detail::require_same_order(phi, psi);
    return detail::bh_combine(phi, psi, detail::mode_column(phi, psi, x), detail::mode_row(phi.K, y), y);
}

inline std::vector<ScalarJet> bh_jets(const FourierData& phi, const FourierData& psi, const ParamGrid& grid) {
    detail::require_same_order(phi, psi);
    std::vector<detail::ModeColumn> cols;
    cols.reserve(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) cols.push_back(detail::mode_column(phi, psi, grid.x(i)));
    std::vector<ScalarJet> out(grid.size());
    for (std::size_t j = 0; j < grid.ny(); ++j) {
        const auto row = detail::mode_row(phi.K, grid.y(j));
        for (std::size_t i = 0; i < grid.nx(); ++i)
            out[grid.index(i, j)] = detail::bh_combine(phi, psi, cols[i], row, grid.y(j));
    }
    return out;
}

// Largest |value| of the reconstructed series on |x| in (pi/2, pi].
inline double outside_support(const FourierData& f, std::size_t samples = 257) {
    double m = 0;
    for (std::size_t i = 1; i <= samples; ++i) {
        const double x = pi / 2 + (pi / 2) * static_cast<double>(i) / static_cast<double>(samples);
        m = std::max({m, std::abs(f.evaluate(x)), std::abs(f.evaluate(-x))});
    }
    return m;
}

inline HalfplaneField biharmonic_extension(const FourierData& phi, const FourierData& psi, const ParamGrid& grid,
                                           std::optional<double> support_tol = std::nullopt) {
    if (support_tol) {
        const double m = std::max(outside_support(phi), outside_support(psi));
        if (m > *support_tol)
            throw Error(ErrorKind::support_violation,
                        "boundary data of size " + std::to_string(m) + " outside [-pi/2, pi/2]");
    }
    const auto jets = bh_jets(phi, psi, grid);
    HalfplaneField out{grid, std::vector<double>(grid.size())};
    for (std::size_t n = 0; n < grid.size(); ++n) out.values[n] = jets[n].v;
    return out;
}

// ---------------------------------------------------------------------------
// Cutoff: chi(x, y) = S((0.9 pi - |x|) / (0.4 pi)) S((0.9 - y) / 0.4), with
// S(t) = t^5 (126 - 420 t + 540 t^2 - 315 t^3 + 70 t^4) on [0, 1], the C^4 smoothstep.
// chi = 1 on [-pi/2, pi/2] x [0, 1/2] and 0 for |x| >= 0.9 pi or y >= 0.9.
// ---------------------------------------------------------------------------

struct Smoothstep {
    double v, d1, d2;
};

inline Smoothstep smoothstep(double t) {
    if (t <= 0) return {0, 0, 0};
    if (t >= 1) return {1, 0, 0};
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2, u = 1.0 - t;
    const double u3 = u * u * u, u4 = u3 * u;
    return {t4 * t * (126.0 - 420.0 * t + 540.0 * t2 - 315.0 * t3 + 70.0 * t4), 630.0 * t4 * u4,
            2520.0 * t3 * u3 * (1.0 - 2.0 * t)};
}

inline ScalarJet cutoff_jet(double x, double y) {
    const double wx = 0.4 * pi, wy = 0.4;
    const double sgn = x < 0 ? -1.0 : 1.0;
    const Smoothstep sx = smoothstep((0.9 * pi - std::abs(x)) / wx);
    const Smoothstep sy = y <= 0 ? Smoothstep{1, 0, 0} : smoothstep((0.9 - y) / wy);
    const double cx = sx.v, cx1 = -sgn * sx.d1 / wx, cx2 = sx.d2 / (wx * wx);
    const double cy = sy.v, cy1 = -sy.d1 / wy, cy2 = sy.d2 / (wy * wy);
    return {cx * cy, cx1 * cy, cx * cy1, cx2 * cy, cx1 * cy1, cx * cy2};
}

inline HalfplaneField apply_cutoff(const HalfplaneField& u) {
    HalfplaneField out = u;
    for (std::size_t j = 0; j < u.grid.ny(); ++j)
        for (std::size_t i = 0; i < u.grid.nx(); ++i)
            out.values[u.grid.index(i, j)] *= cutoff_jet(u.grid.x(i), u.grid.y(j)).v;
    return out;
}

// ---------------------------------------------------------------------------
// L^2 identity: || sum_k k^s phi_k(x) e^{-ky} ||^2_{L^2(I x (0, inf))} = 1/2 [phi]^2_{s - 1/2}
// ---------------------------------------------------------------------------

struct L2IdentityReport {
    std::vector<double> mode_residual; // relative, per mode k >= 1 with nonzero energy
    double max_mode_residual = 0;
    double lhs_field = 0;   // two-dimensional quadrature of the whole sum
    double rhs = 0;
    double field_residual = 0; // relative
};

inline L2IdentityReport l2_identity_check(const FourierData& f, double s, const KernelOptions& opt = {}) {
    L2IdentityReport r;
    // mode by mode: the y-integral by quadrature against the closed form
    for (std::size_t k = 1; k <= f.K; ++k) {
        const double n2 = f.mode_norm2(k);
        if (n2 == 0) {
            r.mode_residual.push_back(0);
            continue;
        }
        const double kk = static_cast<double>(k), w = std::pow(kk, 2.0 * s) * n2;
        const double ymax = 40.0 / kk;
        const double lhs = w * (detail::adaptive_integral([kk](double y) { return std::exp(-2.0 * kk * y); }, 0.0,
                                                          ymax, opt) +
                                std::exp(-2.0 * kk * ymax) / (2.0 * kk));
        const double rhs = 0.5 * std::pow(kk, 2.0 * s - 1.0) * n2;
        r.mode_residual.push_back(std::abs(lhs - rhs) / rhs);
        r.max_mode_residual = std::max(r.max_mode_residual, r.mode_residual.back());
    }
    // whole sum: periodic trapezoid in x (exact for the band-limited square), adaptive in y
    const std::size_t M = 4 * f.K + 4;
    std::vector<std::vector<double>> tab(M, std::vector<double>(f.K));
    for (std::size_t i = 0; i < M; ++i) {
        const double x = -pi + 2.0 * pi * static_cast<double>(i) / static_cast<double>(M);
        for (std::size_t k = 1; k <= f.K; ++k) {
            const double kk = static_cast<double>(k);
            tab[i][k - 1] = std::pow(kk, s) * (f.a[k - 1] * std::cos(kk * x) + f.b[k - 1] * std::sin(kk * x));
        }
    }
    auto slice = [&](double y) {
        std::vector<double> sq(M);
        for (std::size_t i = 0; i < M; ++i) {
            double v = 0;
            for (std::size_t k = 1; k <= f.K; ++k) v += tab[i][k - 1] * std::exp(-static_cast<double>(k) * y);
            sq[i] = v * v;
        }
        return pairwise_sum(sq) * 2.0 * pi / static_cast<double>(M);
    };
    KernelOptions loose = opt;
    loose.tol = 1e-12;
    r.lhs_field = detail::adaptive_integral(slice, 0.0, 1.0, loose) +
                  detail::adaptive_integral(slice, 1.0, 60.0, loose);
    r.rhs = 0.5 * sobolev_seminorm2(f, s - 0.5);
    r.field_residual = r.rhs > 0 ? std::abs(r.lhs_field - r.rhs) / r.rhs : std::abs(r.lhs_field);
    return r;
}

// ---------------------------------------------------------------------------
// Boundary integration by parts at y = 0:
//   int_I (phi' psi' - phi'' psi) dx = 2 sum_k k^2 <phi_k, psi_k>
// ---------------------------------------------------------------------------

inline double ibp_boundary_modes(const FourierData& phi, const FourierData& psi) {
    double s = 0;
    for (std::size_t k = 1; k <= std::min(phi.K, psi.K); ++k) {
        const double kk = static_cast<double>(k);
        s += kk * kk * pi * (phi.a[k - 1] * psi.a[k - 1] + phi.b[k - 1] * psi.b[k - 1]);
    }
    return 2.0 * s;
}

// Periodic trapezoid over n nodes.
inline double periodic_integral(const std::function<double(double)>& fn, std::size_t n = 1024) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = fn(-pi + 2.0 * pi * static_cast<double>(i) / static_cast<double>(n));
    return pairwise_sum(v) * 2.0 * pi / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Empirical ratios for the extension estimates. No constant is asserted.
// ---------------------------------------------------------------------------

struct EstimateRow {
    std::string name;
    double c1_ratio = 0;       // ||u||_C1 / (||phi||_W1inf + ||psi||_inf)
    double cauchy_ratio = 0;   // sup_y y |D Hphi| / ||phi||_inf
    double boundary_ratio = 0; // |int (phi' psi' - phi'' psi)| / (2 [phi]_{3/2} [psi]_{1/2})
    double dirichlet_ratio = 0; // ||D Hphi||_{L2} / [phi]_{1/2}
};

struct EstimateAudit {
    std::vector<EstimateRow> rows;
    EstimateRow max;
};

struct EstimateCase {
    std::string name;
    FourierData phi, psi;
};

inline EstimateAudit estimate_audit(const std::vector<EstimateCase>& cases, std::size_t nx = 257, std::size_t ny = 129,
                                    double y_far = 12.0) {
    EstimateAudit audit;
    audit.max.name = "max";
    const ParamGrid strip(nx, ny, default_x_range, half_strip_y);
    const ParamGrid far(nx, 4 * ny + 1, default_x_range, Interval{0.0, y_far});
    for (const auto& c : cases) {
        EstimateRow row;
        row.name = c.name;
        const auto u = bh_jets(c.phi, c.psi, strip);
        double u0 = 0, u1 = 0;
        for (const auto& q : u) {
            u0 = std::max(u0, std::abs(q.v));
            u1 = std::max(u1, std::hypot(q.vx, q.vy));
        }
        const auto dphi = derivative(c.phi);
        double p0 = 0, p1 = 0, q0 = 0;
        for (std::size_t i = 0; i < strip.nx(); ++i) {
            p0 = std::max(p0, std::abs(c.phi.evaluate(strip.x(i))));
            p1 = std::max(p1, std::abs(dphi.evaluate(strip.x(i))));
            q0 = std::max(q0, std::abs(c.psi.evaluate(strip.x(i))));
        }
        if (p0 + p1 + q0 > 0) row.c1_ratio = (u0 + u1) / (p0 + p1 + q0);

        // gradient of Hphi on I x [0, y_far], mode by mode
        double cauchy = 0;
        std::vector<double> dir(far.size());
        for (std::size_t j = 0; j < far.ny(); ++j) {
            const double y = far.y(j);
            for (std::size_t i = 0; i < far.nx(); ++i) {
                double hx = 0, hy = 0;
                for (std::size_t k = 1; k <= c.phi.K; ++k) {
                    const double kk = static_cast<double>(k), e = std::exp(-kk * y);
                    const double cs = std::cos(kk * far.x(i)), sn = std::sin(kk * far.x(i));
                    const double ck = c.phi.a[k - 1] * cs + c.phi.b[k - 1] * sn;
                    const double dk = kk * (-c.phi.a[k - 1] * sn + c.phi.b[k - 1] * cs);
                    hx += dk * e;
                    hy += -kk * ck * e;
                }
                if (y > 0) cauchy = std::max(cauchy, y * std::hypot(hx, hy));
                dir[far.index(i, j)] = hx * hx + hy * hy;
            }
        }
        if (p0 > 0) row.cauchy_ratio = cauchy / p0;
        const double semi_half = sobolev_seminorm(c.phi, 0.5);
        if (semi_half > 0) row.dirichlet_ratio = std::sqrt(integrate(far, dir)) / semi_half;

        const double denom = 2.0 * sobolev_seminorm(c.phi, 1.5) * sobolev_seminorm(c.psi, 0.5);
        if (denom > 0) {
            const auto d2phi = derivative(c.phi, 2);
            const auto dpsi = derivative(c.psi);
            const double lhs = periodic_integral(
                [&](double x) { return dphi.evaluate(x) * dpsi.evaluate(x) - d2phi.evaluate(x) * c.psi.evaluate(x); },
                4 * c.phi.K + 4);
            row.boundary_ratio = std::abs(lhs) / denom;
        }
        audit.max.c1_ratio = std::max(audit.max.c1_ratio, row.c1_ratio);
        audit.max.cauchy_ratio = std::max(audit.max.cauchy_ratio, row.cauchy_ratio);
        audit.max.boundary_ratio = std::max(audit.max.boundary_ratio, row.boundary_ratio);
        audit.max.dirichlet_ratio = std::max(audit.max.dirichlet_ratio, row.dirichlet_ratio);
        audit.rows.push_back(std::move(row));
    }
    return audit;
}

} // namespace wfb
