#include "wfb/gallery.hpp"

#include <gtest/gtest.h>

using namespace wfb;

namespace {

// Graph u = 0.3 x y + 0.2 x^2 - 0.1 y^3 over a small square; g12 = u_x u_y is not zero,
// so nothing conformal is assumed.
struct Graph {
    static double u(double x, double y) { return 0.3 * x * y + 0.2 * x * x - 0.1 * y * y * y; }
    static double ux(double x, double y) { return 0.3 * y + 0.4 * x; }
    static double uy(double x, double y) { return 0.3 * x - 0.3 * y * y; }
    static constexpr double uxx = 0.4, uxy = 0.3;
    static double uyy(double, double y) { return -0.6 * y; }

    static Jet jet(double x, double y) {
        return {{x, y, u(x, y)}, {1, 0, ux(x, y)}, {0, 1, uy(x, y)}, {0, 0, uxx}, {0, 0, uxy}, {0, 0, uyy(x, y)}};
    }

    // Mean curvature of a graph with upward normal:
    // ((1 + u_y^2) u_xx - 2 u_x u_y u_xy + (1 + u_x^2) u_yy) / W^3
    static double H(double x, double y) {
        const double a = ux(x, y), b = uy(x, y), W = std::sqrt(1 + a * a + b * b);
        return ((1 + b * b) * uxx - 2 * a * b * uxy + (1 + a * a) * uyy(x, y)) / (W * W * W);
    }

    static double K(double x, double y) {
        const double a = ux(x, y), b = uy(x, y), W2 = 1 + a * a + b * b;
        return (uxx * uyy(x, y) - uxy * uxy) / (W2 * W2);
    }
};

const ParamGrid graph_grid(int n) { return ParamGrid(n, n, {-0.5, 0.5}, {0.0, 1.0}); }

} // namespace

TEST(NodeGeometry, GraphAgainstClosedForms) {
    for (double x : {-0.4, 0.0, 0.3})
        for (double y : {0.0, 0.5, 0.9}) {
            const auto q = node_geometry(Graph::jet(x, y));
            const double a = Graph::ux(x, y), b = Graph::uy(x, y), W = std::sqrt(1 + a * a + b * b);
            EXPECT_NEAR(q.g.xy, a * b, 1e-15);
            EXPECT_NEAR(q.det_g, W * W, 1e-14);
            EXPECT_NEAR(q.nu.z, 1 / W, 1e-15);
            EXPECT_NEAR(q.H, Graph::H(x, y), 1e-14);
            EXPECT_NEAR(q.K_gauss, Graph::K(x, y), 1e-14);
            // |h|^2 = H^2 - 2K for a symmetric form w.r.t. g; |h0|^2 = |h|^2 - H^2 / 2
            EXPECT_NEAR(q.h_norm2, q.H * q.H - 2 * q.K_gauss, 1e-13);
            EXPECT_NEAR(q.h0_norm2, q.h_norm2 - 0.5 * q.H * q.H, 1e-13);
            EXPECT_FALSE(q.u_conf.has_value() && a * b != 0);
        }
}

TEST(NodeGeometry, UnitSphereMercator) {
    // H = g^ij <f_ij, nu> with nu = f_x x f_y / |.|; for the Mercator chart nu points
    // outwards and H = -2.
    for (double x : {-2.0, 0.1, 3.0})
        for (double y : {0.0, 0.4, 1.0}) {
            const auto q = node_geometry(charts::mercator(x, y));
            EXPECT_NEAR(q.H, -2.0, 1e-14);
            EXPECT_NEAR(q.K_gauss, 1.0, 1e-13);
            EXPECT_NEAR(q.h0_norm2, 0.0, 1e-14);
            EXPECT_NEAR(dot(q.nu, q.jet.f), 1.0, 1e-15);
            ASSERT_TRUE(q.u_conf.has_value());
            EXPECT_NEAR(*q.u_conf, -std::log(std::cosh(y)), 1e-14);
        }
}

TEST(SurfaceGeometry, FdConvergesToClosedForm) {
    auto err = [](int n) {
        const auto f = make_immersion(graph_grid(n), Graph::jet);
        const auto g = compute_geometry(f, DerivativeScheme::central_fd);
        double e = 0;
        for (std::size_t j = 0; j < g.grid.ny(); ++j)
            for (std::size_t i = 0; i < g.grid.nx(); ++i)
                e = std::max(e, std::abs(g.at(i, j).H - Graph::H(g.grid.x(i), g.grid.y(j))));
        return e;
    };
    const double e1 = err(17), e2 = err(33), e3 = err(65);
    EXPECT_GT(std::log2(e1 / e2), 1.8);
    EXPECT_GT(std::log2(e2 / e3), 1.8);
}

TEST(SurfaceGeometry, Errors) {
    const ParamGrid g(9, 9);
    std::vector<Vec3> flat(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) flat[n] = {g.x(n % 9), 0.0, 0.0}; // rank one
    try {
        compute_geometry(make_immersion(g, flat), DerivativeScheme::central_fd);
        FAIL() << "expected DegenerateMetric";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_metric);
    }
    auto f = sample("mercator_sphere", 9, 9);
    f.positions[40].x = std::nan("");
    try {
        compute_geometry(f, DerivativeScheme::central_fd);
        FAIL() << "expected NonFinite";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_finite);
        EXPECT_EQ(e.node().value_or(0), 40u);
    }
    EXPECT_THROW(compute_geometry(make_immersion(g, flat), DerivativeScheme::analytic_jet), Error);
}

TEST(SurfaceGeometry, ConformalityAndWeakImmersion) {
    const auto merc = compute_geometry(sample("mercator_sphere", 33, 17), DerivativeScheme::analytic_jet);
    EXPECT_LT(conformality_residual(merc).sup(), 1e-15);
    const auto cert = weak_immersion_check(merc);
    EXPECT_TRUE(cert.pass);
    // min |f_x x f_y| = sech^2(1) on the band
    const double s = 1 / std::cosh(1.0);
    EXPECT_NEAR(cert.min_det_g, std::pow(s, 4), 1e-14);

    const auto graph = compute_geometry(make_immersion(graph_grid(17), Graph::jet), DerivativeScheme::analytic_jet);
    EXPECT_GT(conformality_residual(graph).sup_offdiag, 0.05);
}

TEST(SurfaceGeometry, CollapsedPoleCarriesNoArea) {
    const auto g = compute_geometry(sample("hemisphere", 17, 9), DerivativeScheme::central_fd);
    for (std::size_t i = 0; i < 17; ++i) {
        EXPECT_TRUE(g.at(i, 8).collapsed);
        EXPECT_EQ(g.at(i, 8).area_elem, 0.0);
    }
    EXPECT_TRUE(weak_immersion_check(g).pass);
}

// Oracle: non-divergence form g^ij (u_ij - Gamma^k_ij u_k) with Christoffel symbols from the
// closed-form metric derivatives, against the divergence-form stencil.
TEST(LaplaceBeltrami, MatchesNonDivergenceFormAtSecondOrder) {
    auto u = [](double x, double y) { return std::sin(2 * x) * std::cos(y) + x * y; };
    auto oracle = [&](double x, double y) {
        const double a = Graph::ux(x, y), b = Graph::uy(x, y);
        const double g11 = 1 + a * a, g12 = a * b, g22 = 1 + b * b, d = g11 * g22 - g12 * g12;
        const double i11 = g22 / d, i12 = -g12 / d, i22 = g11 / d;
        // Gamma^k_ij = g^kl <f_ij, f_l> and <f_ij, f_l> = u_ij u_l for a graph
        const double uxx = Graph::uxx, uxy = Graph::uxy, uyy = Graph::uyy(x, y);
        const double l1 = i11 * a + i12 * b, l2 = i12 * a + i22 * b; // g^kl u_l
        const double ux_ = 2 * std::cos(2 * x) * std::cos(y) + y, uy_ = -std::sin(2 * x) * std::sin(y) + x;
        const double vxx = -4 * std::sin(2 * x) * std::cos(y), vxy = -2 * std::cos(2 * x) * std::sin(y) + 1,
                     vyy = -std::sin(2 * x) * std::cos(y);
        auto hess = [&](double vij, double fij) { return vij - fij * (l1 * ux_ + l2 * uy_); };
        return i11 * hess(vxx, uxx) + 2 * i12 * hess(vxy, uxy) + i22 * hess(vyy, uyy);
    };
    auto err = [&](int n) {
        const auto f = make_immersion(graph_grid(n), Graph::jet);
        const auto g = compute_geometry(f, DerivativeScheme::analytic_jet);
        std::vector<double> v(g.grid.size());
        for (std::size_t j = 0; j < g.grid.ny(); ++j)
            for (std::size_t i = 0; i < g.grid.nx(); ++i) v[g.grid.index(i, j)] = u(g.grid.x(i), g.grid.y(j));
        const auto lap = laplace_beltrami(g, v);
        double e = 0;
        for (std::size_t j = 2; j + 2 < g.grid.ny(); ++j)
            for (std::size_t i = 2; i + 2 < g.grid.nx(); ++i)
                e = std::max(e, std::abs(lap[g.grid.index(i, j)] - oracle(g.grid.x(i), g.grid.y(j))));
        return e;
    };
    const double e1 = err(33), e2 = err(65);
    EXPECT_LT(e2, 1e-2);
    EXPECT_GT(std::log2(e1 / e2), 1.8);
}

TEST(Christoffel, FlatPolarChart) {
    // f = (y cos x, y sin x, 0) for y > 0: Gamma^2_11 = -y, Gamma^1_12 = 1/y
    const double x = 0.7, y = 1.3;
    const Jet j{{y * std::cos(x), y * std::sin(x), 0},
                {-y * std::sin(x), y * std::cos(x), 0},
                {std::cos(x), std::sin(x), 0},
                {-y * std::cos(x), -y * std::sin(x), 0},
                {-std::sin(x), std::cos(x), 0},
                {0, 0, 0}};
    const auto q = node_geometry(j);
    const auto [G1, G2] = christoffel(q);
    EXPECT_NEAR(G2.xx, -y, 1e-14);
    EXPECT_NEAR(G1.xy, 1 / y, 1e-14);
    EXPECT_NEAR(G1.xx, 0, 1e-14);
    EXPECT_NEAR(G2.yy, 0, 1e-14);
}
