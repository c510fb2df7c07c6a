#include "wfb/gallery.hpp"
#include "wfb/free_boundary.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wfb;

TEST(SupportSurface, Parse) {
    EXPECT_EQ(parse_support("plane").kind, SupportSurface::Kind::plane);
    EXPECT_EQ(parse_support("line").kind, SupportSurface::Kind::line);
    const auto s = parse_support("sphere:2.5");
    EXPECT_EQ(s.kind, SupportSurface::Kind::sphere);
    EXPECT_EQ(s.R, 2.5);
    EXPECT_THROW(parse_support("sphere:-1"), Error);
    EXPECT_THROW(parse_support("cone"), Error);
    // interior normal points to the centre; h^S = <v, w> / R
    EXPECT_NEAR(s.normal({0, 0, 2.5}).z, -1.0, 1e-15);
    EXPECT_NEAR(s.h_S({}, {1, 0, 0}, {1, 0, 0}), 0.4, 1e-15);
}

TEST(FreeBoundary, MercatorBandSatisfiesWillmoreCondition) {
    const auto g = compute_geometry(sample("mercator_sphere", 129, 65), DerivativeScheme::analytic_jet);
    const auto r = free_bc_residuals(g, SupportSurface::plane());
    EXPECT_LT(r.sup_willmore, 1e-10);
    EXPECT_NEAR(r.sup_navier, 2.0, 1e-13); // a sphere is not a Navier surface
    // h^S = 0 for the plane, so the L2 and Thomsen conditions reduce to dH/deta
    EXPECT_LT(r.sup_l2, 1e-10);
    EXPECT_LT(r.sup_thomsen, 1e-10);
}

TEST(FreeBoundary, HelicoidSatisfiesNavierOnLine) {
    const auto g = compute_geometry(sample("helicoid", 129, 65), DerivativeScheme::analytic_jet);
    const auto r = free_bc_residuals(g, SupportSurface::line());
    EXPECT_LT(r.sup_navier, 1e-10);
}

TEST(FreeBoundary, InvertedCatenoidNormalDerivativeOfH) {
    for (Interval xr : {Interval{0.05, 1.0}, Interval{-1.0, -0.05}}) {
        const auto s = analytic_surface("inverted_catenoid");
        const auto f = sample(s, ParamGrid(129, 5, xr, {0.0, 4e-5}));
        const auto g = compute_geometry(f, DerivativeScheme::analytic_jet);
        EXPECT_LT(orthogonality(g, SupportSurface::plane()).max(), 1e-12);
        const auto r = free_bc_residuals(g, SupportSurface::plane());
        double m = 0;
        for (double v : r.dH_deta) m = std::max(m, std::abs(v));
        EXPECT_LT(m, 1e-6);
    }
}

TEST(FreeBoundary, TiltedSurfaceIsNotOrthogonal) {
    const auto tilted = rigid_motion(sample("mercator_sphere", 33, 17), rotation_about_e1(0.2));
    const auto g = compute_geometry(tilted, DerivativeScheme::analytic_jet);
    try {
        free_bc_residuals(g, SupportSurface::plane());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_orthogonal);
    }
}

TEST(GeodesicCurvature, RoutesAgreeOnSphericalCap) {
    // unit sphere meeting the sphere of radius R orthogonally: boundary circle of radius R/d,
    // kappa_g = 1/R in the cap (through the support route and intrinsically)
    for (double R : {0.5, 2.0}) {
        for (int n : {33, 65, 129}) {
            const auto f = sample("spherical_cap", n, (n + 1) / 2, R);
            const auto g = compute_geometry(f, DerivativeScheme::analytic_jet);
            const auto k = geodesic_curvature(g, SupportSurface::sphere(R));
            double e = 0;
            for (std::size_t i = 0; i < k.intrinsic.size(); ++i) {
                EXPECT_NEAR(std::abs(k.support[i]), 1.0 / R, 1e-13);
                EXPECT_NEAR(std::abs(k.intrinsic[i]), 1.0 / R, 1e-12);
                EXPECT_NEAR(std::abs(k.ambient[i]), 1.0 / R, 1e-12);
                e = std::max(e, std::abs(std::abs(k.intrinsic[i]) - std::abs(k.support[i])));
            }
            EXPECT_LT(e, 1e-12);
        }
    }
}

TEST(GaussBonnet, HemisphereAndFlatDisk) {
    const auto h = compute_geometry(sample("hemisphere", 257, 129), DerivativeScheme::analytic_jet);
    const auto rh = gauss_bonnet_relations(h, SupportSurface::plane(), 1);
    EXPECT_LT(std::abs(rh.identity_residuals[1]), 1e-3);
    EXPECT_LT(std::abs(rh.identity_residuals[2]), 1e-3);
    EXPECT_NEAR(rh.boundary_geodesic_integral, 0.0, 1e-12); // the equator is a geodesic

    const auto d = compute_geometry(sample("flat_disk", 257, 129), DerivativeScheme::analytic_jet);
    const auto rd = gauss_bonnet_relations(d, SupportSurface::sphere(1.0), 1);
    EXPECT_LT(std::abs(rd.identity_residuals[1]), 1e-3);
    EXPECT_NEAR(rd.boundary_geodesic_integral, 2 * pi, 1e-10);
    EXPECT_NEAR(rd.boundary_geodesic_support, 2 * pi, 1e-10);
    EXPECT_EQ(rd.W, 0.0);
}

TEST(Admissibility, PlaneConditions) {
    const auto f = sample("mercator_sphere", 65, 33);
    const auto geom = compute_geometry(f, DerivativeScheme::analytic_jet);
    const ParamGrid& g = f.grid;
    // bump(x) (1 + cos pi y): d_y vanishes on I, phi_3 = 0 there
    std::vector<Vec3> v(g.size());
    std::vector<Jet> jv(g.size());
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double x = g.x(i), y = g.y(j);
            const double b = std::pow(std::cos(x / 2), 4), bx = -2 * std::pow(std::cos(x / 2), 3) * std::sin(x / 2);
            const double bxx = 3 * std::pow(std::cos(x / 2) * std::sin(x / 2), 2) - std::pow(std::cos(x / 2), 4);
            const double c = 1 + std::cos(pi * y), cy = -pi * std::sin(pi * y), cyy = -pi * pi * std::cos(pi * y);
            const ScalarJet s{b * c, bx * c, b * cy, bxx * c, bx * cy, b * cyy};
            const ScalarJet y2{y * y, 0, 2 * y, 0, 0, 2};
            const std::size_t n = g.index(i, j);
            jv[n] = in_admissible_support(g, i, j) ? assemble(s, s, s * y2) : Jet{};
            v[n] = jv[n].f;
        }
    const auto phi = make_variation(geom, v, jv);
    const auto r = admissibility(geom, phi, ReflectionKind::plane);
    EXPECT_TRUE(r.pass) << r.a_resid << " " << r.b_resid;

    // a field lifting I out of the plane is not admissible
    for (std::size_t n = 0; n < g.size(); ++n) {
        std::swap(jv[n].f.x, jv[n].f.z);
        v[n] = jv[n].f;
    }
    const auto bad = admissibility(geom, make_variation(geom, v, jv), ReflectionKind::plane);
    EXPECT_FALSE(bad.pass);
    EXPECT_GT(bad.a_resid, 0.5);
}

TEST(TraceOperator, RightInverseOnBumps) {
    const ParamGrid grid(513, 33);
    const auto f = sample(analytic_surface("mercator_sphere"), grid);
    const auto geom = compute_geometry(f, DerivativeScheme::analytic_jet);
    std::vector<double> a(grid.nx()), b(grid.nx());
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        const double x = grid.x(i), c = std::abs(x) < pi / 2 ? std::pow(std::cos(x), 10) : 0.0;
        a[i] = c * std::sin(3 * x);
        b[i] = c * (1 + std::cos(2 * x));
    }
    const auto phi = phi_extension(geom, a, b);
    const auto t = lf_operator(geom, phi);
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        EXPECT_NEAR(t.a[i], a[i], 1e-8);
        EXPECT_NEAR(t.b[i], b[i], 1e-8);
    }
    // the plane conditions measure exactly the two traces
    const auto adm = admissibility(geom, phi, ReflectionKind::plane);
    EXPECT_NEAR(adm.a_resid, sup_abs(a), 1e-8);
    EXPECT_FALSE(adm.pass);
}

TEST(TraceOperator, Errors) {
    const ParamGrid grid(129, 17);
    const auto geom = compute_geometry(sample(analytic_surface("mercator_sphere"), grid), DerivativeScheme::analytic_jet);
    std::vector<double> a(grid.nx(), 0.0), b(grid.nx(), 0.0);
    b[2] = 1.0; // outside [-pi/2, pi/2]
    try {
        phi_extension(geom, a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::support_violation);
    }
    std::mt19937_64 rng(2);
    const auto skew = perturb_with(sample("mercator_sphere", 129, 17), random_trig_field(rng), 0.2);
    const auto gs = compute_geometry(skew, DerivativeScheme::analytic_jet);
    b[2] = 0.0;
    try {
        phi_extension(gs, a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_conformal);
    }
}
