#include "wfb/spectral.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wfb;

namespace {

FourierData smooth_data(std::size_t K) {
    // exp(cos x) sin-shifted: all modes present and decaying fast
    return fourier_decompose([](double x) { return std::exp(std::cos(x - 0.3)) + 0.2 * std::sin(2 * x); }, 257, K);
}

double bump(double x) { return std::abs(x) < pi / 2 ? std::pow(std::cos(x), 8) : 0.0; }

// 13-point bilaplacian of samples u on a square grid with spacing h at interior node (i, j).
double bilaplacian13(const ParamGrid& g, const std::vector<double>& u, std::size_t i, std::size_t j) {
    auto at = [&](int di, int dj) { return u[g.index(i + di, j + dj)]; };
    const double h = g.hx();
    const double s = 20 * at(0, 0) - 8 * (at(1, 0) + at(-1, 0) + at(0, 1) + at(0, -1)) +
                     2 * (at(1, 1) + at(1, -1) + at(-1, 1) + at(-1, -1)) +
                     (at(2, 0) + at(-2, 0) + at(0, 2) + at(0, -2));
    return s / (h * h * h * h);
}

} // namespace

TEST(PoissonKernel, UnitMassAtSeveralHeights) {
    for (double y : {0.1, 0.5, 1.0, 2.0}) EXPECT_NEAR(kernel_mass(y), 1.0, 1e-10) << y;
    EXPECT_GT(poisson_kernel(0.0, 0.1), 0.0);
    EXPECT_NEAR(poisson_kernel(0.7, 0.3), poisson_kernel(-0.7, 0.3), 1e-15);
}

TEST(HarmonicExtension, SeriesMatchesKernel) {
    const auto f = fourier_decompose(bump, 513, 200);
    for (double y : {0.1, 0.3, 1.0})
        for (double x : {-2.0, -0.4, 0.0, 1.1})
            EXPECT_NEAR(harmonic_extension_series(f, x, y), harmonic_extension_kernel(bump, x, y), 1e-8)
                << x << " " << y;
    EXPECT_THROW(harmonic_extension_kernel(bump, 0.0, 0.0), Error);
    EXPECT_EQ(harmonic_extension_kernel(bump, 0.3, 0.01, &f), harmonic_extension_series(f, 0.3, 0.01));
}

TEST(HarmonicExtension, FivePointLaplacianSecondOrder) {
    const auto f = smooth_data(24);
    auto err = [&](std::size_t n) {
        const ParamGrid g(n, (n - 1) / 4 + 1, default_x_range, Interval{0.0, pi / 2});
        const auto u = harmonic_extension_series(f, g).values;
        const double h = g.hx();
        double e = 0;
        for (std::size_t j = 1; j + 1 < g.ny(); ++j)
            for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
                const double lap = (u[g.index(i + 1, j)] + u[g.index(i - 1, j)] + u[g.index(i, j + 1)] +
                                    u[g.index(i, j - 1)] - 4 * u[g.index(i, j)]) /
                                   (h * h);
                e = std::max(e, std::abs(lap));
            }
        return e;
    };
    EXPECT_NEAR(std::log2(err(129) / err(257)), 2.0, 0.1);
}

TEST(BiharmonicExtension, ReproducesBoundaryData) {
    const auto phi = fourier_decompose(bump, 513, 128);
    const auto psi = fourier_decompose([](double x) { return bump(x) * std::sin(3 * x); }, 513, 128);
    const auto dphi = derivative(phi);
    for (double x : {-1.2, -0.5, 0.0, 0.9, 2.5}) {
        const auto u = bh_jet(phi, psi, x, 0.0);
        EXPECT_NEAR(u.v, phi.evaluate(x), 1e-12);
        EXPECT_NEAR(u.vy, psi.evaluate(x), 1e-12);
        EXPECT_NEAR(u.vx, dphi.evaluate(x), 1e-10);
        // and the synthesised series matches the sampled data
        EXPECT_NEAR(u.v, bump(x), 1e-9);
    }
}

TEST(BiharmonicExtension, SingleModeClosedForm) {
    // phi = cos x, psi = 0: u = (1 + y) e^{-y} cos x
    const auto phi = fourier_decompose([](double x) { return std::cos(x); }, 65, 8);
    const auto zero = FourierData::zero(8);
    for (double y : {0.0, 0.25, 1.0})
        for (double x : {-1.0, 0.5})
            EXPECT_NEAR(bh_jet(phi, zero, x, y).v, (1 + y) * std::exp(-y) * std::cos(x), 1e-14);
    EXPECT_THROW(bh_jet(phi, FourierData::zero(4), 0, 0), Error);
}

TEST(BiharmonicExtension, ThirteenPointBilaplacianSecondOrder) {
    // band-limited data so that the coarse rungs already resolve every mode
    const auto phi = fourier_decompose([](double x) { return std::cos(x) + 0.5 * std::sin(2 * x) + 0.2 * std::cos(4 * x); }, 65, 8);
    const auto psi = fourier_decompose([](double x) { return std::sin(x) + 0.3 * std::cos(3 * x); }, 65, 8);
    auto err = [&](std::size_t n) {
        const ParamGrid g(n, (n - 1) / 4 + 1, default_x_range, Interval{0.0, pi / 2});
        const auto u = biharmonic_extension(phi, psi, g).values;
        double e = 0;
        // fixed band y in [1/4, 5/4]: the first rows slide towards y = 0 under refinement
        for (std::size_t j = 2; j + 2 < g.ny(); ++j)
            for (std::size_t i = 2; i + 2 < g.nx(); ++i)
                if (g.y(j) >= 0.25 && g.y(j) <= 1.25) e = std::max(e, std::abs(bilaplacian13(g, u, i, j)));
        return e;
    };
    const double e1 = err(65), e2 = err(129), e3 = err(257);
    EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.15);
    EXPECT_NEAR(std::log2(e2 / e3), 2.0, 0.15);
}

TEST(BiharmonicExtension, SupportCheck) {
    const ParamGrid g(65, 9);
    const auto wide = fourier_decompose([](double x) { return std::cos(x); }, 257, 8);
    const auto zero = FourierData::zero(8);
    EXPECT_NO_THROW(biharmonic_extension(wide, zero, g));
    EXPECT_THROW(biharmonic_extension(wide, zero, g, 1e-8), Error);
}

TEST(L2Identity, ModeWiseAndField) {
    const auto f = smooth_data(20);
    for (double s : {0.0, 0.5, 1.0, 1.5}) {
        const auto r = l2_identity_check(f, s);
        EXPECT_LT(r.max_mode_residual, 1e-12) << s;
        EXPECT_LT(r.field_residual, 1e-9) << s;
    }
    // phi = cos 2x, s = 0: (1/2) [phi]_{-1/2}^2 = (1/2)(1/2) pi = pi / 4
    const auto c2 = fourier_decompose([](double x) { return std::cos(2 * x); }, 65, 8);
    const auto r = l2_identity_check(c2, 0.0);
    EXPECT_NEAR(r.rhs, pi / 4, 1e-14);
    EXPECT_NEAR(r.lhs_field, pi / 4, 1e-10);
}

// Oracle: periodic trapezoid of phi' psi' - phi'' psi from the closed-form derivatives.
TEST(BoundaryIntegrationByParts, PositiveSumOfModes) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    const double p1 = U(rng), p2 = U(rng), q1 = U(rng), q2 = U(rng), q3 = U(rng);
    auto phi = [&](double x) { return p1 * std::cos(x) + p2 * std::sin(2 * x); };
    auto dphi = [&](double x) { return -p1 * std::sin(x) + 2 * p2 * std::cos(2 * x); };
    auto ddphi = [&](double x) { return -p1 * std::cos(x) - 4 * p2 * std::sin(2 * x); };
    auto psi = [&](double x) { return q1 * std::cos(x) + q2 * std::sin(2 * x) + q3; };
    auto dpsi = [&](double x) { return -q1 * std::sin(x) + 2 * q2 * std::cos(2 * x); };
    const double lhs = periodic_integral([&](double x) { return dphi(x) * dpsi(x) - ddphi(x) * psi(x); }, 64);
    // 2 sum k^2 <phi_k, psi_k> = 2 (pi p1 q1 + 4 pi p2 q2)
    EXPECT_NEAR(lhs, 2 * pi * (p1 * q1 + 4 * p2 * q2), 1e-13);
    EXPECT_NEAR(ibp_boundary_modes(fourier_decompose(phi, 65, 8), fourier_decompose(psi, 65, 8)), lhs, 1e-13);
}

TEST(Fourier, SobolevNormsAndAliasWarning) {
    const auto f = fourier_decompose([](double x) { return 2.0 + 3 * std::cos(2 * x); }, 65, 8);
    EXPECT_NEAR(f.a0, 2.0, 1e-15);
    EXPECT_NEAR(f.a[1], 3.0, 1e-14);
    // [phi]_s^2 = 2^{2s} * 9 pi; the norm adds 2 pi * 4
    EXPECT_NEAR(sobolev_seminorm2(f, 1.0), 36 * pi, 1e-12);
    EXPECT_NEAR(sobolev_norm(f, 0.0), std::sqrt(8 * pi + 9 * pi), 1e-12);
    EXPECT_FALSE(f.alias_warning);
    const auto rough = fourier_decompose([](double x) { return std::abs(x); }, 65, 9);
    EXPECT_TRUE(rough.alias_warning);
    EXPECT_THROW(fourier_decompose(std::vector<double>(33, 1.0), 16), Error);
}

TEST(Cutoff, EqualsOneOnTheBoxAndVanishesOutside) {
    for (double x : {-pi / 2, 0.0, 1.5})
        for (double y : {0.0, 0.25, 0.5}) {
            const auto c = cutoff_jet(x, y);
            EXPECT_EQ(c.v, 1.0);
            EXPECT_EQ(c.vx, 0.0);
            EXPECT_EQ(c.vyy, 0.0);
        }
    EXPECT_EQ(cutoff_jet(0.95 * pi, 0.1).v, 0.0);
    EXPECT_EQ(cutoff_jet(0.0, 0.95).v, 0.0);
    // first derivative against a central difference
    const double x = 2.0, y = 0.6, h = 1e-6;
    const auto c = cutoff_jet(x, y);
    EXPECT_NEAR(c.vx, (cutoff_jet(x + h, y).v - cutoff_jet(x - h, y).v) / (2 * h), 1e-6);
    EXPECT_NEAR(c.vy, (cutoff_jet(x, y + h).v - cutoff_jet(x, y - h).v) / (2 * h), 1e-6);
    EXPECT_NEAR(c.vxy, (cutoff_jet(x + h, y).vy - cutoff_jet(x - h, y).vy) / (2 * h), 1e-5);
}

TEST(EstimateAudit, RatiosAreFinite) {
    std::vector<EstimateCase> cases;
    for (std::size_t k : {1u, 4u, 16u}) {
        auto phi = FourierData::zero(32), psi = FourierData::zero(32);
        phi.a[k - 1] = 1.0;
        psi.b[k - 1] = 1.0;
        cases.push_back({"mode " + std::to_string(k), phi, psi});
    }
    const auto a = estimate_audit(cases, 129, 33);
    ASSERT_EQ(a.rows.size(), 3u);
    for (const auto& r : a.rows) {
        EXPECT_TRUE(std::isfinite(r.c1_ratio) && r.c1_ratio > 0);
        EXPECT_TRUE(std::isfinite(r.cauchy_ratio) && r.cauchy_ratio > 0);
        EXPECT_TRUE(std::isfinite(r.dirichlet_ratio) && r.dirichlet_ratio > 0);
        EXPECT_TRUE(std::isfinite(r.boundary_ratio));
    }
    // single modes: [phi]_{1/2} = sqrt(k pi) and |D H phi|_{L2}^2 = k pi (1 - e^{-2k y_far})
    EXPECT_NEAR(a.rows[0].dirichlet_ratio, 1.0, 1e-2);
}
