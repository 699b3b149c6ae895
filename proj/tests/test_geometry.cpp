#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "driftspec/geometry.hpp"
#include "driftspec/shrinker.hpp"
#include "driftspec/sturm.hpp"
#include "oracles.hpp"

using namespace driftspec;
namespace {
constexpr double kPi = std::numbers::pi;

const ProfileCurve& round_torus() {
    static const ProfileCurve c = make_circle_profile(2.0, 1.0, 1024);
    return c;
}

const ProfileCurve& shot_torus() {
    static const ProfileCurve c = [] {
        ShooterConfig sc;
        sc.C = -1.0;
        return shoot_torus(sc, 1024).curve;
    }();
    return c;
}
} // namespace

TEST_CASE("principal curvatures of the round torus") {
    const SurfaceGeometry g = surface_geometry(round_torus(), RadialDensity::constant(0.0));
    // outer equator node (u = 0): |H| = 1/r + 1/(R0 + r) = 4/3, pointing at the axis
    CHECK(std::fabs(g.mean_h[0]) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(g.mean_vec[0].x() < 0.0);
    CHECK(g.mean_vec[0].y() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sphere calibration: |H| = 2/R at every node") {
    const double R = 1.7;
    const ProfileCurve arc = make_sphere_meridian(R, 0.15, kPi - 0.15, 301);
    const SurfaceGeometry g = surface_geometry(arc, RadialDensity::constant(0.0));
    for (int i = 0; i < arc.size(); ++i) {
        CHECK(std::fabs(g.mean_h[i]) == doctest::Approx(2.0 / R).epsilon(1e-6));
        // H points at the center: mean_vec is anti-parallel to the position
        CHECK(g.mean_vec[i].dot(arc.point(i)) < 0.0);
    }
}

TEST_CASE("constant density leaves the weighted mean curvature untouched") {
    const SurfaceGeometry g = surface_geometry(round_torus(), RadialDensity::constant(0.7));
    for (int i = 0; i < round_torus().size(); i += 37) {
        CHECK(g.hpsi[i].x() == g.mean_vec[i].x());
        CHECK(g.hpsi[i].y() == g.mean_vec[i].y());
    }
}

TEST_CASE("weighted mean curvature vanishes on the shrinker with matching density") {
    const SurfaceGeometry g = surface_geometry(shot_torus(), RadialDensity::gaussian(0.0, -1.0));
    double peak = 0.0;
    for (const auto& v : g.hpsi) peak = std::max(peak, v.norm());
    CHECK(peak < 1e-3);
}

TEST_CASE("weighted volume of the round torus") {
    CHECK(weighted_volume(round_torus(), RadialDensity::constant(0.0)) ==
          doctest::Approx(4.0 * kPi * kPi * 2.0).epsilon(1e-10));
    // a constant shift multiplies the area by e^a
    const double va = weighted_volume(round_torus(), RadialDensity::constant(0.3));
    CHECK(va == doctest::Approx(std::exp(0.3) * 4.0 * kPi * kPi * 2.0).epsilon(1e-12));
}

TEST_CASE("Gaussian-weighted volume matches adaptive quadrature") {
    const RadialDensity d = RadialDensity::gaussian(0.0, -1.0);
    const double v = weighted_volume(round_torus(), d);
    const double oracle = 2.0 * kPi *
                          oracles::integrate(
                              [](double u) {
                                  const double rho = 2.0 + std::cos(u), z = std::sin(u);
                                  return rho * std::exp(-0.5 * (rho * rho + z * z));
                              },
                              0.0, 2.0 * kPi, 1e-14);
    CHECK(v == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("center of psi-mass") {
    const RadialDensity gauss = RadialDensity::gaussian(0.0, -1.0);
    SUBCASE("symmetric torus with centered density sits at the origin") {
        const Eigen::Vector3d p = center_of_psi_mass(round_torus(), gauss);
        CHECK(p.norm() < 1e-10);
    }
    SUBCASE("translation equivariance of the unweighted barycenter") {
        auto pts = std::vector<Eigen::Vector2d>{};
        for (int i = 0; i <= 1024; ++i) {
            const double u = 2.0 * kPi * i / 1024;
            pts.emplace_back(2.0 + std::cos(u), 3.0 + std::sin(u));
        }
        const ProfileCurve lifted = resample_arclength(pts, 512);
        const Eigen::Vector3d p = center_of_psi_mass(lifted, RadialDensity::constant(0.0));
        CHECK((p - Eigen::Vector3d{0.0, 0.0, 3.0}).norm() < 1e-10);
    }
    SUBCASE("gradient descent agrees with the closed form for f = t^2/2") {
        const auto f = [](double t) { return 0.5 * t * t; };
        const auto df = [](double t) { return t; };
        const Eigen::Vector3d closed = center_of_psi_mass(round_torus(), gauss);
        const Eigen::Vector3d descent = center_of_psi_mass(round_torus(), gauss, f, df);
        CHECK((closed - descent).norm() < 1e-8);
    }
    SUBCASE("strictly convex quartic lands on the symmetric center too") {
        const auto f = [](double t) { return 0.25 * t * t * t * t; };
        const auto df = [](double t) { return t * t * t; };
        const Eigen::Vector3d p = center_of_psi_mass(round_torus(), gauss, f, df);
        CHECK(p.norm() < 1e-7);
    }
}

TEST_CASE("coordinate fields") {
    SUBCASE("direct evaluation at a node") {
        // circle profile about (2, 0): node at u = pi/2 sits at (rho, z) = (2, 1)
        const CoordinateFields fields(round_torus(), Eigen::Vector3d::Zero());
        const int quarter = 256;
        const Eigen::Vector3d x = fields.coordinates(quarter, 0.0);
        CHECK(x.x() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(x.y() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(x.z() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fields.r_squared(quarter, 0.0) == doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("first moments vanish at the center of psi-mass") {
        const RadialDensity gauss = RadialDensity::gaussian(0.0, -1.0);
        const Eigen::Vector3d p = center_of_psi_mass(round_torus(), gauss);
        const Eigen::Vector3d moments = integral_coordinates(round_torus(), gauss, p);
        const double vol = weighted_volume(round_torus(), gauss);
        CHECK(moments.norm() / vol < 1e-10);
    }
    SUBCASE("z factor has two sign changes on a z-symmetric profile") {
        const CoordinateFields fields(round_torus(), Eigen::Vector3d::Zero());
        CHECK(nodal_domains(fields.z_centered()) == 2);
    }
}

TEST_CASE("gauge invariance: constant shift rescales weights, fixes curvature") {
    const RadialDensity d0 = RadialDensity::gaussian(0.0, -1.0);
    const RadialDensity d1 = d0.shifted(1.3);
    const double scale = std::exp(1.3);

    const double v0 = weighted_volume(round_torus(), d0);
    const double v1 = weighted_volume(round_torus(), d1);
    CHECK(v1 / v0 == doctest::Approx(scale).epsilon(1e-12));

    const SurfaceGeometry g0 = surface_geometry(round_torus(), d0);
    const SurfaceGeometry g1 = surface_geometry(round_torus(), d1);
    for (int i = 0; i < round_torus().size(); i += 41) {
        CHECK(g1.hpsi[i].x() == doctest::Approx(g0.hpsi[i].x()).epsilon(1e-14));
        CHECK(g1.hpsi[i].y() == doctest::Approx(g0.hpsi[i].y()).epsilon(1e-14));
    }
}

TEST_CASE("discrete integration by parts against the k = 0 operator") {
    const RadialDensity d = RadialDensity::gaussian(0.0, -1.0);
    const SturmOperator op = build_operator(round_torus(), d, 0);
    const int n = op.size();

    // smooth periodic test functions with fixed pseudo-random coefficients
    auto test_fn = [&](double c1, double c2, double c3, double phase) {
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * kPi * i / n;
            u[i] = c1 * std::sin(t + phase) + c2 * std::cos(2.0 * t) + c3 * std::sin(3.0 * t - phase);
        }
        return u;
    };
    const std::vector<double> u = test_fn(0.9, -0.4, 0.2, 0.3);
    const std::vector<double> v = test_fn(-0.5, 0.8, -0.1, 1.1);

    const std::vector<double> au = op.apply(u);
    const std::vector<double> av = op.apply(v);
    const double lhs = op.weighted_inner(au, v);
    const double rhs = op.weighted_inner(u, av);

    // midpoint-weight summation by parts
    double parts = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        const double pm = 0.5 * (op.p[i] + op.p[ip]);
        parts += pm * (u[ip] - u[i]) * (v[ip] - v[i]) / (op.h * op.h);
    }
    parts *= op.h;

    const double scale = std::max({std::fabs(lhs), std::fabs(rhs), std::fabs(parts)});
    CHECK(std::fabs(lhs - rhs) / scale < 1e-8);
    CHECK(std::fabs(lhs - parts) / scale < 1e-8);
}

TEST_CASE("off-axis density centers are rejected by surface operations") {
    const RadialDensity off = RadialDensity::gaussian(0.0, -1.0, {0.5, 0.0, 0.0});
    CHECK_THROWS_AS(weighted_volume(round_torus(), off), InvariantViolation);
    CHECK_THROWS_AS(surface_geometry(round_torus(), off), InvariantViolation);
    // a center on the axis is fine
    const RadialDensity axial = RadialDensity::gaussian(0.0, -1.0, {0.0, 0.0, 0.4});
    CHECK_NOTHROW(weighted_volume(round_torus(), axial));
}

TEST_CASE("custom tabulated density reproduces the Gaussian profile") {
    std::vector<double> r, f, df;
    for (int i = 0; i <= 400; ++i) {
        const double t = 6.0 * i / 400;
        r.push_back(t);
        f.push_back(-0.5 * t * t);
        df.push_back(-t);
    }
    const RadialDensity tab = RadialDensity::custom(std::move(r), std::move(f), std::move(df));
    const RadialDensity exact = RadialDensity::gaussian(0.0, -1.0);
    const Eigen::Vector3d x{2.3, 0.0, 0.8};
    CHECK(tab.psi(x) == doctest::Approx(exact.psi(x)).epsilon(1e-9));
    CHECK((tab.grad_psi(x) - exact.grad_psi(x)).norm() < 1e-7);
}
