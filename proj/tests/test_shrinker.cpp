#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "driftspec/shrinker.hpp"

using namespace driftspec;
namespace {
constexpr double kPi = std::numbers::pi;

ShooterConfig config_for(double C) {
    ShooterConfig sc;
    sc.C = C;
    return sc;
}
} // namespace

TEST_CASE("the shrinking-sphere meridian solves the profile equation exactly") {
    // semicircle of radius R = sqrt(2/-C) about the origin: rho = R sin(s/R),
    // z = -R cos(s/R), alpha = s/R, so alpha' must equal 1/R identically
    const double C = -1.0;
    const double R = std::sqrt(2.0 / -C);
    for (int i = 1; i < 64; ++i) {
        const double s = kPi * R * i / 64.0;
        const OdeState y{R * std::sin(s / R), -R * std::cos(s / R), s / R};
        const OdeState d = shrinker_rhs(y, C);
        CHECK(d.rho == doctest::Approx(std::cos(s / R)).epsilon(1e-14));
        CHECK(d.z == doctest::Approx(std::sin(s / R)).epsilon(1e-14));
        CHECK(d.alpha == doctest::Approx(1.0 / R).epsilon(1e-12));
    }
}

TEST_CASE("equator state reproduces the meridian curvature") {
    const double C = -1.0;
    const double R = std::sqrt(2.0 / -C);
    const OdeState d = shrinker_rhs({R, 0.0, kPi / 2.0}, C);
    // alpha' = -C R - 1/R = 1/R on the sphere; profile curvature -alpha' = -1/R
    CHECK(d.alpha == doctest::Approx(1.0 / R).epsilon(1e-14));
}

TEST_CASE("the shrinking cylinder radius is an equilibrium of the angle equation") {
    const double C = -0.7;
    const double rho_cyl = 1.0 / std::sqrt(-C);
    const OdeState d = shrinker_rhs({rho_cyl, 2.31, kPi / 2.0}, C);
    CHECK(d.rho == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d.alpha == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("integrating from the sphere radius traces the meridian to the axis") {
    ShooterConfig sc = config_for(-1.0);
    const double R = std::sqrt(2.0);
    const Trajectory t = integrate_profile(sc, R);
    CHECK(t.termination == Termination::axis_hit);
    double worst = 0.0;
    for (const OdeState& y : t.states) {
        if (y.rho < 1e-3) continue; // the last step dives below rho_min
        worst = std::max(worst, std::fabs(y.rho * y.rho + y.z * y.z - R * R));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("RK4 return state converges at fourth order in the step") {
    auto return_alpha = [&](double h) {
        ShooterConfig sc = config_for(-1.0);
        sc.h_ode = h;
        const Trajectory t = integrate_profile(sc, 0.5);
        REQUIRE(t.termination == Termination::z_return);
        return t.states.back().alpha;
    };
    // steps large enough that the h^4 signal clears the event-tolerance floor
    const double a1 = return_alpha(1.6e-2);
    const double a2 = return_alpha(8e-3);
    const double a3 = return_alpha(4e-3);
    const double ratio = (a1 - a2) / (a2 - a3);
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.35));
}

TEST_CASE("sphere-meridian trajectory error decreases at fourth order") {
    auto circle_error = [&](double h) {
        ShooterConfig sc = config_for(-1.0);
        sc.h_ode = h;
        sc.rho_min = 0.3; // stop before the pole so the error stays smooth
        const Trajectory t = integrate_profile(sc, std::sqrt(2.0));
        double worst = 0.0;
        for (const OdeState& y : t.states)
            worst = std::max(worst, std::fabs(y.rho * y.rho + y.z * y.z - 2.0));
        return worst;
    };
    const double e1 = circle_error(8e-3);
    const double e2 = circle_error(4e-3);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("shooting the symmetric torus profile") {
    ShooterConfig sc = config_for(-1.0);
    sc.bracket_lo = 0.2;
    sc.bracket_hi = 1.3;
    const ShootResult result = shoot_torus(sc, 1024);

    CHECK(result.curve.closed);
    CHECK(result.curve.symmetric_z);
    CHECK(result.curve.size() == 1024);
    double rho_min = 1e30;
    for (double r : result.curve.rho) rho_min = std::min(rho_min, r);
    CHECK(rho_min > 0.0);

    const ShrinkerResidual res = shrinker_residual(result.curve, sc.C, Eigen::Vector3d::Zero());
    CHECK(res.max_residual < 1e-4);
    CHECK(res.fitted_C == doctest::Approx(-1.0).epsilon(1e-4));

    // straddles the shrinking cylinder radius 1/sqrt(-C)
    CHECK(result.r_inner < 1.0);
    CHECK(result.r_outer > 1.0);
}

TEST_CASE("homothety: the C/2 profile is the C profile scaled by sqrt(2)") {
    const ShootResult a = shoot_torus(config_for(-1.0), 512);
    const ShootResult b = shoot_torus(config_for(-0.5), 512);
    CHECK(b.r_inner / a.r_inner == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    double worst = 0.0;
    for (int i = 0; i < 512; ++i) {
        worst = std::max(worst, std::fabs(b.curve.rho[i] - std::sqrt(2.0) * a.curve.rho[i]));
        worst = std::max(worst, std::fabs(b.curve.z[i] - std::sqrt(2.0) * a.curve.z[i]));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("negative controls for the residual") {
    const ProfileCurve round = make_circle_profile(2.0, 1.0, 512);
    const ShrinkerResidual res = shrinker_residual(round, -1.0, Eigen::Vector3d::Zero());
    CHECK(res.max_residual > 0.5); // the round torus is far from a shrinker
    CHECK(res.fit_rms > 0.05);     // and no constant fits the normal equation

    const ProfileCurve arc = make_sphere_meridian(std::sqrt(2.0), 0.1, kPi - 0.1, 301);
    const ShrinkerResidual sphere = shrinker_residual(arc, -1.0, Eigen::Vector3d::Zero());
    CHECK(sphere.max_residual < 1e-6);
    CHECK(sphere.fitted_C == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("scan reports the miss table and shooting failures are typed") {
    ShooterConfig sc = config_for(-1.0);
    const std::vector<MissSample> scan = scan_miss(sc, 17);
    CHECK(scan.size() == 17);
    CHECK(scan.front().r0 == doctest::Approx(sc.lo()));
    CHECK(scan.back().r0 == doctest::Approx(sc.hi()));

    ShooterConfig narrow = sc;
    narrow.bracket_lo = 0.20;
    narrow.bracket_hi = 0.25; // root is near 0.309, outside this window
    CHECK_THROWS_AS(shoot_torus(narrow, 256), NoSignChange);

    ShooterConfig expander = sc;
    expander.C = 0.5;
    CHECK_THROWS_AS(expander.validate(), InvariantViolation);
}
