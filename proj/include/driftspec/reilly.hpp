#ifndef DRIFTSPEC_REILLY_HPP
#define DRIFTSPEC_REILLY_HPP

#include <Eigen/Core>
#include <vector>

#include "driftspec/density.hpp"
#include "driftspec/profile_curve.hpp"
#include "driftspec/sturm.hpp"

namespace driftspec {

// Upper bound on the first drift-Laplacian eigenvalue of the revolution
// surface: integral of |H_psi + grad(psi)|^2 against the weighted area,
// divided by n V_psi with n = 2.
double euclidean_bound(const ProfileCurve& curve, const RadialDensity& density);

struct EqualityDiagnostics {
    double shrinker_residual = 0.0; // max |Hvec - C_fit (F - p)^perp|
    double fitted_C = 0.0;
    double gaussian_misfit = 0.0;   // weighted rms of psi - (a + c r_p^2 / 2)
    double gaussian_a = 0.0;
    double gaussian_c = 0.0;
    bool lambda1_matches_fitted_C = false;
    Eigen::Vector3d center = Eigen::Vector3d::Zero(); // center of psi-mass used
};

struct ReillyReport {
    double bound = 0.0;
    double lambda1 = 0.0;
    double relative_gap = 0.0; // (bound - lambda1) / lambda1
    bool equality = false;     // |relative_gap| < tolerance
    double tolerance = 0.0;
    EqualityDiagnostics diagnostics;
};

// Fills the report for a computed spectrum on the same curve/density pair and
// runs the equality-case diagnostics (shrinker fit, Gaussian restriction fit,
// lambda1 against the fitted constant). Throws InvariantViolation if the
// computed lambda1 exceeds the bound beyond tolerance.
ReillyReport verify_equality_case(const ProfileCurve& curve, const RadialDensity& density,
                                  const SpectrumReport& spectrum, double tolerance = 5e-3);

// |n V_psi + integral of <H_psi + grad psi, F - p>| / (n V_psi); vanishes for
// every closed surface, at any p, up to quadrature error.
double minkowski_identity_residual(const ProfileCurve& curve, const RadialDensity& density,
                                   const Eigen::Vector3d& p);

// Sphere-ambient bound (ambient round sphere of radius R, submanifold a
// closed curve, n = 1, so b^2 = 1/R^2).

// Latitude circle of Euclidean radius r with constant weight, in closed
// form: 1/R^2 + (R^2 - r^2)/(r^2 R^2) = 1/r^2. Throws InvalidRadius unless
// 0 < r <= R.
double sphere_ambient_bound_latitude(double R, double r);

// First nonzero drift eigenvalue of a circle of radius r with constant
// weight (flat-circle spectrum).
double latitude_circle_lambda1(double r);

struct SphereCurveBound {
    double bound = 0.0;     // 1/R^2 + weighted curvature energy per volume
    double lambda1 = 0.0;   // from the weighted circle operator on the curve
    double volume = 0.0;
};

// Numerical version for an arbitrary closed curve sampled on the sphere of
// radius R, with an ambient density restricted to the sphere.
SphereCurveBound sphere_ambient_bound_curve(const std::vector<Eigen::Vector3d>& samples, double R,
                                            const RadialDensity& density, int n_nodes);

} // namespace driftspec

#endif
