#ifndef DRIFTSPEC_SHRINKER_HPP
#define DRIFTSPEC_SHRINKER_HPP

#include <Eigen/Core>
#include <vector>

#include "driftspec/profile_curve.hpp"

namespace driftspec {

// Shooting parameters for the self-shrinker profile equation. Defaults are
// resolved relative to the natural length sqrt(2/-C) (the shrinking-sphere
// radius); fields <= 0 select the default.
struct ShooterConfig {
    double C = -1.0;         // shrinker constant, must be < 0
    double bracket_lo = 0.0; // z = 0 starting radii bracket
    double bracket_hi = 0.0;
    double h_ode = 0.0;      // fixed RK4 step
    double tol_event = 1e-12; // |z| tolerance at the z = 0 return event
    double tol_root = 1e-13;  // bisection tolerance on r0
    double s_max = 0.0;       // arc-length cutoff
    double rho_min = 0.0;     // axis-hit threshold

    void validate() const;
    double scale() const { return std::sqrt(2.0 / -C); }
    double lo() const { return bracket_lo > 0.0 ? bracket_lo : 0.2 * scale(); }
    double hi() const { return bracket_hi > 0.0 ? bracket_hi : 1.3 * scale(); }
    double step() const { return h_ode > 0.0 ? h_ode : 1e-3 * scale(); }
    double smax() const { return s_max > 0.0 ? s_max : 40.0 * scale(); }
    double rhomin() const { return rho_min > 0.0 ? rho_min : 1e-9 * scale(); }
};

struct OdeState {
    double rho, z, alpha;
};

// Right-hand side of the profile equation for H = C (F - p)^perp with
// p at the origin, in tangent-angle form:
//   rho' = cos(alpha),  z' = sin(alpha),
//   alpha' = -C (rho sin(alpha) - z cos(alpha)) - sin(alpha)/rho.
// The two orientation-dependent signs are pinned by the shrinking-sphere
// solution (see the sphere oracle tests).
OdeState shrinker_rhs(const OdeState& state, double C);

enum class Termination { z_return, axis_hit, length_exceeded };

struct Trajectory {
    std::vector<double> s;
    std::vector<OdeState> states; // states[i] at arc length s[i]; last one refined at the event
    Termination termination = Termination::length_exceeded;
};

// Integrates from (r0, 0, pi/2) until the first z = 0 crossing from above
// (refined to tol_event), an axis hit, or the arc-length cutoff.
Trajectory integrate_profile(const ShooterConfig& config, double r0);

struct MissSample {
    double r0;
    double miss; // alpha at z-return minus (-pi/2); NaN when no z-return
    Termination termination;
};

// Samples the miss function across the bracket.
std::vector<MissSample> scan_miss(const ShooterConfig& config, int n_samples);

struct ShootResult {
    ProfileCurve curve;
    double r_inner = 0.0; // shooting root on the z = 0 axis
    double r_outer = 0.0; // radius of the z-return point
    double root_miss = 0.0;
    std::vector<MissSample> scan;
};

// Finds the closed symmetric torus profile: bisection on r0 against the
// perpendicular-return condition alpha = -pi/2, then mirror through z -> -z
// and resample to a uniform closed curve. Throws NoSignChange when the scan
// finds no bracketing pair and NoConvergence when bisection stalls.
ShootResult shoot_torus(const ShooterConfig& config, int n_nodes, int scan_samples = 33);

struct ShrinkerResidual {
    double max_residual = 0.0; // max over nodes of |Hvec - C (F - p)^perp|
    double fitted_C = 0.0;     // least-squares slope of <Hvec,nu> against <F-p,nu>
    double fit_rms = 0.0;      // rms misfit of that line through the origin
};

ShrinkerResidual shrinker_residual(const ProfileCurve& curve, double C, const Eigen::Vector3d& p);

} // namespace driftspec

#endif
