#ifndef DRIFTSPEC_PROFILE_CURVE_HPP
#define DRIFTSPEC_PROFILE_CURVE_HPP

#include <Eigen/Core>
#include <vector>

#include "driftspec/errors.hpp"

namespace driftspec {

// Generating curve of a revolution surface, sampled at uniform arc length in
// the (rho, z) half-plane with rho > 0. For closed curves the nodes wrap
// periodically; open arcs are supported for calibration profiles that would
// otherwise touch the rotation axis.
struct ProfileCurve {
    std::vector<double> s;     // arc-length parameter per node
    std::vector<double> rho;   // distance to the rotation axis, > 0
    std::vector<double> z;     // height along the axis
    std::vector<double> alpha; // tangent angle, unwrapped: (rho', z') = (cos a, sin a)
    double h = 0.0;            // uniform node spacing
    double length = 0.0;       // total arc length (period when closed)
    bool closed = true;
    bool symmetric_z = false;  // node multiset invariant under z -> -z

    int size() const { return static_cast<int>(rho.size()); }

    Eigen::Vector2d point(int i) const { return {rho[i], z[i]}; }
    Eigen::Vector2d tangent(int i) const { return {std::cos(alpha[i]), std::sin(alpha[i])}; }
    // In-plane unit normal; the geometry module's curvature signs are stated
    // against this choice (tangent rotated by -pi/2).
    Eigen::Vector2d normal(int i) const { return {std::sin(alpha[i]), -std::cos(alpha[i])}; }

    // Position on the revolution surface at angle theta around the axis.
    Eigen::Vector3d surface_point(int i, double theta) const {
        return {rho[i] * std::cos(theta), rho[i] * std::sin(theta), z[i]};
    }

    // Throws if any structural invariant fails (positivity, node count,
    // uniform spacing, discrete unit speed, closure, symmetry flag).
    void validate() const;
};

// Reparametrizes an ordered closed polyline to uniform arc length with
// n_nodes samples, using cumulative-chord periodic cubic interpolation.
// The z-symmetry flag of the result is detected from the resampled nodes.
ProfileCurve resample_arclength(const std::vector<Eigen::Vector2d>& points, int n_nodes);

// True if the node multiset is invariant under z -> -z within tol (absolute,
// scaled by the curve's bounding-box diagonal).
bool is_z_symmetric(const ProfileCurve& curve, double tol = 1e-8);

// Round profile circle (rho, z) = (r0 + r cos u, r sin u); r0 > r gives the
// standard torus generator. Exact arc-length sampling, no resampling error.
ProfileCurve make_circle_profile(double r0, double r, int n_nodes);

// Open meridian arc of the sphere rho^2 + z^2 = R^2, sampled between polar
// angles [phi0, phi1] (measured from the south pole), avoiding the axis.
ProfileCurve make_sphere_meridian(double R, double phi0, double phi1, int n_nodes);

} // namespace driftspec

#endif
