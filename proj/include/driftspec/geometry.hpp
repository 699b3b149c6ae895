#ifndef DRIFTSPEC_GEOMETRY_HPP
#define DRIFTSPEC_GEOMETRY_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "driftspec/density.hpp"
#include "driftspec/profile_curve.hpp"

namespace driftspec {

// Per-node extrinsic data of the revolution surface in the theta = 0
// half-plane. Vectors live in (rho, z) coordinates; by rotational symmetry
// they carry around the axis. Curvature signs follow the curve normal
// (sin a, -cos a), calibrated so a round sphere of radius R has
// |H| = 2/R with the mean curvature vector pointing at the center.
struct SurfaceGeometry {
    std::vector<double> kappa_prof;          // profile principal curvature = -alpha'
    std::vector<double> kappa_rot;           // rotational principal curvature = -sin(alpha)/rho
    std::vector<double> mean_h;              // H = kappa_prof + kappa_rot
    std::vector<Eigen::Vector2d> normal;     // in-plane unit normal
    std::vector<Eigen::Vector2d> mean_vec;   // mean curvature vector H * normal
    std::vector<Eigen::Vector2d> grad_psi;   // ambient density gradient restricted in-plane
    std::vector<Eigen::Vector2d> hpsi;       // weighted mean curvature H_psi = Hvec - (grad psi)^perp
    std::vector<double> psi;                 // psi at the nodes
    std::vector<double> area_weight;         // 2*pi*rho*e^psi*h (trapezoid-corrected on open arcs)
};

// Quadrature weights of the weighted measures: p_i = rho_i e^{psi_i} for the
// curve measure, w_i = 2*pi*p_i*h for the surface measure, V = sum of w.
struct WeightedMeasure {
    std::vector<double> p;
    std::vector<double> w;
    double total = 0.0;
};

SurfaceGeometry surface_geometry(const ProfileCurve& curve, const RadialDensity& density);
WeightedMeasure weighted_measure(const ProfileCurve& curve, const RadialDensity& density);
double weighted_volume(const ProfileCurve& curve, const RadialDensity& density);

// Weighted barycenter: the t^2/2 center of psi-mass in closed form.
Eigen::Vector3d center_of_psi_mass(const ProfileCurve& curve, const RadialDensity& density);

struct CenterOptions {
    int max_iters = 500;
    double grad_tol = 1e-10; // on |grad|/V_psi
    int theta_samples = 64;  // trapezoid samples around the axis
};

// General f-center of psi-mass for convex increasing f (f' > 0, f'' > 0 on
// t > 0): gradient descent with backtracking on p -> integral of f(r_p).
// Throws NoConvergence when the gradient tolerance is not reached.
Eigen::Vector3d center_of_psi_mass(const ProfileCurve& curve, const RadialDensity& density,
                                   const std::function<double(double)>& f,
                                   const std::function<double(double)>& df,
                                   const CenterOptions& opts = {});

// Restriction of the centered ambient coordinates to the surface,
// x_p(s,theta) = rho(s) cos(theta) - p_x and so on, together with the 1-D
// separation factors rho(s) and z(s) - p_z.
class CoordinateFields {
public:
    CoordinateFields(const ProfileCurve& curve, Eigen::Vector3d p);

    const Eigen::Vector3d& center() const { return p_; }
    const std::vector<double>& rho_factor() const { return rho_; }
    const std::vector<double>& z_centered() const { return zc_; }

    Eigen::Vector3d coordinates(int i, double theta) const {
        return {rho_[i] * std::cos(theta) - p_.x(), rho_[i] * std::sin(theta) - p_.y(),
                zc_[i]};
    }
    double r_squared(int i, double theta) const { return coordinates(i, theta).squaredNorm(); }

private:
    Eigen::Vector3d p_;
    std::vector<double> rho_, zc_;
};

// Integrals of the three centered coordinates against the surface measure,
// with the angular integration done in closed form.
Eigen::Vector3d integral_coordinates(const ProfileCurve& curve, const RadialDensity& density,
                                     const Eigen::Vector3d& p);

} // namespace driftspec

#endif
