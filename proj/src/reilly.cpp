#include "driftspec/reilly.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

#include "driftspec/geometry.hpp"
#include "driftspec/shrinker.hpp"
#include "driftspec/spline.hpp"

namespace driftspec {

namespace {

constexpr double kPi = std::numbers::pi;

// Weighted least squares of psi against a + (c/2) u with u = r_p^2.
struct GaussianFit {
    double a = 0.0, c = 0.0, rms = 0.0;
};

GaussianFit fit_gaussian_restriction(const ProfileCurve& curve, const SurfaceGeometry& g,
                                     const Eigen::Vector3d& p) {
    const int n = curve.size();
    double sw = 0, su = 0, suu = 0, sf = 0, suf = 0;
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
        u[i] = 0.5 * (curve.surface_point(i, 0.0) - p).squaredNorm();
        const double w = g.area_weight[i];
        sw += w;
        su += w * u[i];
        suu += w * u[i] * u[i];
        sf += w * g.psi[i];
        suf += w * u[i] * g.psi[i];
    }
    GaussianFit fit;
    const double det = sw * suu - su * su;
    if (std::fabs(det) < 1e-300 * (1.0 + suu) * (1.0 + sw)) {
        // Degenerate design (r_p^2 constant on the curve): constant fit.
        fit.a = sf / sw;
        fit.c = 0.0;
    } else {
        fit.a = (suu * sf - su * suf) / det;
        fit.c = (sw * suf - su * sf) / det;
    }
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = g.psi[i] - fit.a - fit.c * u[i];
        ss += g.area_weight[i] * e * e;
    }
    fit.rms = std::sqrt(ss / sw);
    return fit;
}

} // namespace

double euclidean_bound(const ProfileCurve& curve, const RadialDensity& density) {
    const SurfaceGeometry g = surface_geometry(curve, density);
    double num = 0.0, vol = 0.0;
    for (int i = 0; i < curve.size(); ++i) {
        const Eigen::Vector2d nu = g.normal[i];
        const Eigen::Vector2d gt = g.grad_psi[i] - g.grad_psi[i].dot(nu) * nu;
        num += (g.mean_h[i] * g.mean_h[i] + gt.squaredNorm()) * g.area_weight[i];
        vol += g.area_weight[i];
    }
    return num / (2.0 * vol);
}

ReillyReport verify_equality_case(const ProfileCurve& curve, const RadialDensity& density,
                                  const SpectrumReport& spectrum, double tolerance) {
    ReillyReport rep;
    rep.tolerance = tolerance;
    rep.bound = euclidean_bound(curve, density);
    rep.lambda1 = spectrum.lambda1;
    rep.relative_gap = (rep.bound - rep.lambda1) / rep.lambda1;
    if (rep.relative_gap < -tolerance)
        throw InvariantViolation("verify_equality_case: lambda1 exceeds the upper bound");
    rep.equality = std::fabs(rep.relative_gap) < tolerance;

    const Eigen::Vector3d p = center_of_psi_mass(curve, density);
    const ShrinkerResidual sr = shrinker_residual(curve, 1.0, p); // C irrelevant for the fit
    const SurfaceGeometry g = surface_geometry(curve, density);
    const GaussianFit fit = fit_gaussian_restriction(curve, g, p);

    // Residual measured against the fitted constant, not a prescribed one.
    double fit_max = 0.0;
    {
        const ShrinkerResidual against_fit = shrinker_residual(curve, sr.fitted_C, p);
        fit_max = against_fit.max_residual;
    }

    rep.diagnostics.center = p;
    rep.diagnostics.fitted_C = sr.fitted_C;
    rep.diagnostics.shrinker_residual = fit_max;
    rep.diagnostics.gaussian_misfit = fit.rms;
    rep.diagnostics.gaussian_a = fit.a;
    rep.diagnostics.gaussian_c = fit.c;
    rep.diagnostics.lambda1_matches_fitted_C =
        std::fabs(rep.lambda1 + sr.fitted_C) < tolerance * std::fabs(rep.lambda1);
    return rep;
}

double minkowski_identity_residual(const ProfileCurve& curve, const RadialDensity& density,
                                   const Eigen::Vector3d& p) {
    const SurfaceGeometry g = surface_geometry(curve, density);
    double vol = 0.0, integral = 0.0;
    for (int i = 0; i < curve.size(); ++i) {
        const Eigen::Vector2d v = g.hpsi[i] + g.grad_psi[i];
        // Angular average of <v, F - p>: the x,y parts of p rotate out.
        const double dot = v.x() * curve.rho[i] + v.y() * (curve.z[i] - p.z());
        integral += dot * g.area_weight[i];
        vol += g.area_weight[i];
    }
    return std::fabs(2.0 * vol + integral) / (2.0 * vol);
}

double sphere_ambient_bound_latitude(double R, double r) {
    if (!(R > 0.0)) throw InvalidRadius("sphere_ambient_bound_latitude: R must be positive");
    if (!(r > 0.0 && r <= R)) throw InvalidRadius("sphere_ambient_bound_latitude: need 0 < r <= R");
    return 1.0 / (R * R) + (R * R - r * r) / (r * r * R * R);
}

double latitude_circle_lambda1(double r) {
    if (!(r > 0.0)) throw InvalidRadius("latitude_circle_lambda1: r must be positive");
    return 1.0 / (r * r);
}

SphereCurveBound sphere_ambient_bound_curve(const std::vector<Eigen::Vector3d>& samples, double R,
                                            const RadialDensity& density, int n_nodes) {
    if (!(R > 0.0)) throw InvalidRadius("sphere_ambient_bound_curve: R must be positive");
    if (samples.size() < 16) throw InvariantViolation("sphere_ambient_bound_curve: need >= 16 samples");
    if (n_nodes < 16) throw InvariantViolation("sphere_ambient_bound_curve: need >= 16 nodes");
    for (const auto& x : samples)
        if (std::fabs(x.norm() - R) > 1e-8 * R)
            throw InvariantViolation("sphere_ambient_bound_curve: samples must lie on the sphere");

    // Uniform arc-length resampling of the closed 3-D loop.
    std::vector<Eigen::Vector3d> pts = samples;
    if ((pts.front() - pts.back()).norm() < 1e-9 * R) pts.pop_back();
    const std::size_t k = pts.size();
    std::vector<double> t(k);
    t[0] = 0.0;
    for (std::size_t j = 1; j < k; ++j) t[j] = t[j - 1] + (pts[j] - pts[j - 1]).norm();
    const double period = t[k - 1] + (pts[0] - pts[k - 1]).norm();

    std::vector<double> cx(k), cy(k), cz(k);
    for (std::size_t j = 0; j < k; ++j) {
        cx[j] = pts[j].x();
        cy[j] = pts[j].y();
        cz[j] = pts[j].z();
    }
    const PeriodicCubicSpline sx(t, cx, period), sy(t, cy, period), sz(t, cz, period);

    const auto speed = [&](double u) {
        return Eigen::Vector3d(sx.derivative(u), sy.derivative(u), sz.derivative(u)).norm();
    };
    // Total arc length by composite quadrature over a fine uniform grid.
    const int fine = 8 * static_cast<int>(k);
    double L = 0.0;
    {
        double prev = speed(0.0);
        for (int i = 1; i <= fine; ++i) {
            const double u = period * i / fine;
            const double cur = speed(u);
            L += 0.5 * (prev + cur) * (period / fine);
            prev = cur;
        }
    }

    // March to uniform arc length by local Newton steps.
    std::vector<Eigen::Vector3d> gamma(n_nodes);
    {
        double u = 0.0;
        double acc = 0.0;
        const double hs = L / n_nodes;
        gamma[0] = {sx.value(0), sy.value(0), sz.value(0)};
        for (int i = 1; i < n_nodes; ++i) {
            const double target = i * hs;
            while (acc < target) {
                const double du = std::min((target - acc) / std::max(speed(u), 1e-12), period / fine);
                const double mid_speed = speed(u + 0.5 * du);
                acc += mid_speed * du;
                u += du;
            }
            gamma[i] = {sx.value(u), sy.value(u), sz.value(u)};
        }
    }
    const double hs = L / n_nodes;

    double vol = 0.0, energy = 0.0;
    std::vector<double> pw(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const Eigen::Vector3d& x = gamma[i];
        const Eigen::Vector3d& xp = gamma[(i + 1) % n_nodes];
        const Eigen::Vector3d& xm = gamma[(i + n_nodes - 1) % n_nodes];
        const Eigen::Vector3d tv = (xp - xm) / (2.0 * hs);
        const Eigen::Vector3d acc = (xp - 2.0 * x + xm) / (hs * hs);
        const Eigen::Vector3d nsph = x / R;
        Eigen::Vector3d ng = nsph.cross(tv);
        ng /= std::max(ng.norm(), 1e-300);

        const double kappa_g = acc.dot(ng);
        const Eigen::Vector3d g3 = density.grad_psi(x);
        const Eigen::Vector3d gs = g3 - g3.dot(nsph) * nsph; // gradient within the sphere
        const double gT = gs.dot(tv) / std::max(tv.norm(), 1e-300);

        const double w = std::exp(density.psi(x)) * hs;
        pw[i] = std::exp(density.psi(x));
        vol += w;
        energy += (kappa_g * kappa_g + gT * gT) * w;
    }

    SphereCurveBound out;
    out.volume = vol;
    out.bound = 1.0 / (R * R) + energy / vol;

    const SturmOperator op = make_operator(pw, std::vector<double>(n_nodes, 0.0), L, 0);
    const ModeSpectrum ms = solve_modes(op, 2);
    out.lambda1 = ms.mu[1];
    return out;
}

} // namespace driftspec
