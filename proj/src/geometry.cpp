#include "driftspec/geometry.hpp"

#include <cmath>
#include <numbers>

namespace driftspec {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

// d(alpha)/ds on the node grid; fourth-order central differences (the
// curvature residual budget needs better than h^2 at N ~ 1000), one-sided
// second-order at the ends of open arcs.
std::vector<double> alpha_prime(const ProfileCurve& c) {
    const int n = c.size();
    std::vector<double> da(n);
    if (c.closed) {
        for (int i = 0; i < n; ++i) {
            const int ip = (i + 1) % n, im = (i + n - 1) % n;
            const int ip2 = (i + 2) % n, im2 = (i + n - 2) % n;
            const double d1 = wrap_angle(c.alpha[ip] - c.alpha[im]);
            const double d2 = wrap_angle(c.alpha[ip2] - c.alpha[im2]);
            da[i] = (8.0 * d1 - d2) / (12.0 * c.h);
        }
    } else {
        for (int i = 2; i + 2 < n; ++i)
            da[i] = (8.0 * (c.alpha[i + 1] - c.alpha[i - 1]) - (c.alpha[i + 2] - c.alpha[i - 2])) /
                    (12.0 * c.h);
        da[1] = (c.alpha[2] - c.alpha[0]) / (2.0 * c.h);
        da[n - 2] = (c.alpha[n - 1] - c.alpha[n - 3]) / (2.0 * c.h);
        da[0] = (-3.0 * c.alpha[0] + 4.0 * c.alpha[1] - c.alpha[2]) / (2.0 * c.h);
        da[n - 1] = (3.0 * c.alpha[n - 1] - 4.0 * c.alpha[n - 2] + c.alpha[n - 3]) / (2.0 * c.h);
    }
    return da;
}

// Trapezoid factor: 1 everywhere on a periodic grid, half weights at the
// ends of an open arc.
double trapezoid_factor(const ProfileCurve& c, int i) {
    if (c.closed) return 1.0;
    return (i == 0 || i == c.size() - 1) ? 0.5 : 1.0;
}

} // namespace

WeightedMeasure weighted_measure(const ProfileCurve& curve, const RadialDensity& density) {
    density.require_center_on_axis("weighted_measure");
    const int n = curve.size();
    WeightedMeasure m;
    m.p.resize(n);
    m.w.resize(n);
    m.total = 0.0;
    for (int i = 0; i < n; ++i) {
        m.p[i] = curve.rho[i] * density.weight(curve.surface_point(i, 0.0));
        m.w[i] = 2.0 * kPi * m.p[i] * curve.h * trapezoid_factor(curve, i);
        m.total += m.w[i];
    }
    return m;
}

double weighted_volume(const ProfileCurve& curve, const RadialDensity& density) {
    return weighted_measure(curve, density).total;
}

SurfaceGeometry surface_geometry(const ProfileCurve& curve, const RadialDensity& density) {
    density.require_center_on_axis("surface_geometry");
    const int n = curve.size();
    SurfaceGeometry g;
    g.kappa_prof.resize(n);
    g.kappa_rot.resize(n);
    g.mean_h.resize(n);
    g.normal.resize(n);
    g.mean_vec.resize(n);
    g.grad_psi.resize(n);
    g.hpsi.resize(n);
    g.psi.resize(n);
    g.area_weight.resize(n);

    const std::vector<double> da = alpha_prime(curve);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d nu = curve.normal(i);
        g.normal[i] = nu;
        g.kappa_prof[i] = -da[i];
        g.kappa_rot[i] = -std::sin(curve.alpha[i]) / curve.rho[i];
        g.mean_h[i] = g.kappa_prof[i] + g.kappa_rot[i];
        g.mean_vec[i] = g.mean_h[i] * nu;

        const Eigen::Vector3d x = curve.surface_point(i, 0.0);
        const Eigen::Vector3d grad3 = density.grad_psi(x);
        const Eigen::Vector2d grad{grad3.x(), grad3.z()};
        g.grad_psi[i] = grad;
        g.hpsi[i] = g.mean_vec[i] - grad.dot(nu) * nu;

        g.psi[i] = density.psi(x);
        g.area_weight[i] =
            2.0 * kPi * curve.rho[i] * std::exp(g.psi[i]) * curve.h * trapezoid_factor(curve, i);
    }
    return g;
}

Eigen::Vector3d center_of_psi_mass(const ProfileCurve& curve, const RadialDensity& density) {
    const WeightedMeasure m = weighted_measure(curve, density);
    double zbar = 0.0;
    for (int i = 0; i < curve.size(); ++i) zbar += curve.z[i] * m.w[i];
    return {0.0, 0.0, zbar / m.total};
}

Eigen::Vector3d center_of_psi_mass(const ProfileCurve& curve, const RadialDensity& density,
                                   const std::function<double(double)>& f,
                                   const std::function<double(double)>& df,
                                   const CenterOptions& opts) {
    const WeightedMeasure m = weighted_measure(curve, density);
    const int n = curve.size();
    const int mt = std::max(4, opts.theta_samples);

    // 2-D trapezoid weights: w_i * (1/mt) per angular sample.
    std::vector<Eigen::Vector3d> pts;
    std::vector<double> wts;
    pts.reserve(static_cast<std::size_t>(n) * mt);
    wts.reserve(static_cast<std::size_t>(n) * mt);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < mt; ++j) {
            pts.push_back(curve.surface_point(i, 2.0 * kPi * j / mt));
            wts.push_back(m.w[i] / mt);
        }

    auto objective = [&](const Eigen::Vector3d& p) {
        double acc = 0.0;
        for (std::size_t q = 0; q < pts.size(); ++q) acc += f((pts[q] - p).norm()) * wts[q];
        return acc;
    };
    auto gradient = [&](const Eigen::Vector3d& p) {
        Eigen::Vector3d acc = Eigen::Vector3d::Zero();
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const Eigen::Vector3d d = p - pts[q];
            const double r = d.norm();
            if (r < 1e-14) continue;
            acc += (df(r) / r) * wts[q] * d;
        }
        return acc;
    };

    Eigen::Vector3d p = center_of_psi_mass(curve, density); // barycenter seed
    double fp = objective(p);
    double step = 1.0 / std::max(m.total, 1e-300);

    for (int it = 0; it < opts.max_iters; ++it) {
        const Eigen::Vector3d grad = gradient(p);
        if (grad.norm() / m.total < opts.grad_tol) return p;

        double eta = step;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            const Eigen::Vector3d cand = p - eta * grad;
            const double fc = objective(cand);
            if (fc <= fp - 0.5 * eta * grad.squaredNorm()) {
                p = cand;
                fp = fc;
                step = eta * 2.0;
                moved = true;
                break;
            }
            eta *= 0.5;
        }
        if (!moved) {
            // Backtracking exhausted: accept only if already essentially flat.
            if (grad.norm() / m.total < 10.0 * opts.grad_tol) return p;
            throw NoConvergence("center_of_psi_mass: line search stalled");
        }
    }
    throw NoConvergence("center_of_psi_mass: gradient descent did not converge");
}

CoordinateFields::CoordinateFields(const ProfileCurve& curve, Eigen::Vector3d p)
    : p_(std::move(p)), rho_(curve.rho), zc_(curve.z) {
    for (double& v : zc_) v -= p_.z();
}

Eigen::Vector3d integral_coordinates(const ProfileCurve& curve, const RadialDensity& density,
                                     const Eigen::Vector3d& p) {
    const WeightedMeasure m = weighted_measure(curve, density);
    // The angular average of (rho cos t, rho sin t, z) - p is (0, 0, z) - p.
    Eigen::Vector3d acc = -p * m.total;
    for (int i = 0; i < curve.size(); ++i) acc.z() += curve.z[i] * m.w[i];
    return acc;
}

} // namespace driftspec
