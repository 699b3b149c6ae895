#include "driftspec/shrinker.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "driftspec/density.hpp"
#include "driftspec/geometry.hpp"

namespace driftspec {

namespace {

constexpr double kPi = std::numbers::pi;

OdeState rk4_step(const OdeState& y, double h, double C) {
    const auto add = [](const OdeState& a, const OdeState& b, double f) {
        return OdeState{a.rho + f * b.rho, a.z + f * b.z, a.alpha + f * b.alpha};
    };
    const OdeState k1 = shrinker_rhs(y, C);
    const OdeState k2 = shrinker_rhs(add(y, k1, h / 2.0), C);
    const OdeState k3 = shrinker_rhs(add(y, k2, h / 2.0), C);
    const OdeState k4 = shrinker_rhs(add(y, k3, h), C);
    return OdeState{y.rho + h / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho),
                    y.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
                    y.alpha + h / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha)};
}

} // namespace

void ShooterConfig::validate() const {
    if (!(C < 0.0)) throw InvariantViolation("ShooterConfig: C must be negative for shrinkers");
    if (!(lo() > 0.0 && hi() > lo())) throw InvariantViolation("ShooterConfig: need 0 < r_lo < r_hi");
    if (!(step() > 0.0 && tol_event > 0.0 && tol_root > 0.0 && smax() > 0.0))
        throw InvariantViolation("ShooterConfig: tolerances and steps must be positive");
}

OdeState shrinker_rhs(const OdeState& y, double C) {
    const double ca = std::cos(y.alpha), sa = std::sin(y.alpha);
    return OdeState{ca, sa, -C * (y.rho * sa - y.z * ca) - sa / y.rho};
}

Trajectory integrate_profile(const ShooterConfig& config, double r0) {
    config.validate();
    if (!(r0 > 0.0)) throw InvariantViolation("integrate_profile: r0 must be positive");

    const double h = config.step();
    const double rho_min = config.rhomin();
    const double s_cut = config.smax();

    Trajectory traj;
    traj.s.reserve(static_cast<std::size_t>(s_cut / h) + 2);
    traj.states.reserve(traj.s.capacity());

    OdeState y{r0, 0.0, kPi / 2.0};
    double s = 0.0;
    traj.s.push_back(s);
    traj.states.push_back(y);

    while (true) {
        const OdeState prev = y;
        y = rk4_step(y, h, config.C);
        s += h;

        if (!(y.rho > rho_min) || !std::isfinite(y.rho) || !std::isfinite(y.alpha)) {
            traj.s.push_back(s);
            traj.states.push_back(y);
            traj.termination = Termination::axis_hit;
            return traj;
        }

        if (prev.z > 0.0 && y.z <= 0.0) {
            // Refine the crossing by bisection on the substep length.
            double lo = 0.0, hi = h;
            OdeState at = y;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                at = rk4_step(prev, mid, config.C);
                if (std::fabs(at.z) < config.tol_event || hi - lo < 1e-16 * h) break;
                if (at.z > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            traj.s.push_back(s - h + 0.5 * (lo + hi));
            at.z = 0.0; // land exactly on the symmetry plane
            traj.states.push_back(at);
            traj.termination = Termination::z_return;
            return traj;
        }

        traj.s.push_back(s);
        traj.states.push_back(y);

        if (s >= s_cut) {
            traj.termination = Termination::length_exceeded;
            return traj;
        }
    }
}

std::vector<MissSample> scan_miss(const ShooterConfig& config, int n_samples) {
    config.validate();
    if (n_samples < 2) throw InvariantViolation("scan_miss: need at least 2 samples");
    std::vector<MissSample> table;
    table.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double r0 = config.lo() + (config.hi() - config.lo()) * i / (n_samples - 1);
        const Trajectory t = integrate_profile(config, r0);
        double miss = std::numeric_limits<double>::quiet_NaN();
        if (t.termination == Termination::z_return) miss = t.states.back().alpha + kPi / 2.0;
        table.push_back({r0, miss, t.termination});
    }
    return table;
}

ShootResult shoot_torus(const ShooterConfig& config, int n_nodes, int scan_samples) {
    config.validate();

    ShootResult result;
    result.scan = scan_miss(config, scan_samples);

    auto miss_at = [&](double r0) {
        const Trajectory t = integrate_profile(config, r0);
        return (t.termination == Termination::z_return)
                   ? t.states.back().alpha + kPi / 2.0
                   : std::numeric_limits<double>::quiet_NaN();
    };

    double lo = 0.0, hi = 0.0, miss_lo = 0.0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < result.scan.size(); ++i) {
        const MissSample& a = result.scan[i];
        const MissSample& b = result.scan[i + 1];
        if (std::isfinite(a.miss) && std::isfinite(b.miss) && a.miss * b.miss <= 0.0) {
            lo = a.r0;
            hi = b.r0;
            miss_lo = a.miss;
            found = true;
            break;
        }
    }
    if (!found) throw NoSignChange("shoot_torus: miss function has no sign change on the bracket");

    for (int it = 0; it < 200 && hi - lo > config.tol_root * config.scale(); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = miss_at(mid);
        if (!std::isfinite(m))
            throw NoConvergence("shoot_torus: trajectory lost the z-return inside the bracket");
        if (m == 0.0) {
            lo = hi = mid;
            break;
        }
        if (m * miss_lo < 0.0)
            hi = mid;
        else {
            lo = mid;
            miss_lo = m;
        }
    }

    const double root = 0.5 * (lo + hi);
    const Trajectory half = integrate_profile(config, root);
    if (half.termination != Termination::z_return)
        throw NoConvergence("shoot_torus: root trajectory does not return to z = 0");

    result.r_inner = root;
    result.r_outer = half.states.back().rho;
    result.root_miss = half.states.back().alpha + kPi / 2.0;

    // Join the upper half with its mirror image through z -> -z.
    std::vector<Eigen::Vector2d> poly;
    poly.reserve(2 * half.states.size());
    for (const OdeState& st : half.states) poly.emplace_back(st.rho, st.z);
    for (std::size_t i = half.states.size() - 1; i-- > 1;)
        poly.emplace_back(half.states[i].rho, -half.states[i].z);

    result.curve = resample_arclength(poly, n_nodes);
    if (!result.curve.symmetric_z)
        throw NoConvergence("shoot_torus: resampled profile lost its z-symmetry");
    return result;
}

ShrinkerResidual shrinker_residual(const ProfileCurve& curve, double C, const Eigen::Vector3d& p) {
    const SurfaceGeometry g = surface_geometry(curve, RadialDensity::constant(0.0));
    const int n = curve.size();

    ShrinkerResidual r;
    double sum_hb = 0.0, sum_bb = 0.0;
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d nu3{g.normal[i].x(), 0.0, g.normal[i].y()};
        const Eigen::Vector3d fp = curve.surface_point(i, 0.0) - p;
        b[i] = fp.dot(nu3);
        r.max_residual = std::max(r.max_residual, std::fabs(g.mean_h[i] - C * b[i]));
        sum_hb += g.mean_h[i] * b[i];
        sum_bb += b[i] * b[i];
    }
    r.fitted_C = sum_hb / sum_bb;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = g.mean_h[i] - r.fitted_C * b[i];
        ss += e * e;
    }
    r.fit_rms = std::sqrt(ss / n);
    return r;
}

} // namespace driftspec
