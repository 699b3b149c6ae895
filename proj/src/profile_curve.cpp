#include "driftspec/profile_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "driftspec/spline.hpp"

namespace driftspec {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

// 5-point Gauss-Legendre on [a, b].
template <typename F>
double gauss5(F&& f, double a, double b) {
    static const double xs[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                 -0.9061798459386640, 0.9061798459386640};
    static const double ws[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                 0.2369268850561891, 0.2369268850561891};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += ws[i] * f(mid + half * xs[i]);
    return acc * half;
}

double bbox_diagonal(const std::vector<double>& rho, const std::vector<double>& z) {
    auto [rmin, rmax] = std::minmax_element(rho.begin(), rho.end());
    auto [zmin, zmax] = std::minmax_element(z.begin(), z.end());
    return std::hypot(*rmax - *rmin, *zmax - *zmin);
}

} // namespace

void ProfileCurve::validate() const {
    const int n = size();
    if (n < 16) throw InvariantViolation("ProfileCurve: need at least 16 nodes");
    if (static_cast<int>(z.size()) != n || static_cast<int>(s.size()) != n ||
        static_cast<int>(alpha.size()) != n)
        throw InvariantViolation("ProfileCurve: ragged node arrays");
    if (!(h > 0.0) || !(length > 0.0))
        throw InvariantViolation("ProfileCurve: nonpositive spacing or length");

    for (int i = 0; i < n; ++i)
        if (!(rho[i] > 0.0)) throw NonPositiveRadius("ProfileCurve: rho <= 0 at node " + std::to_string(i));

    const int intervals = closed ? n : n - 1;
    if (std::fabs(length - h * intervals) > 1e-10 * length)
        throw InvariantViolation("ProfileCurve: length != h * intervals");
    for (int i = 0; i + 1 < n; ++i)
        if (std::fabs(s[i + 1] - s[i] - h) > 1e-10 * length)
            throw InvariantViolation("ProfileCurve: nonuniform arc-length spacing");

    // Discrete unit speed: the chord of a smooth unit-speed arc of length h
    // falls short by (kappa h)^2/24, so the tolerance carries a curvature term.
    for (int i = 0; i < intervals; ++i) {
        const int j = (i + 1) % n;
        const double chord = std::hypot(rho[j] - rho[i], z[j] - z[i]);
        const double dalpha = wrap_angle(alpha[j] - alpha[i]);
        const double tol = 1e-6 + dalpha * dalpha / 16.0;
        if (std::fabs(chord / h - 1.0) > tol)
            throw InvariantViolation("ProfileCurve: unit-speed violation at node " + std::to_string(i));
    }

    if (symmetric_z && !is_z_symmetric(*this))
        throw InvariantViolation("ProfileCurve: symmetric_z flag set but nodes are not z-symmetric");
}

bool is_z_symmetric(const ProfileCurve& curve, double tol) {
    const int n = curve.size();
    const double scale = std::max(1e-300, bbox_diagonal(curve.rho, curve.z));
    const double eps = tol * scale;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return curve.z[a] < curve.z[b]; });
    std::vector<double> zs(n);
    for (int i = 0; i < n; ++i) zs[i] = curve.z[order[i]];

    for (int i = 0; i < n; ++i) {
        const double target_z = -curve.z[i];
        auto lo = std::lower_bound(zs.begin(), zs.end(), target_z - eps);
        double best = 2.0 * eps;
        for (auto it = lo; it != zs.end() && *it <= target_z + eps; ++it) {
            const int j = order[static_cast<int>(it - zs.begin())];
            best = std::min(best, std::hypot(curve.rho[j] - curve.rho[i], curve.z[j] + curve.z[i]));
        }
        if (best > eps) return false;
    }
    return true;
}

ProfileCurve resample_arclength(const std::vector<Eigen::Vector2d>& points, int n_nodes) {
    if (points.size() < 16) throw InvariantViolation("resample_arclength: need at least 16 input points");
    if (n_nodes < 16) throw InvariantViolation("resample_arclength: need at least 16 output nodes");

    std::vector<Eigen::Vector2d> pts = points;
    for (const auto& p : pts)
        if (!(p.x() > 0.0)) throw NonPositiveRadius("resample_arclength: input rho <= 0");

    double diag = 0.0;
    {
        Eigen::Vector2d lo = pts.front(), hi = pts.front();
        for (const auto& p : pts) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        diag = (hi - lo).norm();
        if (!(diag > 0.0)) throw InvariantViolation("resample_arclength: degenerate input");
    }

    // Drop a duplicated closing point, then insist the closing chord looks
    // like an ordinary segment of the polyline.
    if ((pts.front() - pts.back()).norm() < 1e-9 * diag) pts.pop_back();
    std::vector<Eigen::Vector2d> clean;
    clean.reserve(pts.size());
    for (const auto& p : pts)
        if (clean.empty() || (p - clean.back()).norm() > 1e-14 * diag) clean.push_back(p);
    if (clean.size() < 16) throw InvariantViolation("resample_arclength: too few distinct points");

    const std::size_t k = clean.size();
    std::vector<double> seg(k);
    for (std::size_t j = 0; j < k; ++j) seg[j] = (clean[(j + 1) % k] - clean[j]).norm();
    std::vector<double> sorted_seg = seg;
    std::sort(sorted_seg.begin(), sorted_seg.end());
    const double median = sorted_seg[k / 2];
    if (seg[k - 1] > 10.0 * std::max(median, 1e-12 * diag))
        throw OpenCurve("resample_arclength: endpoints do not close the polyline");

    // Cumulative-chord parametrization and periodic cubic interpolation.
    std::vector<double> t(k), xr(k), xz(k);
    t[0] = 0.0;
    for (std::size_t j = 1; j < k; ++j) t[j] = t[j - 1] + seg[j - 1];
    const double period = t[k - 1] + seg[k - 1];
    for (std::size_t j = 0; j < k; ++j) {
        xr[j] = clean[j].x();
        xz[j] = clean[j].y();
    }
    PeriodicCubicSpline sr(t, xr, period);
    PeriodicCubicSpline sz(std::move(t), std::move(xz), period);

    const auto speed = [&](double u) { return std::hypot(sr.derivative(u), sz.derivative(u)); };

    // Arc length per chord segment, then total.
    std::vector<double> cum(k + 1, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const double tb = (j + 1 < k) ? sr.knots()[j + 1] : period;
        cum[j + 1] = cum[j] + gauss5(speed, sr.knots()[j], tb);
    }
    const double total = cum[k];

    ProfileCurve out;
    out.closed = true;
    out.length = total;
    out.h = total / n_nodes;
    out.s.resize(n_nodes);
    out.rho.resize(n_nodes);
    out.z.resize(n_nodes);
    out.alpha.resize(n_nodes);

    for (int i = 0; i < n_nodes; ++i) {
        const double target = i * out.h;
        const auto hi_it = std::upper_bound(cum.begin(), cum.end(), target);
        std::size_t j = std::min<std::size_t>(k - 1, std::max<std::ptrdiff_t>(0, hi_it - cum.begin() - 1));
        const double ta = sr.knots()[j];
        const double tb = (j + 1 < k) ? sr.knots()[j + 1] : period;

        // Newton for t with ds/dt = speed, seeded by linear interpolation.
        const double want = target - cum[j];
        double u = ta + (tb - ta) * (cum[j + 1] > cum[j] ? want / (cum[j + 1] - cum[j]) : 0.5);
        for (int it = 0; it < 8; ++it) {
            const double g = gauss5(speed, ta, u) - want;
            const double sp = speed(u);
            if (!(sp > 0.0)) break;
            const double step = g / sp;
            u = std::clamp(u - step, ta, tb);
            if (std::fabs(step) < 1e-15 * std::max(1.0, period)) break;
        }

        out.s[i] = target;
        out.rho[i] = sr.value(u);
        out.z[i] = sz.value(u);
        const double raw = std::atan2(sz.derivative(u), sr.derivative(u));
        out.alpha[i] = (i == 0) ? raw : out.alpha[i - 1] + wrap_angle(raw - out.alpha[i - 1]);
        if (!(out.rho[i] > 0.0)) throw NonPositiveRadius("resample_arclength: resampled rho <= 0");
    }

    out.symmetric_z = is_z_symmetric(out);
    out.validate();
    return out;
}

ProfileCurve make_circle_profile(double r0, double r, int n_nodes) {
    if (!(r > 0.0)) throw InvariantViolation("make_circle_profile: radius must be positive");
    if (n_nodes < 16) throw InvariantViolation("make_circle_profile: need at least 16 nodes");
    ProfileCurve c;
    c.closed = true;
    c.length = 2.0 * kPi * r;
    c.h = c.length / n_nodes;
    c.s.resize(n_nodes);
    c.rho.resize(n_nodes);
    c.z.resize(n_nodes);
    c.alpha.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double u = 2.0 * kPi * i / n_nodes;
        c.s[i] = i * c.h;
        c.rho[i] = r0 + r * std::cos(u);
        c.z[i] = r * std::sin(u);
        c.alpha[i] = u + kPi / 2.0; // tangent (-sin u, cos u), already unwrapped
    }
    c.symmetric_z = true;
    c.validate();
    return c;
}

ProfileCurve make_sphere_meridian(double R, double phi0, double phi1, int n_nodes) {
    if (!(R > 0.0)) throw InvariantViolation("make_sphere_meridian: radius must be positive");
    if (!(0.0 < phi0 && phi0 < phi1 && phi1 < kPi))
        throw InvariantViolation("make_sphere_meridian: need 0 < phi0 < phi1 < pi");
    if (n_nodes < 16) throw InvariantViolation("make_sphere_meridian: need at least 16 nodes");
    ProfileCurve c;
    c.closed = false;
    c.length = R * (phi1 - phi0);
    c.h = c.length / (n_nodes - 1);
    c.s.resize(n_nodes);
    c.rho.resize(n_nodes);
    c.z.resize(n_nodes);
    c.alpha.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double phi = phi0 + (phi1 - phi0) * i / (n_nodes - 1);
        c.s[i] = i * c.h;
        c.rho[i] = R * std::sin(phi);
        c.z[i] = -R * std::cos(phi);
        c.alpha[i] = phi; // tangent (cos phi, sin phi)
    }
    c.symmetric_z = is_z_symmetric(c);
    c.validate();
    return c;
}

} // namespace driftspec
