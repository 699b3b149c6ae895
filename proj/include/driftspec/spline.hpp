#ifndef DRIFTSPEC_SPLINE_HPP
#define DRIFTSPEC_SPLINE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "driftspec/errors.hpp"

namespace driftspec {

// C2 periodic cubic spline on possibly nonuniform knots t_0 < t_1 < ... < t_{K-1},
// period T (so the curve closes smoothly from t_{K-1} back to t_0 + T).
class PeriodicCubicSpline {
public:
    PeriodicCubicSpline() = default;

    PeriodicCubicSpline(std::vector<double> knots, std::vector<double> values, double period)
        : t_(std::move(knots)), y_(std::move(values)), period_(period) {
        const std::size_t k = t_.size();
        if (k < 3) throw InvariantViolation("PeriodicCubicSpline: need at least 3 knots");
        if (y_.size() != k) throw InvariantViolation("PeriodicCubicSpline: knot/value size mismatch");
        if (period_ <= 0.0) throw InvariantViolation("PeriodicCubicSpline: period must be positive");
        for (std::size_t j = 0; j + 1 < k; ++j)
            if (!(t_[j + 1] > t_[j])) throw InvariantViolation("PeriodicCubicSpline: knots not increasing");
        if (!(t_[0] + period_ > t_.back()))
            throw InvariantViolation("PeriodicCubicSpline: period shorter than knot span");
        solve_moments();
    }

    double period() const { return period_; }
    const std::vector<double>& knots() const { return t_; }

    double value(double t) const {
        auto [j, x] = locate(t);
        const double h = seg_len(j);
        const double a = (t_[j] + h - x) / h; // weight of left endpoint
        const double b = 1.0 - a;
        const double yl = y_[j], yr = y_right(j);
        return a * yl + b * yr +
               ((a * a * a - a) * m_[j] + (b * b * b - b) * m_next(j)) * (h * h) / 6.0;
    }

    double derivative(double t) const {
        auto [j, x] = locate(t);
        const double h = seg_len(j);
        const double a = (t_[j] + h - x) / h;
        const double b = 1.0 - a;
        const double yl = y_[j], yr = y_right(j);
        return (yr - yl) / h +
               ((3.0 * b * b - 1.0) * m_next(j) - (3.0 * a * a - 1.0) * m_[j]) * h / 6.0;
    }

private:
    std::vector<double> t_, y_, m_; // m_: second derivatives at knots
    double period_ = 0.0;

    std::size_t count() const { return t_.size(); }
    double seg_len(std::size_t j) const {
        return (j + 1 < count()) ? t_[j + 1] - t_[j] : t_[0] + period_ - t_[j];
    }
    double y_right(std::size_t j) const { return (j + 1 < count()) ? y_[j + 1] : y_[0]; }
    double m_next(std::size_t j) const { return (j + 1 < count()) ? m_[j + 1] : m_[0]; }

    // Map t into [t_0, t_0 + T) and find its segment by binary search.
    std::pair<std::size_t, double> locate(double t) const {
        double x = std::fmod(t - t_[0], period_);
        if (x < 0.0) x += period_;
        x += t_[0];
        std::size_t lo = 0, hi = count(); // segment j covers [t_j, t_{j+1})
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (t_[mid] <= x)
                lo = mid;
            else
                hi = mid;
        }
        return {lo, x};
    }

    // Cyclic tridiagonal system for the knot second derivatives
    // (Sherman-Morrison correction on top of the Thomas algorithm).
    void solve_moments() {
        const std::size_t k = count();
        std::vector<double> h(k);
        for (std::size_t j = 0; j < k; ++j) h[j] = seg_len(j);

        std::vector<double> diag(k), sub(k), sup(k), rhs(k);
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t prev = (j + k - 1) % k;
            sub[j] = h[prev] / 6.0;
            sup[j] = h[j] / 6.0;
            diag[j] = (h[prev] + h[j]) / 3.0;
            const double dr = (y_right(j) - y_[j]) / h[j];
            const double dl = (y_[j] - y_[prev]) / h[prev];
            rhs[j] = dr - dl;
        }

        auto thomas = [&](const std::vector<double>& b, const std::vector<double>& r) {
            std::vector<double> c(k), d(k);
            c[0] = sup[0] / b[0];
            d[0] = r[0] / b[0];
            for (std::size_t j = 1; j < k; ++j) {
                const double w = b[j] - sub[j] * c[j - 1];
                c[j] = sup[j] / w;
                d[j] = (r[j] - sub[j] * d[j - 1]) / w;
            }
            for (std::size_t j = k - 1; j-- > 0;) d[j] -= c[j] * d[j + 1];
            return d;
        };

        // Fold the two cyclic corner entries (row 0 <-> m_{k-1}, row k-1 <-> m_0)
        // into a rank-one update; the Thomas sweep never reads those corners.
        const double beta = sub[0];
        const double alpha = sup[k - 1];
        const double gamma = -diag[0];
        std::vector<double> bmod = diag;
        bmod[0] -= gamma;
        bmod[k - 1] -= alpha * beta / gamma;

        std::vector<double> u(k, 0.0);
        u[0] = gamma;
        u[k - 1] = alpha;

        const std::vector<double> x = thomas(bmod, rhs);
        const std::vector<double> q = thomas(bmod, u);

        const double vx = x[0] + (beta / gamma) * x[k - 1];
        const double vq = 1.0 + q[0] + (beta / gamma) * q[k - 1];
        if (std::fabs(vq) < 1e-300) throw EigensolverFailure("cyclic spline system singular");
        m_.resize(k);
        for (std::size_t j = 0; j < k; ++j) m_[j] = x[j] - q[j] * (vx / vq);
    }
};

} // namespace driftspec

#endif
