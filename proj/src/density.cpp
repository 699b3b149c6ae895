#include "driftspec/density.hpp"

#include <algorithm>
#include <cmath>

namespace driftspec {

RadialDensity RadialDensity::gaussian(double a, double C, Eigen::Vector3d center) {
    if (C == 0.0) throw InvariantViolation("RadialDensity::gaussian: C must be nonzero (use constant)");
    RadialDensity d;
    d.kind_ = Kind::gaussian;
    d.a_ = a;
    d.C_ = C;
    d.center_ = std::move(center);
    return d;
}

RadialDensity RadialDensity::constant(double a) {
    RadialDensity d;
    d.kind_ = Kind::constant;
    d.a_ = a;
    return d;
}

RadialDensity RadialDensity::custom(std::vector<double> r, std::vector<double> f, std::vector<double> df,
                                    Eigen::Vector3d center) {
    if (r.size() < 2 || r.size() != f.size() || r.size() != df.size())
        throw InvariantViolation("RadialDensity::custom: table needs matching arrays of length >= 2");
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        if (!(r[i + 1] > r[i])) throw InvariantViolation("RadialDensity::custom: radii not increasing");
    if (r.front() < 0.0) throw InvariantViolation("RadialDensity::custom: radii must be >= 0");
    RadialDensity d;
    d.kind_ = Kind::custom;
    d.center_ = std::move(center);
    d.r_ = std::move(r);
    d.f_ = std::move(f);
    d.df_ = std::move(df);
    return d;
}

double RadialDensity::radial_value(double r) const {
    const auto& xs = r_;
    if (r <= xs.front()) return f_.front() + df_.front() * (r - xs.front());
    if (r >= xs.back()) return f_.back() + df_.back() * (r - xs.back());
    const auto it = std::upper_bound(xs.begin(), xs.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double h = xs[j + 1] - xs[j];
    const double t = (r - xs[j]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * f_[j] + h10 * h * df_[j] + h01 * f_[j + 1] + h11 * h * df_[j + 1];
}

double RadialDensity::radial_slope(double r) const {
    const auto& xs = r_;
    if (r <= xs.front()) return df_.front();
    if (r >= xs.back()) return df_.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double h = xs[j + 1] - xs[j];
    const double t = (r - xs[j]) / h;
    const double d00 = 6 * t * (t - 1) / h;
    const double d10 = (1 - t) * (1 - 3 * t);
    const double d01 = -d00;
    const double d11 = t * (3 * t - 2);
    return d00 * f_[j] + d10 * df_[j] + d01 * f_[j + 1] + d11 * df_[j + 1];
}

double RadialDensity::psi(const Eigen::Vector3d& x) const {
    switch (kind_) {
        case Kind::constant: return a_;
        case Kind::gaussian: return a_ + 0.5 * C_ * (x - center_).squaredNorm();
        case Kind::custom: return radial_value((x - center_).norm());
    }
    return a_;
}

Eigen::Vector3d RadialDensity::grad_psi(const Eigen::Vector3d& x) const {
    switch (kind_) {
        case Kind::constant: return Eigen::Vector3d::Zero();
        case Kind::gaussian: return C_ * (x - center_);
        case Kind::custom: {
            const Eigen::Vector3d d = x - center_;
            const double r = d.norm();
            if (r < 1e-14) return Eigen::Vector3d::Zero();
            return (radial_slope(r) / r) * d;
        }
    }
    return Eigen::Vector3d::Zero();
}

RadialDensity RadialDensity::shifted(double da) const {
    RadialDensity d = *this;
    if (kind_ == Kind::custom) {
        for (double& v : d.f_) v += da;
    } else {
        d.a_ += da;
    }
    return d;
}

void RadialDensity::require_center_on_axis(const char* who) const {
    if (!center_on_axis())
        throw InvariantViolation(std::string(who) + ": density center must lie on the rotation axis");
}

std::string RadialDensity::kind_name() const {
    switch (kind_) {
        case Kind::gaussian: return "gaussian";
        case Kind::constant: return "constant";
        case Kind::custom: return "custom";
    }
    return "constant";
}

} // namespace driftspec
