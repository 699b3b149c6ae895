#ifndef DRIFTSPEC_DENSITY_HPP
#define DRIFTSPEC_DENSITY_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "driftspec/errors.hpp"

namespace driftspec {

// Ambient weight e^psi. Gaussian form psi(x) = a + (C/2)|x - center|^2,
// constant form psi = a, or a custom radial profile tabulated as
// (r, psi(r), psi'(r)) and interpolated by cubic Hermite segments.
class RadialDensity {
public:
    enum class Kind { gaussian, constant, custom };

    static RadialDensity gaussian(double a, double C, Eigen::Vector3d center = Eigen::Vector3d::Zero());
    static RadialDensity constant(double a);
    static RadialDensity custom(std::vector<double> r, std::vector<double> f, std::vector<double> df,
                                Eigen::Vector3d center = Eigen::Vector3d::Zero());

    Kind kind() const { return kind_; }
    double a() const { return a_; }
    double C() const { return C_; }
    const Eigen::Vector3d& center() const { return center_; }

    double psi(const Eigen::Vector3d& x) const;
    Eigen::Vector3d grad_psi(const Eigen::Vector3d& x) const;
    double weight(const Eigen::Vector3d& x) const { return std::exp(psi(x)); }

    // Same density with the additive constant shifted by da (gauge tests).
    RadialDensity shifted(double da) const;

    // Whether the center lies on the rotation axis (x = y = 0) within tol;
    // every revolution-surface operation requires this.
    bool center_on_axis(double tol = 1e-12) const {
        return std::fabs(center_.x()) <= tol && std::fabs(center_.y()) <= tol;
    }
    void require_center_on_axis(const char* who) const;

    std::string kind_name() const;

    const std::vector<double>& table_r() const { return r_; }
    const std::vector<double>& table_f() const { return f_; }
    const std::vector<double>& table_df() const { return df_; }

private:
    RadialDensity() = default;

    double radial_value(double r) const;
    double radial_slope(double r) const;

    Kind kind_ = Kind::constant;
    double a_ = 0.0; // additive constant (gaussian/constant)
    double C_ = 0.0; // quadratic coefficient (gaussian)
    Eigen::Vector3d center_ = Eigen::Vector3d::Zero();
    std::vector<double> r_, f_, df_; // custom profile table
};

} // namespace driftspec

#endif
