#include "driftspec/sturm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <tuple>

#include "driftspec/spline.hpp"

namespace driftspec {

namespace {

double midpoint(const std::vector<double>& p, int i, int n) {
    return 0.5 * (p[i] + p[(i + 1) % n]);
}

} // namespace

void SturmOperator::validate() const {
    const int n = size();
    if (n < 16) throw InvariantViolation("SturmOperator: need at least 16 nodes");
    if (static_cast<int>(q.size()) != n) throw InvariantViolation("SturmOperator: p/q size mismatch");
    if (!(h > 0.0) || std::fabs(length - h * n) > 1e-10 * length)
        throw InvariantViolation("SturmOperator: inconsistent spacing");
    for (int i = 0; i < n; ++i) {
        if (!(p[i] > 0.0)) throw InvariantViolation("SturmOperator: weights must be positive");
        if (q[i] < 0.0) throw InvariantViolation("SturmOperator: potential must be nonnegative");
    }
}

std::vector<double> SturmOperator::apply(const std::vector<double>& y) const {
    const int n = size();
    if (static_cast<int>(y.size()) != n) throw InvariantViolation("SturmOperator::apply: size mismatch");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n, im = (i + n - 1) % n;
        const double flux = midpoint(p, i, n) * (y[ip] - y[i]) - midpoint(p, im, n) * (y[i] - y[im]);
        out[i] = -flux / (p[i] * h * h) + q[i] * y[i];
    }
    return out;
}

double SturmOperator::weighted_inner(const std::vector<double>& u, const std::vector<double>& v) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += u[i] * v[i] * p[i];
    return acc * h;
}

SturmOperator build_operator(const ProfileCurve& curve, const RadialDensity& density, int k) {
    if (!curve.closed) throw InvariantViolation("build_operator: need a closed profile curve");
    if (k < 0) throw InvariantViolation("build_operator: mode index must be >= 0");
    density.require_center_on_axis("build_operator");
    const int n = curve.size();
    SturmOperator op;
    op.h = curve.h;
    op.length = curve.length;
    op.k = k;
    op.p.resize(n);
    op.q.resize(n);
    for (int i = 0; i < n; ++i) {
        op.p[i] = curve.rho[i] * density.weight(curve.surface_point(i, 0.0));
        op.q[i] = static_cast<double>(k) * k / (curve.rho[i] * curve.rho[i]);
    }
    op.validate();
    return op;
}

SturmOperator make_operator(std::vector<double> p, std::vector<double> q, double length, int k) {
    SturmOperator op;
    op.p = std::move(p);
    op.q = std::move(q);
    op.k = k;
    op.length = length;
    op.h = length / op.size();
    op.validate();
    return op;
}

ModeSpectrum solve_modes(const SturmOperator& op, int j_max) {
    op.validate();
    if (j_max < 1) throw InvariantViolation("solve_modes: j_max must be >= 1");
    const int n = op.size();
    const int want = std::min(n, j_max + 1);

    // Symmetrize with D = diag(sqrt(p)): B = D^-1 K D^-1 is dense-symmetric
    // cyclic tridiagonal; the similarity keeps the weighted inner product.
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) sq[i] = std::sqrt(op.p[i]);

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    const double h2 = op.h * op.h;
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        const double pmid_r = midpoint(op.p, i, n);
        const double pmid_l = midpoint(op.p, (i + n - 1) % n, n);
        B(i, i) = (pmid_r + pmid_l) / (h2 * op.p[i]) + op.q[i];
        const double off = -pmid_r / (h2 * sq[i] * sq[ip]);
        B(i, ip) = off;
        B(ip, i) = off;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    if (es.info() != Eigen::Success) throw EigensolverFailure("solve_modes: eigensolver did not converge");

    ModeSpectrum spec;
    spec.k = op.k;
    spec.mu.resize(want);
    spec.phi.resize(want);
    spec.nodal.resize(want);
    const double inv_sqrt_h = 1.0 / std::sqrt(op.h);
    for (int j = 0; j < want; ++j) {
        spec.mu[j] = es.eigenvalues()(j);
        std::vector<double>& y = spec.phi[j];
        y.resize(n);
        double peak = 0.0;
        for (int i = 0; i < n; ++i) {
            y[i] = es.eigenvectors()(i, j) / sq[i] * inv_sqrt_h;
            peak = std::max(peak, std::fabs(y[i]));
        }
        for (int i = 0; i < n; ++i) {
            if (std::fabs(y[i]) > 1e-8 * peak) {
                if (y[i] < 0.0)
                    for (double& v : y) v = -v;
                break;
            }
        }
        spec.nodal[j] = nodal_domains(y);
    }
    return spec;
}

std::vector<ModeSpectrum> solve_all_modes(const ProfileCurve& curve, const RadialDensity& density,
                                          int k_max, int j_max) {
    if (k_max < 0) throw InvariantViolation("solve_all_modes: k_max must be >= 0");
    std::vector<std::future<ModeSpectrum>> jobs;
    jobs.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k)
        jobs.push_back(std::async(std::launch::async, [&curve, &density, k, j_max] {
            return solve_modes(build_operator(curve, density, k), j_max);
        }));
    std::vector<ModeSpectrum> modes;
    modes.reserve(k_max + 1);
    for (auto& job : jobs) modes.push_back(job.get());
    return modes;
}

int nodal_domains(const std::vector<double>& phi, double threshold) {
    const int n = static_cast<int>(phi.size());
    if (n == 0) throw AllBelowThreshold("nodal_domains: empty function");
    double peak = 0.0;
    for (double v : phi) peak = std::max(peak, std::fabs(v));
    if (!(peak > 0.0)) throw AllBelowThreshold("nodal_domains: function vanishes identically");

    std::vector<int> signs;
    signs.reserve(n);
    for (double v : phi) {
        if (std::fabs(v) >= threshold * peak) signs.push_back(v > 0.0 ? 1 : -1);
    }
    if (signs.empty()) throw AllBelowThreshold("nodal_domains: all samples below threshold");

    int changes = 0;
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] != signs[(i + 1) % signs.size()]) ++changes;
    return changes == 0 ? 1 : changes;
}

SpectrumReport assemble_spectrum(const std::vector<ModeSpectrum>& modes, double zero_tol) {
    if (modes.size() < 3) throw InvariantViolation("assemble_spectrum: need modes k = 0..k_max, k_max >= 2");
    std::vector<const ModeSpectrum*> by_k(modes.size(), nullptr);
    for (const ModeSpectrum& m : modes) {
        if (m.k < 0 || m.k >= static_cast<int>(modes.size()) || by_k[m.k])
            throw InvariantViolation("assemble_spectrum: modes must cover k = 0..k_max exactly once");
        by_k[m.k] = &m;
    }
    const int k_max = static_cast<int>(modes.size()) - 1;

    SpectrumReport report;
    report.zero_tol = zero_tol;
    double mu_peak = 0.0;
    for (const ModeSpectrum& m : modes)
        for (double mu : m.mu) mu_peak = std::max(mu_peak, std::fabs(mu));

    // The k = 0 ground mode must be the constant with eigenvalue 0 to roundoff.
    if (std::fabs(by_k[0]->mu[0]) > std::max(zero_tol, 1e-12 * (1.0 + mu_peak)))
        throw InvariantViolation("assemble_spectrum: k = 0 ground eigenvalue is not numerically zero");

    for (int k = 0; k <= k_max; ++k) {
        const ModeSpectrum& m = *by_k[k];
        for (std::size_t j = 0; j < m.mu.size(); ++j) {
            SpectrumEntry e;
            e.mu = m.mu[j];
            e.k = k;
            e.j = static_cast<int>(j);
            e.multiplicity = (k == 0) ? 1 : 2;
            e.nodal_curve = m.nodal[j];
            e.nodal_product = e.nodal_curve * (k == 0 ? 1 : 2 * k);
            report.entries.push_back(e);
        }
    }
    std::sort(report.entries.begin(), report.entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
        return std::tie(a.mu, a.k, a.j) < std::tie(b.mu, b.k, b.j);
    });

    const SpectrumEntry* first = nullptr;
    for (const SpectrumEntry& e : report.entries) {
        if (e.mu > zero_tol && !(e.k == 0 && e.j == 0)) {
            first = &e;
            break;
        }
    }
    if (!first) throw InvariantViolation("assemble_spectrum: no eigenvalue above zero_tol");
    report.lambda1 = first->mu;
    report.lambda1_k = first->k;
    report.lambda1_j = first->j;

    const int j_top = static_cast<int>(by_k[first->k]->mu.size()) - 1;
    if (first->k == k_max || first->j == j_top) {
        report.truncation_warning = true;
        report.warning = "lambda1 sits on the truncation boundary; raise k_max or j_max";
    }
    return report;
}

CoordinateResiduals verify_coordinate_eigenfunctions(const ProfileCurve& curve,
                                                     const RadialDensity& density) {
    if (density.kind() != RadialDensity::Kind::gaussian)
        throw InvariantViolation("verify_coordinate_eigenfunctions: density must be Gaussian");
    density.require_center_on_axis("verify_coordinate_eigenfunctions");
    const double C = density.C();
    const int n = curve.size();

    const SturmOperator op1 = build_operator(curve, density, 1);
    const SturmOperator op0 = build_operator(curve, density, 0);

    std::vector<double> zc(curve.z);
    for (double& v : zc) v -= density.center().z();

    const std::vector<double> a_rho = op1.apply(curve.rho);
    const std::vector<double> a_z = op0.apply(zc);

    CoordinateResiduals res;
    double rho_inf = 0.0, z_inf = 0.0, r_num = 0.0, z_num = 0.0;
    for (int i = 0; i < n; ++i) {
        rho_inf = std::max(rho_inf, std::fabs(curve.rho[i]));
        z_inf = std::max(z_inf, std::fabs(zc[i]));
        r_num = std::max(r_num, std::fabs(a_rho[i] + C * curve.rho[i]));
        z_num = std::max(z_num, std::fabs(a_z[i] + C * zc[i]));
    }
    res.rho_residual = r_num / rho_inf;
    res.z_residual = z_num / z_inf;
    return res;
}

SecondSolutionReport second_solution_check(const SturmOperator& op, double mu,
                                           const std::vector<double>& z_like) {
    op.validate();
    if (static_cast<int>(z_like.size()) != op.size())
        throw InvariantViolation("second_solution_check: eigenfunction size mismatch");
    for (double q : op.q)
        if (q != 0.0) throw InvariantViolation("second_solution_check: operator must have k = 0");

    const int n = op.size();
    const double L = op.length;
    std::vector<double> knots(n);
    for (int i = 0; i < n; ++i) knots[i] = i * op.h;
    const PeriodicCubicSpline ps(knots, op.p, L);
    const PeriodicCubicSpline zs(knots, z_like, L);

    // Zero of z_like with positive slope, refined on the spline.
    double s0 = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        if (z_like[i] < 0.0 && z_like[ip] >= 0.0) {
            double a = knots[i], b = knots[i] + op.h;
            double x = a + op.h * (-z_like[i]) / (z_like[ip] - z_like[i]);
            for (int it = 0; it < 60; ++it) {
                const double f = zs.value(x), d = zs.derivative(x);
                if (std::fabs(f) < 1e-15 || d == 0.0) break;
                x = std::clamp(x - f / d, a, b);
            }
            s0 = x;
            break;
        }
    }
    if (!std::isfinite(s0)) throw ZeroNotFound("second_solution_check: eigenfunction has no sign change");

    // State (zeta, w_zeta, ztilde, w_z) with w = p y'; the companion ztilde is
    // integrated through the same flow so the Wronskian identity is tested at
    // integrator accuracy.
    struct State {
        double zeta, wz, zt, wt;
    };
    const auto rhs = [&](double s, const State& y) {
        const double pv = ps.value(s0 + s);
        return State{y.wz / pv, -mu * pv * y.zeta, y.wt / pv, -mu * pv * y.zt};
    };
    const auto step = [&](double s, const State& y, double hh) {
        const auto add = [](const State& a, const State& b, double f) {
            return State{a.zeta + f * b.zeta, a.wz + f * b.wz, a.zt + f * b.zt, a.wt + f * b.wt};
        };
        const State k1 = rhs(s, y);
        const State k2 = rhs(s + hh / 2, add(y, k1, hh / 2));
        const State k3 = rhs(s + hh / 2, add(y, k2, hh / 2));
        const State k4 = rhs(s + hh, add(y, k3, hh));
        return State{y.zeta + hh / 6 * (k1.zeta + 2 * k2.zeta + 2 * k3.zeta + k4.zeta),
                     y.wz + hh / 6 * (k1.wz + 2 * k2.wz + 2 * k3.wz + k4.wz),
                     y.zt + hh / 6 * (k1.zt + 2 * k2.zt + 2 * k3.zt + k4.zt),
                     y.wt + hh / 6 * (k1.wt + 2 * k2.wt + 2 * k3.wt + k4.wt)};
    };

    const int steps = 4 * n;
    const double hh = L / steps;
    State y{1.0, 0.0, 0.0, 1.0}; // zeta(0)=1, zeta'(0)=0; z(0)=0, p z'(0)=1

    SecondSolutionReport rep;
    rep.mu = mu;
    rep.zero_location = s0;
    for (int i = 0; i < steps; ++i) {
        y = step(i * hh, y, hh);
        const double w = y.zeta * y.wt - y.wz * y.zt; // p (zeta z' - zeta' z)
        rep.wronskian_drift = std::max(rep.wronskian_drift, std::fabs(w - 1.0));
    }
    rep.defect_value = std::fabs(y.zeta - 1.0);
    rep.defect_deriv = std::fabs(y.wz / ps.value(s0));
    return rep;
}

} // namespace driftspec
