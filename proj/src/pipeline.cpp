#include "driftspec/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "driftspec/geometry.hpp"

namespace driftspec {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool sturm_ladder_ok(const ModeSpectrum& k0) {
    // Nodal-domain pattern of the periodic ladder: 1, 2, 2, 4, 4, 6, 6, ...
    for (std::size_t j = 0; j < k0.nodal.size(); ++j) {
        const int expect = (j == 0) ? 1 : 2 * static_cast<int>((j + 1) / 2);
        if (k0.nodal[j] != expect) return false;
    }
    return true;
}

} // namespace

void RunConfig::validate() const {
    if (surface != "shrinker-torus" && surface != "round-torus")
        throw InvariantViolation("RunConfig: unknown surface '" + surface + "'");
    if (surface == "shrinker-torus" && !(C < 0.0))
        throw InvariantViolation("C must be negative for shrinkers");
    if (n < 16) throw InvariantViolation("RunConfig: n must be >= 16");
    if (k_max < 2) throw InvariantViolation("RunConfig: k_max must be >= 2");
    if (j_max < 1) throw InvariantViolation("RunConfig: j_max must be >= 1");
    if (surface == "round-torus" && !(torus_R0 > torus_r && torus_r > 0.0))
        throw InvariantViolation("RunConfig: round torus needs R0 > r > 0");
}

ShooterConfig RunConfig::shooter() const {
    ShooterConfig sc;
    sc.C = C;
    sc.bracket_lo = bracket_lo;
    sc.bracket_hi = bracket_hi;
    sc.h_ode = h_ode;
    sc.tol_event = tol_event;
    sc.tol_root = tol_root;
    sc.s_max = s_max;
    return sc;
}

RadialDensity RunConfig::density() const {
    if (surface == "round-torus") return RadialDensity::constant(a);
    return RadialDensity::gaussian(a, C);
}

double RunConfig::resolved_zero_tol() const {
    if (zero_tol > 0.0) return zero_tol;
    return 1e-6 * std::max(std::fabs(C), 1e-6);
}

json run_config_to_json(const RunConfig& config) {
    json j{{"C", config.C},
           {"a", config.a},
           {"n", config.n},
           {"k_max", config.k_max},
           {"j_max", config.j_max},
           {"tol_event", config.tol_event},
           {"tol_root", config.tol_root},
           {"zero_tol", config.resolved_zero_tol()},
           {"equality_tol", config.equality_tol},
           {"surface", config.surface}};
    if (config.surface == "shrinker-torus") {
        const ShooterConfig sc = config.shooter();
        j["bracket_lo"] = sc.lo();
        j["bracket_hi"] = sc.hi();
        j["h_ode"] = sc.step();
        j["s_max"] = sc.smax();
    } else {
        j["torus_R0"] = config.torus_R0;
        j["torus_r"] = config.torus_r;
    }
    return j;
}

ZModeSelection select_z_mode(const ProfileCurve& curve, const SturmOperator& op_k0,
                             const ModeSpectrum& k0) {
    if (k0.mu.size() < 3) throw InvariantViolation("select_z_mode: need j up to 2 in the k = 0 ladder");
    const double c1 = op_k0.weighted_inner(k0.phi[1], curve.z);
    const double c2 = op_k0.weighted_inner(k0.phi[2], curve.z);

    ZModeSelection out;
    const double split = std::fabs(k0.mu[2] - k0.mu[1]);
    const double scale = std::max(std::fabs(k0.mu[1]), std::fabs(k0.mu[2]));
    if (split < 1e-6 * scale && c1 * c1 + c2 * c2 > 0.0) {
        // Degenerate pair: project z onto the eigenspace.
        const int n = curve.size();
        out.phi.resize(n);
        for (int i = 0; i < n; ++i) out.phi[i] = c1 * k0.phi[1][i] + c2 * k0.phi[2][i];
        const double norm = std::sqrt(op_k0.weighted_inner(out.phi, out.phi));
        for (double& v : out.phi) v /= norm;
        out.mu = (c1 * c1 * k0.mu[1] + c2 * c2 * k0.mu[2]) / (c1 * c1 + c2 * c2);
        out.j = (std::fabs(c1) >= std::fabs(c2)) ? 1 : 2;
    } else {
        out.j = (std::fabs(c1) >= std::fabs(c2)) ? 1 : 2;
        out.mu = k0.mu[out.j];
        out.phi = k0.phi[out.j];
    }
    return out;
}

VerifyOutcome run_verify(const RunConfig& config) {
    config.validate();
    const RadialDensity density = config.density();

    VerifyOutcome out;
    if (config.surface == "shrinker-torus") {
        out.shoot = shoot_torus(config.shooter(), config.n);
        out.curve = out.shoot->curve;
    } else {
        out.curve = make_circle_profile(config.torus_R0, config.torus_r, config.n);
    }

    const std::vector<ModeSpectrum> modes =
        solve_all_modes(out.curve, density, config.k_max, config.j_max);
    out.spectrum = assemble_spectrum(modes, config.resolved_zero_tol());
    out.reilly = verify_equality_case(out.curve, density, out.spectrum, config.equality_tol);
    out.minkowski_residual =
        minkowski_identity_residual(out.curve, density, Eigen::Vector3d::Zero());

    auto push = [&](const std::string& name, bool pass, double value, double threshold,
                    std::string detail = "") {
        out.checks.push_back({name, pass, value, threshold, std::move(detail)});
    };

    const double lam = out.spectrum.lambda1;
    push("upper-bound inequality", out.reilly.relative_gap >= -config.equality_tol,
         out.reilly.relative_gap, config.equality_tol,
         "lambda1 = " + fmt(lam) + ", bound = " + fmt(out.reilly.bound));

    const ModeSpectrum& k0 = modes[0];
    push("ground mode", k0.nodal[0] == 1 && std::fabs(k0.mu[0]) <= config.resolved_zero_tol(),
         k0.mu[0], config.resolved_zero_tol(), "constant eigenfunction, one nodal domain");
    push("periodic ladder nodal pattern", sturm_ladder_ok(k0),
         static_cast<double>(k0.nodal.back()), 0.0, "counts 1,2,2,4,4,...");

    if (config.surface == "shrinker-torus") {
        const double minus_c = -config.C;
        push("first eigenvalue equals -C", std::fabs(lam - minus_c) / minus_c < 1e-3,
             std::fabs(lam - minus_c) / minus_c, 1e-3, "lambda1 = " + fmt(lam));
        push("equality of the bound",
             out.reilly.equality && out.reilly.diagnostics.lambda1_matches_fitted_C,
             std::fabs(out.reilly.relative_gap), config.equality_tol,
             "fitted C = " + fmt(out.reilly.diagnostics.fitted_C));
        const double eps = 1e-3 * std::fabs(config.C);
        push("two-sided eigenvalue bracket",
             lam >= minus_c / 2.0 - eps && lam <= minus_c + eps, lam, eps,
             "[" + fmt(minus_c / 2.0) + ", " + fmt(minus_c) + "]");

        const bool prov_ok = (out.spectrum.lambda1_k == 0 && out.spectrum.lambda1_j == 1) ||
                             (out.spectrum.lambda1_k == 0 && out.spectrum.lambda1_j == 2) ||
                             (out.spectrum.lambda1_k == 1 && out.spectrum.lambda1_j == 0);
        push("lambda1 provenance", prov_ok,
             static_cast<double>(out.spectrum.lambda1_k), 0.0,
             "(k, j) = (" + std::to_string(out.spectrum.lambda1_k) + ", " +
                 std::to_string(out.spectrum.lambda1_j) + ")");

        bool nodal_ok = true;
        for (const SpectrumEntry& e : out.spectrum.entries) {
            if (std::fabs(e.mu - lam) <= 1e-6 * std::fabs(lam) && e.nodal_product != 2)
                nodal_ok = false;
        }
        push("nodal domains at lambda1", nodal_ok, 2.0, 0.0, "every lambda1 eigenfunction has 2");

        out.coordinate = verify_coordinate_eigenfunctions(out.curve, density);
        push("coordinate eigenfunction residuals",
             out.coordinate->rho_residual < 1e-3 && out.coordinate->z_residual < 1e-3,
             std::max(out.coordinate->rho_residual, out.coordinate->z_residual), 1e-3,
             "rho: " + fmt(out.coordinate->rho_residual) + ", z: " + fmt(out.coordinate->z_residual));

        const SturmOperator op0 = build_operator(out.curve, density, 0);
        const ZModeSelection zmode = select_z_mode(out.curve, op0, k0);
        out.second = second_solution_check(op0, zmode.mu, zmode.phi);
        // The value defect and the Wronskian identity hold whether or not the
        // axial pair is degenerate; the derivative defect is reported as the
        // degeneracy indicator (0 iff the companion solution is periodic).
        push("second-solution wronskian",
             out.second->defect_value < 1e-3 && out.second->wronskian_drift < 1e-6,
             out.second->wronskian_drift, 1e-6,
             "value defect " + fmt(out.second->defect_value) + ", derivative defect " +
                 fmt(out.second->defect_deriv));

        const ShrinkerResidual sr = shrinker_residual(out.curve, config.C, Eigen::Vector3d::Zero());
        push("shrinker residual", sr.max_residual < 1e-4 && std::fabs(sr.fitted_C - config.C) < 1e-4,
             sr.max_residual, 1e-4, "fitted C = " + fmt(sr.fitted_C));
        push("weighted volume identity", out.minkowski_residual < 1e-4, out.minkowski_residual,
             1e-4, "Minkowski-type residual");
    } else {
        // Negative control: the bound must stay strictly above lambda1.
        push("strict inequality on the unweighted torus",
             !out.reilly.equality && out.reilly.relative_gap > 10.0 * config.equality_tol,
             out.reilly.relative_gap, 10.0 * config.equality_tol,
             "lambda1 = " + fmt(lam) + ", bound = " + fmt(out.reilly.bound));
        push("weighted volume identity", out.minkowski_residual < 1e-6, out.minkowski_residual,
             1e-6, "Minkowski-type residual");
    }

    out.all_pass = true;
    for (const VerifyCheck& c : out.checks) out.all_pass = out.all_pass && c.pass;
    return out;
}

json verify_to_json(const RunConfig& config, const VerifyOutcome& outcome) {
    json checks = json::array();
    for (const VerifyCheck& c : outcome.checks)
        checks.push_back(json{{"name", c.name},
                              {"pass", c.pass},
                              {"value", c.value},
                              {"threshold", c.threshold},
                              {"detail", c.detail}});
    json j{{"version", DRIFTSPEC_VERSION},
           {"config", run_config_to_json(config)},
           {"all_pass", outcome.all_pass},
           {"checks", checks},
           {"spectrum", spectrum_to_json(outcome.spectrum)},
           {"reilly", reilly_to_json(outcome.reilly)},
           {"minkowski_residual", outcome.minkowski_residual}};
    if (outcome.shoot) {
        j["shoot"] = json{{"r_inner", outcome.shoot->r_inner},
                          {"r_outer", outcome.shoot->r_outer},
                          {"root_miss", outcome.shoot->root_miss}};
    }
    if (outcome.coordinate)
        j["coordinate_residuals"] = json{{"rho", outcome.coordinate->rho_residual},
                                         {"z", outcome.coordinate->z_residual}};
    if (outcome.second)
        j["second_solution"] = json{{"defect_value", outcome.second->defect_value},
                                    {"defect_deriv", outcome.second->defect_deriv},
                                    {"wronskian_drift", outcome.second->wronskian_drift},
                                    {"mu", outcome.second->mu}};
    return j;
}

std::string verify_table(const VerifyOutcome& outcome) {
    std::ostringstream os;
    for (const VerifyCheck& c : outcome.checks) {
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
    }
    os << (outcome.all_pass ? "all checks passed" : "some checks FAILED") << "\n";
    return os.str();
}

} // namespace driftspec
