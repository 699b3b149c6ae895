// Command-line front end: shoot-torus, spectrum, verify, sphere-check,
// sl-solve. Exit codes: 0 success, 1 usage/validation, 2 no sign change in
// the shooting bracket, 3 solver non-convergence, 4 verification failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "driftspec/geometry.hpp"
#include "driftspec/pipeline.hpp"
#include "driftspec/reilly.hpp"
#include "driftspec/serialize.hpp"
#include "driftspec/shrinker.hpp"
#include "driftspec/sturm.hpp"

namespace ds = driftspec;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const std::string& path, const ds::json& j) {
    if (path.empty() || path == "-")
        std::cout << ds::format_json(j);
    else
        ds::write_text_file(path, ds::format_json(j));
}

int cmd_shoot_torus(const ds::RunConfig& config, const std::string& out_path,
                    const std::string& scan_path) {
    config.validate();
    ds::ShootResult result = ds::shoot_torus(config.shooter(), config.n);
    if (!scan_path.empty()) ds::write_scan_csv(scan_path, result.scan);

    const ds::ShrinkerResidual res =
        ds::shrinker_residual(result.curve, config.C, Eigen::Vector3d::Zero());
    std::fprintf(stderr,
                 "shoot-torus: r_inner=%.12g r_outer=%.12g length=%.12g residual=%.3g fitted_C=%.9g\n",
                 result.r_inner, result.r_outer, result.curve.length, res.max_residual, res.fitted_C);

    if (out_path.empty() || ends_with(out_path, ".csv")) {
        ds::write_profile_csv(out_path.empty() ? "profile.csv" : out_path, result.curve);
    } else {
        ds::json j{{"version", DRIFTSPEC_VERSION},
                   {"config", ds::run_config_to_json(config)},
                   {"profile", ds::curve_to_json(result.curve)},
                   {"r_inner", result.r_inner},
                   {"r_outer", result.r_outer},
                   {"residual", res.max_residual},
                   {"fitted_C", res.fitted_C}};
        emit(out_path, j);
    }
    return 0;
}

int cmd_spectrum(const ds::RunConfig& config, const std::string& profile_path,
                 const std::string& out_path, const std::string& eig_dir) {
    ds::ProfileCurve curve = ends_with(profile_path, ".json")
                                 ? ds::curve_from_json(ds::json::parse(std::ifstream(profile_path)))
                                 : ds::read_profile_csv(profile_path);
    const ds::RadialDensity density = config.density();
    const std::vector<ds::ModeSpectrum> modes =
        ds::solve_all_modes(curve, density, config.k_max, config.j_max);

    ds::SpectrumReport report;
    if (config.k_max >= 2) {
        report = ds::assemble_spectrum(modes, config.resolved_zero_tol());
    } else {
        // Truncated run: list the available ladders without the full merge.
        report.zero_tol = config.resolved_zero_tol();
        for (const ds::ModeSpectrum& m : modes)
            for (std::size_t j = 0; j < m.mu.size(); ++j)
                report.entries.push_back({m.mu[j], m.k, static_cast<int>(j),
                                          m.k == 0 ? 1 : 2, m.nodal[j],
                                          m.nodal[j] * (m.k == 0 ? 1 : 2 * m.k)});
        std::sort(report.entries.begin(), report.entries.end(),
                  [](const ds::SpectrumEntry& a, const ds::SpectrumEntry& b) { return a.mu < b.mu; });
        for (const ds::SpectrumEntry& e : report.entries)
            if (e.mu > report.zero_tol && !(e.k == 0 && e.j == 0)) {
                report.lambda1 = e.mu;
                report.lambda1_k = e.k;
                report.lambda1_j = e.j;
                break;
            }
        report.truncation_warning = true;
        report.warning = "k_max < 2: angular truncation too small for a trustworthy lambda1";
    }

    if (!eig_dir.empty()) {
        for (const ds::ModeSpectrum& m : modes)
            for (std::size_t j = 0; j < m.phi.size(); ++j)
                ds::write_eigenfunction_csv(
                    eig_dir + "/phi_k" + std::to_string(m.k) + "_j" + std::to_string(j) + ".csv",
                    curve.s, m.phi[j]);
    }

    ds::json j{{"version", DRIFTSPEC_VERSION},
               {"config", ds::run_config_to_json(config)},
               {"profile_path", profile_path},
               {"spectrum", ds::spectrum_to_json(report)}};
    if (!out_path.empty() && ends_with(out_path, ".csv")) {
        ds::write_spectrum_csv(out_path, report);
        std::fprintf(stderr, "spectrum: lambda1=%.12g at (k=%d, j=%d)\n", report.lambda1,
                     report.lambda1_k, report.lambda1_j);
    } else {
        emit(out_path, j);
    }
    if (report.truncation_warning) std::fprintf(stderr, "warning: %s\n", report.warning.c_str());
    return 0;
}

int cmd_verify(const ds::RunConfig& config, const std::string& out_path) {
    const ds::VerifyOutcome outcome = ds::run_verify(config);
    std::cout << ds::verify_table(outcome);
    if (!out_path.empty()) ds::write_text_file(out_path, ds::format_json(ds::verify_to_json(config, outcome)));
    return outcome.all_pass ? 0 : 4;
}

int cmd_sphere_check(double R, double r, int n, const std::string& out_path) {
    const double bound = ds::sphere_ambient_bound_latitude(R, r);
    const double lambda1 = ds::latitude_circle_lambda1(r);
    const double gap = std::fabs(bound - lambda1) / lambda1;

    // Numerical cross-check through the sampled-curve path.
    std::vector<Eigen::Vector3d> samples;
    const double z0 = std::sqrt(std::max(0.0, R * R - r * r));
    for (int i = 0; i < 512; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 512;
        samples.emplace_back(r * std::cos(t), r * std::sin(t), z0);
    }
    const ds::SphereCurveBound numeric =
        ds::sphere_ambient_bound_curve(samples, R, ds::RadialDensity::constant(0.0), n);

    std::printf("latitude circle: R=%g r=%g bound=%.12g lambda1=%.12g relative gap=%.3g\n", R, r,
                bound, lambda1, gap);
    std::printf("sampled cross-check: bound=%.12g lambda1=%.12g\n", numeric.bound, numeric.lambda1);

    if (!out_path.empty()) {
        ds::json j{{"version", DRIFTSPEC_VERSION},
                   {"config", {{"R", R}, {"r", r}, {"n", n}}},
                   {"bound", bound},
                   {"lambda1", lambda1},
                   {"relative_gap", gap},
                   {"numeric", {{"bound", numeric.bound}, {"lambda1", numeric.lambda1}}}};
        ds::write_text_file(out_path, ds::format_json(j));
    }
    return 0;
}

int cmd_sl_solve(const std::string& pq_path, int j_max, const std::string& out_path) {
    const ds::SturmOperator op = ds::read_pq_csv(pq_path);
    const ds::ModeSpectrum spec = ds::solve_modes(op, j_max);
    ds::json mus = ds::json::array();
    for (std::size_t j = 0; j < spec.mu.size(); ++j)
        mus.push_back(ds::json{{"j", j}, {"mu", spec.mu[j]}, {"nodal", spec.nodal[j]}});
    ds::json j{{"version", DRIFTSPEC_VERSION},
               {"config", {{"pq_path", pq_path}, {"j_max", j_max}, {"n", op.size()}, {"length", op.length}}},
               {"eigenvalues", mus}};
    emit(out_path, j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"drift-Laplacian spectra on revolution surfaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DRIFTSPEC_VERSION);

    ds::RunConfig config;
    std::string out_path, scan_path, profile_path, eig_dir, pq_path;
    double sphere_R = 1.0, sphere_r = 0.5;

    auto add_shooter_opts = [&](CLI::App* cmd) {
        cmd->add_option("--c", config.C, "shrinker constant (negative)");
        cmd->add_option("--a", config.a, "additive density constant");
        cmd->add_option("--n", config.n, "profile nodes");
        cmd->add_option("--bracket-lo", config.bracket_lo, "shooting bracket lower end");
        cmd->add_option("--bracket-hi", config.bracket_hi, "shooting bracket upper end");
        cmd->add_option("--h-ode", config.h_ode, "RK4 step");
        cmd->add_option("--tol-root", config.tol_root, "bisection tolerance on r0");
        cmd->add_option("--tol-event", config.tol_event, "z-return event tolerance");
    };

    CLI::App* shoot = app.add_subcommand("shoot-torus", "construct the closed symmetric shrinker profile");
    add_shooter_opts(shoot);
    shoot->add_option("--out", out_path, "profile output (.csv or .json)");
    shoot->add_option("--emit-scan", scan_path, "write the miss-function scan table (csv)");

    CLI::App* spectrum = app.add_subcommand("spectrum", "solve the drift spectrum of a profile");
    spectrum->add_option("--profile", profile_path, "profile file (.csv or .json)")->required();
    spectrum->add_option("--c", config.C, "Gaussian density constant");
    spectrum->add_option("--a", config.a, "additive density constant");
    spectrum->add_option("--k-max", config.k_max, "largest angular mode");
    spectrum->add_option("--j-max", config.j_max, "eigenvalues per mode");
    spectrum->add_option("--zero-tol", config.zero_tol, "threshold for nonzero eigenvalues");
    spectrum->add_option("--out", out_path, "report output (.json or .csv)");
    spectrum->add_option("--eigenfunctions", eig_dir, "directory for eigenfunction csv dumps");

    CLI::App* verify = app.add_subcommand("verify", "full pipeline with the verification table");
    add_shooter_opts(verify);
    verify->add_option("--k-max", config.k_max, "largest angular mode");
    verify->add_option("--j-max", config.j_max, "eigenvalues per mode");
    verify->add_option("--zero-tol", config.zero_tol, "threshold for nonzero eigenvalues");
    verify->add_option("--surface", config.surface, "shrinker-torus | round-torus");
    verify->add_option("--R0", config.torus_R0, "round torus major radius");
    verify->add_option("--r", config.torus_r, "round torus minor radius");
    verify->add_option("--out", out_path, "verification report (json)");

    CLI::App* sphere = app.add_subcommand("sphere-check", "latitude-circle bound in the round sphere");
    sphere->add_option("--R", sphere_R, "ambient sphere radius")->required();
    sphere->add_option("--r", sphere_r, "latitude circle radius")->required();
    sphere->add_option("--n", config.n, "nodes for the sampled cross-check");
    sphere->add_option("--out", out_path, "report output (json)");

    CLI::App* sl = app.add_subcommand("sl-solve", "standalone periodic Sturm-Liouville solve");
    sl->add_option("--pq", pq_path, "coefficient table csv with columns s,p,q")->required();
    sl->add_option("--j-max", config.j_max, "number of eigenvalues above the ground state");
    sl->add_option("--out", out_path, "eigenvalue report (json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (shoot->parsed()) return cmd_shoot_torus(config, out_path, scan_path);
        if (spectrum->parsed()) return cmd_spectrum(config, profile_path, out_path, eig_dir);
        if (verify->parsed()) return cmd_verify(config, out_path);
        if (sphere->parsed()) return cmd_sphere_check(sphere_R, sphere_r, config.n, out_path);
        if (sl->parsed()) return cmd_sl_solve(pq_path, config.j_max, out_path);
    } catch (const ds::NoSignChange& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ds::NoConvergence& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ds::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
