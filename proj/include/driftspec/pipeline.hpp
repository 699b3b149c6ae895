#ifndef DRIFTSPEC_PIPELINE_HPP
#define DRIFTSPEC_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftspec/reilly.hpp"
#include "driftspec/serialize.hpp"
#include "driftspec/shrinker.hpp"
#include "driftspec/sturm.hpp"

namespace driftspec {

// Fully serializable run parameters; zero-valued numeric fields resolve to
// scale-aware defaults so a run is reproducible from its config echo.
struct RunConfig {
    double C = -1.0;
    double a = 0.0;
    int n = 1024;
    int k_max = 8;
    int j_max = 10;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double h_ode = 0.0;
    double tol_event = 1e-12;
    double tol_root = 1e-13;
    double s_max = 0.0;
    double zero_tol = 0.0;                  // 0 -> 1e-6 |C|
    double equality_tol = 5e-3;
    std::string surface = "shrinker-torus"; // or "round-torus"
    double torus_R0 = 2.0;
    double torus_r = 1.0;

    void validate() const;
    ShooterConfig shooter() const;
    RadialDensity density() const;
    double resolved_zero_tol() const;
};

json run_config_to_json(const RunConfig& config);

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyOutcome {
    ProfileCurve curve;
    SpectrumReport spectrum;
    ReillyReport reilly;
    std::vector<VerifyCheck> checks;
    bool all_pass = false;
    double minkowski_residual = 0.0;
    std::optional<ShootResult> shoot;                  // shrinker surface only
    std::optional<CoordinateResiduals> coordinate;     // shrinker surface only
    std::optional<SecondSolutionReport> second;        // shrinker surface only
};

// Full pipeline: construct the surface (shoot or synthesize), solve the
// spectrum, evaluate the bound, and run every verification check.
VerifyOutcome run_verify(const RunConfig& config);

json verify_to_json(const RunConfig& config, const VerifyOutcome& outcome);
std::string verify_table(const VerifyOutcome& outcome);

// Picks the k = 0 eigenpair that carries the z coordinate (largest weighted
// overlap among j = 1, 2; a degenerate pair gets the normalized projection).
struct ZModeSelection {
    double mu = 0.0;
    int j = 0;
    std::vector<double> phi;
};
ZModeSelection select_z_mode(const ProfileCurve& curve, const SturmOperator& op_k0,
                             const ModeSpectrum& k0);

} // namespace driftspec

#endif
