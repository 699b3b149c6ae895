#ifndef DRIFTSPEC_SERIALIZE_HPP
#define DRIFTSPEC_SERIALIZE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "driftspec/density.hpp"
#include "driftspec/profile_curve.hpp"
#include "driftspec/reilly.hpp"
#include "driftspec/shrinker.hpp"
#include "driftspec/sturm.hpp"

namespace driftspec {

using json = nlohmann::json;

// Profile CSV schema: header "s,rho,z,alpha", one node per row, full
// double precision. Reading validates the curve invariants.
void write_profile_csv(const std::string& path, const ProfileCurve& curve);
ProfileCurve read_profile_csv(const std::string& path);

json curve_to_json(const ProfileCurve& curve);
ProfileCurve curve_from_json(const json& j);

json density_to_json(const RadialDensity& density);
RadialDensity density_from_json(const json& j);

json spectrum_to_json(const SpectrumReport& report);
void write_spectrum_csv(const std::string& path, const SpectrumReport& report);

json reilly_to_json(const ReillyReport& report);

void write_eigenfunction_csv(const std::string& path, const std::vector<double>& s,
                             const std::vector<double>& phi);
void write_scan_csv(const std::string& path, const std::vector<MissSample>& scan);

// p,q table for the standalone Sturm-Liouville solver: header "s,p,q".
SturmOperator read_pq_csv(const std::string& path);

// Deterministic dump: 2-space indent, trailing newline, sorted keys
// (nlohmann objects are key-ordered maps).
std::string format_json(const json& j);
void write_text_file(const std::string& path, const std::string& content);

} // namespace driftspec

#endif
