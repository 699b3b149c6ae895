#include "driftspec/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace driftspec {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

double parse_double(const std::string& tok, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + tok + "' in " + where);
    }
}

std::vector<std::vector<double>> read_csv_table(const std::string& path,
                                                const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        const auto cols = split_csv_line(line);
        if (cols.size() != header.size()) throw ParseError(path + ": unexpected column count in header");
        for (std::size_t i = 0; i < header.size(); ++i)
            if (cols[i] != header[i])
                throw ParseError(path + ": expected header column '" + header[i] + "', got '" + cols[i] + "'");
    }
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto toks = split_csv_line(line);
        if (toks.size() != header.size())
            throw ParseError(path + ": wrong field count at line " + std::to_string(lineno));
        std::vector<double> row;
        row.reserve(toks.size());
        for (const auto& t : toks) row.push_back(parse_double(t, path + ":" + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_profile_csv(const std::string& path, const ProfileCurve& curve) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "s,rho,z,alpha\n";
    for (int i = 0; i < curve.size(); ++i)
        out << fmt_double(curve.s[i]) << ',' << fmt_double(curve.rho[i]) << ','
            << fmt_double(curve.z[i]) << ',' << fmt_double(curve.alpha[i]) << '\n';
}

ProfileCurve read_profile_csv(const std::string& path) {
    const auto rows = read_csv_table(path, {"s", "rho", "z", "alpha"});
    if (rows.size() < 16) throw ParseError(path + ": need at least 16 nodes");
    ProfileCurve c;
    const int n = static_cast<int>(rows.size());
    c.s.resize(n);
    c.rho.resize(n);
    c.z.resize(n);
    c.alpha.resize(n);
    for (int i = 0; i < n; ++i) {
        c.s[i] = rows[i][0];
        c.rho[i] = rows[i][1];
        c.z[i] = rows[i][2];
        c.alpha[i] = rows[i][3];
    }
    c.h = c.s[1] - c.s[0];
    c.length = c.h * n;
    c.closed = true;
    c.symmetric_z = is_z_symmetric(c);
    try {
        c.validate();
    } catch (const Error& e) {
        throw ParseError(path + ": invalid profile: " + e.what());
    }
    return c;
}

json curve_to_json(const ProfileCurve& curve) {
    return json{{"type", "profile_curve"},
                {"n", curve.size()},
                {"h", curve.h},
                {"length", curve.length},
                {"closed", curve.closed},
                {"symmetric_z", curve.symmetric_z},
                {"s", curve.s},
                {"rho", curve.rho},
                {"z", curve.z},
                {"alpha", curve.alpha}};
}

ProfileCurve curve_from_json(const json& j) {
    ProfileCurve c;
    try {
        c.h = j.at("h").get<double>();
        c.length = j.at("length").get<double>();
        c.closed = j.at("closed").get<bool>();
        c.symmetric_z = j.at("symmetric_z").get<bool>();
        c.s = j.at("s").get<std::vector<double>>();
        c.rho = j.at("rho").get<std::vector<double>>();
        c.z = j.at("z").get<std::vector<double>>();
        c.alpha = j.at("alpha").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("profile json: ") + e.what());
    }
    try {
        c.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("profile json: invalid curve: ") + e.what());
    }
    return c;
}

json density_to_json(const RadialDensity& density) {
    json j{{"kind", density.kind_name()},
           {"a", density.a()},
           {"center",
            {density.center().x(), density.center().y(), density.center().z()}}};
    if (density.kind() == RadialDensity::Kind::gaussian) j["C"] = density.C();
    if (density.kind() == RadialDensity::Kind::custom) {
        j["r"] = density.table_r();
        j["psi"] = density.table_f();
        j["dpsi"] = density.table_df();
    }
    return j;
}

RadialDensity density_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        Eigen::Vector3d center = Eigen::Vector3d::Zero();
        if (j.contains("center")) {
            const auto c = j.at("center").get<std::vector<double>>();
            if (c.size() != 3) throw ParseError("density json: center needs 3 components");
            center = {c[0], c[1], c[2]};
        }
        if (kind == "gaussian")
            return RadialDensity::gaussian(j.value("a", 0.0), j.at("C").get<double>(), center);
        if (kind == "constant") return RadialDensity::constant(j.value("a", 0.0));
        if (kind == "custom")
            return RadialDensity::custom(j.at("r").get<std::vector<double>>(),
                                         j.at("psi").get<std::vector<double>>(),
                                         j.at("dpsi").get<std::vector<double>>(), center);
        throw ParseError("density json: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ParseError(std::string("density json: ") + e.what());
    }
}

json spectrum_to_json(const SpectrumReport& report) {
    json entries = json::array();
    for (const SpectrumEntry& e : report.entries)
        entries.push_back(json{{"mu", e.mu},
                               {"k", e.k},
                               {"j", e.j},
                               {"multiplicity", e.multiplicity},
                               {"nodal_curve", e.nodal_curve},
                               {"nodal_product", e.nodal_product}});
    json j{{"lambda1", report.lambda1},
           {"lambda1_k", report.lambda1_k},
           {"lambda1_j", report.lambda1_j},
           {"zero_tol", report.zero_tol},
           {"truncation_warning", report.truncation_warning},
           {"entries", entries}};
    if (report.truncation_warning) j["warning"] = report.warning;
    return j;
}

void write_spectrum_csv(const std::string& path, const SpectrumReport& report) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "mu,k,j,multiplicity,nodal_curve,nodal_product\n";
    for (const SpectrumEntry& e : report.entries)
        out << fmt_double(e.mu) << ',' << e.k << ',' << e.j << ',' << e.multiplicity << ','
            << e.nodal_curve << ',' << e.nodal_product << '\n';
}

json reilly_to_json(const ReillyReport& report) {
    return json{{"bound", report.bound},
                {"lambda1", report.lambda1},
                {"relative_gap", report.relative_gap},
                {"equality", report.equality},
                {"tolerance", report.tolerance},
                {"diagnostics",
                 {{"shrinker_residual", report.diagnostics.shrinker_residual},
                  {"fitted_C", report.diagnostics.fitted_C},
                  {"gaussian_misfit", report.diagnostics.gaussian_misfit},
                  {"gaussian_a", report.diagnostics.gaussian_a},
                  {"gaussian_c", report.diagnostics.gaussian_c},
                  {"lambda1_matches_fitted_C", report.diagnostics.lambda1_matches_fitted_C},
                  {"center",
                   {report.diagnostics.center.x(), report.diagnostics.center.y(),
                    report.diagnostics.center.z()}}}}};
}

void write_eigenfunction_csv(const std::string& path, const std::vector<double>& s,
                             const std::vector<double>& phi) {
    if (s.size() != phi.size()) throw InvariantViolation("write_eigenfunction_csv: size mismatch");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "s,phi\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << fmt_double(s[i]) << ',' << fmt_double(phi[i]) << '\n';
}

void write_scan_csv(const std::string& path, const std::vector<MissSample>& scan) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "r0,miss,termination\n";
    for (const MissSample& m : scan) {
        const char* term = m.termination == Termination::z_return
                               ? "z-return"
                               : (m.termination == Termination::axis_hit ? "axis-hit" : "length-exceeded");
        out << fmt_double(m.r0) << ',' << fmt_double(m.miss) << ',' << term << '\n';
    }
}

SturmOperator read_pq_csv(const std::string& path) {
    const auto rows = read_csv_table(path, {"s", "p", "q"});
    if (rows.size() < 16) throw ParseError(path + ": need at least 16 rows");
    const int n = static_cast<int>(rows.size());
    std::vector<double> p(n), q(n);
    const double h = rows[1][0] - rows[0][0];
    for (int i = 0; i < n; ++i) {
        if (i > 0 && std::fabs(rows[i][0] - rows[i - 1][0] - h) > 1e-8 * std::fabs(h) + 1e-14)
            throw ParseError(path + ": s column must be uniformly spaced");
        p[i] = rows[i][1];
        q[i] = rows[i][2];
    }
    try {
        return make_operator(std::move(p), std::move(q), h * n, 0);
    } catch (const Error& e) {
        throw ParseError(path + ": invalid operator table: " + e.what());
    }
}

std::string format_json(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << content;
}

} // namespace driftspec
