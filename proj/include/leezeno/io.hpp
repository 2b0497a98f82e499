// io.hpp - CSV and JSON serialisation of tables, survival series, Zeno reports and reductions

#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "leezeno/error.hpp"
#include "leezeno/form_factor.hpp"
#include "leezeno/poles.hpp"
#include "leezeno/reduction.hpp"
#include "leezeno/survival.hpp"
#include "leezeno/zeno.hpp"

namespace leezeno::io {

using json = nlohmann::ordered_json;

/// Round-trip decimal form, 17 significant digits.
inline std::string fmt(double v) {
    char buf[32];
    if (v == 0.0) v = 0.0;  // no "-0" in output
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& field, std::size_t line) {
    const std::string f = trim(field);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(f, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (f.empty() || used != f.size())
        fail(Errc::ParseError, "line " + std::to_string(line) + ": not a number: '" + f + "'");
    return v;
}

} // namespace detail

/// Two-column table with header "omega,g2"; blank lines and lines starting with '#' are skipped.
inline FormFactor read_tabulated_csv(std::istream& in) {
    std::vector<double> omega, g2;
    std::string text;
    std::size_t line = 0;
    bool header = false;
    while (std::getline(in, text)) {
        ++line;
        const std::string t = detail::trim(text);
        if (t.empty() || t.front() == '#') continue;
        if (!header) {
            std::string compact;
            for (char c : t)
                if (c != ' ' && c != '\t') compact.push_back(c);
            if (compact != "omega,g2") fail(Errc::ParseError, "line " + std::to_string(line) + ": expected header 'omega,g2'");
            header = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos)
            fail(Errc::ParseError, "line " + std::to_string(line) + ": expected two comma-separated fields");
        omega.push_back(detail::parse_number(t.substr(0, comma), line));
        g2.push_back(detail::parse_number(t.substr(comma + 1), line));
    }
    if (!header) fail(Errc::ParseError, "empty table");
    return make_tabulated(std::move(omega), std::move(g2));
}

inline FormFactor read_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoError, "cannot open " + path);
    return read_tabulated_csv(in);
}

inline void write_survival_header(std::ostream& out) { out << "t,re_A,im_A,P,method\n"; }

inline void write_survival_rows(std::ostream& out, const SurvivalSeries& s) {
    for (std::size_t i = 0; i < s.times.size(); ++i)
        out << fmt(s.times[i]) << ',' << fmt(s.amplitude[i].real()) << ',' << fmt(s.amplitude[i].imag()) << ','
            << fmt(s.probability[i]) << ',' << to_string(s.method) << '\n';
}

inline void write_survival_csv(std::ostream& out, const std::vector<SurvivalSeries>& blocks) {
    write_survival_header(out);
    for (const auto& s : blocks) write_survival_rows(out, s);
}

inline void write_zeno_csv(std::ostream& out, const ZenoReport& r) {
    out << "tau,gamma_eff,regime\n";
    for (std::size_t i = 0; i < r.taus.size(); ++i)
        out << fmt(r.taus[i]) << ',' << fmt(r.gamma_eff[i]) << ',' << to_string(r.regimes[i]) << '\n';
}

inline json zeno_json(const ZenoReport& r) {
    json j;
    j["gamma"] = r.gamma_natural;
    j["Z"] = r.z;
    j["tau_stars"] = r.tau_stars;
    j["condition_holds"] = r.condition_holds;
    j["golden_rule"] = r.golden_rule ? json(*r.golden_rule) : json(nullptr);
    j["tau_max"] = r.tau_max;
    return j;
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json pole_json(const PoleData& p) {
    json j;
    j["energy"] = complex_json(p.energy);
    j["shift"] = p.shift;
    j["width"] = p.width;
    j["residue"] = complex_json(p.residue);
    j["Z"] = p.renormalization;
    return j;
}

inline json reduction_json(const TwoPoleReduction& r) {
    json j;
    j["lambda_eff"] = r.lambda_eff;
    j["Lambda_eff"] = r.Lambda_eff;
    j["b"] = r.b;
    return j;
}

/// Cascade parameters plus Sigma_b sampled at the given energies.
inline json cascade_json(const CascadeModel& c, const std::vector<cplx>& energies) {
    json j;
    j["omega_b"] = c.omega_b;
    j["lambda"] = c.coupling;
    json samples = json::array();
    for (cplx e : energies) {
        json s;
        s["E"] = complex_json(e);
        s["Sigma_b"] = complex_json(c.sigma_b(e));
        samples.push_back(s);
    }
    j["Sigma_b"] = samples;
    return j;
}

} // namespace leezeno::io
