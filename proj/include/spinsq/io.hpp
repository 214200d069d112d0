#pragma once

// State files and CSV output.
//
// State file (JSON):
//   { "basis_order": "m=+1,0,-1",
//     "amps": [[re, im], ... 9 pairs, row-major with m1 outer, m2 inner] }

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinsq/coupled_state.hpp"

namespace spinsq {

inline constexpr const char* kBasisOrder = "m=+1,0,-1";

/// Readers accept hand-typed files whose squared norm is within this of 1 and renormalize.
inline constexpr double kFileNormTol = 1e-8;

class FormatError : public Error {
public:
    using Error::Error;
};

/// 17 significant digits; non-finite values print as `nan`.
inline std::string format_real(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline nlohmann::json state_to_json(const CoupledState& s) {
    nlohmann::json amps = nlohmann::json::array();
    const CVector v = s.vector();
    for (Eigen::Index k = 0; k < v.size(); ++k) amps.push_back({v[k].real(), v[k].imag()});
    return {{"basis_order", kBasisOrder}, {"amps", amps}};
}

inline CoupledState state_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("state file: top level must be an object");
    if (!j.contains("basis_order") || j["basis_order"] != kBasisOrder)
        throw FormatError(std::string("state file: basis_order must be \"") + kBasisOrder + "\"");
    if (!j.contains("amps") || !j["amps"].is_array() || j["amps"].size() != 9)
        throw FormatError("state file: amps must be an array of 9 [re, im] pairs");
    CVector v(9);
    for (std::size_t k = 0; k < 9; ++k) {
        const auto& p = j["amps"][k];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw FormatError("state file: amps[" + std::to_string(k) + "] is not a [re, im] pair");
        v[static_cast<Eigen::Index>(k)] = cplx(p[0].get<double>(), p[1].get<double>());
    }
    const double n2 = v.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kFileNormTol)
        throw FormatError("state file: amplitudes are not normalized (norm^2 = " + format_real(n2) + ")");
    return CoupledState::from_vector(v, true);
}

inline std::string write_state_string(const CoupledState& s) { return state_to_json(s).dump(2) + "\n"; }

inline CoupledState read_state_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("state file: ") + e.what());
    }
    return state_from_json(j);
}

inline CoupledState read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open state file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return read_state_string(ss.str());
}

inline void write_state_file(const CoupledState& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write state file " + path);
    out << write_state_string(s);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Error("CsvTable: no column " + name);
    }
};

/// Comma separated, header row, LF line endings.
inline void write_csv(const CsvTable& t, std::ostream& out) {
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_real(row[i]);
        out << '\n';
    }
}

inline std::string csv_string(const CsvTable& t) {
    std::ostringstream ss;
    write_csv(t, ss);
    return ss.str();
}

} // namespace spinsq
