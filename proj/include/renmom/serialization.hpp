#pragma once

// JSON and CSV plumbing for the CLI and any embedding tool.  Two rules keep
// the output deterministic: field order is fixed (insertion-ordered JSON
// objects throughout), and every floating-point number is rounded to 15
// significant digits before it is stored, so identical requests serialize to
// byte-identical text.  Complex numbers always travel as {"re": .., "im": ..}
// pairs; CSV follows RFC 4180 quoting.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "renmom/core.hpp"
#include "renmom/distributions.hpp"

namespace renmom {

using ordered_json = nlohmann::ordered_json;

/// Round to 15 significant digits (the serialization grid; closer than any
/// numerical error the library reports, coarser than platform noise).
inline double round15(double x) {
    if (!std::isfinite(x)) return x;
    if (x == 0.0) return 0.0;  // canonicalize -0.0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

/// The same 15-significant-digit text, for CSV cells.
inline std::string format15(double x) {
    if (x == 0.0) return "0";  // canonicalize -0.0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

inline ordered_json json_complex(const complex& z) {
    return ordered_json{{"re", round15(z.real())}, {"im", round15(z.imag())}};
}

inline complex complex_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im"))
        throw invalid_parameter("complex value must be an object {\"re\": .., \"im\": ..}");
    return complex{j.at("re").get<double>(), j.at("im").get<double>()};
}

inline ordered_json spec_to_json(const DistributionSpec& spec) {
    validate(spec);
    ordered_json j{{"kind", kind_name(spec.kind)}};
    switch (spec.kind) {
        case DistributionKind::cauchy:
        case DistributionKind::levy:
        case DistributionKind::normal:
            break;
        case DistributionKind::q_exponential:
            j["lambda"] = round15(spec.lambda);
            j["q"] = round15(spec.q);
            break;
        case DistributionKind::q_gaussian:
            j["q"] = round15(spec.q);
            j["beta"] = round15(spec.beta);
            break;
        case DistributionKind::student_t:
            j["nu"] = round15(spec.nu);
            break;
        case DistributionKind::laplace:
            j["lambda"] = round15(spec.lambda);
            j["mu"] = round15(spec.mu);
            break;
    }
    return j;
}

/// Accepts the canonical kind names plus the short CLI spellings.
inline DistributionKind kind_from_name(const std::string& name) {
    if (name == "cauchy") return DistributionKind::cauchy;
    if (name == "levy") return DistributionKind::levy;
    if (name == "q-exponential" || name == "qexp") return DistributionKind::q_exponential;
    if (name == "q-gaussian" || name == "qgauss") return DistributionKind::q_gaussian;
    if (name == "normal" || name == "gaussian") return DistributionKind::normal;
    if (name == "student-t" || name == "student" || name == "studentt")
        return DistributionKind::student_t;
    if (name == "laplace") return DistributionKind::laplace;
    throw invalid_parameter("unknown distribution kind '" + name + "'");
}

inline DistributionSpec spec_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw invalid_parameter("distribution spec needs a \"kind\" field");
    auto need = [&](const char* key) -> double {
        if (!j.contains(key))
            throw invalid_parameter(std::string("distribution spec needs \"") + key + "\"");
        return j.at(key).get<double>();
    };
    DistributionSpec spec;
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    switch (spec.kind) {
        case DistributionKind::cauchy:
        case DistributionKind::levy:
        case DistributionKind::normal:
            break;
        case DistributionKind::q_exponential:
            spec.lambda = need("lambda");
            spec.q = need("q");
            break;
        case DistributionKind::q_gaussian:
            spec.q = need("q");
            spec.beta = need("beta");
            break;
        case DistributionKind::student_t:
            spec.nu = need("nu");
            break;
        case DistributionKind::laplace:
            spec.lambda = need("lambda");
            spec.mu = j.contains("mu") ? j.at("mu").get<double>() : 0.0;
            break;
    }
    validate(spec);
    return spec;
}

/// RFC 4180: quote a cell whenever it holds a comma, a quote, or a line
/// break; double any embedded quotes.
inline std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
    }
    out += "\r\n";
    return out;
}

}  // namespace renmom
