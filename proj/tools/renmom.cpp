// renmom: command-line front end for the renormalized-moment library.
//
// Subcommands: moment, log-moment, compare-schemes, table, singularity.
// Output goes to stdout (JSON / CSV / pretty), diagnostics to stderr.  JSON
// output is deterministic -- fixed field order, floats rounded to 15
// significant digits -- so identical invocations are byte-identical.
//
// Exit codes: 0 success, 2 usage error, 3 validation error (bad parameters,
// unsupported request, order on a pole), 4 numeric failure (quadrature or
// fit did not converge), 5 tolerance breach in compare-schemes.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <renmom.hpp>

namespace {

using renmom::complex;
using renmom::DistributionSpec;
using renmom::ordered_json;
using renmom::QuadratureConfig;
using renmom::SchemeKind;
using renmom::SchemeResult;

// ---------------------------------------------------------------------------
// Option storage.  One subcommand parses per invocation, so the storage is
// shared; per-flag presence is queried on the parsed subcommand itself.
// ---------------------------------------------------------------------------

struct Options {
    std::string dist;
    std::string spec_json;
    double lambda = 1.0;
    double q = 1.5;
    double beta = 1.0;
    double mu = 0.0;
    double nu = 1.0;
    std::string order = "1";
    int q_order = 1;
    std::string scheme = "closed-form";
    std::string route = "both";
    std::string format = "pretty";
    std::string table;
    double tol = 1e-4;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
};

QuadratureConfig quad_config(const Options& o) {
    QuadratureConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = o.abs_tol;
    cfg.max_subdivisions = o.max_subdivisions;
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Argument parsing helpers.
// ---------------------------------------------------------------------------

double parse_double(const std::string& text, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || !std::isfinite(v))
        throw renmom::invalid_parameter(std::string(what) + ": cannot parse number '" + text +
                                        "'");
    return v;
}

/// Complex literal: "2", "-0.5", "1.5i", "i", "1+2i", "0.25-0.5i".
complex parse_complex_literal(std::string s, const char* what) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) throw renmom::invalid_parameter(std::string(what) + ": empty order");
    if (s.back() != 'i' && s.back() != 'I') return {parse_double(s, what), 0.0};
    s.pop_back();
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_part = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t, what);
    };
    if (split == std::string::npos) return {0.0, imag_part(s)};
    return {parse_double(s.substr(0, split), what), imag_part(s.substr(split))};
}

/// Order argument: one value ("2", "0.25", "1+2i") or an inclusive integer
/// range "lo..hi" with at most 16 entries.
std::vector<complex> parse_orders(const std::string& text) {
    const std::size_t dots = text.find("..");
    if (dots == std::string::npos) return {parse_complex_literal(text, "order")};
    const std::string lo_text = text.substr(0, dots);
    const std::string hi_text = text.substr(dots + 2);
    const double lo = parse_double(lo_text, "order range");
    const double hi = parse_double(hi_text, "order range");
    if (lo != std::floor(lo) || hi != std::floor(hi))
        throw renmom::invalid_parameter("order range endpoints must be integers");
    if (hi < lo) throw renmom::invalid_parameter("order range is empty (hi < lo)");
    if (hi - lo + 1.0 > 16.0)
        throw renmom::invalid_parameter("order range too large (at most 16 entries)");
    std::vector<complex> orders;
    for (double n = lo; n <= hi; n += 1.0) orders.emplace_back(n, 0.0);
    return orders;
}

SchemeKind parse_scheme(const std::string& name) {
    if (name == "closed-form") return SchemeKind::closed_form;
    if (name == "subtraction") return SchemeKind::subtraction;
    if (name == "cutoff") return SchemeKind::cutoff;
    if (name == "weighted") return SchemeKind::weighted;
    if (name == "mellin-density") return SchemeKind::mellin_density;
    if (name == "mellin-cf") return SchemeKind::mellin_cf;
    throw renmom::invalid_parameter(
        "unknown scheme '" + name +
        "' (expected closed-form, subtraction, cutoff, weighted, mellin-density or mellin-cf)");
}

DistributionSpec spec_from_cli(const CLI::App* sub, const Options& o) {
    if (sub->count("--spec")) {
        if (sub->count("--dist"))
            throw renmom::invalid_parameter("give either --spec or --dist, not both");
        return renmom::spec_from_json(ordered_json::parse(o.spec_json));
    }
    if (!sub->count("--dist"))
        throw renmom::invalid_parameter("missing distribution: pass --dist or --spec");
    DistributionSpec spec;
    spec.kind = renmom::kind_from_name(o.dist);
    spec.lambda = o.lambda;
    spec.q = o.q;
    spec.beta = o.beta;
    spec.mu = o.mu;
    spec.nu = o.nu;
    renmom::validate(spec);
    return spec;
}

// ---------------------------------------------------------------------------
// Scheme execution.
// ---------------------------------------------------------------------------

int integer_order(const complex& z, const char* scheme) {
    if (!renmom::is_real_integer(z, 1e-9))
        throw renmom::invalid_parameter(std::string(scheme) +
                                        ": this scheme needs an integer order");
    return static_cast<int>(std::llround(z.real()));
}

std::vector<double> default_cutoff_grid() {
    std::vector<double> grid;
    for (int k = 0; k < 8; ++k) grid.push_back(8.0 * std::pow(2.0, k));
    return grid;
}

std::vector<double> default_weight_grid() {
    // 13 points, ratio sqrt(2), from 2^-9 up to 2^-3 = 0.125.
    std::vector<double> grid;
    for (int k = 0; k <= 12; ++k) grid.push_back(std::pow(2.0, -9.0 + 0.5 * k));
    return grid;
}

/// Order 0 under a regulator scheme is the plain normalization integral; the
/// regulator machinery requires n >= 1, so compute int p = 1 honestly by
/// quadrature and report it under the requested scheme's name.
SchemeResult normalization_by_quadrature(const DistributionSpec& spec, SchemeKind kind,
                                         const QuadratureConfig& cfg) {
    auto f = [&spec](double x) { return complex{renmom::density(spec, x), 0.0}; };
    const renmom::IntegrationResult r = (renmom::support(spec).lower == 0.0)
                                            ? renmom::integrate_upper(f, 0.0, cfg)
                                            : renmom::integrate_real_line(f, cfg);
    SchemeResult out;
    out.scheme = kind;
    out.value = r.value;
    out.err_estimate = 4.0 * r.error + 1e-14;
    out.metadata["case"] = "normalization";
    return out;
}

SchemeResult run_scheme(const DistributionSpec& spec, const complex& z, SchemeKind kind,
                        const QuadratureConfig& cfg) {
    switch (kind) {
        case SchemeKind::closed_form:
            return renmom::closed_form_scheme(spec, z);
        case SchemeKind::subtraction: {
            const int n = integer_order(z, "subtraction");
            if (n == 0) return normalization_by_quadrature(spec, kind, cfg);
            return renmom::subtraction_scheme(spec, n, cfg);
        }
        case SchemeKind::cutoff: {
            const int n = integer_order(z, "cutoff");
            if (n == 0) return normalization_by_quadrature(spec, kind, cfg);
            return renmom::cutoff_scheme(spec, n, renmom::derive_cutoff_ladder(spec, n),
                                         default_cutoff_grid(), cfg);
        }
        case SchemeKind::weighted: {
            const int n = integer_order(z, "weighted");
            if (n == 0) return normalization_by_quadrature(spec, kind, cfg);
            return renmom::weighted_scheme(spec, n, default_weight_grid(),
                                           renmom::derive_weighted_ladder(spec, n), cfg);
        }
        case SchemeKind::mellin_density:
            return renmom::mellin_density_numeric(spec, z, cfg);
        case SchemeKind::mellin_cf:
            return renmom::mellin_cf_numeric(spec, z, cfg);
    }
    throw renmom::invalid_parameter("unknown scheme");
}

/// Whether a scheme participates in compare-schemes for this spec and order;
/// on refusal, `reason` explains the skip.
bool scheme_applies(SchemeKind kind, const DistributionSpec& spec, const complex& z,
                    std::string* reason) {
    switch (kind) {
        case SchemeKind::closed_form:
            return true;
        case SchemeKind::subtraction:
        case SchemeKind::cutoff:
        case SchemeKind::weighted:
            if (!renmom::is_real_integer(z, 1e-9) || z.real() < -0.5) {
                *reason = "needs a nonnegative integer order";
                return false;
            }
            return true;
        case SchemeKind::mellin_density: {
            const auto strip = renmom::mellin_density_strip(spec);
            if (z.real() > strip.first && z.real() < strip.second) return true;
            *reason = "order outside the density-transform convergence strip (" +
                      renmom::format15(strip.first) + ", " + renmom::format15(strip.second) + ")";
            return false;
        }
        case SchemeKind::mellin_cf: {
            const auto kind_ok = spec.kind == renmom::DistributionKind::cauchy ||
                                 spec.kind == renmom::DistributionKind::levy ||
                                 spec.kind == renmom::DistributionKind::normal ||
                                 (spec.kind == renmom::DistributionKind::laplace &&
                                  spec.mu == 0.0);
            if (!kind_ok) {
                *reason = "no elementary non-oscillatory characteristic function";
                return false;
            }
            if (!(z.real() > -1.0 && z.real() < 0.0)) {
                *reason = "order outside the cf-transform convergence strip (-1, 0)";
                return false;
            }
            return true;
        }
    }
    *reason = "unknown scheme";
    return false;
}

std::string result_classification(const SchemeResult& r) {
    const auto it = r.metadata.find("classification");
    return it != r.metadata.end() ? it->second : "numeric";
}

const char* classification_name(renmom::MomentClassification c) {
    switch (c) {
        case renmom::MomentClassification::regular: return "regular";
        case renmom::MomentClassification::removable_singularity_limit:
            return "removable-singularity-limit";
        case renmom::MomentClassification::finite_part_at_pole: return "finite-part-at-pole";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

std::string pretty_complex(const complex& z) {
    std::string s = renmom::format15(z.real());
    s += (z.imag() < 0.0) ? " - " : " + ";
    s += renmom::format15(std::abs(z.imag())) + "i";
    return s;
}

std::string pretty_order(const complex& z) {
    if (renmom::is_real_integer(z, 1e-9))
        return renmom::format15(std::round(z.real()));
    if (z.imag() == 0.0) return renmom::format15(z.real());
    return pretty_complex(z);
}

ordered_json moment_json(const DistributionSpec& spec, const complex& z, const SchemeResult& r) {
    return ordered_json{{"distribution", renmom::spec_to_json(spec)},
                        {"order", renmom::json_complex(z)},
                        {"scheme", renmom::scheme_name(r.scheme)},
                        {"value", renmom::json_complex(r.value)},
                        {"err_estimate", renmom::round15(r.err_estimate)},
                        {"classification", result_classification(r)}};
}

void emit_json(const ordered_json& j) { std::cout << j.dump() << "\n"; }

int render_moments(const DistributionSpec& spec,
                   const std::vector<std::pair<complex, SchemeResult>>& results,
                   const std::string& format) {
    if (format == "json") {
        if (results.size() == 1) {
            emit_json(moment_json(spec, results[0].first, results[0].second));
        } else {
            ordered_json arr = ordered_json::array();
            for (const auto& [z, r] : results) arr.push_back(moment_json(spec, z, r));
            emit_json(arr);
        }
        return 0;
    }
    if (format == "csv") {
        std::cout << renmom::csv_row(
            {"order_re", "order_im", "scheme", "value_re", "value_im", "err_estimate",
             "classification"});
        for (const auto& [z, r] : results)
            std::cout << renmom::csv_row({renmom::format15(z.real()), renmom::format15(z.imag()),
                                          renmom::scheme_name(r.scheme),
                                          renmom::format15(r.value.real()),
                                          renmom::format15(r.value.imag()),
                                          renmom::format15(r.err_estimate),
                                          result_classification(r)});
        return 0;
    }
    for (const auto& [z, r] : results) {
        std::cout << renmom::kind_name(spec.kind) << "  order " << pretty_order(z) << "  ["
                  << renmom::scheme_name(r.scheme) << "]  value = " << pretty_complex(r.value)
                  << "  (err_estimate <= " << renmom::format15(r.err_estimate) << ", "
                  << result_classification(r) << ")\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand drivers.
// ---------------------------------------------------------------------------

int run_moment(const CLI::App* sub, const Options& o) {
    const DistributionSpec spec = spec_from_cli(sub, o);
    const std::vector<complex> orders = parse_orders(o.order);
    const SchemeKind kind = parse_scheme(o.scheme);
    const QuadratureConfig cfg = quad_config(o);
    std::vector<std::pair<complex, SchemeResult>> results;
    for (const complex& z : orders) results.emplace_back(z, run_scheme(spec, z, kind, cfg));
    return render_moments(spec, results, o.format);
}

int run_log_moment(const CLI::App* sub, const Options& o) {
    const DistributionSpec spec = spec_from_cli(sub, o);
    const std::vector<complex> orders = parse_orders(o.order);
    struct LogEntry {
        complex z;
        renmom::LogMomentValue lm;
        double err;
    };
    std::vector<LogEntry> results;
    for (const complex& z : orders) {
        const int n = integer_order(z, "log-moment");
        if (o.route == "both") {
            // Both routes, with the cross-route deviation as the honest
            // error proxy for each.
            const renmom::LogMomentValue d = renmom::log_moment_from_power(spec, n);
            const renmom::LogMomentValue g = renmom::log_moment_direct(spec, n);
            const double err =
                std::abs(d.value - g.value) + 1e-12 * (1.0 + std::abs(d.value));
            results.push_back({z, d, err});
            results.push_back({z, g, err});
        } else {
            const renmom::LogMomentValue lm = (o.route == "direct")
                                                  ? renmom::log_moment_direct(spec, n)
                                                  : renmom::log_moment_from_power(spec, n);
            results.push_back({z, lm, 1e-8 * (1.0 + std::abs(lm.value))});
        }
    }
    if (o.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const LogEntry& e : results) {
            arr.push_back(ordered_json{{"distribution", renmom::spec_to_json(spec)},
                                       {"order", renmom::json_complex(e.z)},
                                       {"scheme", e.lm.route},
                                       {"value", renmom::json_complex(e.lm.value)},
                                       {"err_estimate", renmom::round15(e.err)},
                                       {"classification", "numeric"}});
        }
        emit_json(results.size() == 1 ? arr[0] : arr);
        return 0;
    }
    if (o.format == "csv") {
        std::cout << renmom::csv_row({"order", "route", "value_re", "value_im", "err_estimate"});
        for (const LogEntry& e : results)
            std::cout << renmom::csv_row({pretty_order(e.z), e.lm.route,
                                          renmom::format15(e.lm.value.real()),
                                          renmom::format15(e.lm.value.imag()),
                                          renmom::format15(e.err)});
        return 0;
    }
    for (const LogEntry& e : results)
        std::cout << renmom::kind_name(spec.kind) << "  log-moment order " << pretty_order(e.z)
                  << "  [" << e.lm.route << "]  value = " << pretty_complex(e.lm.value)
                  << "  (err_estimate <= " << renmom::format15(e.err) << ")\n";
    return 0;
}

int run_compare(const CLI::App* sub, const Options& o) {
    const DistributionSpec spec = spec_from_cli(sub, o);
    const std::vector<complex> orders = parse_orders(o.order);
    const QuadratureConfig cfg = quad_config(o);

    double tol = o.tol;
    if (!sub->count("--tol")) {
        if (const char* env = std::getenv("RENMOMENT_TOL")) {
            tol = parse_double(env, "RENMOMENT_TOL");
            if (!(tol > 0.0)) throw renmom::invalid_parameter("RENMOMENT_TOL must be positive");
        }
    }

    static const SchemeKind all_schemes[] = {SchemeKind::closed_form, SchemeKind::subtraction,
                                             SchemeKind::cutoff, SchemeKind::weighted,
                                             SchemeKind::mellin_density, SchemeKind::mellin_cf};
    bool breach = false;
    bool csv_header_done = false;
    ordered_json report = ordered_json::array();
    for (const complex& z : orders) {
        std::vector<SchemeResult> results;
        std::vector<std::string> skipped;
        for (SchemeKind kind : all_schemes) {
            std::string reason;
            if (!scheme_applies(kind, spec, z, &reason)) {
                skipped.push_back(std::string(renmom::scheme_name(kind)) + ": " + reason);
                continue;
            }
            results.push_back(run_scheme(spec, z, kind, cfg));
        }
        double max_dev = 0.0;
        for (std::size_t i = 0; i < results.size(); ++i)
            for (std::size_t j = i + 1; j < results.size(); ++j)
                max_dev = std::max(max_dev, std::abs(results[i].value - results[j].value));
        const bool ok = max_dev <= tol;
        if (!ok) breach = true;

        if (o.format == "json") {
            ordered_json entry{{"distribution", renmom::spec_to_json(spec)},
                               {"order", renmom::json_complex(z)}};
            ordered_json rs = ordered_json::array();
            for (const SchemeResult& r : results)
                rs.push_back(ordered_json{{"scheme", renmom::scheme_name(r.scheme)},
                                          {"value", renmom::json_complex(r.value)},
                                          {"err_estimate", renmom::round15(r.err_estimate)},
                                          {"classification", result_classification(r)}});
            entry["results"] = std::move(rs);
            entry["skipped"] = skipped;
            entry["max_deviation"] = renmom::round15(max_dev);
            entry["tolerance"] = renmom::round15(tol);
            entry["within_tolerance"] = ok;
            report.push_back(std::move(entry));
        } else if (o.format == "csv") {
            if (!csv_header_done) {
                std::cout << renmom::csv_row({"order_re", "order_im", "scheme", "value_re",
                                              "value_im", "err_estimate", "classification"});
                csv_header_done = true;
            }
            for (const SchemeResult& r : results)
                std::cout << renmom::csv_row(
                    {renmom::format15(z.real()), renmom::format15(z.imag()),
                     renmom::scheme_name(r.scheme), renmom::format15(r.value.real()),
                     renmom::format15(r.value.imag()), renmom::format15(r.err_estimate),
                     result_classification(r)});
            std::cout << renmom::csv_row({renmom::format15(z.real()), renmom::format15(z.imag()),
                                          "max-deviation", renmom::format15(max_dev), "0",
                                          renmom::format15(tol), ok ? "ok" : "breach"});
        } else {
            std::cout << renmom::kind_name(spec.kind) << "  order " << pretty_order(z) << "\n";
            for (const SchemeResult& r : results)
                std::cout << "  " << renmom::scheme_name(r.scheme) << ": "
                          << pretty_complex(r.value) << "  (err_estimate <= "
                          << renmom::format15(r.err_estimate) << ")\n";
            for (const std::string& s : skipped) std::cout << "  skipped " << s << "\n";
            std::cout << "  max deviation = " << renmom::format15(max_dev) << "  (tolerance "
                      << renmom::format15(tol) << ") -- " << (ok ? "ok" : "BREACH") << "\n";
        }
        if (!ok)
            std::cerr << "tolerance breach: " << renmom::kind_name(spec.kind) << " order "
                      << pretty_order(z) << " deviates by " << renmom::format15(max_dev)
                      << " > " << renmom::format15(tol) << "\n";
    }
    if (o.format == "json") emit_json(report.size() == 1 ? report[0] : report);
    return breach ? 5 : 0;
}

struct TableRow {
    complex order;
    complex value;
    std::string source;
};

int run_table(const CLI::App* sub, Options& o) {
    std::string name = o.table;
    // "<kind>-log-moments" is shorthand for "log-moments --dist <kind>".
    std::string implied_dist;
    const std::string log_suffix = "-log-moments";
    if (name.size() > log_suffix.size() &&
        name.compare(name.size() - log_suffix.size(), log_suffix.size(), log_suffix) == 0) {
        implied_dist = name.substr(0, name.size() - log_suffix.size());
        name = "log-moments";
    } else if (name == "cauchy-moments") {
        implied_dist = "cauchy";
    } else if (name == "levy-moments") {
        implied_dist = "levy";
    } else if (name == "qexp-moments") {
        implied_dist = "qexp";
    } else if (name == "qgauss-moments") {
        implied_dist = "qgauss";
    } else if (name != "negative-moments" && name != "log-moments") {
        throw renmom::invalid_parameter(
            "unknown table '" + o.table +
            "' (expected cauchy-moments, levy-moments, qexp-moments, qgauss-moments, "
            "negative-moments, log-moments or <dist>-log-moments)");
    }

    DistributionSpec spec;
    if (!implied_dist.empty()) {
        spec.kind = renmom::kind_from_name(implied_dist);
        // Table defaults keep the parameter-dependent lists meaningful out of
        // the box; explicit flags still win.
        if (spec.kind == renmom::DistributionKind::q_exponential && !sub->count("--q"))
            o.q = 1.75;
        if (spec.kind == renmom::DistributionKind::q_gaussian && !sub->count("--q")) o.q = 1.2;
        spec.lambda = o.lambda;
        spec.q = o.q;
        spec.beta = o.beta;
        spec.mu = o.mu;
        spec.nu = o.nu;
        renmom::validate(spec);
    } else {
        spec = spec_from_cli(sub, o);
    }

    std::vector<TableRow> rows;
    if (name == "negative-moments") {
        for (int n = -1; n >= -4; --n) {
            const renmom::MomentValue mv =
                renmom::finite_part_at_pole(spec, complex(static_cast<double>(n), 0.0));
            rows.push_back({complex(static_cast<double>(n), 0.0), mv.value,
                            "finite_part_at_pole"});
        }
    } else if (name == "log-moments") {
        for (const renmom::GoldenLogMoment& g : renmom::golden_log_moments(spec))
            rows.push_back({complex(static_cast<double>(g.order), 0.0), g.value,
                            "golden_log_moments"});
    } else {
        for (int n = 1; n <= 4; ++n) {
            const renmom::MomentValue mv =
                renmom::renormalized_moment(spec, complex(static_cast<double>(n), 0.0));
            rows.push_back({complex(static_cast<double>(n), 0.0), mv.value,
                            "renormalized_moment"});
        }
    }

    if (o.format == "json") {
        ordered_json out{{"table", o.table}, {"distribution", renmom::spec_to_json(spec)}};
        ordered_json arr = ordered_json::array();
        for (const TableRow& row : rows)
            arr.push_back(ordered_json{{"order", renmom::json_complex(row.order)},
                                       {"value", renmom::json_complex(row.value)},
                                       {"source_eq", row.source}});
        out["rows"] = std::move(arr);
        emit_json(out);
        return 0;
    }
    if (o.format == "csv") {
        std::cout << renmom::csv_row({"order", "value_re", "value_im", "source_eq"});
        for (const TableRow& row : rows)
            std::cout << renmom::csv_row({pretty_order(row.order),
                                          renmom::format15(row.value.real()),
                                          renmom::format15(row.value.imag()), row.source});
        return 0;
    }
    std::cout << o.table << "  (" << renmom::kind_name(spec.kind) << ")\n";
    for (const TableRow& row : rows)
        std::cout << "  order " << pretty_order(row.order) << ": " << pretty_complex(row.value)
                  << "  [" << row.source << "]\n";
    return 0;
}

int run_singularity(const CLI::App* sub, const Options& o) {
    const DistributionSpec spec = spec_from_cli(sub, o);
    renmom::MomentValue mv;
    complex where;
    std::string scheme_label;
    if (sub->count("--order")) {
        where = parse_complex_literal(o.order, "order");
        mv = renmom::finite_part_at_pole(spec, where);
        if (mv.classification == renmom::MomentClassification::regular)
            throw renmom::invalid_parameter(
                "not a singularity: the moment function of " +
                std::string(renmom::kind_name(spec.kind)) + " is regular at order " +
                pretty_order(where));
        scheme_label = "finite-part";
    } else {
        where = complex(static_cast<double>(o.q_order), 0.0);
        mv = renmom::q_singularity_finite_part(spec, o.q_order);
        scheme_label = "q-finite-part";
    }
    const double err = (mv.classification == renmom::MomentClassification::finite_part_at_pole
                            ? 1e-8
                            : 1e-9) *
                       (1.0 + std::abs(mv.value));

    if (o.format == "json") {
        emit_json(ordered_json{{"distribution", renmom::spec_to_json(spec)},
                               {"order", renmom::json_complex(where)},
                               {"scheme", scheme_label},
                               {"value", renmom::json_complex(mv.value)},
                               {"err_estimate", renmom::round15(err)},
                               {"classification", classification_name(mv.classification)}});
        return 0;
    }
    if (o.format == "csv") {
        std::cout << renmom::csv_row({"order_re", "order_im", "scheme", "value_re", "value_im",
                                      "err_estimate", "classification"});
        std::cout << renmom::csv_row({renmom::format15(where.real()),
                                      renmom::format15(where.imag()), scheme_label,
                                      renmom::format15(mv.value.real()),
                                      renmom::format15(mv.value.imag()), renmom::format15(err),
                                      classification_name(mv.classification)});
        return 0;
    }
    std::cout << renmom::kind_name(spec.kind) << "  singularity at order " << pretty_order(where)
              << "  [" << scheme_label << "]  value = " << pretty_complex(mv.value) << "  ("
              << classification_name(mv.classification) << ")\n";
    return 0;
}

void add_common_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--dist", o.dist,
                    "distribution: cauchy, levy, qexp, qgauss, normal, student-t, laplace");
    cmd->add_option("--spec", o.spec_json, "distribution as a JSON object (alternative to --dist)");
    cmd->add_option("--lambda", o.lambda, "rate parameter (q-exponential, laplace)");
    cmd->add_option("--q", o.q, "entropic index (q-exponential, q-gaussian)");
    cmd->add_option("--beta", o.beta, "scale parameter (q-gaussian)");
    cmd->add_option("--mu", o.mu, "location parameter (laplace)");
    cmd->add_option("--nu", o.nu, "degrees of freedom (student-t)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
    cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--max-subdivisions", o.max_subdivisions, "quadrature subdivision budget");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"renormalized power and logarithmic moments of heavy-tailed distributions"};
    app.name("renmom");
    app.require_subcommand(1);

    CLI::App* moment = app.add_subcommand("moment", "compute a renormalized moment");
    add_common_options(moment, o);
    moment->add_option("--order", o.order, "order: integer, complex a+bi, or range lo..hi")
        ->required();
    moment->add_option("--scheme", o.scheme,
                       "closed-form, subtraction, cutoff, weighted, mellin-density, mellin-cf");

    CLI::App* logm = app.add_subcommand("log-moment", "compute a logarithmic moment");
    add_common_options(logm, o);
    logm->add_option("--order", o.order, "order: integer in 1..6, or range lo..hi");
    logm->add_option("--route", o.route, "derivative, direct, or both")
        ->check(CLI::IsMember({"derivative", "direct", "both"}));

    CLI::App* cmp = app.add_subcommand("compare-schemes",
                                       "run every applicable scheme and compare");
    add_common_options(cmp, o);
    cmp->add_option("--order", o.order, "order: integer, complex a+bi, or range lo..hi")
        ->required();
    cmp->add_option("--tol", o.tol,
                    "max allowed pairwise deviation (default 1e-4; env RENMOMENT_TOL overrides)");

    CLI::App* tab = app.add_subcommand("table", "reproduce a named results table");
    add_common_options(tab, o);
    tab->add_option("name", o.table,
                    "cauchy-moments, levy-moments, qexp-moments, qgauss-moments, "
                    "negative-moments, log-moments, <dist>-log-moments")
        ->required();

    CLI::App* sing = app.add_subcommand("singularity", "finite part at a singular order");
    add_common_options(sing, o);
    sing->add_option("--order", o.order, "singular order of the moment function");
    sing->add_option("--n", o.q_order, "moment order whose q-singularity to evaluate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run 'renmom --help' for usage\n";
        return 2;
    }

    try {
        if (moment->parsed()) return run_moment(moment, o);
        if (logm->parsed()) return run_log_moment(logm, o);
        if (cmp->parsed()) return run_compare(cmp, o);
        if (tab->parsed()) return run_table(tab, o);
        if (sing->parsed()) {
            if (sing->count("--order") + sing->count("--n") != 1) {
                std::cerr << "usage error: singularity needs exactly one of --order or --n\n";
                return 2;
            }
            return run_singularity(sing, o);
        }
        std::cerr << "usage error: no subcommand\n";
        return 2;
    } catch (const renmom::invalid_parameter& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const renmom::unsupported_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const renmom::pole_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const renmom::quadrature_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const renmom::fit_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    }
}
