#pragma once

// Fully numerical renormalization engines.  Each scheme regulates a divergent
// moment integral in a different way -- minimal subtraction of endpoint
// counterterms, a sharp cut-off with a power-ladder fit, an exponential
// weight e^{-s|x|} with a ladder fit in s, and the two Mellin-transform
// routes -- and each must independently reproduce closed_form.hpp.  The
// shared branch convention is ln(-1) = +i pi, so every boundary term that a
// continued endpoint integral picks up carries e^{+i pi w} factors.
//
// Conventions used throughout:
//   * g_+(t) = p(t) t^n on (0, inf) is the right half-line integrand and
//     g_-(t) = p(-t) t^n the reflected left one, so that
//     m_n = int g_+ + (-1)^n int g_-.
//   * Tail expansions follow distributions.hpp: a term {e, c} near infinity
//     means c * t^{-e}, near zero c * t^{e}.
//   * Minimal subtraction assigns int_1^inf t^{-e} dt -> 1/(e-1) for e != 1
//     and 0 for e = 1 (the log term is dropped), and symmetrically
//     int_0^1 t^{e} dt -> 1/(e+1), 0 for e = -1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "renmom/closed_form.hpp"
#include "renmom/core.hpp"
#include "renmom/distributions.hpp"
#include "renmom/quadrature.hpp"
#include "renmom/special_functions.hpp"

namespace renmom {

// ---------------------------------------------------------------------------
// Result and ladder types.
// ---------------------------------------------------------------------------

enum class SchemeKind { subtraction, cutoff, weighted, mellin_cf, mellin_density, closed_form };

inline const char* scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::subtraction: return "subtraction";
        case SchemeKind::cutoff: return "cutoff";
        case SchemeKind::weighted: return "weighted";
        case SchemeKind::mellin_cf: return "mellin-cf";
        case SchemeKind::mellin_density: return "mellin-density";
        case SchemeKind::closed_form: return "closed-form";
    }
    return "unknown";
}

/// Outcome of one renormalization scheme.  err_estimate is an absolute error
/// bound assembled from quadrature estimates, fit residuals and rounding
/// floors; it is deliberately generous so that it dominates the true error.
struct SchemeResult {
    complex value{0.0, 0.0};
    SchemeKind scheme = SchemeKind::subtraction;
    double err_estimate = 0.0;
    std::map<std::string, std::string> metadata;
};

/// The singular powers expected in a regulator expansion m(t): the fit basis
/// is {t^p : p in powers} plus {ln t} when has_log_term is set, plus
/// {t^p ln t : p in log_powers}, plus the constant whose coefficient is the
/// renormalized value.  The constant is implied, so 0 must not appear in
/// powers.
struct ExponentLadder {
    std::vector<double> powers;
    bool has_log_term = false;
    std::vector<double> log_powers;
};

inline void validate(const ExponentLadder& ladder) {
    auto check_sorted = [](const std::vector<double>& ps, const char* what) {
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (!std::isfinite(ps[i]))
                throw invalid_parameter(std::string(what) + ": powers must be finite");
            if (i > 0 && !(ps[i] > ps[i - 1] + 1e-9))
                throw invalid_parameter(std::string(what) +
                                        ": powers must be strictly ascending (no duplicates)");
        }
    };
    check_sorted(ladder.powers, "ladder");
    check_sorted(ladder.log_powers, "ladder log_powers");
    for (double p : ladder.powers)
        if (std::abs(p) < 1e-9)
            throw invalid_parameter("ladder: power 0 is the implied constant term");
    if (ladder.has_log_term)
        for (double p : ladder.log_powers)
            if (std::abs(p) < 1e-9)
                throw invalid_parameter("ladder: log_powers contains 0 but the plain log term "
                                        "is already flagged");
}

/// Least-squares decomposition of regulator samples into ladder + constant.
struct FitOutput {
    complex a0{0.0, 0.0};
    std::vector<std::pair<std::string, complex>> coefficients;  // non-constant columns
    double residual = 0.0;
    double condition = 1.0;
};

// ---------------------------------------------------------------------------
// Shared numerics: formatting, least squares, expansion bookkeeping.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_num(double x) {
    std::ostringstream os;
    os.precision(9);
    os << x;
    return os.str();
}

inline std::string format_cnum(const complex& z) {
    std::ostringstream os;
    os.precision(9);
    os << z.real();
    if (z.imag() >= 0.0)
        os << "+" << z.imag() << "i";
    else
        os << "-" << -z.imag() << "i";
    return os.str();
}

struct LsqSolution {
    std::vector<complex> coeffs;
    double residual = 0.0;
    double condition = 1.0;
};

/// Householder-QR least squares with a real design matrix and complex right
/// hand side.  Columns are normalized first; the condition estimate is the
/// ratio of extreme |R_jj| of the normalized system.
inline LsqSolution lsq_solve(std::vector<std::vector<double>> cols, std::vector<complex> rhs) {
    const std::size_t m = rhs.size();
    const std::size_t k = cols.size();
    if (k == 0 || m < k) throw invalid_parameter("lsq_solve: more columns than samples");

    std::vector<double> scale(k, 1.0);
    for (std::size_t j = 0; j < k; ++j) {
        double norm2 = 0.0;
        for (double v : cols[j]) norm2 += v * v;
        const double nrm = std::sqrt(norm2);
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw fit_error("ladder fit: degenerate basis column");
        scale[j] = 1.0 / nrm;
        for (double& v : cols[j]) v *= scale[j];
    }

    std::vector<double> rdiag(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double sigma = 0.0;
        for (std::size_t i = j; i < m; ++i) sigma += cols[j][i] * cols[j][i];
        double alpha = std::sqrt(sigma);
        if (alpha == 0.0) {
            rdiag[j] = 0.0;
            continue;
        }
        if (cols[j][j] > 0.0) alpha = -alpha;
        cols[j][j] -= alpha;
        rdiag[j] = alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < m; ++i) vnorm2 += cols[j][i] * cols[j][i];
        if (vnorm2 == 0.0) continue;
        for (std::size_t l = j + 1; l < k; ++l) {
            double dot = 0.0;
            for (std::size_t i = j; i < m; ++i) dot += cols[j][i] * cols[l][i];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = j; i < m; ++i) cols[l][i] -= f * cols[j][i];
        }
        complex dotc{0.0, 0.0};
        for (std::size_t i = j; i < m; ++i) dotc += cols[j][i] * rhs[i];
        const complex f = 2.0 * dotc / vnorm2;
        for (std::size_t i = j; i < m; ++i) rhs[i] -= f * cols[j][i];
    }

    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
        const double d = std::abs(rdiag[j]);
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    LsqSolution out;
    out.condition = (dmin > 0.0) ? dmax / dmin : std::numeric_limits<double>::infinity();
    if (!(out.condition <= 1e10))
        throw fit_error("ladder fit is ill-conditioned (condition ~ " + format_num(out.condition) +
                        " > 1e10); thin the ladder or widen the grid");

    out.coeffs.assign(k, complex{0.0, 0.0});
    for (std::size_t jj = k; jj-- > 0;) {
        complex s = rhs[jj];
        for (std::size_t l = jj + 1; l < k; ++l) s -= cols[l][jj] * out.coeffs[l];
        out.coeffs[jj] = s / rdiag[jj];
    }
    double r2 = 0.0;
    for (std::size_t i = k; i < m; ++i) r2 += std::norm(rhs[i]);
    out.residual = std::sqrt(r2);
    for (std::size_t j = 0; j < k; ++j) out.coeffs[j] *= scale[j];
    return out;
}

inline bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

inline bool is_near_integer(double x) { return std::abs(x - std::llround(x)) < 1e-9; }

/// Sum of coefficients of the t^{-1} terms in a tail expansion.
inline complex inverse_power_sum(const std::vector<ExpansionTerm>& terms) {
    complex s{0.0, 0.0};
    for (const auto& t : terms)
        if (near(t.exponent, 1.0)) s += t.coefficient;
    return s;
}

/// Tail expansion of g_-(t) = p(-t) t^n as a series in t^{-e}.  The
/// minus-infinity endpoint data describes p(x) x^n in |x|, and
/// g_-(t) = (-1)^n [p(x) x^n]_{x=-t}.
inline std::vector<ExpansionTerm> reflected_tail(const DistributionSpec& spec, int n,
                                                 int guard_terms) {
    std::vector<ExpansionTerm> terms =
        asymptotic_expansion(spec, n, Endpoint::minus_infinity, guard_terms).terms;
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    for (auto& t : terms) t.coefficient *= parity;
    return terms;
}

/// g(t) minus a set of expansion terms, summed with Neumaier compensation so
/// that near-cancelling counterterms do not lose the small remainder.
/// powers[i] is the exponent of t multiplying coefficient coeffs[i].
inline complex subtracted_value(double gval, const std::vector<double>& powers,
                                const std::vector<complex>& coeffs, double t) {
    if (powers.empty()) return complex{gval, 0.0};
    std::vector<double> re, im;
    re.reserve(powers.size() + 1);
    im.reserve(powers.size() + 1);
    re.push_back(gval);
    im.push_back(0.0);
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const double tp = std::pow(t, powers[i]);
        re.push_back(-coeffs[i].real() * tp);
        im.push_back(-coeffs[i].imag() * tp);
    }
    return {compensated_sum(re), compensated_sum(im)};
}

/// int_a^b t^{-e} dt, exact.
inline double power_primitive(double e, double a, double b) {
    if (near(e, 1.0)) return std::log(b / a);
    return (std::pow(b, 1.0 - e) - std::pow(a, 1.0 - e)) / (1.0 - e);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ladder fit.
// ---------------------------------------------------------------------------

/// Least-squares fit of regulator samples (t_i, m(t_i)) against the ladder
/// basis {t^p} + {ln t} + {t^p ln t} + {1}.  The constant coefficient a0 is
/// the renormalized candidate; the remaining coefficients come back labelled.
inline FitOutput fit_finite_part(const std::vector<std::pair<double, complex>>& samples,
                                 const ExponentLadder& ladder) {
    validate(ladder);
    const std::size_t m = samples.size();
    std::vector<std::string> labels;
    labels.push_back("1");
    for (double p : ladder.powers) labels.push_back("t^" + detail::format_num(p));
    if (ladder.has_log_term) labels.push_back("ln t");
    for (double p : ladder.log_powers)
        labels.push_back(std::abs(p) < 1e-9 ? std::string("ln t")
                                            : "t^" + detail::format_num(p) + " ln t");
    const std::size_t k = labels.size();
    if (m < k + 2)
        throw invalid_parameter("fit_finite_part: need at least " + std::to_string(k + 2) +
                                " samples for " + std::to_string(k) + " basis columns");

    std::vector<std::vector<double>> cols(k, std::vector<double>(m, 0.0));
    std::vector<complex> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = samples[i].first;
        if (!(t > 0.0) || !std::isfinite(t))
            throw invalid_parameter("fit_finite_part: sample parameters must be positive");
        require_finite(samples[i].second, "fit_finite_part sample");
        rhs[i] = samples[i].second;
        std::size_t j = 0;
        cols[j++][i] = 1.0;
        for (double p : ladder.powers) cols[j++][i] = std::pow(t, p);
        if (ladder.has_log_term) cols[j++][i] = std::log(t);
        for (double p : ladder.log_powers) cols[j++][i] = std::pow(t, p) * std::log(t);
    }

    detail::LsqSolution sol = detail::lsq_solve(std::move(cols), std::move(rhs));
    FitOutput out;
    out.a0 = sol.coeffs[0];
    for (std::size_t j = 1; j < k; ++j) out.coefficients.emplace_back(labels[j], sol.coeffs[j]);
    out.residual = sol.residual;
    out.condition = sol.condition;
    return out;
}

// ---------------------------------------------------------------------------
// Minimal subtraction on a half line.
// ---------------------------------------------------------------------------

/// Renormalization data of int_0^inf g(t) dt for an integrand with power-law
/// endpoint behaviour.  finite is the minimally subtracted value; the two
/// inverse_* fields are the coefficients of t^{-1} in the endpoint
/// expansions, i.e. the residues whose continued integrals would have been
/// logarithms (their boundary terms are the callers' business).
struct HalfLineRenormalization {
    complex finite{0.0, 0.0};
    complex inverse_at_zero{0.0, 0.0};
    complex inverse_at_infinity{0.0, 0.0};
    double err = 0.0;
    double far_cut = std::numeric_limits<double>::infinity();
    int subtracted_at_zero = 0;
    int subtracted_at_infinity = 0;
};

/// Minimal subtraction of int_0^inf g, split at t = 1.
///
/// Head: int_0^1 [g - (divergent zero terms)] + sum c/(e+1) over the
/// subtracted terms (0 for e = -1, recorded in inverse_at_zero).
///
/// Tail: every known tail term is subtracted on (1, X) and replaced by its
/// continued integral c/(e-1) (0 for e = 1, recorded in inverse_at_infinity).
/// Stopping the numerical integral at a far cut X and dropping
/// int_X^inf [g - S] is deliberate: the counterterms are known analytically
/// beyond X, while evaluating g - S out there only accumulates |g| * eps of
/// rounding noise.  X is chosen per call to balance that noise against the
/// size of the first unknown term at X.
inline HalfLineRenormalization renormalize_half_line(const std::function<double(double)>& g,
                                                     const std::vector<ExpansionTerm>& zero_terms,
                                                     const std::vector<ExpansionTerm>& tail_terms,
                                                     const QuadratureConfig& cfg = {}) {
    cfg.validate();
    HalfLineRenormalization out;

    // --- head (0, 1) ---
    std::vector<double> zp;
    std::vector<complex> zc;
    for (const auto& term : zero_terms) {
        if (term.exponent > -1.0 + 1e-9) continue;  // integrable at 0, leave it in g
        zp.push_back(term.exponent);
        zc.push_back(term.coefficient);
        if (detail::near(term.exponent, -1.0))
            out.inverse_at_zero += term.coefficient;
        else
            out.finite += term.coefficient / (term.exponent + 1.0);
    }
    out.subtracted_at_zero = static_cast<int>(zp.size());
    auto head = [&](double t) { return detail::subtracted_value(g(t), zp, zc, t); };
    const IntegrationResult h = detail::adapt(head, 0.0, 1.0, cfg, 2);
    out.finite += h.value;
    out.err += h.error;

    // --- tail (1, inf) ---
    if (tail_terms.empty()) {
        const IntegrationResult t =
            integrate_upper([&](double x) { return complex{g(x), 0.0}; }, 1.0, cfg);
        out.finite += t.value;
        out.err += t.error;
        return out;
    }

    double e_last = -std::numeric_limits<double>::infinity();
    double c_last = 0.0;
    for (const auto& term : tail_terms) {
        if (detail::near(term.exponent, 1.0))
            out.inverse_at_infinity += term.coefficient;
        else
            out.finite += term.coefficient / (term.exponent - 1.0);
        if (term.exponent > e_last) {
            e_last = term.exponent;
            c_last = std::abs(term.coefficient);
        }
    }
    out.subtracted_at_infinity = static_cast<int>(tail_terms.size());

    // Far cut: noise(X) ~ eps * sum |c| int_1^X t^{-e}, truncation(X) ~ the
    // last known term's remaining integral beyond X (proxy for the first
    // unknown one).  Scan decades and keep the minimizer.
    const double eps = 4.0 * std::numeric_limits<double>::epsilon();
    double best_X = 1e4;
    double best_score = std::numeric_limits<double>::infinity();
    double best_noise = 0.0;
    for (int k = 2; k <= 10; ++k) {
        const double X = std::pow(10.0, k);
        double noise = 0.0;
        for (const auto& term : tail_terms)
            noise += eps * std::abs(term.coefficient) *
                     std::abs(detail::power_primitive(term.exponent, 1.0, X));
        const double trunc = (e_last > 1.0 + 1e-9)
                                 ? c_last * std::pow(X, 1.0 - e_last) / (e_last - 1.0)
                                 : c_last * std::abs(detail::power_primitive(e_last, 1.0, X));
        if (noise + trunc < best_score) {
            best_score = noise + trunc;
            best_X = X;
            best_noise = noise;
        }
    }
    out.far_cut = best_X;
    out.err += best_score;

    // Integrate g - S over (1, X) in u = ln t; counterterms become e^{-e u}.
    std::vector<double> tp;
    std::vector<complex> tc;
    for (const auto& term : tail_terms) {
        tp.push_back(-term.exponent);
        tc.push_back(term.coefficient);
    }
    auto tail = [&](double u) {
        const double t = std::exp(u);
        return detail::subtracted_value(g(t), tp, tc, t) * t;
    };
    const double ulim = std::log(best_X);
    const int seeds = std::min(8, 2 + static_cast<int>(ulim / 3.0));
    const IntegrationResult t = detail::adapt(tail, 0.0, ulim, cfg, seeds);
    out.finite += t.value;
    out.err += t.error + best_noise;
    return out;
}

// ---------------------------------------------------------------------------
// Subtraction scheme.
// ---------------------------------------------------------------------------

/// Renormalized n-th moment by minimal subtraction of the divergent endpoint
/// behaviour on each half line:
///
///   m_n^ren = M_+ + e^{i pi n} M_- + i pi e^{i pi n} (A_- - P_-),
///
/// where M_+/- are the minimally subtracted half-line integrals of
/// g_+/-(t) = p(+/-t) t^n, A_- is the t^{-1} coefficient of g_- at 0 and
/// P_- its t^{-1} coefficient at infinity.  The boundary term is what the
/// continued left half-line logarithms contribute under ln(-1) = +i pi; for
/// one-sided supports it vanishes.  When the e^{i pi n}-weighted t^{-1}
/// coefficients of the two tails cancel, the result is branch-free and
/// scheme-independent.
inline SchemeResult subtraction_scheme(const DistributionSpec& spec, int n,
                                       const QuadratureConfig& cfg = {}, int guard_terms = 4) {
    validate(spec);
    if (n < 1) throw invalid_parameter("subtraction_scheme: moment order n must be >= 1");
    cfg.validate();

    const bool two_sided = support(spec).lower < 0.0;
    const complex sigma = pow_minus_one(complex{static_cast<double>(n), 0.0});

    auto g_plus = [&spec, n](double t) { return density(spec, t) * std::pow(t, n); };
    const std::vector<ExpansionTerm> tail_plus =
        asymptotic_expansion(spec, n, Endpoint::plus_infinity, guard_terms).terms;
    const HalfLineRenormalization mp = renormalize_half_line(g_plus, {}, tail_plus, cfg);

    SchemeResult r;
    r.scheme = SchemeKind::subtraction;
    r.value = mp.finite;
    r.err_estimate = mp.err;
    complex boundary{0.0, 0.0};
    int subtracted = mp.subtracted_at_infinity;

    if (two_sided) {
        auto g_minus = [&spec, n](double t) { return density(spec, -t) * std::pow(t, n); };
        const std::vector<ExpansionTerm> tail_minus = detail::reflected_tail(spec, n, guard_terms);
        const HalfLineRenormalization mm = renormalize_half_line(g_minus, {}, tail_minus, cfg);
        boundary = iunit * pi * sigma * (mm.inverse_at_zero - mm.inverse_at_infinity);
        r.value += sigma * mm.finite + boundary;
        r.err_estimate += mm.err;
        subtracted += mm.subtracted_at_infinity;
    }

    r.err_estimate = 4.0 * r.err_estimate + 1e-14 * (1.0 + std::abs(r.value));
    r.metadata["case"] = two_sided ? "two-sided" : "upper-half-line";
    r.metadata["guard_terms"] = std::to_string(guard_terms);
    r.metadata["subtracted_terms"] = std::to_string(subtracted);
    r.metadata["far_cut"] = detail::format_num(mp.far_cut);
    r.metadata["boundary_term"] = detail::format_cnum(boundary);
    return r;
}

// ---------------------------------------------------------------------------
// Cut-off scheme.
// ---------------------------------------------------------------------------

namespace detail {

/// Minimally subtracted cumulative integrals at each requested cut:
///   I_sub(c) = int_0^1 g + int_1^c (g - S_div) + sum_div c_e / (e - 1),
/// i.e. I(c) with its known divergent powers L^{1-e}/(1-e) and log removed
/// exactly.  The samples then stay O(1) and converge to the minimal
/// finite part as c grows, so the regulator fit never sees the eps * |I|
/// rounding of an exploding raw cumulative; the ladder columns remain in the
/// basis only to absorb modelling error and fit ~0.
struct CumulativeSide {
    std::vector<double> cuts;
    std::vector<complex> values;
    double err = 0.0;
    double max_abs = 0.0;

    complex at(double c) const {
        for (std::size_t i = 0; i < cuts.size(); ++i)
            if (std::abs(cuts[i] - c) <= 1e-12 * c) return values[i];
        throw invalid_parameter("cutoff: internal cut lookup failed");
    }
};

inline CumulativeSide cumulative_integrals(const std::function<double(double)>& g,
                                           const std::vector<ExpansionTerm>& tail,
                                           std::vector<double> cuts,
                                           const QuadratureConfig& cfg) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
               cuts.end());
    std::vector<double> dp;
    std::vector<complex> dc;
    std::vector<double> cp;
    std::vector<complex> cc;
    complex continued{0.0, 0.0};
    for (const auto& term : tail) {
        if (term.exponent > 1.0 + 1e-9) {
            cp.push_back(term.exponent);
            cc.push_back(term.coefficient);
            continue;
        }
        dp.push_back(term.exponent);
        dc.push_back(term.coefficient);
        // int_1^L t^{-e} minimally subtracted contributes the constant
        // 1/(e-1); the pure log (e = 1) contributes nothing.
        if (!near(term.exponent, 1.0)) continued += term.coefficient / (term.exponent - 1.0);
    }

    CumulativeSide side;
    side.cuts = cuts;
    const double first = cuts.front();
    IntegrationResult acc =
        integrate([&](double t) { return complex{g(t), 0.0}; }, 0.0, std::min(1.0, first), cfg);
    complex running = acc.value + continued;
    side.err += acc.error;

    // Evaluating g - S_div at large t leaves cancellation noise of size
    // eps * |g(t)| even with compensated summation, and that noise integrates
    // to well above the fit tolerance for steeply growing integrands.  Past
    // t_series the subtracted remainder equals the convergent expansion terms
    // to below machine precision (every supported series has ratio < 1/20
    // there), so quadrature is replaced by their exact primitives.  Specs
    // with no power expansion (exponential tails) subtract nothing and keep
    // plain quadrature, which is noise-free anyway.
    const double t_series = 32.0;
    const bool capped = !tail.empty();

    auto quad_increment = [&](double a, double b) -> complex {
        std::vector<double> up;
        up.reserve(dp.size());
        for (double e : dp) up.push_back(-e);
        auto h = [&](double u) {
            const double t = std::exp(u);
            return subtracted_value(g(t), up, dc, t) * t;
        };
        const double ua = std::log(a);
        const double ub = std::log(b);
        const int seeds = std::min(8, 2 + static_cast<int>((ub - ua) / 2.0));
        const IntegrationResult inc = adapt(h, ua, ub, cfg, seeds);
        side.err += inc.error;
        return inc.value;
    };
    auto series_increment = [&](double a, double b) -> complex {
        complex sum{0.0, 0.0};
        for (std::size_t i = 0; i < cp.size(); ++i) sum += cc[i] * power_primitive(cp[i], a, b);
        return sum;
    };
    auto increment = [&](double a, double b) -> complex {
        if (!capped || b <= t_series) return quad_increment(a, b);
        if (a >= t_series) return series_increment(a, b);
        return quad_increment(a, t_series) + series_increment(t_series, b);
    };

    double prev = std::min(1.0, first);
    if (first > prev) {
        running += increment(prev, first);
        prev = first;
    }
    side.values.push_back(running);
    side.max_abs = std::abs(running);
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        running += increment(prev, cuts[i]);
        prev = cuts[i];
        side.values.push_back(running);
        side.max_abs = std::max(side.max_abs, std::abs(running));
    }
    return side;
}

/// Analytic completion of the known convergent tail beyond a cut:
/// sum c * L^{1-e}/(e-1) over convergent terms not already fitted as ladder
/// columns.
inline complex cutoff_completion(const std::vector<ExpansionTerm>& tail,
                                 const std::vector<double>& fitted_powers, double L) {
    complex s{0.0, 0.0};
    for (const auto& term : tail) {
        if (term.exponent <= 1.0 + 1e-9) continue;
        bool fitted = false;
        for (double p : fitted_powers)
            if (near(p, 1.0 - term.exponent)) fitted = true;
        if (fitted) continue;
        s += term.coefficient * std::pow(L, 1.0 - term.exponent) / (term.exponent - 1.0);
    }
    return s;
}

inline void check_regulator_grid(const std::vector<double>& grid, std::size_t ladder_size,
                                 bool basis_nonconstant, const char* scheme) {
    if (grid.size() < ladder_size + 3)
        throw invalid_parameter(std::string(scheme) + ": grid too small -- need at least " +
                                std::to_string(ladder_size + 3) + " points for " +
                                std::to_string(ladder_size) + " ladder powers");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
            throw invalid_parameter(std::string(scheme) + ": grid values must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw invalid_parameter(std::string(scheme) + ": grid must be strictly ascending");
    }
    // A non-trivial ladder needs scale separation to be identifiable; a pure
    // constant fit does not, so convergent cases accept any grid.
    if (basis_nonconstant && grid.back() / grid.front() < 10.0)
        throw invalid_parameter(std::string(scheme) +
                                ": grid too small -- must span at least a decade "
                                "to separate the ladder powers");
}

}  // namespace detail

/// Renormalized n-th moment from sharp cut-offs: sample m_n(Lambda) (or
/// m_n(Lambda_1, Lambda_2) jointly for two-sided divergences, over the pairs
/// (L,L), (L,2L), (2L,L) per grid point), fit against the ladder, and read
/// off the constant.  Known convergent tail terms are completed analytically
/// so the fit basis stays small; the i pi boundary of the left half-line's
/// continued logarithm is added exactly as in the subtraction scheme.
inline SchemeResult cutoff_scheme(const DistributionSpec& spec, int n,
                                  const ExponentLadder& ladder, const std::vector<double>& grid,
                                  const QuadratureConfig& cfg = {}) {
    validate(spec);
    validate(ladder);
    cfg.validate();
    if (n < 1) throw invalid_parameter("cutoff_scheme: moment order n must be >= 1");

    const bool two_sided = support(spec).lower < 0.0;
    const complex sigma = pow_minus_one(complex{static_cast<double>(n), 0.0});
    // Ten expansion terms push the uncompleted part of the tail below the
    // fit tolerance already at cuts of a few units (each extra term gains
    // roughly the tail-series ratio at the smallest cut); one further term is
    // requested only to price what was left out.
    const int guard_terms = 10;
    std::vector<ExpansionTerm> tail_plus =
        asymptotic_expansion(spec, n, Endpoint::plus_infinity, guard_terms + 1).terms;
    double neglect = 0.0;
    if (!tail_plus.empty() && tail_plus.back().exponent > 1.0 + 1e-9 && !grid.empty()) {
        const ExpansionTerm& next = tail_plus.back();
        neglect = std::abs(next.coefficient) * std::pow(grid.front(), 1.0 - next.exponent) /
                  (next.exponent - 1.0);
        tail_plus.pop_back();
    }
    if (two_sided) neglect *= 2.0;
    const std::vector<ExpansionTerm> tail_minus =
        two_sided ? detail::reflected_tail(spec, n, guard_terms) : std::vector<ExpansionTerm>{};

    // Fit powers: caller ladder plus any known divergent power it missed.
    std::vector<double> powers = ladder.powers;
    bool log_column = ladder.has_log_term;
    std::vector<std::string> auto_added;
    for (const auto& term : tail_plus) {
        if (term.exponent > 1.0 + 1e-9) continue;
        if (detail::near(term.exponent, 1.0)) {
            if (!log_column) {
                log_column = true;
                auto_added.push_back("ln");
            }
            continue;
        }
        const double q = 1.0 - term.exponent;
        bool present = false;
        for (double p : powers)
            if (detail::near(p, q)) present = true;
        if (!present) {
            powers.push_back(q);
            auto_added.push_back("t^" + detail::format_num(q));
        }
    }
    std::sort(powers.begin(), powers.end());

    const bool nonconstant = !powers.empty() || log_column || !ladder.log_powers.empty();
    detail::check_regulator_grid(grid, ladder.powers.size(), nonconstant, "cutoff_scheme");

    // Cumulative integrals at every cut we will need.
    std::vector<double> cuts = grid;
    if (two_sided)
        for (double L : grid) cuts.push_back(2.0 * L);
    auto g_plus = [&spec, n](double t) { return density(spec, t) * std::pow(t, n); };
    const detail::CumulativeSide plus = detail::cumulative_integrals(g_plus, tail_plus, cuts, cfg);
    detail::CumulativeSide minus;
    if (two_sided) {
        auto g_minus = [&spec, n](double t) { return density(spec, -t) * std::pow(t, n); };
        minus = detail::cumulative_integrals(g_minus, tail_minus, cuts, cfg);
    }

    // Assemble samples and design matrix.
    const std::size_t per_point = two_sided ? 3 : 1;
    const std::size_t m = grid.size() * per_point;
    std::vector<std::string> labels;
    labels.push_back("1");
    if (two_sided) {
        for (double p : powers) {
            labels.push_back("L1^" + detail::format_num(p));
            labels.push_back("L2^" + detail::format_num(p));
        }
        if (log_column) {
            labels.push_back("ln L1");
            labels.push_back("ln L2");
        }
        for (double p : ladder.log_powers) {
            labels.push_back("L1^" + detail::format_num(p) + " ln L1");
            labels.push_back("L2^" + detail::format_num(p) + " ln L2");
        }
    } else {
        for (double p : powers) labels.push_back("L^" + detail::format_num(p));
        if (log_column) labels.push_back("ln L");
        for (double p : ladder.log_powers)
            labels.push_back("L^" + detail::format_num(p) + " ln L");
    }
    const std::size_t k = labels.size();
    if (m < k + 2)
        throw invalid_parameter(
            "cutoff_scheme: grid too small for the extended basis (" + std::to_string(k) +
            " columns after auto-adding divergent powers; need >= " + std::to_string(k + 2) +
            " samples)");

    std::vector<std::vector<double>> cols(k, std::vector<double>(m, 0.0));
    std::vector<complex> rhs(m);
    const double pair_factor[3][2] = {{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}};
    std::size_t row = 0;
    for (double L : grid) {
        for (std::size_t pr = 0; pr < per_point; ++pr) {
            const double L1 = pair_factor[pr][0] * L;
            const double L2 = pair_factor[pr][1] * L;
            complex y = plus.at(L1) + detail::cutoff_completion(tail_plus, powers, L1);
            if (two_sided)
                y += sigma * (minus.at(L2) + detail::cutoff_completion(tail_minus, powers, L2));
            rhs[row] = y;
            std::size_t j = 0;
            cols[j++][row] = 1.0;
            if (two_sided) {
                for (double p : powers) {
                    cols[j++][row] = std::pow(L1, p);
                    cols[j++][row] = std::pow(L2, p);
                }
                if (log_column) {
                    cols[j++][row] = std::log(L1);
                    cols[j++][row] = std::log(L2);
                }
                for (double p : ladder.log_powers) {
                    cols[j++][row] = std::pow(L1, p) * std::log(L1);
                    cols[j++][row] = std::pow(L2, p) * std::log(L2);
                }
            } else {
                for (double p : powers) cols[j++][row] = std::pow(L, p);
                if (log_column) cols[j++][row] = std::log(L);
                for (double p : ladder.log_powers) cols[j++][row] = std::pow(L, p) * std::log(L);
            }
            ++row;
        }
    }

    const detail::LsqSolution sol = detail::lsq_solve(std::move(cols), std::move(rhs));

    // Boundary term of the continued left-tail logarithm, identical to the
    // subtraction scheme's: -i pi sigma P_- (zero when the support is one
    // sided or no t^{-1} tail term exists).
    const complex boundary =
        two_sided ? complex{0.0, -1.0} * pi * sigma * detail::inverse_power_sum(tail_minus)
                  : complex{0.0, 0.0};

    SchemeResult r;
    r.scheme = SchemeKind::cutoff;
    r.value = sol.coeffs[0] + boundary;
    const double eps_floor =
        32.0 * std::numeric_limits<double>::epsilon() * std::max(plus.max_abs, minus.max_abs);
    r.err_estimate = 8.0 * sol.residual + 4.0 * (plus.err + minus.err) + 4.0 * neglect + eps_floor;
    r.metadata["case"] = two_sided ? "two-sided joint fit" : "one-sided fit";
    r.metadata["columns"] = std::to_string(k);
    r.metadata["samples"] = std::to_string(m);
    r.metadata["condition"] = detail::format_num(sol.condition);
    // The reported residual is the fit's own misfit plus the priced first
    // neglected expansion term: smooth truncation bias is absorbed by the
    // basis and invisible to the pure least-squares residual, yet it is the
    // scale on which a grid change moves a0.
    r.metadata["residual"] = detail::format_num(sol.residual + neglect);
    r.metadata["fit_residual"] = detail::format_num(sol.residual);
    r.metadata["truncation_floor"] = detail::format_num(neglect);
    r.metadata["boundary_term"] = detail::format_cnum(boundary);
    if (!auto_added.empty()) {
        std::string joined;
        for (const auto& s : auto_added) joined += (joined.empty() ? "" : ", ") + s;
        r.metadata["auto_added_columns"] = joined;
    }
    return r;
}

/// The cut-off ladder implied by the tail of p(x) x^n: one power 1-e per
/// divergent tail term x^{-e} (e < 1), a log flag for e = 1.
inline ExponentLadder derive_cutoff_ladder(const DistributionSpec& spec, int n) {
    ExponentLadder ladder;
    for (const auto& term : asymptotic_expansion(spec, n, Endpoint::plus_infinity, 2).terms) {
        if (term.exponent > 1.0 + 1e-9) continue;
        if (detail::near(term.exponent, 1.0))
            ladder.has_log_term = true;
        else
            ladder.powers.push_back(1.0 - term.exponent);
    }
    std::sort(ladder.powers.begin(), ladder.powers.end());
    return ladder;
}

// ---------------------------------------------------------------------------
// Weighted scheme.
// ---------------------------------------------------------------------------

namespace detail {

/// One half-line weighted integral, sampled in already-renormalized form:
///   W_sub(s) = int_0^1 g e^{-s t} + int_1^inf (g - S_div) e^{-s t}
///            + sum_div c_e * R_e(s),
/// where R_e(s) is the ENTIRE part of the counterterm transform
/// int_1^inf t^{-e} e^{-s t} dt = Gamma(1-e) s^{e-1} - sum_k (-s)^k/(k!(1-e+k))
/// (for e = 1 the transform is E_1(s) = -gamma_E - ln s - sum_k (-s)^k/(k k!)).
/// Dropping the exactly known singular s^{e-1} / ln s / gamma_E pieces keeps
/// the samples O(1) -- no eps * |W| rounding at small s -- and makes
/// W_sub(0) the minimal finite part directly: R_e(0) = 1/(e-1), matching the
/// convention int_1^inf t^{-e} -> 1/(e-1) (0 for the log).  The ladder
/// columns stay in the fit only to absorb modelling error.
struct WeightedSide {
    std::vector<double> div_powers;
    std::vector<complex> div_coeffs;
    std::vector<double> conv_powers;
    std::vector<complex> conv_coeffs;
    const std::function<double(double)>* g = nullptr;

    complex eval(double s, const QuadratureConfig& cfg, double* err) const {
        const IntegrationResult head = integrate(
            [&](double t) { return complex{(*g)(t)*std::exp(-s * t), 0.0}; }, 0.0, 1.0, cfg);
        std::vector<double> up;
        up.reserve(div_powers.size());
        for (double e : div_powers) up.push_back(-e);
        auto f = [&](double t) {
            return subtracted_value((*g)(t), up, div_coeffs, t) * std::exp(-s * t);
        };
        // Same large-t cancellation-noise cap as the cut-off sampler: past
        // t_series the subtracted integrand equals the convergent expansion
        // terms to below machine precision, and integrating those explicitly
        // avoids evaluating g at all.
        IntegrationResult tail;
        if (!div_powers.empty() || !conv_powers.empty()) {
            const double t_series = 32.0;
            tail = integrate([&](double t) { return f(t); }, 1.0, t_series, cfg);
            const IntegrationResult far = integrate_upper(
                [&](double t) {
                    complex sum{0.0, 0.0};
                    for (std::size_t i = 0; i < conv_powers.size(); ++i)
                        sum += conv_coeffs[i] * std::pow(t, -conv_powers[i]);
                    return sum * std::exp(-s * t);
                },
                t_series, cfg);
            tail.value += far.value;
            tail.error += far.error;
        } else {
            tail = integrate_upper(f, 1.0, cfg);
        }
        complex entire{0.0, 0.0};
        for (std::size_t i = 0; i < div_powers.size(); ++i) {
            const double e = div_powers[i];
            double kept = 0.0;
            double term = 1.0;  // (-s)^k / k!
            if (near(e, 1.0)) {
                for (int k = 1; k <= 24; ++k) {
                    term *= -s / k;
                    kept -= term / k;
                }
            } else {
                kept = -1.0 / (1.0 - e);
                for (int k = 1; k <= 24; ++k) {
                    term *= -s / k;
                    kept -= term / (1.0 - e + k);
                }
            }
            entire += div_coeffs[i] * kept;
        }
        *err += head.error + tail.error;
        return head.value + tail.value + entire;
    }
};

/// Non-analytic completion of a known convergent tail term under the
/// e^{-s t} weight: c * Gamma(1-e) s^{e-1} for non-integer e, and
/// c * (-1)^m/(m-1)! * s^{m-1} ln s for integer e = m >= 2 (the analytic
/// partners are absorbed by the plain power columns).
inline complex weighted_completion(const std::vector<ExpansionTerm>& tail,
                                   const std::vector<double>& fitted_powers,
                                   const std::vector<double>& fitted_log_powers, double s) {
    complex sum{0.0, 0.0};
    for (const auto& term : tail) {
        const double e = term.exponent;
        if (e <= 1.0 + 1e-9) continue;  // divergent: handled inside eval()
        const double p = e - 1.0;
        if (is_near_integer(e)) {
            bool fitted = false;
            for (double lp : fitted_log_powers)
                if (near(lp, p)) fitted = true;
            if (fitted) continue;
            const long long mm = std::llround(e);
            double fact = 1.0;
            for (long long i = 2; i < mm; ++i) fact *= static_cast<double>(i);
            const double sign = (mm % 2 == 0) ? 1.0 : -1.0;
            sum += term.coefficient * (sign / fact) * std::pow(s, p) * std::log(s);
        } else {
            bool fitted = false;
            for (double fp : fitted_powers)
                if (near(fp, p)) fitted = true;
            if (fitted) continue;
            sum += term.coefficient * gamma(complex{1.0 - e, 0.0}) * std::pow(s, p);
        }
    }
    return sum;
}

}  // namespace detail

/// Renormalized n-th moment from the exponential weight e^{-s|x|}: sample
/// m_n(s) on the grid, fit against the ladder of singular s-powers plus an
/// analytic block {1, s, ..., s^5}, and take the s^0 coefficient.  The known
/// singular content -- Gamma(1-e) s^{e-1} powers, the ln s and its companion
/// Euler-Mascheroni constant from int_1^inf t^{-1} e^{-st} dt = -gamma_E
/// - ln s + O(s) -- is removed from the samples analytically, so a0 lands on
/// the minimal-subtraction value and the ladder columns only absorb residual
/// modelling error (a fitted ln s coefficient still receives the -gamma_E
/// companion correction, for callers whose samples genuinely contain one).
/// The i pi boundary of the left half-line is added as in the other schemes.
inline SchemeResult weighted_scheme(const DistributionSpec& spec, int n,
                                    const std::vector<double>& s_grid,
                                    const ExponentLadder& ladder,
                                    const QuadratureConfig& cfg = {}) {
    validate(spec);
    validate(ladder);
    cfg.validate();
    if (n < 1) throw invalid_parameter("weighted_scheme: moment order n must be >= 1");

    const bool two_sided = support(spec).lower < 0.0;
    const complex sigma = pow_minus_one(complex{static_cast<double>(n), 0.0});
    const int guard_terms = 10;
    std::vector<ExpansionTerm> tail_plus =
        asymptotic_expansion(spec, n, Endpoint::plus_infinity, guard_terms + 1).terms;
    // Price the first neglected term's non-analytic transform at the largest
    // s: c Gamma(1-e) s^{e-1}, or the s^{m-1} ln s companion at integer e.
    double neglect = 0.0;
    if (!tail_plus.empty() && tail_plus.back().exponent > 1.0 + 1e-9 && !s_grid.empty()) {
        const ExpansionTerm& next = tail_plus.back();
        const double e = next.exponent;
        const double s_max = s_grid.back();
        double factor;
        if (detail::is_near_integer(e)) {
            const long long mm = std::llround(e);
            double fact = 1.0;
            for (long long i = 2; i < mm; ++i) fact *= static_cast<double>(i);
            factor = std::abs(std::log(s_max)) / fact;
        } else {
            factor = std::abs(gamma(complex{1.0 - e, 0.0}));
        }
        neglect = std::abs(next.coefficient) * factor * std::pow(s_max, e - 1.0);
        tail_plus.pop_back();
    }
    if (two_sided) neglect *= 2.0;
    const std::vector<ExpansionTerm> tail_minus =
        two_sided ? detail::reflected_tail(spec, n, guard_terms) : std::vector<ExpansionTerm>{};

    // Fit powers: caller ladder plus any missing divergent s-power e-1
    // (e < 1); e = 1 needs the log column.
    std::vector<double> powers = ladder.powers;
    bool log_column = ladder.has_log_term;
    std::vector<std::string> auto_added;
    for (const auto& term : tail_plus) {
        if (term.exponent > 1.0 + 1e-9) continue;
        if (detail::near(term.exponent, 1.0)) {
            if (!log_column) {
                log_column = true;
                auto_added.push_back("ln");
            }
            continue;
        }
        const double p = term.exponent - 1.0;
        bool present = false;
        for (double q : powers)
            if (detail::near(q, p)) present = true;
        if (!present) {
            powers.push_back(p);
            auto_added.push_back("s^" + detail::format_num(p));
        }
    }
    std::sort(powers.begin(), powers.end());

    const bool nonconstant = !powers.empty() || log_column || !ladder.log_powers.empty();
    detail::check_regulator_grid(s_grid, ladder.powers.size(), nonconstant, "weighted_scheme");

    // Analytic block {s, ..., s^5}; trimmed if the grid is short.
    const std::size_t base_k = 1 + powers.size() + (log_column ? 1 : 0) + ladder.log_powers.size();
    std::size_t n_analytic = 5;
    while (n_analytic > 2 && s_grid.size() < base_k + n_analytic + 2) --n_analytic;
    if (s_grid.size() < base_k + n_analytic + 2)
        throw invalid_parameter("weighted_scheme: grid too small for the extended basis (" +
                                std::to_string(base_k + n_analytic) + " columns; need >= " +
                                std::to_string(base_k + n_analytic + 2) + " samples)");

    // The analytic block stops at s^A, and the first omitted coefficient is
    // a moment of ascending order: a_{A+1} = +-m_{n+A+1}/(A+1)!.  For the
    // heavy-tailed families |m_k| grows with k, so this smooth bias -- partly
    // absorbed by the block, partly leaking into a0 -- dominates the floor at
    // the large-s end and is priced alongside the non-analytic neglect.
    if (!tail_plus.empty() && !s_grid.empty()) {
        double fact = 1.0;
        for (std::size_t a = 2; a <= n_analytic + 1; ++a) fact *= static_cast<double>(a);
        const double order = static_cast<double>(n) + static_cast<double>(n_analytic) + 1.0;
        const complex m_next = finite_part_at_pole(spec, complex{order, 0.0}).value;
        neglect += std::abs(m_next) / fact *
                   std::pow(s_grid.back(), static_cast<double>(n_analytic) + 1.0);
    }

    detail::WeightedSide plus_side;
    detail::WeightedSide minus_side;
    auto g_plus = [&spec, n](double t) { return density(spec, t) * std::pow(t, n); };
    auto g_minus = [&spec, n](double t) { return density(spec, -t) * std::pow(t, n); };
    const std::function<double(double)> gp = g_plus;
    const std::function<double(double)> gm = g_minus;
    plus_side.g = &gp;
    minus_side.g = &gm;
    for (const auto& term : tail_plus) {
        if (term.exponent <= 1.0 + 1e-9) {
            plus_side.div_powers.push_back(term.exponent);
            plus_side.div_coeffs.push_back(term.coefficient);
        } else {
            plus_side.conv_powers.push_back(term.exponent);
            plus_side.conv_coeffs.push_back(term.coefficient);
        }
    }
    for (const auto& term : tail_minus) {
        if (term.exponent <= 1.0 + 1e-9) {
            minus_side.div_powers.push_back(term.exponent);
            minus_side.div_coeffs.push_back(term.coefficient);
        } else {
            minus_side.conv_powers.push_back(term.exponent);
            minus_side.conv_coeffs.push_back(term.coefficient);
        }
    }

    const std::size_t m = s_grid.size();
    std::vector<std::string> labels;
    labels.push_back("1");
    for (double p : powers) labels.push_back("s^" + detail::format_num(p));
    std::size_t log_index = 0;
    if (log_column) {
        log_index = labels.size();
        labels.push_back("ln s");
    }
    for (double p : ladder.log_powers) labels.push_back("s^" + detail::format_num(p) + " ln s");
    for (std::size_t a = 1; a <= n_analytic; ++a)
        labels.push_back("s^" + std::to_string(a));
    const std::size_t k = labels.size();

    std::vector<std::vector<double>> cols(k, std::vector<double>(m, 0.0));
    std::vector<complex> rhs(m);
    double quad_err = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double s = s_grid[i];
        complex w = plus_side.eval(s, cfg, &quad_err);
        if (two_sided) w += sigma * minus_side.eval(s, cfg, &quad_err);
        max_abs = std::max(max_abs, std::abs(w));
        w -= detail::weighted_completion(tail_plus, powers, ladder.log_powers, s);
        if (two_sided)
            w -= sigma * detail::weighted_completion(tail_minus, powers, ladder.log_powers, s);
        rhs[i] = w;
        std::size_t j = 0;
        cols[j++][i] = 1.0;
        for (double p : powers) cols[j++][i] = std::pow(s, p);
        if (log_column) cols[j++][i] = std::log(s);
        for (double p : ladder.log_powers) cols[j++][i] = std::pow(s, p) * std::log(s);
        for (std::size_t a = 1; a <= n_analytic; ++a) cols[j++][i] = std::pow(s, a);
    }

    const detail::LsqSolution sol = detail::lsq_solve(std::move(cols), std::move(rhs));

    complex gamma_correction{0.0, 0.0};
    if (log_column) gamma_correction = -euler_gamma * sol.coeffs[log_index];
    const complex boundary =
        two_sided ? complex{0.0, -1.0} * pi * sigma * detail::inverse_power_sum(tail_minus)
                  : complex{0.0, 0.0};

    SchemeResult r;
    r.scheme = SchemeKind::weighted;
    r.value = sol.coeffs[0] + gamma_correction + boundary;
    const double eps_floor = 32.0 * std::numeric_limits<double>::epsilon() * max_abs;
    r.err_estimate = 8.0 * sol.residual + 4.0 * quad_err + 4.0 * neglect + eps_floor;
    r.metadata["case"] = two_sided ? "two-sided" : "one-sided";
    r.metadata["columns"] = std::to_string(k);
    r.metadata["samples"] = std::to_string(m);
    r.metadata["condition"] = detail::format_num(sol.condition);
    // As in the cut-off scheme the reported residual adds the priced first
    // neglected term: that bias is smooth, hides from the least-squares
    // misfit, and sets the scale of grid sensitivity.
    r.metadata["residual"] = detail::format_num(sol.residual + neglect);
    r.metadata["fit_residual"] = detail::format_num(sol.residual);
    r.metadata["truncation_floor"] = detail::format_num(neglect);
    r.metadata["boundary_term"] = detail::format_cnum(boundary);
    r.metadata["gamma_correction"] = detail::format_cnum(gamma_correction);
    if (!auto_added.empty()) {
        std::string joined;
        for (const auto& s : auto_added) joined += (joined.empty() ? "" : ", ") + s;
        r.metadata["auto_added_columns"] = joined;
    }
    return r;
}

/// The weighted-scheme ladder implied by the tail of p(x) x^n: a tail term
/// x^{-e} with e < 1 induces the singular power s^{e-1}; e = 1 induces ln s.
inline ExponentLadder derive_weighted_ladder(const DistributionSpec& spec, int n) {
    ExponentLadder ladder;
    for (const auto& term : asymptotic_expansion(spec, n, Endpoint::plus_infinity, 2).terms) {
        if (term.exponent > 1.0 + 1e-9) continue;
        if (detail::near(term.exponent, 1.0))
            ladder.has_log_term = true;
        else
            ladder.powers.push_back(term.exponent - 1.0);
    }
    std::sort(ladder.powers.begin(), ladder.powers.end());
    return ladder;
}

// ---------------------------------------------------------------------------
// Mellin routes.
// ---------------------------------------------------------------------------

/// Convergence strip (lo, hi) of Re z for the two-sided Mellin moment
/// integral int |x|^z p(x) dx of the given density.
inline std::pair<double, double> mellin_density_strip(const DistributionSpec& spec) {
    const double inf = std::numeric_limits<double>::infinity();
    switch (spec.kind) {
        case DistributionKind::cauchy: return {-1.0, 1.0};
        case DistributionKind::levy: return {-inf, 0.5};
        case DistributionKind::q_exponential: return {-1.0, 1.0 / (spec.q - 1.0) - 1.0};
        case DistributionKind::q_gaussian:
            if (spec.q > 1.0 + 1e-12) return {-1.0, 2.0 / (spec.q - 1.0) - 1.0};
            return {-1.0, inf};
        case DistributionKind::normal: return {-1.0, inf};
        case DistributionKind::laplace: return {-1.0, inf};
        case DistributionKind::student_t: return {-1.0, spec.nu};
    }
    throw invalid_parameter("mellin_density_strip: unknown distribution kind");
}

/// Renormalized moment of complex order z from the Mellin transform of the
/// density: m_z = int_0^inf t^z p(t) dt + e^{i pi z} int_0^inf t^z p(-t) dt.
/// Only valid inside the convergence strip; outside it the closed form is
/// the continuation.
inline SchemeResult mellin_density_numeric(const DistributionSpec& spec, const complex& z,
                                           const QuadratureConfig& cfg = {}) {
    validate(spec);
    require_finite(z, "mellin_density_numeric");
    cfg.validate();
    const std::pair<double, double> strip = mellin_density_strip(spec);
    if (!(z.real() > strip.first && z.real() < strip.second))
        throw invalid_parameter("mellin-density: Re z = " + detail::format_num(z.real()) +
                                " lies outside the convergence strip (" +
                                detail::format_num(strip.first) + ", " +
                                detail::format_num(strip.second) + ") of " + kind_name(spec.kind));

    const bool two_sided = support(spec).lower < 0.0;
    // Evaluate the density first and short-circuit on 0: far in the tail the
    // density underflows while t^z may overflow, and 0 * inf would poison the
    // quadrature with NaNs even though the product is genuinely negligible.
    auto kernel = [&](double t, double side) -> complex {
        const double p = density(spec, side * t);
        if (p == 0.0) return complex{0.0, 0.0};
        return cpow(t, z) * p;
    };
    const IntegrationResult plus =
        integrate_upper([&](double t) { return kernel(t, 1.0); }, 0.0, cfg);
    SchemeResult r;
    r.scheme = SchemeKind::mellin_density;
    r.value = plus.value;
    r.err_estimate = plus.error;
    if (two_sided) {
        const IntegrationResult minus =
            integrate_upper([&](double t) { return kernel(t, -1.0); }, 0.0, cfg);
        const complex phase = pow_minus_one(z);
        r.value += phase * minus.value;
        r.err_estimate += std::abs(phase) * minus.error;
    }
    r.err_estimate = 4.0 * r.err_estimate + 1e-13 * (1.0 + std::abs(r.value));
    r.metadata["strip"] = "(" + detail::format_num(strip.first) + ", " +
                          detail::format_num(strip.second) + ")";
    r.metadata["case"] = two_sided ? "two-sided" : "one-sided";
    return r;
}

/// Renormalized moment of complex order z in (-1, 0) from the Mellin
/// transform of the characteristic function:
///   m_z = i^z / Gamma(-z) * int_0^inf s^{-z-1} f(s) ds.
/// Supported for the specs with elementary, non-oscillatory characteristic
/// functions (Cauchy, Levy, Normal, centered Laplace); integer orders are
/// reached through the closed form's continuation of this strip.
inline SchemeResult mellin_cf_numeric(const DistributionSpec& spec, const complex& z,
                                      const QuadratureConfig& cfg = {}) {
    validate(spec);
    require_finite(z, "mellin_cf_numeric");
    cfg.validate();
    switch (spec.kind) {
        case DistributionKind::cauchy:
        case DistributionKind::levy:
        case DistributionKind::normal:
            break;
        case DistributionKind::laplace:
            if (spec.mu != 0.0)
                throw unsupported_error(
                    "mellin-cf: the shifted Laplace characteristic function oscillates like "
                    "e^{i mu s} at large s, which this quadrature does not accelerate; use "
                    "mellin-density or the closed form");
            break;
        default:
            throw unsupported_error(std::string("mellin-cf: ") + kind_name(spec.kind) +
                                    " has no elementary characteristic function; use "
                                    "mellin-density or the closed form");
    }
    if (!(z.real() > -1.0 && z.real() < 0.0))
        throw invalid_parameter("mellin-cf: Re z = " + detail::format_num(z.real()) +
                                " lies outside the convergence strip (-1, 0)");

    // The kernel s^{-z-1} is an integrable power singularity at the origin
    // that steepens as Re z -> 0^-; subtracting f(0) = 1 on (0, 1) and adding
    // the exact int_0^1 s^{-z-1} ds = -1/z keeps the quadrature integrand
    // bounded there (f(s) - 1 = O(s) or O(sqrt(s)) for the supported specs).
    const IntegrationResult head = integrate(
        [&](double s) {
            return cpow(s, -z - 1.0) * (characteristic_function(spec, s) - 1.0);
        },
        0.0, 1.0, cfg);
    const IntegrationResult tail = integrate_upper(
        [&](double s) { return cpow(s, -z - 1.0) * characteristic_function(spec, s); }, 1.0, cfg);
    const complex integral_value = head.value - 1.0 / z + tail.value;
    const complex prefactor = pow_i(z) / gamma(-z);
    SchemeResult r;
    r.scheme = SchemeKind::mellin_cf;
    r.value = prefactor * integral_value;
    r.err_estimate =
        4.0 * std::abs(prefactor) * (head.error + tail.error) + 1e-13 * (1.0 + std::abs(r.value));
    r.metadata["strip"] = "(-1, 0)";
    r.metadata["prefactor"] = detail::format_cnum(prefactor);
    return r;
}

// ---------------------------------------------------------------------------
// Closed form as a scheme.
// ---------------------------------------------------------------------------

/// The closed-form evaluation wrapped as a SchemeResult, for side-by-side
/// scheme comparisons.  Orders sitting on a pole of m_z are served as their
/// minimally subtracted finite part rather than as an error, so the wrapper
/// is total over all finite orders.
inline SchemeResult closed_form_scheme(const DistributionSpec& spec, const complex& z) {
    const MomentValue mv = finite_part_at_pole(spec, z);
    SchemeResult r;
    r.scheme = SchemeKind::closed_form;
    r.value = mv.value;
    switch (mv.classification) {
        case MomentClassification::regular:
            r.err_estimate = 1e-12 * (1.0 + std::abs(mv.value));
            r.metadata["classification"] = "regular";
            break;
        case MomentClassification::removable_singularity_limit:
            r.err_estimate = 1e-9 * (1.0 + std::abs(mv.value));
            r.metadata["classification"] = "removable-singularity-limit";
            break;
        case MomentClassification::finite_part_at_pole:
            r.err_estimate = 1e-8 * (1.0 + std::abs(mv.value));
            r.metadata["classification"] = "finite-part-at-pole";
            break;
    }
    return r;
}

}  // namespace renmom
