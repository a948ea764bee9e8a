#pragma once

// Logarithmic moments int p(x) ln^n x dx and the power-logarithmic moments
// M_{n,1} = int p(x) x^n ln x dx that tie them to the renormalized power
// moments: because x^z ln^n x = d^n x^z / dz^n, the n-th log moment is the
// n-th derivative of z -> m_z at z = 0, and M_{n,1} = dm_z/dz at z = n.
//
// Two independent routes are kept deliberately:
//   * derivative-of-power: differentiate the closed form through a
//     trapezoidal Cauchy integral on a small circle (spectrally accurate,
//     no subtractive cancellation);
//   * direct-integral: quadrature of the defining integral with the library
//     branch ln x = ln|x| + i pi for x < 0.
// Their agreement is the renormalization-validity check: the analytically
// continued moment function really does generate the honest log moments.

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "renmom/closed_form.hpp"
#include "renmom/core.hpp"
#include "renmom/distributions.hpp"
#include "renmom/quadrature.hpp"
#include "renmom/special_functions.hpp"

namespace renmom {

/// One logarithmic moment plus the route that produced it.
struct LogMomentValue {
    int order = 1;
    complex value{0.0, 0.0};
    std::string route;  // "derivative-of-power" or "direct-integral"
};

/// A closed-form reference value for the golden table.
struct GoldenLogMoment {
    int order = 1;
    complex value{0.0, 0.0};
};

namespace detail {

inline constexpr int contour_nodes = 64;

/// Contour radius around `center`: a quarter by default, never more than half
/// the distance to the nearest pole of m_z.  Centers sitting on (or hugging)
/// a pole have no analytic disk to differentiate in.
inline double contour_radius(const DistributionSpec& spec, complex center) {
    const SingularPoint at = classify_point(spec, center);
    if (at.kind == SingularPoint::Kind::simple_pole)
        throw pole_error("contour derivative: expansion point is a pole of m_z", center, 1);
    double nearest = std::numeric_limits<double>::infinity();
    for (const PoleInfo& p : pole_locations(spec, center, 40.0))
        nearest = std::min(nearest, std::abs(p.location - center));
    const double r = std::min(0.25, 0.5 * nearest);
    if (r < 1e-3)
        throw pole_error("contour derivative: expansion point hugs a pole of m_z", center, 1);
    return r;
}

/// d^n m_z / dz^n at `center` via the Cauchy integral on |z - center| = radius,
/// discretized by the trapezoidal rule (exact for the harmonics it can see;
/// the leftover is the (n + contour_nodes)-th Taylor term, negligible once the
/// radius sits inside the analyticity disk).
inline complex contour_derivative(const DistributionSpec& spec, complex center, int n,
                                  double radius) {
    if (!(radius > 0.0))
        throw invalid_parameter("contour_derivative: radius must be positive");
    if (!pole_locations(spec, center, radius).empty())
        throw pole_error("contour derivative: a pole of m_z lies inside the contour", center, 1);
    complex acc{0.0, 0.0};
    for (int k = 0; k < contour_nodes; ++k) {
        const double theta = 2.0 * pi * static_cast<double>(k) / contour_nodes;
        const complex node = center + std::polar(radius, theta);
        acc += moment_raw(spec, node) * std::polar(1.0, -n * theta);
    }
    return acc * factorial(n) / (static_cast<double>(contour_nodes) * std::pow(radius, n));
}

/// Require 1 <= n <= 6.  The Cauchy-integral prefactor n!/r^n amplifies
/// per-node roundoff (about 3e-10 of |m_z| at n = 6, r = 1/4), so higher
/// orders would be noise; the contract stops at 4 anyway.
inline void check_log_order(int n, const char* who) {
    if (n < 1 || n > 6)
        throw invalid_parameter(std::string(who) + ": order must be between 1 and 6");
}

/// int_0^inf p(sgn * x) x^w weight(ln x) dx after x = e^u, which turns both
/// endpoints into exponential decay: the integrand becomes
/// p(sgn e^u) e^{(w+1)u} weight(u).  `weight` supplies the ln-power factor,
/// already carrying the +i pi branch shift on the reflected side.
template <class W>
inline IntegrationResult half_line_log_integral(const DistributionSpec& spec, double sgn,
                                                int w, W&& weight,
                                                const QuadratureConfig& cfg) {
    auto f = [&](double u) -> complex {
        if (std::abs(u) > 700.0) return complex{0.0, 0.0};  // e^u under/overflows; p e^u -> 0
        const double x = std::exp(u);
        const double d = density(spec, sgn * x);
        if (d == 0.0) return complex{0.0, 0.0};  // underflowed tail; keep pow() overflow out
        const double g = d * x * std::pow(x, static_cast<double>(w));
        if (g == 0.0) return complex{0.0, 0.0};
        return g * weight(u);
    };
    IntegrationResult lower = integrate_lower(f, 0.0, cfg);
    IntegrationResult upper = integrate_upper(f, 0.0, cfg);
    lower.value += upper.value;
    lower.error += upper.error;
    lower.subdivisions += upper.subdivisions;
    return lower;
}

/// True iff int p(x) x^w ln^m x dx converges classically: the origin needs
/// w > -1 against a bounded density, the power-law tails need
/// alpha - w > 1 (log factors never decide).
inline bool power_log_integrable(const DistributionSpec& spec, int w) {
    if (w < 0) return false;
    return density_tail_exponent(spec) - static_cast<double>(w) > 1.0 + 1e-9;
}

}  // namespace detail

/// n-th logarithmic moment as the n-th derivative of z -> m_z at z = 0
/// (the sigma-derivative of the second characteristic function at sigma = 1).
inline LogMomentValue log_moment_from_power(const DistributionSpec& spec, int n) {
    validate(spec);
    detail::check_log_order(n, "log_moment_from_power");
    const complex center{0.0, 0.0};
    const double radius = detail::contour_radius(spec, center);
    return {n, detail::contour_derivative(spec, center, n, radius), "derivative-of-power"};
}

/// n-th logarithmic moment by quadrature of the defining integral, branch
/// ln x = ln|x| + i pi for x < 0.
inline LogMomentValue log_moment_direct(const DistributionSpec& spec, int n,
                                        const QuadratureConfig& cfg = {}) {
    validate(spec);
    cfg.validate();
    detail::check_log_order(n, "log_moment_direct");
    auto plain = [n](double u) { return complex{std::pow(u, n), 0.0}; };
    complex value = detail::half_line_log_integral(spec, 1.0, 0, plain, cfg).value;
    if (support(spec).lower < 0.0) {
        auto shifted = [n](double u) { return std::pow(complex{u, pi}, n); };
        value += detail::half_line_log_integral(spec, -1.0, 0, shifted, cfg).value;
    }
    return {n, value, "direct-integral"};
}

/// Power-logarithmic moment M_{n,1} = int p(x) x^n ln x dx.  Classically
/// convergent integrals are evaluated directly; the rest come from the
/// differential relation M_{n,1} = dm_z/dz at z = n applied to the closed
/// form.  Only m = 1 is defined.
inline complex power_log_moment(const DistributionSpec& spec, int n, int m = 1) {
    validate(spec);
    if (m != 1)
        throw unsupported_error("power_log_moment: only the m = 1 weight ln x is supported");
    if (n < -16 || n > 16)
        throw invalid_parameter("power_log_moment: order must lie in [-16, 16]");
    if (detail::power_log_integrable(spec, n)) {
        const QuadratureConfig cfg{};
        auto plain = [](double u) { return complex{u, 0.0}; };
        complex value = detail::half_line_log_integral(spec, 1.0, n, plain, cfg).value;
        if (support(spec).lower < 0.0) {
            auto shifted = [](double u) { return complex{u, pi}; };
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            value += sign * detail::half_line_log_integral(spec, -1.0, n, shifted, cfg).value;
        }
        return value;
    }
    const complex center{static_cast<double>(n), 0.0};
    const detail::SingularPoint at = detail::classify_point(spec, center);
    if (at.kind == detail::SingularPoint::Kind::simple_pole)
        throw pole_error(
            "power_log_moment: the integral diverges and the closed form has a pole at z = " +
                std::to_string(n) + "; no finite M_{n,1} exists",
            center, 1);
    const double radius = detail::contour_radius(spec, center);
    return detail::contour_derivative(spec, center, 1, radius);
}

/// Residual |dm_z/dz at z = n  -  M_{n,1}|.  The derivative side always uses
/// the contour (at half the standard radius, so the two sides never share
/// their discretization); the M side is power_log_moment, which prefers the
/// defining integral whenever it converges.
inline double verify_power_log_relation(const DistributionSpec& spec, int n) {
    validate(spec);
    const complex center{static_cast<double>(n), 0.0};
    const double radius = detail::contour_radius(spec, center);
    const complex derivative = detail::contour_derivative(spec, center, 1, 0.5 * radius);
    return std::abs(derivative - power_log_moment(spec, n, 1));
}

/// Closed-form log moments: orders 1..2 for every family that has printable
/// expressions, orders 1..4 for Cauchy and Levy.  Laplace stops at order 1
/// (its second order needs Meijer-G machinery, deliberately out of scope).
inline std::vector<GoldenLogMoment> golden_log_moments(const DistributionSpec& spec) {
    validate(spec);
    std::vector<GoldenLogMoment> out;
    const complex half_ipi{0.0, 0.5 * pi};
    switch (spec.kind) {
        case DistributionKind::cauchy: {
            complex p{1.0, 0.0};
            for (int n = 1; n <= 4; ++n) {
                p *= half_ipi;
                out.push_back({n, p});
            }
            break;
        }
        case DistributionKind::levy: {
            const double L = euler_gamma + ln2;
            const double z3 = riemann_zeta(3);
            out.push_back({1, complex{L, 0.0}});
            out.push_back({2, complex{pi * pi / 2.0 + ln2 * ln2 +
                                          euler_gamma * (euler_gamma + 2.0 * ln2),
                                      0.0}});
            out.push_back({3, complex{14.0 * z3 + L * L * L + 1.5 * pi * pi * L, 0.0}});
            out.push_back({4, complex{L * L * L * L + 3.0 * pi * pi * L * L + 56.0 * z3 * L +
                                          7.0 * std::pow(pi, 4) / 4.0,
                                      0.0}});
            break;
        }
        case DistributionKind::q_exponential: {
            if (!(spec.q > 1.0))
                throw unsupported_error(
                    "golden_log_moments: the q <= 1 q-exponential continuation has no "
                    "closed-form log moments");
            const double a = detail::q_exp_shape(spec);  // 1/(q-1) - 1
            const double lc = std::log(spec.lambda * (spec.q - 1.0));
            const double h = harmonic(a - 1.0).real();  // H_{1/(q-1)-2}
            out.push_back({1, complex{-h - lc, 0.0}});
            out.push_back({2, complex{(h + lc) * (h + lc) + polygamma(1, a).real() +
                                          pi * pi / 6.0,
                                      0.0}});
            break;
        }
        case DistributionKind::q_gaussian: {
            const double b = detail::q_gauss_shape(spec);  // 1/(q-1) - 1/2
            const double lq = std::log(2.0 * (spec.q - 1.0) / (spec.beta * spec.beta));
            // m~_1 = -(H_{b-1} + ln(2(q-1)/beta^2) - i pi)/2; writing
            // G1 = Re m~_1 keeps the second order compact:
            // m~_2 = G1^2 + i pi G1 - pi^2/2 + pi^2/8 + psi'(b)/4.
            const double g1 = -0.5 * (harmonic(b - 1.0).real() + lq);
            const double g2 = pi * pi / 8.0 + polygamma(1, b).real() / 4.0;
            out.push_back({1, complex{g1, 0.0} + half_ipi});
            out.push_back({2, complex{g1 * g1 + g2 - pi * pi / 2.0, pi * g1}});
            break;
        }
        case DistributionKind::normal: {
            const complex c{ln2 + euler_gamma, -pi};
            out.push_back({1, -0.5 * c});
            out.push_back({2, 0.25 * c * c - pi * pi / 8.0});
            break;
        }
        case DistributionKind::student_t: {
            const double g1 =
                0.5 * (std::log(spec.nu / 4.0) - harmonic(0.5 * spec.nu - 1.0).real());
            const double g2 = pi * pi / 8.0 + polygamma(1, 0.5 * spec.nu).real() / 4.0;
            out.push_back({1, complex{g1, 0.0} + half_ipi});
            out.push_back({2, complex{g1 * g1 + g2 - pi * pi / 2.0, pi * g1}});
            break;
        }
        case DistributionKind::laplace: {
            if (spec.mu == 0.0) {
                // mu -> 0 limit of the incomplete-gamma form: psi(1) - ln lambda
                // plus i pi/2 from the branch (half the mass sits below zero).
                out.push_back({1, complex{-euler_gamma - std::log(spec.lambda), 0.0} + half_ipi});
                break;
            }
            const double y = spec.lambda * spec.mu;
            const complex zero{0.0, 0.0};
            const complex g_plus = upper_incomplete_gamma(zero, y);    // Gamma(0, y)
            const complex g_minus = upper_incomplete_gamma(zero, -y);  // -Ei(y) - i pi branch
            const complex m1 = std::log(spec.mu) +
                               0.5 * (std::exp(y) * g_plus + std::exp(-y) * g_minus) +
                               iunit * pi * std::exp(-y);
            out.push_back({1, m1});
            break;
        }
    }
    return out;
}

}  // namespace renmom
