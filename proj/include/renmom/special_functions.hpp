#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

#include "renmom/core.hpp"

// Self-contained complex special-function kernel: Gamma (Lanczos + reflection),
// log-Gamma, psi and its first two derivatives (reflection, recurrence shift,
// Bernoulli asymptotics), the upper incomplete Gamma function (series /
// continued fraction, with the standard analytic continuation to negative real
// second argument), erf/erfc, generalized harmonic numbers and the handful of
// zeta values the moment formulas use.
//
// Target accuracy is >= 12 significant digits away from poles; poles are
// reported as pole_error instead of NaN so callers can route to finite-part
// extraction deliberately.

namespace renmom {

namespace detail {

// Lanczos coefficients, g = 607/128, N = 15.  Relative error ~1e-15 for
// Re z >= 1/2 in double precision.
inline constexpr double lanczos_g = 4.7421875;  // 607/128
inline constexpr std::array<double, 15> lanczos_c = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

inline complex lanczos_sum(const complex& zm1) {
    complex s{lanczos_c[0], 0.0};
    for (std::size_t k = 1; k < lanczos_c.size(); ++k) {
        s += lanczos_c[k] / (zm1 + static_cast<double>(k));
    }
    return s;
}

inline void check_gamma_pole(const complex& z) {
    if (is_real_integer(z) && z.real() < 0.5) {
        throw pole_error("gamma: pole at non-positive integer",
                         complex(std::round(z.real()), 0.0), 1);
    }
}

// sin(pi z) and cos(pi z) with the real part reduced to its nearest integer
// before the multiplication by pi.  The naive sin(pi * z) loses ~|z| * eps
// absolutely, which the reflection formulas amplify by 1/eps right where the
// finite-part extraction samples; the reduced form keeps full precision there.
inline complex sinpi(const complex& z) {
    const double x = z.real();
    if (std::abs(x) > 1e15) return std::sin(pi * z);
    const long long n = std::llround(x);
    const double r = x - static_cast<double>(n);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const double y = pi * z.imag();
    return sgn * complex{std::sin(pi * r) * std::cosh(y),
                         std::cos(pi * r) * std::sinh(y)};
}

inline complex cospi(const complex& z) {
    const double x = z.real();
    if (std::abs(x) > 1e15) return std::cos(pi * z);
    const long long n = std::llround(x);
    const double r = x - static_cast<double>(n);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const double y = pi * z.imag();
    return sgn * complex{std::cos(pi * r) * std::cosh(y),
                         -std::sin(pi * r) * std::sinh(y)};
}

}  // namespace detail

/// Gamma(z) for complex z.  Throws pole_error at non-positive integers.
inline complex gamma(const complex& z) {
    detail::check_gamma_pole(z);
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z)).
        const complex s = detail::sinpi(z);
        return pi / (s * gamma(1.0 - z));
    }
    const complex zm1 = z - 1.0;
    const complex t = zm1 + detail::lanczos_g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, zm1 + 0.5) * std::exp(-t) *
           detail::lanczos_sum(zm1);
}

inline complex gamma(double x) { return gamma(complex{x, 0.0}); }

/// log Gamma(z), principal value for Re z >= 1/2; for Re z < 1/2 the reflection
/// formula is used, so the imaginary part is only defined up to multiples of
/// 2 pi i there (callers that exponentiate or difference locally are fine).
inline complex log_gamma(const complex& z) {
    detail::check_gamma_pole(z);
    if (z.real() < 0.5) {
        return std::log(pi) - std::log(detail::sinpi(z)) - log_gamma(1.0 - z);
    }
    const complex zm1 = z - 1.0;
    const complex t = zm1 + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (zm1 + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(zm1));
}

namespace detail {

// Bernoulli numbers B_2..B_14 for the psi asymptotics.
inline constexpr std::array<double, 7> bernoulli2k = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
};

inline constexpr double psi_shift_threshold = 12.0;

// psi(z) for Re z >= psi_shift_threshold via the Stirling-type series.
inline complex digamma_asymptotic(const complex& z) {
    const complex inv = 1.0 / z;
    const complex inv2 = inv * inv;
    complex sum = std::log(z) - 0.5 * inv;
    complex p = inv2;
    for (std::size_t k = 0; k < bernoulli2k.size(); ++k) {
        sum -= bernoulli2k[k] / (2.0 * (k + 1.0)) * p;
        p *= inv2;
    }
    return sum;
}

// psi^{(1)}(z), same region.
inline complex trigamma_asymptotic(const complex& z) {
    const complex inv = 1.0 / z;
    const complex inv2 = inv * inv;
    complex sum = inv + 0.5 * inv2;
    complex p = inv2 * inv;
    for (std::size_t k = 0; k < bernoulli2k.size(); ++k) {
        sum += bernoulli2k[k] * p;
        p *= inv2;
    }
    return sum;
}

// psi^{(2)}(z), same region.
inline complex tetragamma_asymptotic(const complex& z) {
    const complex inv = 1.0 / z;
    const complex inv2 = inv * inv;
    complex sum = -inv2 - inv2 * inv;
    complex p = inv2 * inv2;
    for (std::size_t k = 0; k < bernoulli2k.size(); ++k) {
        sum -= bernoulli2k[k] * (2.0 * (k + 1.0) + 1.0) * p;
        p *= inv2;
    }
    return sum;
}

inline void check_psi_pole(const complex& z) {
    if (is_real_integer(z) && z.real() < 0.5) {
        throw pole_error("polygamma: pole at non-positive integer",
                         complex(std::round(z.real()), 0.0), 1);
    }
}

}  // namespace detail

/// Digamma psi(z).  Throws pole_error at non-positive integers.
inline complex digamma(const complex& z) {
    detail::check_psi_pole(z);
    if (z.real() < 0.5) {
        // psi(z) = psi(1-z) - pi cot(pi z)
        return digamma(1.0 - z) - pi * detail::cospi(z) / detail::sinpi(z);
    }
    complex w = z;
    complex acc{0.0, 0.0};
    while (w.real() < detail::psi_shift_threshold) {
        acc -= 1.0 / w;
        w += 1.0;
    }
    return detail::digamma_asymptotic(w) + acc;
}

inline complex digamma(double x) { return digamma(complex{x, 0.0}); }

/// polygamma(m, z) for m in {0, 1, 2}.
inline complex polygamma(int m, const complex& z) {
    if (m < 0 || m > 2) throw invalid_parameter("polygamma: order must be 0, 1 or 2");
    if (m == 0) return digamma(z);
    detail::check_psi_pole(z);
    if (z.real() < 0.5) {
        const complex s = detail::sinpi(z);
        const complex c = detail::cospi(z);
        if (m == 1) {
            // psi'(z) = pi^2 / sin^2(pi z) - psi'(1-z)
            return pi * pi / (s * s) - polygamma(1, 1.0 - z);
        }
        // psi''(z) = psi''(1-z) - 2 pi^3 cos(pi z)/sin^3(pi z)
        return polygamma(2, 1.0 - z) - 2.0 * pi * pi * pi * c / (s * s * s);
    }
    complex w = z;
    complex acc{0.0, 0.0};
    const double fact = (m == 1) ? 1.0 : 2.0;           // m!
    const double sign = (m == 1) ? -1.0 : 1.0;          // (-1)^m
    while (w.real() < detail::psi_shift_threshold) {
        // psi^{(m)}(z) = psi^{(m)}(z+1) - (-1)^m m! / z^{m+1}
        complex p = w;
        for (int j = 0; j < m; ++j) p *= w;
        acc -= sign * fact / p;
        w += 1.0;
    }
    return acc + (m == 1 ? detail::trigamma_asymptotic(w)
                         : detail::tetragamma_asymptotic(w));
}

inline complex polygamma(int m, double x) { return polygamma(m, complex{x, 0.0}); }

namespace detail {

// Lower incomplete gamma by the stable power series
//   gamma(a, x) = x^a sum_k (-x)^k / (k! (a+k)),
// valid for any complex a away from non-positive integers; for x < 0 the
// factor x^a is continued with (-1)^a = e^{i pi a} (library branch).
inline complex lower_gamma_series(const complex& a, double x) {
    complex sum{0.0, 0.0};
    double log_term = 0.0;        // log |x|^k / k!
    double sign = 1.0;
    for (int k = 0; k < 400; ++k) {
        const complex term = sign * std::exp(log_term) / (a + static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && k > 4) break;
        log_term += std::log(std::abs(x)) - std::log1p(static_cast<double>(k));
        sign *= (x < 0.0) ? 1.0 : -1.0;  // (-x)^k alternates only for x > 0
    }
    const complex xa = (x > 0.0) ? cpow(x, a) : cpow(-x, a) * std::exp(iunit * pi * a);
    return xa * sum;
}

// Continued fraction for Gamma(a, x), x > 0 reasonably large (modified Lentz).
inline complex upper_gamma_cf(const complex& a, double x) {
    const double tiny = 1e-300;
    complex b = x + 1.0 - a;
    complex c = 1.0 / tiny;
    complex d = 1.0 / b;
    complex h = d;
    for (int i = 1; i <= 300; ++i) {
        const complex an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const complex delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

// E1(x) = Gamma(0, x) for 0 < x <= 1.8 by the log series.
inline double e1_series(double x) {
    double sum = -euler_gamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= -x / k;
        sum -= term / k;
        if (std::abs(term / k) < 1e-18) break;
    }
    return sum;
}

}  // namespace detail

/// Upper incomplete Gamma function Gamma(a, x) for complex a and real x.
///
/// x > 0: entire in a (no poles).  x == 0: equals Gamma(a), needs Re a > 0.
/// x < 0: analytic continuation with (-x)^a branch e^{i pi a} ln branch,
/// matching the rest of the library; used by the Laplace mu > 0 closed form.
inline complex upper_incomplete_gamma(const complex& a, double x) {
    require_finite(a, "upper_incomplete_gamma");
    require_finite(x, "upper_incomplete_gamma");
    if (x == 0.0) {
        if (a.real() <= 0.0)
            throw invalid_parameter("upper_incomplete_gamma: x = 0 needs Re a > 0");
        return gamma(a);
    }
    if (x < 0.0) {
        if (x < -60.0)
            throw invalid_parameter("upper_incomplete_gamma: continuation series limited to x >= -60");
        if (is_real_integer(a) && a.real() < 0.5) {
            // Gamma(a) pole cancels against the series pole; recurse upward in a:
            // Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a,   special-cased a = 0 below.
            long n = std::llround(a.real());
            complex g = upper_incomplete_gamma(complex{1.0, 0.0}, x);  // e^{-x}
            // walk down from a = 1 to the requested non-positive integer
            for (long aa = 0; aa >= n; --aa) {
                const complex af{static_cast<double>(aa), 0.0};
                const complex xa = cpow(-x, af) * std::exp(iunit * pi * af);
                if (aa == 0) {
                    // Gamma(0, -y) = -Ei(y) - i pi on this branch; reuse the series.
                    double y = -x;
                    double ei = euler_gamma + std::log(y);
                    double term = 1.0;
                    for (int k = 1; k < 200; ++k) {
                        term *= y / k;
                        ei += term / k;
                        if (term / k < 1e-18 * std::abs(ei)) break;
                    }
                    g = complex{-ei, -pi};
                } else {
                    g = (g - xa * std::exp(-x)) / af;
                }
                if (aa == n) return g;
            }
        }
        return gamma(a) - detail::lower_gamma_series(a, x);
    }
    // x > 0
    if (is_real_integer(a) && a.real() < 0.5) {
        // Entire in a; evaluate at the integer via E1 and downward recurrence.
        const long n = std::llround(a.real());
        complex g = (x <= 1.8) ? complex{detail::e1_series(x), 0.0}
                               : detail::upper_gamma_cf(complex{0.0, 0.0}, x);
        for (long aa = 0; aa > n; --aa) {
            const double af = static_cast<double>(aa - 1);
            g = (g - std::pow(x, af) * std::exp(-x)) / af;
        }
        return g;
    }
    // For Re a well above x the direct series suffers alternating-term
    // cancellation; evaluate at a reduced shift a0 with Re a0 in (0.5, 1.5]
    // and climb back with Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x}, which adds
    // same-sign terms and is stable upward.
    const int shift = std::max(0, static_cast<int>(std::ceil(a.real() - 1.5)));
    const complex a0 = a - static_cast<double>(shift);
    complex g = (x > 1.5 && x > a0.real() + 1.0)
                    ? detail::upper_gamma_cf(a0, x)
                    : gamma(a0) - detail::lower_gamma_series(a0, x);
    complex ak = a0;
    complex xa = cpow(x, a0) * std::exp(-x);
    for (int j = 0; j < shift; ++j) {
        g = ak * g + xa;
        xa *= x;
        ak += 1.0;
    }
    return g;
}

inline double erf(double x) { return std::erf(x); }
inline double erfc(double x) { return std::erfc(x); }

/// Generalized harmonic number H_nu = psi(nu + 1) + gamma_E.
inline complex harmonic(const complex& nu) {
    return digamma(nu + 1.0) + euler_gamma;
}
inline complex harmonic(double nu) { return harmonic(complex{nu, 0.0}); }

/// zeta(k) for the k the moment formulas need (2, 3, 4).
inline double riemann_zeta(int k) {
    switch (k) {
        case 2: return pi * pi / 6.0;
        case 3: return zeta3;
        case 4: return pi * pi * pi * pi / 90.0;
        default: throw invalid_parameter("riemann_zeta: only k in {2,3,4} supported");
    }
}

}  // namespace renmom
