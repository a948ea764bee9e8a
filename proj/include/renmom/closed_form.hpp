// closed_form.hpp
//
// Exact renormalized moment functions m_z for the supported distributions at
// complex order z, together with pole bookkeeping: classification of each
// order as regular / removable / simple pole, minimal-subtraction finite
// parts at true poles, and the q-variable singular structure of the
// q-exponential and q-Gaussian families.
//
// Branch conventions are those of core.hpp: (-1)^w = e^{i pi w} and the
// parity factor (-1)^z + 1 is continued as 1 + e^{i pi z}.

#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "renmom/core.hpp"
#include "renmom/distributions.hpp"
#include "renmom/special_functions.hpp"

namespace renmom {

enum class MomentClassification {
    regular,
    removable_singularity_limit,
    finite_part_at_pole,
};

/// A renormalized moment value plus how it was obtained.  classification !=
/// regular means the raw closed form was singular at the requested order and
/// the value is the filled-in limit (removable case) or the Laurent constant
/// term (pole case).
struct MomentValue {
    complex value;
    MomentClassification classification = MomentClassification::regular;
};

struct PoleInfo {
    complex location;
    int order = 1;
};

namespace detail {

/// If w is within tol of a nonpositive integer -k (k >= 0), return k.
inline std::optional<long> nonpositive_integer_index(complex w, double tol = 1e-11) {
    if (std::abs(w.imag()) > tol) return std::nullopt;
    const long k = std::lround(-w.real());
    if (k < 0) return std::nullopt;
    if (std::abs(w.real() + static_cast<double>(k)) > tol) return std::nullopt;
    return k;
}

inline bool near_odd_integer(double x, double tol = 1e-9) {
    const long m = std::lround(x);
    return std::abs(x - static_cast<double>(m)) <= tol && (std::llabs(m) % 2 == 1);
}

inline double factorial(long k) { return std::tgamma(static_cast<double>(k) + 1.0); }

/// Shape parameter A = 1/(q-1) - 1 of the q-exponential moment function.
inline double q_exp_shape(const DistributionSpec& spec) { return 1.0 / (spec.q - 1.0) - 1.0; }

/// Shape parameter B = 1/(q-1) - 1/2 of the q-Gaussian moment function.
inline double q_gauss_shape(const DistributionSpec& spec) {
    return 1.0 / (spec.q - 1.0) - 0.5;
}

struct SingularPoint {
    enum class Kind { regular, removable, simple_pole };
    Kind kind = Kind::regular;
    double z0 = 0.0;  // exact location (all singular orders sit on the real axis)
    long index = 0;   // index within its gamma-pole family
    int family = 0;   // 1: gamma rising in z from below; 2: gamma falling in z
};

/// Locate z relative to the singular set of m_z for this distribution.
///
/// The parity factor 1 + e^{i pi z} vanishes at odd integers; a gamma pole
/// multiplied by that zero is a removable singularity, a bare gamma pole is a
/// simple pole of m_z.
inline SingularPoint classify_point(const DistributionSpec& spec, complex z) {
    SingularPoint s;
    switch (spec.kind) {
        case DistributionKind::cauchy:
            break;  // e^{i z pi / 2} is entire
        case DistributionKind::levy:
            if (auto k = nonpositive_integer_index(0.5 - z)) {
                s.kind = SingularPoint::Kind::simple_pole;
                s.z0 = 0.5 + static_cast<double>(*k);
                s.index = *k;
                s.family = 2;
            }
            break;
        case DistributionKind::q_exponential: {
            if (auto k = nonpositive_integer_index(z + 1.0)) {
                s.kind = SingularPoint::Kind::simple_pole;
                s.z0 = -1.0 - static_cast<double>(*k);
                s.index = *k;
                s.family = 1;
            } else if (spec.q > 1.0) {
                // In the q <= 1 continuation margin A is large negative and the
                // Gamma(A - z) poles are cancelled by the Gamma(A) denominator.
                if (auto m = nonpositive_integer_index(q_exp_shape(spec) - z)) {
                    s.kind = SingularPoint::Kind::simple_pole;
                    s.z0 = q_exp_shape(spec) + static_cast<double>(*m);
                    s.index = *m;
                    s.family = 2;
                }
            }
            break;
        }
        case DistributionKind::q_gaussian: {
            if (!(spec.q > 1.0)) break;  // margin: integer-order continuation only
            if (auto j = nonpositive_integer_index((z + 1.0) / 2.0)) {
                s.kind = SingularPoint::Kind::removable;  // odd z, parity zero
                s.z0 = -1.0 - 2.0 * static_cast<double>(*j);
                s.index = *j;
                s.family = 1;
            } else if (auto l = nonpositive_integer_index(q_gauss_shape(spec) - z / 2.0)) {
                const double z0 = 2.0 * q_gauss_shape(spec) + 2.0 * static_cast<double>(*l);
                s.kind = near_odd_integer(z0) ? SingularPoint::Kind::removable
                                              : SingularPoint::Kind::simple_pole;
                s.z0 = z0;
                s.index = *l;
                s.family = 2;
            }
            break;
        }
        case DistributionKind::normal:
            if (auto j = nonpositive_integer_index((z + 1.0) / 2.0)) {
                s.kind = SingularPoint::Kind::removable;
                s.z0 = -1.0 - 2.0 * static_cast<double>(*j);
                s.index = *j;
                s.family = 1;
            }
            break;
        case DistributionKind::student_t:
            if (auto j = nonpositive_integer_index((z + 1.0) / 2.0)) {
                s.kind = SingularPoint::Kind::removable;
                s.z0 = -1.0 - 2.0 * static_cast<double>(*j);
                s.index = *j;
                s.family = 1;
            } else if (auto k = nonpositive_integer_index((spec.nu - z) / 2.0)) {
                const double z0 = spec.nu + 2.0 * static_cast<double>(*k);
                s.kind = near_odd_integer(z0) ? SingularPoint::Kind::removable
                                              : SingularPoint::Kind::simple_pole;
                s.z0 = z0;
                s.index = *k;
                s.family = 2;
            }
            break;
        case DistributionKind::laplace:
            if (spec.mu > 0.0) break;  // entire: decomposition poles cancel
            if (auto k = nonpositive_integer_index(z + 1.0)) {
                const double z0 = -1.0 - static_cast<double>(*k);
                // Odd negative orders hit the parity zero; even ones do not.
                s.kind = (*k % 2 == 0) ? SingularPoint::Kind::removable
                                       : SingularPoint::Kind::simple_pole;
                s.z0 = z0;
                s.index = *k;
                s.family = 1;
            }
            break;
    }
    return s;
}

/// Raw closed forms, valid away from the singular set.
inline complex moment_raw(const DistributionSpec& spec, complex z) {
    const double sqrt_pi = std::sqrt(pi);
    switch (spec.kind) {
        case DistributionKind::cauchy:
            return pow_i(z);  // e^{i z pi / 2}
        case DistributionKind::levy:
            return gamma(0.5 - z) / (cpow(2.0, z) * sqrt_pi);
        case DistributionKind::q_exponential: {
            const double a = q_exp_shape(spec);
            // At nonnegative integer orders the gamma ratio telescopes:
            //   m_n = n! / prod_{j=1..n} [c (A - j)],  c (A - j) = lambda (1 - (q-1)(1+j)),
            // which is analytic through q = 1 and so serves the continuation
            // margin q <= 1 as well as being exact for every q in range.
            if (is_real_integer(z, 1e-9) && z.real() > -0.5) {
                const long n = std::lround(z.real());
                double denom = 1.0;
                for (long j = 1; j <= n; ++j)
                    denom *= spec.lambda * (1.0 - (spec.q - 1.0) * (1.0 + j));
                return complex(std::tgamma(n + 1.0) / denom, 0.0);
            }
            if (!(spec.q > 1.0))
                throw invalid_parameter(
                    "renormalized_moment: the q <= 1 continuation is defined at "
                    "nonnegative integer orders only");
            const double c = spec.lambda * (spec.q - 1.0);
            if (a > 140.0)  // q near 1: bare gammas overflow, difference the logs
                return std::exp(log_gamma(z + 1.0) + log_gamma(a - z) -
                                log_gamma(complex(a, 0.0))) /
                       cpow(c, z);
            return gamma(z + 1.0) * gamma(a - z) / (std::tgamma(a) * cpow(c, z));
        }
        case DistributionKind::q_gaussian: {
            const double b = q_gauss_shape(spec);
            // Integer orders: odd ones vanish by parity; even ones telescope to
            //   m_n = 2^{n/2} beta^n Gamma((n+1)/2) / (sqrt(pi) prod factors),
            // with factors 1 - (q-1)(j+1/2) (n > 0) or 1 + (q-1)(i-1/2)
            // multiplying the numerator (n < 0), both analytic through q = 1.
            if (is_real_integer(z, 1e-9)) {
                const long n = std::lround(z.real());
                if (std::llabs(n) % 2 == 1) {
                    if (n < 0)
                        throw invalid_parameter(
                            "renormalized_moment: the q <= 1 continuation covers even "
                            "negative orders only");
                    return complex(0.0, 0.0);  // parity zero, regular point
                }
                double fac = 1.0;
                for (long j = 1; j <= n / 2; ++j)
                    fac /= 1.0 - (spec.q - 1.0) * (j + 0.5);
                for (long i = 0; i < -n / 2; ++i)
                    fac *= 1.0 + (spec.q - 1.0) * (i - 0.5);
                const double nd = static_cast<double>(n);
                return complex(std::pow(2.0, nd / 2.0) * std::pow(spec.beta, nd) *
                                   std::tgamma((nd + 1.0) / 2.0) / sqrt_pi * fac,
                               0.0);
            }
            if (!(spec.q > 1.0))
                throw invalid_parameter(
                    "renormalized_moment: the q <= 1 continuation is defined at "
                    "integer orders only");
            if (b > 140.0)
                return cpow(2.0, z / 2.0 - 1.0) * one_plus_exp_ipi(z) * cpow(spec.beta, z) *
                       gamma((z + 1.0) / 2.0) *
                       std::exp(log_gamma(b - z / 2.0) - log_gamma(complex(b, 0.0))) /
                       (sqrt_pi * cpow(spec.q - 1.0, z / 2.0));
            return cpow(2.0, z / 2.0 - 1.0) * one_plus_exp_ipi(z) * cpow(spec.beta, z) *
                   gamma((z + 1.0) / 2.0) * gamma(b - z / 2.0) /
                   (sqrt_pi * std::tgamma(b) * cpow(spec.q - 1.0, z / 2.0));
        }
        case DistributionKind::normal:
            return cpow(2.0, z / 2.0 - 1.0) * one_plus_exp_ipi(z) * gamma((z + 1.0) / 2.0) /
                   sqrt_pi;
        case DistributionKind::student_t:
            return one_plus_exp_ipi(z) * cpow(spec.nu, z / 2.0) * gamma((1.0 + z) / 2.0) *
                   gamma((spec.nu - z) / 2.0) / (2.0 * sqrt_pi * std::tgamma(spec.nu / 2.0));
        case DistributionKind::laplace: {
            if (spec.mu == 0.0)
                return one_plus_exp_ipi(z) * gamma(1.0 + z) / (2.0 * cpow(spec.lambda, z));
            // General mu > 0: split the two-sided integral at the origin and
            // continue each half through incomplete gamma functions,
            //   2 lambda^z m_z = e^{lambda mu} Gamma(z+1, lambda mu)
            //     + e^{-lambda mu} [ 2i sin(pi z) Gamma(z+1)
            //                        + e^{-i pi z} Gamma(z+1, -lambda mu) ].
            // The poles of sin * Gamma and of the continued Gamma(z+1, -y)
            // cancel, so m_z is entire; integer orders therefore need their
            // limit form rather than the raw pieces.
            const double y = spec.lambda * spec.mu;
            const complex a = z + 1.0;
            complex bracket;
            if (is_real_integer(z, 1e-8)) {
                const long n = std::lround(z.real());
                const double sgn = (std::llabs(n) % 2 == 0) ? 1.0 : -1.0;
                if (n >= 0) {
                    bracket = std::exp(y) * upper_incomplete_gamma(complex(n + 1.0, 0.0), y) +
                              std::exp(-y) * sgn *
                                  upper_incomplete_gamma(complex(n + 1.0, 0.0), -y);
                } else {
                    const complex af(1.0 - static_cast<double>(-n), 0.0);
                    bracket = std::exp(y) * upper_incomplete_gamma(af, y) +
                              std::exp(-y) * (complex(0.0, -2.0 * pi / factorial(-n - 1)) +
                                              sgn * upper_incomplete_gamma(af, -y));
                }
                const complex zi(static_cast<double>(n), 0.0);
                return bracket / (2.0 * cpow(spec.lambda, zi));
            }
            bracket = std::exp(y) * upper_incomplete_gamma(a, y) +
                      std::exp(-y) * (2.0 * iunit * std::sin(pi * z) * gamma(a) +
                                      std::exp(-iunit * pi * z) * upper_incomplete_gamma(a, -y));
            return bracket / (2.0 * cpow(spec.lambda, z));
        }
    }
    throw invalid_parameter("moment_raw: unknown distribution kind");
}

/// Value of the removable singularity: the parity zero -i pi eps meets one
/// simple gamma pole, leaving (-i pi) * Res(gamma family) * (regular rest).
inline complex removable_limit(const DistributionSpec& spec, const SingularPoint& s) {
    const double sqrt_pi = std::sqrt(pi);
    const double z0 = s.z0;
    switch (spec.kind) {
        case DistributionKind::normal: {
            const long j = s.index;
            const double res = 2.0 * (j % 2 == 0 ? 1.0 : -1.0) / factorial(j);
            return -iunit * pi * res * std::pow(2.0, z0 / 2.0 - 1.0) / sqrt_pi;
        }
        case DistributionKind::laplace: {  // mu = 0, z0 = -(2j+1)
            const long j = s.index / 2;
            return -iunit * pi / factorial(2 * j) / (2.0 * std::pow(spec.lambda, z0));
        }
        case DistributionKind::student_t: {
            const double rest0 = std::pow(spec.nu, z0 / 2.0) /
                                 (2.0 * sqrt_pi * std::tgamma(spec.nu / 2.0));
            if (s.family == 1) {
                const long j = s.index;
                const double res = 2.0 * (j % 2 == 0 ? 1.0 : -1.0) / factorial(j);
                return -iunit * pi * res * rest0 *
                       gamma(complex((spec.nu - z0) / 2.0, 0.0));
            }
            const long k = s.index;  // z0 = nu + 2k, nu an odd integer
            const double res = -2.0 * (k % 2 == 0 ? 1.0 : -1.0) / factorial(k);
            return -iunit * pi * res * rest0 * gamma(complex((1.0 + z0) / 2.0, 0.0));
        }
        case DistributionKind::q_gaussian: {
            const double b = q_gauss_shape(spec);
            const complex rest0 = std::pow(2.0, z0 / 2.0 - 1.0) *
                                  std::pow(spec.beta, z0) /
                                  (sqrt_pi * std::tgamma(b) *
                                   std::pow(spec.q - 1.0, z0 / 2.0));
            if (s.family == 1) {
                const long j = s.index;
                const double res = 2.0 * (j % 2 == 0 ? 1.0 : -1.0) / factorial(j);
                return -iunit * pi * res * rest0 * gamma(complex(b - z0 / 2.0, 0.0));
            }
            const long l = s.index;  // z0 = 2B + 2l, an odd integer
            const double res = -2.0 * (l % 2 == 0 ? 1.0 : -1.0) / factorial(l);
            return -iunit * pi * res * rest0 * gamma(complex((z0 + 1.0) / 2.0, 0.0));
        }
        default:
            break;
    }
    throw invalid_parameter("removable_limit: no removable singularity here");
}

inline std::string format_complex(complex z) {
    std::ostringstream os;
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace detail

/// Exact renormalized moment m_z.  Throws pole_error at true simple poles of
/// the closed form; removable singularities are filled in with their limit.
inline MomentValue renormalized_moment(const DistributionSpec& spec, complex z) {
    validate(spec);
    require_finite(z, "renormalized_moment: order");
    const auto s = detail::classify_point(spec, z);
    switch (s.kind) {
        case detail::SingularPoint::Kind::simple_pole:
            throw pole_error("renormalized_moment: simple pole of m_z at z = " +
                                 detail::format_complex(complex(s.z0, 0.0)) +
                                 "; use finite_part_at_pole",
                             complex(s.z0, 0.0), 1);
        case detail::SingularPoint::Kind::removable:
            return {detail::removable_limit(spec, s),
                    MomentClassification::removable_singularity_limit};
        case detail::SingularPoint::Kind::regular:
            break;
    }
    return {detail::moment_raw(spec, z), MomentClassification::regular};
}

/// Value of m_z at z0 with the divergence, if any, minimally subtracted.
///
/// Regular points evaluate as usual and removable singularities return their
/// limit, so callers may probe any order; at a true simple pole the Laurent
/// constant term is extracted by the symmetric average
/// (m(z0+eps) + m(z0-eps))/2, which cancels the 1/eps and eps terms, followed
/// by two Richardson steps to remove the eps^2 and eps^4 errors.
inline MomentValue finite_part_at_pole(const DistributionSpec& spec, complex z0) {
    validate(spec);
    require_finite(z0, "finite_part_at_pole: order");
    const auto s = detail::classify_point(spec, z0);
    switch (s.kind) {
        case detail::SingularPoint::Kind::regular:
            return {detail::moment_raw(spec, z0), MomentClassification::regular};
        case detail::SingularPoint::Kind::removable:
            return {detail::removable_limit(spec, s),
                    MomentClassification::removable_singularity_limit};
        case detail::SingularPoint::Kind::simple_pole:
            break;
    }
    const complex zc(s.z0, z0.imag());
    auto symmetric_average = [&](double eps) {
        return 0.5 * (detail::moment_raw(spec, zc + eps) + detail::moment_raw(spec, zc - eps));
    };
    // The evaluations carry ~1e-13 relative error (Lanczos accuracy) at
    // magnitude ~1/eps, so the extracted constant sees noise ~1e-13/eps; a
    // larger eps with extrapolation beats a smaller one, and 2e-2 stays well
    // inside the >= 1/2 spacing between poles of every supported family.
    const double eps = 2e-2;
    const complex a0 = symmetric_average(eps);
    const complex a1 = symmetric_average(0.5 * eps);
    const complex a2 = symmetric_average(0.25 * eps);
    const complex r0 = (4.0 * a1 - a0) / 3.0;
    const complex r1 = (4.0 * a2 - a1) / 3.0;
    return {(16.0 * r1 - r0) / 15.0, MomentClassification::finite_part_at_pole};
}

/// Finite part of m_n in the q variable at the singular coupling
/// q* = (n+2)/(n+1) (q-exponential) or q* = (n+3)/(n+1) (q-Gaussian).
inline MomentValue q_singularity_finite_part(const DistributionSpec& spec, int n) {
    validate(spec);
    if (n < 1) throw invalid_parameter("q_singularity_finite_part: need n >= 1");
    if (spec.kind == DistributionKind::q_exponential) {
        const double q_star = (n + 2.0) / (n + 1.0);
        if (std::abs(spec.q - q_star) > 1e-9)
            throw invalid_parameter(
                "q_singularity_finite_part: q is not at the singular coupling (n+2)/(n+1)");
        // -(n/lambda^n) (n+1)^{n-1} [ (n+1)(psi(n)+gamma_E) + 1 - n ]
        const double h = digamma(complex(static_cast<double>(n), 0.0)).real() + euler_gamma;
        const double val = -(static_cast<double>(n) / std::pow(spec.lambda, n)) *
                           std::pow(n + 1.0, n - 1) * ((n + 1.0) * h + 1.0 - n);
        return {complex(val, 0.0), MomentClassification::finite_part_at_pole};
    }
    if (spec.kind == DistributionKind::q_gaussian) {
        if (n % 2 == 1) {
            // The parity factor (-1)^n + 1 kills every odd moment identically,
            // so there is no singular coupling to subtract at.
            return {complex(0.0, 0.0), MomentClassification::regular};
        }
        const double q_star = (n + 3.0) / (n + 1.0);
        if (std::abs(spec.q - q_star) > 1e-9)
            throw invalid_parameter(
                "q_singularity_finite_part: q is not at the singular coupling (n+3)/(n+1)");
        const double h = digamma(complex(n / 2.0, 0.0)).real() + euler_gamma;
        const double val = -2.0 * std::pow(n + 1.0, n / 2.0 - 1.0) * std::pow(spec.beta, n) *
                           std::tgamma((n + 1.0) / 2.0) * ((n + 1.0) * h + 2.0 - n) /
                           (2.0 * std::sqrt(pi) * std::tgamma(n / 2.0));
        return {complex(val, 0.0), MomentClassification::finite_part_at_pole};
    }
    throw invalid_parameter(
        "q_singularity_finite_part: only q-exponential and q-gaussian have a q singularity");
}

/// Limit of the closed form as q -> 1: the exponential / normal moments.
inline MomentValue q_to_one_limit(const DistributionSpec& spec, int n) {
    if (n < 0) throw invalid_parameter("q_to_one_limit: need n >= 0");
    if (spec.kind == DistributionKind::q_exponential) {
        return {complex(std::tgamma(n + 1.0) / std::pow(spec.lambda, n), 0.0),
                MomentClassification::regular};
    }
    if (spec.kind == DistributionKind::q_gaussian) {
        if (n % 2 == 1) return {complex(0.0, 0.0), MomentClassification::regular};
        const double val = std::pow(2.0, n / 2.0 - 1.0) * 2.0 * std::pow(spec.beta, n) *
                           std::tgamma((n + 1.0) / 2.0) / std::sqrt(pi);
        return {complex(val, 0.0), MomentClassification::regular};
    }
    throw invalid_parameter("q_to_one_limit: only q-exponential and q-gaussian depend on q");
}

/// All true poles of m_z inside the disk |z - center| <= radius.  Removable
/// singularities are not poles of m_z and are not listed.
inline std::vector<PoleInfo> pole_locations(const DistributionSpec& spec, complex center,
                                            double radius) {
    validate(spec);
    if (!(radius > 0.0) || radius > 50.0)
        throw invalid_parameter("pole_locations: need 0 < radius <= 50");
    std::vector<PoleInfo> poles;
    auto push_if_inside = [&](double z0) {
        if (std::abs(complex(z0, 0.0) - center) <= radius + 1e-12)
            poles.push_back({complex(z0, 0.0), 1});
    };
    auto walk_up = [&](double start, double step) {
        for (double z0 = start; z0 <= center.real() + radius + step; z0 += step)
            push_if_inside(z0);
    };
    auto walk_down = [&](double start, double step) {
        for (double z0 = start; z0 >= center.real() - radius - step; z0 -= step)
            push_if_inside(z0);
    };
    switch (spec.kind) {
        case DistributionKind::cauchy:
        case DistributionKind::normal:
            break;  // entire after parity cancellation
        case DistributionKind::levy:
            walk_up(0.5, 1.0);
            break;
        case DistributionKind::q_exponential:
            walk_down(-1.0, 1.0);
            if (spec.q > 1.0) walk_up(detail::q_exp_shape(spec), 1.0);
            break;
        case DistributionKind::q_gaussian: {
            if (!(spec.q > 1.0)) break;  // continuation margin: entire at even orders
            const double twob = 2.0 * detail::q_gauss_shape(spec);
            if (!detail::near_odd_integer(twob)) walk_up(twob, 2.0);
            break;
        }
        case DistributionKind::student_t: {
            const bool odd_nu = detail::near_odd_integer(spec.nu);
            if (!odd_nu) walk_up(spec.nu, 2.0);
            break;
        }
        case DistributionKind::laplace:
            if (spec.mu == 0.0) walk_down(-2.0, 2.0);
            break;  // mu > 0: entire
    }
    std::sort(poles.begin(), poles.end(),
              [](const PoleInfo& a, const PoleInfo& b) { return a.location.real() < b.location.real(); });
    return poles;
}

}  // namespace renmom
