#pragma once

#include <complex>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

// Core conventions shared by every renmom header.
//
// All analytic continuations in this library use one branch choice and stick
// to it:  ln(-1) = +i pi,  hence  (-1)^w = exp(i pi w)  and  i^w = exp(i pi w / 2).
// Every formula that looks scheme-dependent (boundary log terms, two-sided
// Mellin parity factors, cut-off continuation constants) is consistent with
// exactly this branch; mixing branches breaks scheme independence at the
// 0th digit, so resist the temptation to "fix a sign" locally.

namespace renmom {

using complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;
inline constexpr double ln2 = 0.693147180559945309417232121458176568;
// Apery's constant zeta(3); zeta(2) and zeta(4) are pi^2/6 and pi^4/90.
inline constexpr double zeta3 = 1.202056903159594285399738161511449991;

inline constexpr complex iunit{0.0, 1.0};

/// Thrown when a distribution spec or other argument fails validation.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a special function or closed form is evaluated exactly at a pole.
/// `location` is the offending point (e.g. the non-positive integer hit by Gamma).
class pole_error : public std::domain_error {
public:
    pole_error(const std::string& what, complex location, int order = 1)
        : std::domain_error(what), location(location), order(order) {}
    complex location;
    int order;
};

/// Thrown when adaptive quadrature cannot reach the requested tolerance.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double achieved1)
        : std::runtime_error(what), achieved(achieved1) {}
    double achieved;
};

/// Thrown when a least-squares ladder fit is unusable (rank loss, wild conditioning).
class fit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when an operation is not defined for the given spec (documented gaps,
/// e.g. Mellin-of-cf for distributions without an elementary cf).
class unsupported_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(const complex& z, const char* what) {
    if (!is_finite(z)) throw invalid_parameter(std::string(what) + ": non-finite value");
}
inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw invalid_parameter(std::string(what) + ": non-finite value");
}

/// True if z is (numerically exactly) a real integer.
inline bool is_real_integer(const complex& z, double tol = 1e-12) {
    return std::abs(z.imag()) <= tol && std::abs(z.real() - std::round(z.real())) <= tol;
}

/// (-1)^w on the fixed branch, exp(i pi w).  Exact +/-1 for real integer w.
inline complex pow_minus_one(const complex& w) {
    if (is_real_integer(w)) {
        return (std::llround(w.real()) % 2 == 0) ? complex{1.0, 0.0} : complex{-1.0, 0.0};
    }
    return std::exp(iunit * pi * w);
}

/// i^w on the fixed branch, exp(i pi w / 2).  Exact {1, i, -1, -i} for real
/// integer w so integer-order results stay on the axes.
inline complex pow_i(const complex& w) {
    if (is_real_integer(w)) {
        const long long k = ((std::llround(w.real()) % 4) + 4) % 4;
        switch (k) {
            case 0: return complex{1.0, 0.0};
            case 1: return complex{0.0, 1.0};
            case 2: return complex{-1.0, 0.0};
            default: return complex{0.0, -1.0};
        }
    }
    return std::exp(iunit * (pi / 2.0) * w);
}

/// The parity factor 1 + e^{i pi z} that continues [(-1)^n + 1].
/// Returns exactly 0 for odd real integers and exactly 2 for even ones, so that
/// odd renormalized moments of symmetric laws vanish identically.
inline complex one_plus_exp_ipi(const complex& z) {
    if (is_real_integer(z)) {
        return (std::llround(z.real()) % 2 == 0) ? complex{2.0, 0.0} : complex{0.0, 0.0};
    }
    return 1.0 + std::exp(iunit * pi * z);
}

/// x^w for real x > 0 (principal, via exp(w ln x)).
inline complex cpow(double x, const complex& w) {
    if (!(x > 0.0)) throw invalid_parameter("cpow: base must be positive");
    return std::exp(w * std::log(x));
}

}  // namespace renmom
