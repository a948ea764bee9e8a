// test_distributions.cpp
//
// Parameter validation, densities, supports, characteristic functions,
// classical-moment existence and endpoint expansions for the seven supported
// distributions.  Numeric targets come from quadrature of the defining
// integrals or direct substitution into the pdf; expansion accuracy is judged
// against the first omitted term.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "renmom/distributions.hpp"
#include "renmom/quadrature.hpp"

using renmom::AsymptoticExpansion;
using renmom::complex;
using renmom::DistributionKind;
using renmom::DistributionSpec;
using renmom::Endpoint;
using renmom::pi;

namespace {

std::vector<DistributionSpec> assorted_specs() {
    return {
        renmom::make_cauchy(),
        renmom::make_levy(),
        renmom::make_q_exponential(1.0, 1.25),
        renmom::make_q_exponential(2.5, 1.75),
        renmom::make_q_gaussian(1.2, 1.0),
        renmom::make_q_gaussian(2.2, 0.7),
        renmom::make_q_gaussian(2.8, 1.0),
        renmom::make_normal(),
        renmom::make_student_t(0.5),
        renmom::make_student_t(5.0),
        renmom::make_laplace(1.0),
        renmom::make_laplace(2.0, 1.3),
    };
}

double normalization(const DistributionSpec& spec) {
    renmom::QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    auto f = [&spec](double x) { return complex{renmom::density(spec, x), 0.0}; };
    if (renmom::support(spec).lower == 0.0)
        return renmom::integrate_upper(f, 0.0, cfg).value.real();
    return renmom::integrate_real_line(f, cfg).value.real();
}

}  // namespace

TEST_CASE("parameter validation", "[distributions]") {
    CHECK_NOTHROW(renmom::validate(renmom::make_cauchy()));
    CHECK_NOTHROW(renmom::validate(renmom::make_q_exponential(1.0, 1.5)));
    CHECK_THROWS_AS(renmom::validate(renmom::make_q_gaussian(3.5, 1.0)),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::validate(renmom::make_q_exponential(-1.0, 1.5)),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::validate(renmom::make_q_exponential(1.0, 2.0)),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::validate(renmom::make_q_exponential(1.0, 0.8)),
                    renmom::invalid_parameter);
    // Shape parameters keep a small margin below q = 1 for analytic
    // continuation; well below it they are rejected, and the density itself
    // requires q > 1 strictly.
    CHECK_NOTHROW(renmom::validate(renmom::make_q_gaussian(1.0, 1.0)));
    CHECK_THROWS_AS(renmom::validate(renmom::make_q_gaussian(0.5, 1.0)),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::density(renmom::make_q_gaussian(1.0, 1.0), 0.3),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::validate(renmom::make_student_t(0.0)), renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::validate(renmom::make_laplace(0.0)), renmom::invalid_parameter);
    CHECK_THROWS_AS(renmom::validate(renmom::make_laplace(1.0, -0.5)),
                    renmom::invalid_parameter);
}

TEST_CASE("densities: pinned values and supports", "[distributions]") {
    SECTION("pinned values") {
        CHECK(renmom::density(renmom::make_cauchy(), 0.0) == Catch::Approx(1.0 / pi));
        CHECK(renmom::density(renmom::make_levy(), 1.0) ==
              Catch::Approx(std::exp(-0.5) / std::sqrt(2.0 * pi)));
        CHECK(renmom::density(renmom::make_laplace(1.0), 0.0) == Catch::Approx(0.5));
        CHECK(renmom::density(renmom::make_normal(), 0.0) ==
              Catch::Approx(1.0 / std::sqrt(2.0 * pi)));
        // q-exponential at the origin: lambda (2 - q)
        CHECK(renmom::density(renmom::make_q_exponential(2.0, 1.5), 0.0) == Catch::Approx(1.0));
        // q = 2, beta = 1/sqrt(2) reduces the q-Gaussian to the Cauchy density
        const auto qg = renmom::make_q_gaussian(2.0, 1.0 / std::sqrt(2.0));
        for (double x : {0.0, 0.7, 2.5, -1.3}) {
            CHECK(renmom::density(qg, x) ==
                  Catch::Approx(renmom::density(renmom::make_cauchy(), x)).epsilon(1e-12));
        }
    }
    SECTION("support boundaries") {
        CHECK(renmom::support(renmom::make_levy()).lower == 0.0);
        CHECK(renmom::support(renmom::make_q_exponential(1.0, 1.5)).lower == 0.0);
        CHECK(std::isinf(renmom::support(renmom::make_cauchy()).lower));
        CHECK_THROWS_AS(renmom::density(renmom::make_levy(), -0.1), renmom::invalid_parameter);
        CHECK_THROWS_AS(renmom::density(renmom::make_q_exponential(1.0, 1.5), -1.0),
                        renmom::invalid_parameter);
        CHECK(renmom::density(renmom::make_levy(), 0.0) == 0.0);
    }
    SECTION("normalization to 1e-8 for every validated spec") {
        for (const auto& spec : assorted_specs()) {
            INFO(renmom::kind_name(spec.kind) << " q=" << spec.q << " nu=" << spec.nu);
            CHECK(normalization(spec) == Catch::Approx(1.0).margin(1e-8));
        }
    }
}

TEST_CASE("classical moment existence", "[distributions]") {
    CHECK(renmom::classical_moment_exists(renmom::make_q_exponential(1.0, 1.4), 1));
    CHECK_FALSE(renmom::classical_moment_exists(renmom::make_q_exponential(1.0, 1.6), 1));
    CHECK_FALSE(renmom::classical_moment_exists(renmom::make_cauchy(), 1));
    CHECK_FALSE(renmom::classical_moment_exists(renmom::make_levy(), 1));
    CHECK(renmom::classical_moment_exists(renmom::make_student_t(5.0), 4));
    CHECK_FALSE(renmom::classical_moment_exists(renmom::make_student_t(4.0), 4));
    CHECK(renmom::classical_moment_exists(renmom::make_normal(), 8));
    CHECK(renmom::classical_moment_exists(renmom::make_laplace(0.5, 2.0), 6));
    CHECK(renmom::classical_moment_exists(renmom::make_q_gaussian(1.4, 1.0), 2));
    CHECK_FALSE(renmom::classical_moment_exists(renmom::make_q_gaussian(1.8, 1.0), 2));

    SECTION("convergence plateau oracle for the Student-t boundary") {
        // nu = 5, n = 4: integral over |x| <= X must plateau as X grows.
        auto part = [](double nu, int n, double X) {
            const auto spec = renmom::make_student_t(nu);
            auto f = [&spec, n](double x) {
                return complex{renmom::density(spec, x) * std::pow(std::abs(x), n), 0.0};
            };
            return renmom::integrate(f, 0.0, X).value.real();
        };
        const double a = part(5.0, 4, 1e3);
        const double b = part(5.0, 4, 1e5);
        CHECK(std::abs(b - a) < 1e-2 * b);  // convergent: tail contribution tiny
        const double c = part(4.0, 4, 1e3);
        const double d = part(4.0, 4, 1e5);
        CHECK(d - c > 1.0);  // divergent: log growth keeps adding mass
    }
}

TEST_CASE("characteristic functions", "[distributions]") {
    SECTION("pinned closed forms") {
        CHECK(renmom::characteristic_function(renmom::make_cauchy(), 2.0).real() ==
              Catch::Approx(std::exp(-2.0)).epsilon(1e-12));
        const complex levy1 = renmom::characteristic_function(renmom::make_levy(), 1.0);
        CHECK(levy1.real() == Catch::Approx(std::exp(-1.0) * std::cos(1.0)).epsilon(1e-12));
        CHECK(levy1.imag() == Catch::Approx(std::exp(-1.0) * std::sin(1.0)).epsilon(1e-12));
        CHECK(renmom::characteristic_function(renmom::make_normal(), 1.5).real() ==
              Catch::Approx(std::exp(-1.125)).epsilon(1e-12));
        const complex lap = renmom::characteristic_function(renmom::make_laplace(2.0, 0.5), 1.0);
        const complex want = 4.0 / 5.0 * std::exp(complex{0.0, 0.5});
        CHECK(std::abs(lap - want) < 1e-12);
    }
    SECTION("f(0) = 1 for every spec") {
        for (const auto& spec : assorted_specs()) {
            INFO(renmom::kind_name(spec.kind));
            CHECK(std::abs(renmom::characteristic_function(spec, 0.0) - 1.0) < 1e-12);
        }
    }
    SECTION("|f(k)| <= 1 and conjugate symmetry") {
        for (const auto& spec : assorted_specs()) {
            for (double k : {0.3, 1.0, 2.7}) {
                const complex f = renmom::characteristic_function(spec, k);
                INFO(renmom::kind_name(spec.kind) << " k=" << k);
                CHECK(std::abs(f) <= 1.0 + 1e-7);
                const complex fm = renmom::characteristic_function(spec, -k);
                CHECK(std::abs(fm - std::conj(f)) < 1e-9);
            }
        }
    }
    SECTION("closed forms match Fourier quadrature of the density") {
        // Cauchy: truncate at X and bound the tail by 2 p(X)/k; Levy: subtract
        // one integration-by-parts boundary term analytically.
        renmom::QuadratureConfig cfg;
        cfg.rel_tol = 1e-9;
        cfg.max_subdivisions = 30000;
        const auto cauchy = renmom::make_cauchy();
        for (double k : {0.5, 1.0, 2.0}) {
            const double X = 3e3;
            auto f = [&](double x) {
                return renmom::density(cauchy, x) * std::exp(complex{0.0, k * x});
            };
            const complex got = renmom::integrate(f, -X, 0.0, cfg).value +
                                renmom::integrate(f, 0.0, X, cfg).value;
            INFO("cauchy k=" << k);
            CHECK(std::abs(got - renmom::characteristic_function(cauchy, k)) < 1e-6);
        }
        const auto levy = renmom::make_levy();
        for (double k : {0.5, 1.0, 2.0}) {
            const double X = 1e3;
            auto f = [&](double x) {
                return renmom::density(levy, x) * std::exp(complex{0.0, k * x});
            };
            complex got = renmom::integrate(f, 0.0, X, cfg).value;
            // int_X^inf p e^{ikx} dx ~= i p(X) e^{ikX} / k
            got += renmom::iunit * renmom::density(levy, X) * std::exp(complex{0.0, k * X}) / k;
            INFO("levy k=" << k);
            CHECK(std::abs(got - renmom::characteristic_function(levy, k)) < 1e-6);
        }
    }
    SECTION("quadrature-backed cf reproduces small-k classical moments") {
        // q-exponential with q = 1.25 has classical m_1 = 2 (lambda = 1):
        // numerical derivative of f at 0 must agree.
        const auto qe = renmom::make_q_exponential(1.0, 1.25);
        const double h = 1e-3;
        const complex d1 = (renmom::characteristic_function(qe, h) -
                            renmom::characteristic_function(qe, -h)) /
                           (2.0 * h);
        CHECK(std::abs(d1 / renmom::iunit - 2.0) < 1e-3);
        // Student-t nu = 5: m_2 = nu/(nu-2) = 5/3.
        const auto st = renmom::make_student_t(5.0);
        const double h2 = 1e-2;
        const complex d2 = (renmom::characteristic_function(st, h2) -
                            2.0 * renmom::characteristic_function(st, 0.0) +
                            renmom::characteristic_function(st, -h2)) /
                           (h2 * h2);
        CHECK(std::abs(-d2 - 5.0 / 3.0) < 2e-2);
    }
}

TEST_CASE("asymptotic expansions", "[distributions]") {
    SECTION("Cauchy n=1 at +inf: leading terms 1/(pi x) - 1/(pi x^3) + ...") {
        const auto e = renmom::asymptotic_expansion(renmom::make_cauchy(), 1,
                                                    Endpoint::plus_infinity);
        REQUIRE(e.terms.size() >= 2);
        CHECK(e.terms[0].exponent == Catch::Approx(1.0));
        CHECK(e.terms[0].coefficient.real() == Catch::Approx(1.0 / pi));
        CHECK(e.terms[1].exponent == Catch::Approx(3.0));
        CHECK(e.terms[1].coefficient.real() == Catch::Approx(-1.0 / pi));
    }
    SECTION("Levy n=1 at +inf: leading term x^{-1/2}/sqrt(2 pi)") {
        const auto e =
            renmom::asymptotic_expansion(renmom::make_levy(), 1, Endpoint::plus_infinity);
        REQUIRE(!e.terms.empty());
        CHECK(e.terms[0].exponent == Catch::Approx(0.5));
        CHECK(e.terms[0].coefficient.real() == Catch::Approx(1.0 / std::sqrt(2.0 * pi)));
    }
    SECTION("Normal has no power-law terms") {
        const auto e =
            renmom::asymptotic_expansion(renmom::make_normal(), 2, Endpoint::plus_infinity);
        CHECK(e.terms.empty());
    }
    SECTION("one-sided supports reject the -inf endpoint") {
        CHECK_THROWS_AS(
            renmom::asymptotic_expansion(renmom::make_levy(), 1, Endpoint::minus_infinity),
            renmom::invalid_parameter);
        CHECK_THROWS_AS(renmom::asymptotic_expansion(renmom::make_q_exponential(1.0, 1.5), 2,
                                                     Endpoint::minus_infinity),
                        renmom::invalid_parameter);
    }
    SECTION("partial sums track p(x) x^n within twice the first omitted term") {
        for (const auto& spec : assorted_specs()) {
            for (int n = 1; n <= 4; ++n) {
                const auto e4 =
                    renmom::asymptotic_expansion(spec, n, Endpoint::plus_infinity, 4);
                const auto e5 =
                    renmom::asymptotic_expansion(spec, n, Endpoint::plus_infinity, 5);
                for (double x : {10.0, 100.0}) {
                    const double f = renmom::density(spec, x) * std::pow(x, n);
                    double sum = 0.0;
                    for (const auto& t : e4.terms)
                        sum += t.coefficient.real() * std::pow(x, -t.exponent);
                    INFO(renmom::kind_name(spec.kind) << " n=" << n << " x=" << x);
                    if (e4.terms.empty()) {
                        if (x >= 100.0) CHECK(std::abs(f) < 1e-15);  // exponential decay
                    } else {
                        const auto& omitted = e5.terms.back();
                        // Floor at a few ulps of f: when the omitted term is
                        // below eps*|f| the cancellation f - sum is pure noise.
                        const double bound =
                            2.0 * std::abs(omitted.coefficient) * std::pow(x, -omitted.exponent) +
                            1e-13 * (1.0 + std::abs(f));
                        CHECK(std::abs(f - sum) <= bound);
                    }
                }
            }
        }
    }
    SECTION("minus-infinity expansions carry the (-1)^n parity") {
        for (const auto& spec : {renmom::make_cauchy(), renmom::make_q_gaussian(2.2, 0.7),
                                 renmom::make_student_t(2.5)}) {
            for (int n = 1; n <= 3; ++n) {
                const auto ep =
                    renmom::asymptotic_expansion(spec, n, Endpoint::plus_infinity, 3);
                const auto em =
                    renmom::asymptotic_expansion(spec, n, Endpoint::minus_infinity, 3);
                REQUIRE(ep.terms.size() == em.terms.size());
                const double parity = (n % 2 == 0) ? 1.0 : -1.0;
                for (std::size_t i = 0; i < ep.terms.size(); ++i) {
                    CHECK(em.terms[i].exponent == Catch::Approx(ep.terms[i].exponent));
                    CHECK(em.terms[i].coefficient.real() ==
                          Catch::Approx(parity * ep.terms[i].coefficient.real()));
                }
                // and the sum really approximates f at x -> -inf
                const double x = 50.0;
                double sum = 0.0;
                for (const auto& t : em.terms)
                    sum += t.coefficient.real() * std::pow(x, -t.exponent);
                const double f = renmom::density(spec, -x) * std::pow(-x, n);
                INFO(renmom::kind_name(spec.kind) << " n=" << n);
                CHECK(std::abs(f - sum) < 1e-3 * std::abs(f) + 1e-14);
            }
        }
    }
    SECTION("zero endpoint is a plain Taylor expansion") {
        const auto e = renmom::asymptotic_expansion(renmom::make_q_exponential(1.0, 1.5), 1,
                                                    Endpoint::zero, 6);
        REQUIRE(!e.terms.empty());
        const double x = 0.01;
        double sum = 0.0;
        for (const auto& t : e.terms) sum += t.coefficient.real() * std::pow(x, t.exponent);
        CHECK(sum == Catch::Approx(renmom::density(renmom::make_q_exponential(1.0, 1.5), x) * x)
                         .epsilon(1e-9));
        // Levy vanishes to all orders at 0+
        CHECK(renmom::asymptotic_expansion(renmom::make_levy(), 1, Endpoint::zero).terms.empty());
    }
    SECTION("divergent terms are all present") {
        // q-Gaussian q=2.2, n=4: decay exponents 2j + 2/1.2 - 4; j=0,1 divergent.
        const auto e = renmom::asymptotic_expansion(renmom::make_q_gaussian(2.2, 1.0), 4,
                                                    Endpoint::plus_infinity, 4);
        int divergent = 0;
        for (const auto& t : e.terms)
            if (t.exponent <= 1.0) ++divergent;
        CHECK(divergent == 2);
        CHECK(e.terms.size() == 6);  // 2 divergent + 4 guards
    }
}
