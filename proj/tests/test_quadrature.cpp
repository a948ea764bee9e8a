// test_quadrature.cpp
//
// Unit tests for the adaptive Gauss-Kronrod engine against integrals with
// closed-form values: finite ranges, endpoint singularities, semi-infinite
// ranges under both tail transforms, and complex-valued integrands.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "renmom/quadrature.hpp"

using renmom::complex;
using renmom::integrate;
using renmom::integrate_lower;
using renmom::integrate_real_line;
using renmom::integrate_upper;
using renmom::QuadratureConfig;
using renmom::SemiInfiniteTransform;

namespace {
const double kPi = 3.14159265358979323846264338327950288;
const double kSqrtPi = std::sqrt(kPi);

double real_of(const renmom::IntegrationResult& r) { return r.value.real(); }
}  // namespace

TEST_CASE("finite-interval basics", "[quadrature]") {
    SECTION("polynomial is exact at machine precision") {
        // integral_0^2 (3x^2 - 2x + 1) dx = 8 - 4 + 2 = 6
        auto r = integrate([](double x) { return complex(3 * x * x - 2 * x + 1, 0.0); }, 0.0, 2.0);
        CHECK(real_of(r) == Catch::Approx(6.0).epsilon(1e-14));
        CHECK(std::abs(r.value.imag()) < 1e-15);
    }
    SECTION("oscillatory integrand") {
        // integral_0^{2 pi} sin^2 x dx = pi
        auto r = integrate([](double x) { const double s = std::sin(x); return complex(s * s, 0.0); },
                           0.0, 2.0 * kPi);
        CHECK(real_of(r) == Catch::Approx(kPi).epsilon(1e-12));
    }
    SECTION("error estimate bounds the true error") {
        auto r = integrate([](double x) { return complex(std::exp(-x) * std::cos(5.0 * x), 0.0); },
                           0.0, 10.0);
        // integral_0^inf e^{-x} cos(5x) dx = 1/26; the finite piece differs by the
        // truncated tail, which is ~e^{-10}/26 and absorbed below the tolerance.
        const double exact = (1.0 - std::exp(-10.0) * (std::cos(50.0) - 5.0 * std::sin(50.0))) / 26.0;
        CHECK(std::abs(real_of(r) - exact) <= std::max(r.error, 1e-13));
    }
}

TEST_CASE("endpoint singularities are handled without evaluating the endpoint", "[quadrature]") {
    SECTION("inverse square root at the lower endpoint") {
        // integral_0^1 x^{-1/2} dx = 2
        auto r = integrate([](double x) { return complex(1.0 / std::sqrt(x), 0.0); }, 0.0, 1.0);
        CHECK(real_of(r) == Catch::Approx(2.0).epsilon(1e-9));
    }
    SECTION("harsh power singularity x^{-0.9}") {
        // integral_0^1 x^{-0.9} dx = 10
        auto r = integrate([](double x) { return complex(std::pow(x, -0.9), 0.0); }, 0.0, 1.0);
        CHECK(real_of(r) == Catch::Approx(10.0).epsilon(1e-8));
    }
    SECTION("logarithmic singularity") {
        // integral_0^1 ln x dx = -1
        auto r = integrate([](double x) { return complex(std::log(x), 0.0); }, 0.0, 1.0);
        CHECK(real_of(r) == Catch::Approx(-1.0).epsilon(1e-10));
    }
}

TEST_CASE("semi-infinite ranges", "[quadrature]") {
    SECTION("exponential tail, rational map") {
        // integral_0^inf e^{-x} dx = 1
        auto r = integrate_upper([](double x) { return complex(std::exp(-x), 0.0); }, 0.0);
        CHECK(real_of(r) == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("exponential tail, exp map") {
        QuadratureConfig cfg;
        cfg.semi_infinite_transform = SemiInfiniteTransform::exp_map;
        auto r = integrate_upper([](double x) { return complex(std::exp(-x), 0.0); }, 0.0, cfg);
        CHECK(real_of(r) == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("power-law tail") {
        // integral_0^inf dx/(1+x^2) = pi/2
        auto r = integrate_upper([](double x) { return complex(1.0 / (1.0 + x * x), 0.0); }, 0.0);
        CHECK(real_of(r) == Catch::Approx(0.5 * kPi).epsilon(1e-11));
    }
    SECTION("combined endpoint singularity and infinite tail") {
        // integral_0^inf x^{-1/2} e^{-x} dx = Gamma(1/2) = sqrt(pi)
        auto r = integrate_upper(
            [](double x) { return complex(std::exp(-x) / std::sqrt(x), 0.0); }, 0.0);
        CHECK(real_of(r) == Catch::Approx(kSqrtPi).epsilon(1e-9));
    }
    SECTION("nonzero lower limit") {
        // integral_1^inf x^{-2} dx = 1
        auto r = integrate_upper([](double x) { return complex(1.0 / (x * x), 0.0); }, 1.0);
        CHECK(real_of(r) == Catch::Approx(1.0).epsilon(1e-11));
    }
    SECTION("lower half line by mirroring") {
        // integral_{-inf}^{-1} x^{-2} dx = 1
        auto r = integrate_lower([](double x) { return complex(1.0 / (x * x), 0.0); }, -1.0);
        CHECK(real_of(r) == Catch::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("whole real line", "[quadrature]") {
    SECTION("gaussian") {
        // integral_R e^{-x^2} dx = sqrt(pi)
        auto r = integrate_real_line([](double x) { return complex(std::exp(-x * x), 0.0); });
        CHECK(real_of(r) == Catch::Approx(kSqrtPi).epsilon(1e-11));
    }
    SECTION("lorentzian with interior split points") {
        // integral_R dx/(1+(x-3)^2) = pi, peak away from the default split
        auto r = integrate_real_line(
            [](double x) { return complex(1.0 / (1.0 + (x - 3.0) * (x - 3.0)), 0.0); },
            QuadratureConfig{}, {3.0});
        CHECK(real_of(r) == Catch::Approx(kPi).epsilon(1e-10));
    }
}

TEST_CASE("complex-valued integrands", "[quadrature]") {
    SECTION("damped complex exponential") {
        // integral_0^inf e^{-(1-i)x} dx = 1/(1-i) = (1+i)/2
        auto r = integrate_upper(
            [](double x) { return std::exp(complex(-x, x)); }, 0.0);
        CHECK(r.value.real() == Catch::Approx(0.5).epsilon(1e-10));
        CHECK(r.value.imag() == Catch::Approx(0.5).epsilon(1e-10));
    }
    SECTION("complex power with endpoint singularity") {
        // integral_0^1 x^{-1/2 + i} dx = 1/(1/2 + i) = (1/2 - i)/(5/4)
        auto r = integrate(
            [](double x) { return std::exp(complex(-0.5, 1.0) * std::log(x)); }, 0.0, 1.0);
        CHECK(r.value.real() == Catch::Approx(0.4).epsilon(1e-8));
        CHECK(r.value.imag() == Catch::Approx(-0.8).epsilon(1e-8));
    }
}

TEST_CASE("configuration validation", "[quadrature]") {
    QuadratureConfig cfg;
    cfg.rel_tol = -1.0;
    CHECK_THROWS_AS(integrate([](double) { return complex(1.0, 0.0); }, 0.0, 1.0, cfg),
                    renmom::invalid_parameter);
    CHECK_THROWS_AS(integrate([](double) { return complex(1.0, 0.0); }, 1.0, 0.0),
                    renmom::invalid_parameter);
}

TEST_CASE("compensated summation", "[quadrature]") {
    // 1 + 1e-16 + 1e-16 + ... (100 times) - 1 recovers 1e-14 exactly where
    // naive summation in doubles loses every small term.
    std::vector<double> xs;
    xs.push_back(1.0);
    for (int i = 0; i < 100; ++i) xs.push_back(1e-16);
    xs.push_back(-1.0);
    CHECK(renmom::compensated_sum(xs) == Catch::Approx(1e-14).epsilon(1e-10));
}
