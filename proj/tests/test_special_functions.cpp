#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ldl/special_functions.hpp"
#include "ldl/spectral_point.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

using namespace ldl;
using C = std::complex<double>;

namespace {

// ---------------------------------------------------------------------------
// Integral-representation oracles (real argument). These are the classical
// Bessel integrals evaluated by composite Simpson rules; they share no code
// path with the series/asymptotic implementations under test.
// ---------------------------------------------------------------------------

template <typename F>
double simpson(F f, double a, double b, int n) { // n even
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

const double pi = 3.14159265358979323846;

// J_n(x) = (1/pi) Int_0^pi cos(n t - x sin t) dt
double oracle_jn(int n, double x) {
    return simpson([&](double t) { return std::cos(n * t - x * std::sin(t)); }, 0.0, pi, 4000) /
           pi;
}

// Y_0(x) = (1/pi) Int_0^pi sin(x sin t) dt - (2/pi) Int_0^inf e^{-x sinh t} dt
double oracle_y0(double x) {
    const double osc = simpson([&](double t) { return std::sin(x * std::sin(t)); }, 0.0, pi, 4000);
    const double tmax = std::asinh(45.0 / x);
    const double tail =
        simpson([&](double t) { return std::exp(-x * std::sinh(t)); }, 0.0, tmax, 4000);
    return (osc - 2.0 * tail) / pi;
}

// Y_1(x) = (1/pi) Int_0^pi sin(x sin t - t) dt - (2/pi) Int_0^inf sinh t e^{-x sinh t} dt
double oracle_y1(double x) {
    const double osc =
        simpson([&](double t) { return std::sin(x * std::sin(t) - t); }, 0.0, pi, 4000);
    const double tmax = std::asinh(60.0 / x);
    const double tail = simpson(
        [&](double t) { return std::sinh(t) * std::exp(-x * std::sinh(t)); }, 0.0, tmax, 6000);
    return (osc - 2.0 * tail) / pi;
}

// K_0(x) = Int_0^inf e^{-x cosh t} dt
double oracle_k0(double x) {
    const double tmax = std::acosh(45.0 / x + 1.0);
    return simpson([&](double t) { return std::exp(-x * std::cosh(t)); }, 0.0, tmax, 6000);
}

} // namespace

TEST_CASE("oracle sanity against frozen reference decimals") {
    CHECK(oracle_jn(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-12));
    CHECK(oracle_jn(1, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-12));
    CHECK(oracle_y0(1.0) == doctest::Approx(0.08825696421567696).epsilon(1e-10));
    CHECK(oracle_k0(1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-11));
}

TEST_CASE("J0 and J1 match the integral oracle across the series/asymptotic seam") {
    for (double x : {0.3, 1.0, 3.0, 7.5, 11.9, 11.99, 12.01, 12.5, 18.0, 30.0}) {
        CHECK(std::abs(bessel_j0(C(x, 0.0)).real() - oracle_jn(0, x)) <= 1e-10);
        CHECK(std::abs(bessel_j0(C(x, 0.0)).imag()) <= 1e-12);
        CHECK(std::abs(bessel_j1(C(x, 0.0)).real() - oracle_jn(1, x)) <= 1e-10);
    }
    // continuity directly at the switchover radius
    const C lo = bessel_j0(C(12.0 - 1e-9, 0.0));
    const C hi = bessel_j0(C(12.0 + 1e-9, 0.0));
    CHECK(std::abs(lo - hi) <= 1e-9);

    SUBCASE("entire-function symmetries") {
        for (const C z : {C(1.7, 0.9), C(-2.0, 3.0), C(4.0, -0.2)}) {
            CHECK(std::abs(bessel_j0(-z) - bessel_j0(z)) <= 1e-12 * std::abs(bessel_j0(z)));
            CHECK(std::abs(bessel_j1(-z) + bessel_j1(z)) <= 1e-12 * std::abs(bessel_j1(z)));
            CHECK(std::abs(bessel_j0(std::conj(z)) - std::conj(bessel_j0(z))) <=
                  1e-12 * std::abs(bessel_j0(z)));
        }
    }
}

TEST_CASE("Y0 and Y1 match the integral oracle on the positive axis") {
    for (double x : {0.5, 1.0, 2.5, 6.0, 11.5, 13.0, 25.0}) {
        CHECK(std::abs(bessel_y0_branch(C(x, 0.0)).real() - oracle_y0(x)) <= 1e-9);
        CHECK(std::abs(bessel_y0_branch(C(x, 0.0)).imag()) <= 1e-12);
        CHECK(std::abs(bessel_y1_branch(C(x, 0.0)).real() - oracle_y1(x)) <= 1e-9);
    }
}

TEST_CASE("modified-Bessel identity pins the Hankel value on the positive imaginary axis") {
    // H0^(1)(i y) = (2/(i pi)) K0(y), so (i/4) H0^(1)(i y) = K0(y)/(2 pi).
    for (double y : {0.5, 1.0, 2.0}) {
        const C h = hankel1_0_branch(C(0.0, y));
        const C want = 2.0 / (C(0.0, 1.0) * pi) * oracle_k0(y);
        CHECK(std::abs(h - want) <= 1e-10 * std::abs(want));
    }
}

TEST_CASE("Wronskian J1 Y0 - J0 Y1 = 2/(pi z) on and beyond the principal sheet") {
    auto wronskian_defect = [](C z) {
        const C w = bessel_j1(z) * bessel_y0_branch(z) - bessel_j0(z) * bessel_y1_branch(z);
        const C want = 2.0 / (pi * z);
        return std::abs(w - want) / std::abs(want);
    };
    for (const C z : {C(1.0, 0.0), C(3.0, 1.0), C(0.4, 2.0), C(-2.0, 0.3),
                      C(-1.0, -0.5), C(-0.4, -0.9), C(8.0, -0.5)}) {
        CAPTURE(z.real());
        CAPTURE(z.imag());
        CHECK(wronskian_defect(z) <= 1e-9);
    }
}

TEST_CASE("large-argument envelope of the outgoing Hankel function") {
    // H0^(1)(x) ~ sqrt(2/(pi x)) e^{i(x - pi/4)} for large real x.
    for (double x : {40.0, 80.0}) {
        const C h = hankel1_0_branch(C(x, 0.0));
        const C lead = std::sqrt(2.0 / (pi * x)) * std::exp(C(0.0, x - pi / 4.0));
        CHECK(std::abs(h - lead) <= 0.01 * std::abs(lead));
    }
    // decay in the upper half plane
    CHECK(std::abs(hankel1_0_branch(C(2.0, 6.0))) < std::abs(hankel1_0_branch(C(2.0, 1.0))));
}

TEST_CASE("branch log geometry") {
    SUBCASE("agrees with the principal log above the cut") {
        for (const C z : {C(1.0, 0.0), C(0.0, 2.0), C(-3.0, 0.5), C(2.0, -1.0)})
            CHECK(std::abs(branch_log(z) - std::log(z)) == 0.0);
    }
    SUBCASE("adds a full turn below the cut") {
        const C z(-0.3, -1.0); // principal argument below -pi/2
        CHECK(std::abs(branch_log(z) - (std::log(z) + C(0.0, 2.0 * pi))) <= 1e-15);
    }
    SUBCASE("continuous across the negative real axis") {
        const C a = branch_log(C(-1.0, 1e-12));
        const C b = branch_log(C(-1.0, -1e-12));
        CHECK(std::abs(a - b) <= 1e-9);
        CHECK(std::abs(a.imag() - pi) <= 1e-9);
    }
    SUBCASE("jumps by 2 pi i across the negative imaginary axis") {
        const C right = branch_log(C(1e-9, -1.0));
        const C left = branch_log(C(-1e-9, -1.0));
        CHECK(std::abs(left - right - C(0.0, 2.0 * pi)) <= 1e-8);
    }
    SUBCASE("cut membership") {
        CHECK(on_branch_cut(C(0.0, 0.0)));
        CHECK(on_branch_cut(C(0.0, -1.0)));
        CHECK(on_branch_cut(C(0.0, -7.5)));
        CHECK(!on_branch_cut(C(0.0, 1.0)));
        CHECK(!on_branch_cut(C(-1.0, 0.0)));
        CHECK(!on_branch_cut(C(1e-9, -1.0)));
    }
}

TEST_CASE("Hankel continuation is continuous through the negative real axis") {
    const C above = hankel1_0_branch(C(-2.0, 1e-10));
    const C below = hankel1_0_branch(C(-2.0, -1e-10));
    CHECK(std::abs(above - below) <= 1e-8 * std::abs(above));
    CHECK_THROWS_AS(hankel1_0_branch(C(0.0, -1.0)), std::invalid_argument);
    CHECK_THROWS_AS(bessel_y0_branch(C(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("spectral point validation") {
    CHECK(make_spectral_point(C(1.0, 0.5), 2).physical());
    CHECK(!make_spectral_point(C(1.0, -0.5), 2).physical());
    const SpectralPoint p = make_spectral_point(C(2.0, 0.5), 2);
    CHECK(p.reflected().lambda == C(-2.0, 0.5));
    CHECK_THROWS_AS(make_spectral_point(C(0.0, -2.0), 2), std::invalid_argument);
    CHECK_THROWS_AS(make_spectral_point(C(0.0, 0.0), 2), std::invalid_argument);
    CHECK(make_spectral_point(C(0.0, -2.0), 3).lambda == C(0.0, -2.0)); // no cut in odd dimension
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(make_spectral_point(C(inf, 0.0), 3), std::invalid_argument);
}
