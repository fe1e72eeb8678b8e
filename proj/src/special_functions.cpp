#include "ldl/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ldl {

namespace {

using C = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Power-series / asymptotic hand-off radius. Both representations carry
// roughly 1e-10 relative error on the seam and improve rapidly away from it.
constexpr double series_radius = 12.0;

C series_j0(C z) {
    const C q = -0.25 * z * z;
    C term(1.0, 0.0), sum(1.0, 0.0);
    for (int k = 1; k <= 60; ++k) {
        term *= q / double(k * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

C series_j1(C z) {
    const C q = -0.25 * z * z;
    C term = 0.5 * z, sum = term;
    for (int k = 1; k <= 60; ++k) {
        term *= q / double(k * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

C series_y0(C z) {
    // (2/pi) [ (log(z/2) + gamma) J0(z) + sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2 ],
    // q = z^2/4, H_k the harmonic numbers.
    const C q = 0.25 * z * z;
    C term(1.0, 0.0), sum(0.0, 0.0);
    double harmonic = 0.0;
    for (int k = 1; k <= 60; ++k) {
        term *= -q / double(k * k); // (-1)^k q^k/(k!)^2 running product
        harmonic += 1.0 / k;
        const C contrib = -term * harmonic; // (-1)^{k+1}
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return (2.0 / pi) * ((branch_log(0.5 * z) + euler_gamma) * series_j0(z) + sum);
}

C series_y1(C z) {
    // (2/pi)(log(z/2)+gamma) J1 - 2/(pi z)
    //   - (1/pi) sum_{k>=0} (-1)^k (H_k + H_{k+1}) (z/2)^{2k+1} / (k! (k+1)!).
    const C q = 0.25 * z * z;
    C pw = 0.5 * z; // (z/2)^{2k+1}/(k!(k+1)!) running product
    double hk = 0.0, hk1 = 1.0;
    C sum = pw * (hk + hk1);
    for (int k = 1; k <= 60; ++k) {
        pw *= -q / double(k * (k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        const C contrib = pw * (hk + hk1);
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return (2.0 / pi) * (branch_log(0.5 * z) + euler_gamma) * series_j1(z) - 2.0 / (pi * z) -
           sum / pi;
}

// Asymptotic tail sum_k c^k a_k(nu) / z^k with a_k given by the usual
// (4 nu^2 - (2j-1)^2) products; truncated at the smallest term.
C asymptotic_tail(C z, double nu4, C c) {
    C sum(1.0, 0.0);
    C zpow(1.0, 0.0);
    double a = 1.0;
    double prev_mag = 1e300;
    for (int k = 1; k <= 30; ++k) {
        const double f = (2 * k - 1);
        a *= (nu4 - f * f) / (8.0 * k);
        zpow *= c / z;
        const C term = a * zpow;
        const double mag = std::abs(term);
        if (mag >= prev_mag) break; // divergence onset
        sum += term;
        if (mag < 1e-17 * std::abs(sum)) break;
        prev_mag = mag;
    }
    return sum;
}

// Outgoing Hankel asymptotics, valid for arg z in (-pi, 2pi) which covers the
// whole working branch. nu = 0 or 1.
C asympt_hankel1(C z, int nu) {
    const C i(0.0, 1.0);
    const C root = std::sqrt(2.0 / pi) * std::exp(-0.5 * branch_log(z));
    const C phase = std::exp(i * (z - (0.5 * nu + 0.25) * pi));
    return root * phase * asymptotic_tail(z, nu == 0 ? 0.0 : 4.0, i);
}

// Incoming Hankel asymptotics, valid for arg z in (-2pi, pi); used only after
// reflecting the argument into the right half plane.
C asympt_hankel2(C z, int nu) {
    const C i(0.0, 1.0);
    const C root = std::sqrt(2.0 / pi) * std::exp(-0.5 * std::log(z));
    const C phase = std::exp(-i * (z - (0.5 * nu + 0.25) * pi));
    return root * phase * asymptotic_tail(z, nu == 0 ? 0.0 : 4.0, -i);
}

// J_nu for large |z| through the Hankel pair, reflecting by parity so the
// argument lies in the right half plane where both expansions converge well.
C asympt_j(C z, int nu) {
    const bool flip = z.real() < 0.0;
    const C w = flip ? -z : z;
    const C val = 0.5 * (asympt_hankel1(w, nu) + asympt_hankel2(w, nu));
    if (flip && nu == 1) return -val; // J1 odd, J0 even
    return val;
}

void reject_cut(C z) {
    if (on_branch_cut(z))
        throw std::invalid_argument("special_functions: argument on the branch cut");
}

} // namespace

std::complex<double> branch_log(std::complex<double> z) {
    if (z == C(0.0, 0.0))
        throw std::invalid_argument("special_functions: log of zero");
    C v = std::log(z);
    if (v.imag() < -0.5 * pi) v += C(0.0, 2.0 * pi);
    return v;
}

bool on_branch_cut(std::complex<double> z) {
    return (z.real() == 0.0 && z.imag() < 0.0) || z == C(0.0, 0.0);
}

std::complex<double> bessel_j0(std::complex<double> z) {
    if (std::abs(z) <= series_radius) return series_j0(z);
    return asympt_j(z, 0);
}

std::complex<double> bessel_j1(std::complex<double> z) {
    if (std::abs(z) <= series_radius) return series_j1(z);
    return asympt_j(z, 1);
}

std::complex<double> bessel_y0_branch(std::complex<double> z) {
    reject_cut(z);
    if (std::abs(z) <= series_radius) return series_y0(z);
    const C i(0.0, 1.0);
    return (asympt_hankel1(z, 0) - asympt_j(z, 0)) / i;
}

std::complex<double> bessel_y1_branch(std::complex<double> z) {
    reject_cut(z);
    if (std::abs(z) <= series_radius) return series_y1(z);
    const C i(0.0, 1.0);
    return (asympt_hankel1(z, 1) - asympt_j(z, 1)) / i;
}

std::complex<double> hankel1_0_branch(std::complex<double> z) {
    reject_cut(z);
    if (std::abs(z) <= series_radius) return series_j0(z) + C(0.0, 1.0) * series_y0(z);
    return asympt_hankel1(z, 0);
}

std::complex<double> hankel1_1_branch(std::complex<double> z) {
    reject_cut(z);
    if (std::abs(z) <= series_radius) return series_j1(z) + C(0.0, 1.0) * series_y1(z);
    return asympt_hankel1(z, 1);
}

} // namespace ldl
