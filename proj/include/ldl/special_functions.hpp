#pragma once

#include <complex>

namespace ldl {

// Logarithm on the branch arg z in (-pi/2, 3pi/2), i.e. the cut runs down the
// negative imaginary axis instead of the negative real axis. Values with
// principal argument below -pi/2 pick up +2*pi*i relative to std::log.
std::complex<double> branch_log(std::complex<double> z);

// True on the cut itself: z = 0 or purely imaginary with negative imaginary
// part.
bool on_branch_cut(std::complex<double> z);

// Entire cylinder functions (branch-free).
std::complex<double> bessel_j0(std::complex<double> z);
std::complex<double> bessel_j1(std::complex<double> z);

// Second-kind and outgoing Hankel functions continued onto the branch above.
// They agree with the principal-branch functions for arg z in (-pi/2, pi]
// and continue analytically through the negative real axis. z = 0 and points
// on the cut are rejected.
std::complex<double> bessel_y0_branch(std::complex<double> z);
std::complex<double> bessel_y1_branch(std::complex<double> z);
std::complex<double> hankel1_0_branch(std::complex<double> z);
std::complex<double> hankel1_1_branch(std::complex<double> z);

} // namespace ldl
