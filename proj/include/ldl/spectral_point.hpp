#pragma once

#include <complex>

namespace ldl {

// A frequency on the resolvent's analytic continuation domain: the upper half
// plane plus (in even dimension) the continuation through the real axis onto
// arg lambda in (-pi/2, 3pi/2). Even-dimensional kernels are logarithmic, so
// points on the cut (the negative imaginary axis) are rejected there; odd
// dimension is entire in lambda and has no cut.
struct SpectralPoint {
    std::complex<double> lambda{0.0, 0.0};

    bool physical() const { return lambda.imag() > 0.0; }
    // The symmetry partner: kernels obey M(reflect(z)) = conj(M(z)).
    SpectralPoint reflected() const { return {-std::conj(lambda)}; }
};

// Validates lambda for the given dimension. Throws std::invalid_argument for
// non-finite values, and in dimension 2 for lambda on the branch cut.
SpectralPoint make_spectral_point(std::complex<double> lambda, int dim);

} // namespace ldl
