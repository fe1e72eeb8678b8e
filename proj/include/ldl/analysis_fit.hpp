#pragma once

#include "ldl/spectral_scan.hpp"
#include "ldl/wave_sim.hpp"

#include <string>
#include <vector>

namespace ldl {

struct FitResult {
    std::string model;
    std::vector<double> coeffs;
    double residual = 0.0; // relative l2 misfit
    int n_used = 0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

// Low-frequency envelope of the cutoff resolvent norm over clean real samples
// with lambda <= lambda_cap: a + b |log lambda| in 2D, a + b lambda in 3D.
// Needs at least 8 usable samples.
FitResult fit_low_energy(const std::vector<NormSample>& samples, int dim, double lambda_cap);

// Exponential high-frequency envelope: log(norm) = a + b lambda over clean
// real samples with lambda >= lambda_floor. Needs at least 6 usable samples.
FitResult fit_high_energy(const std::vector<NormSample>& samples, double lambda_floor);

struct DecayFit {
    int k = 1;
    double constant = 0.0;  // sup_t sqrt(E(t)) log(2+t)^k / graph_norm
    double ratio_min = 0.0; // smallest ratio over the trace
    double ratio_max = 0.0;
    std::vector<double> ratios;
};

// Envelope constant for the local-energy trace against the k-th graph norm.
DecayFit fit_decay_envelope(const std::vector<EnergySample>& trace, int k,
                            double graph_norm_value);

} // namespace ldl
