#pragma once

#include "ldl/grid.hpp"
#include "ldl/perturbed_resolvent.hpp"
#include "ldl/wavespeed.hpp"

#include <complex>
#include <iosfwd>
#include <limits>
#include <vector>

namespace ldl {

struct NormSample {
    std::complex<double> lambda{0.0, 0.0};
    double norm = std::numeric_limits<double>::quiet_NaN();      // weighted |chi R chi|
    double grad_norm = std::numeric_limits<double>::quiet_NaN(); // stacked gradient rows
    double cond = std::numeric_limits<double>::quiet_NaN();
    double contraction = std::numeric_limits<double>::quiet_NaN();
    bool pole_flag = false;
    bool coarse_flag = false;
    SolveMethod method = SolveMethod::direct;
};

struct CeilingSample {
    std::complex<double> lambda{0.0, 0.0};
    double measured = 0.0;
    double ceiling = 0.0;
    bool ok = false;
};

struct ScanResult {
    std::vector<NormSample> samples;
    std::vector<CeilingSample> ceiling_checks;
    // Largest sampled real frequency below which every sample stayed in the
    // series-solve contraction regime.
    double epsilon0 = 0.0;
    // For half-plane scans: per scanned real part, the largest depth with no
    // pole flag above it (0 when the shallowest row already flags).
    std::vector<double> re_columns;
    std::vector<double> pole_free_depth;
};

// Samples the cutoff resolvent norm (and optionally the gradient-row norm)
// at `count` real frequencies, geometric below 1 and linear above. Fixed
// upper-half-plane cross checks guard the spectral ceiling on every run.
ScanResult scan_real_axis(const Grid& grid, const WavespeedProfile& speed, double chi_radius,
                          double chi_tilde_radius, double lambda_min, double lambda_max, int count,
                          bool with_gradient, const SolveOptions& opts = {});

// Rectangular sweep through the lower half plane: lambda = re - i*depth.
// The real range must stay away from 0 (the continuation cut in 2D).
ScanResult scan_lower_halfplane(const Grid& grid, const WavespeedProfile& speed, double chi_radius,
                                double re_min, double re_max, int re_count, double depth_min,
                                double depth_max, int depth_count, const SolveOptions& opts = {});

// CSV with header re_lambda,im_lambda,norm,grad_norm,pole_flag,cond,method;
// absent values render as nan. %.17g, '.' decimal, '\n' endings.
void write_scan_csv(std::ostream& os, const ScanResult& scan);

} // namespace ldl
