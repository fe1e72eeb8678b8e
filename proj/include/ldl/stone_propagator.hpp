#pragma once

#include "ldl/fields.hpp"
#include "ldl/grid.hpp"
#include "ldl/norms.hpp"
#include "ldl/wavespeed.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ldl {

// Resolvent of the first-order wave generator applied to Cauchy data: the
// pair w solving (B - lambda) w = d, reduced to one scalar Helmholtz solve
// w0 = (-c^2 Lap_h - lambda^2)^{-1} (lambda d0 + i d1), w1 = -i d0 - i lambda w0.
// Valid at any lambda off the real axis (both half planes).
StatePair apply_generator_resolvent(std::complex<double> lambda, const Grid& grid,
                                    const WavespeedProfile& speed, const CauchyData& data);

struct StoneOptions {
    double eps = 1e-2;            // distance to the real axis in the jump
    double lambda_window = 64.0;  // integration window half-width
    double avoid_radius = 1e-3;   // spectral-origin avoidance
    int min_half_axis_nodes = 256;
};

struct QuadratureLayout {
    std::vector<double> nodes;   // positive half axis
    std::vector<double> weights;
    double fine_limit = 0.0;     // end of the finely resolved band
    int fine_panels = 0;
    int coarse_panels = 0;
};

// Composite 8-point Gauss panels: fine spacing tied to eps and the time
// horizon up to the stencil spectral radius, geometric panels beyond.
QuadratureLayout stone_quadrature(const StoneOptions& opts, const Grid& grid,
                                  const WavespeedProfile& speed, double max_time);

struct StoneOutput {
    std::vector<double> times;
    std::vector<StatePair> states; // full-grid pair per time (real up to roundoff)
    QuadratureLayout quad;
    long solves = 0;
};

// Spectral-projection evolution: the boundary-value jump of the generator
// resolvent integrated against e^{-i t lambda} over the window, using the
// reality of the data to fold the negative half axis onto the positive one.
StoneOutput stone_evolve(const Grid& grid, const WavespeedProfile& speed, const CauchyData& data,
                         const std::vector<double>& times, const StoneOptions& opts);

struct CompareRow {
    double t = 0.0;
    double state_discrepancy = 0.0;  // relative energy-norm difference on the ball
    double energy_discrepancy = 0.0; // relative local-energy difference
};

struct CompareResult {
    std::vector<CompareRow> rows;
    double eps = 0.0;
    double lambda_window = 0.0;
    double r2 = 0.0;
    double dt = 0.0;
};

// Runs the leapfrog and the spectral-projection evolutions from the same data
// and compares the states restricted to |x| < r2 at the requested times
// (snapped to the leapfrog step).
CompareResult compare_propagators(const Grid& grid, const WavespeedProfile& speed,
                                  const CauchyData& data, double r2,
                                  const std::vector<double>& times, const StoneOptions& opts,
                                  double sim_safety);

} // namespace ldl
