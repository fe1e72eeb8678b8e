#pragma once

#include "ldl/fields.hpp"
#include "ldl/grid.hpp"
#include "ldl/norms.hpp"
#include "ldl/wavespeed.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ldl {

// Stability-limited step: safety * h / (c_max * sqrt(dim)).
double cfl_timestep(const Grid& grid, const WavespeedProfile& speed, double safety);

// Staggered leapfrog state: u lives at `time`, v at `time - dt/2`.
struct FieldState {
    Eigen::VectorXd u;
    Eigen::VectorXd v;
    double time = 0.0;
    double dt = 0.0;
};

FieldState initialize_leapfrog(const Grid& grid, const WavespeedProfile& speed,
                               const CauchyData& data, double dt);
void leapfrog_step(const Grid& grid, const WavespeedProfile& speed, FieldState& st);
// Exact algebraic inverse of leapfrog_step.
void leapfrog_step_back(const Grid& grid, const WavespeedProfile& speed, FieldState& st);

// Velocity re-centered onto integer time levels.
Eigen::VectorXd centered_velocity(const Grid& grid, const WavespeedProfile& speed,
                                  const FieldState& st);

// Centered-difference field energy inside |x| < r2 (weighted = true uses the
// c^-2 velocity weight). r2 >= the outermost node radius integrates everything.
double local_energy(const Grid& grid, const WavespeedProfile& speed, const Eigen::VectorXd& u,
                    const Eigen::VectorXd& v, double r2, bool weighted);
// Whole-grid energy with the c^-2 velocity weight.
double global_energy(const Grid& grid, const WavespeedProfile& speed, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& v);

struct EnergySample {
    double t = 0.0;
    double local_e = 0.0;
    double global_e = 0.0;
};

struct SimOptions {
    double t_end = 1.0;
    double safety = 0.5;
    int sample_stride = 1;
    double r2 = 1.0;        // local-energy ball
    bool weighted_local = false;
    double guard_layers = 8.0; // boundary guard band, in units of h
    std::vector<double> snapshot_times; // snapped to the nearest step
};

struct Snapshot {
    double t = 0.0;
    Eigen::VectorXd u;
    Eigen::VectorXd v; // centered
};

struct SimResult {
    std::vector<EnergySample> trace;
    std::vector<Snapshot> snapshots;
    double dt = 0.0;
    long steps = 0;
    double max_support_radius = 0.0; // largest radius carrying amplitude above tolerance
    double max_envelope_leak = 0.0;  // amplitude outside the causal envelope / initial scale
};

// Leapfrog evolution with causality preconditions: the box must hold the cone
// r1 + c_max * t_end plus the guard band, and the wavefront is monitored.
SimResult run_simulation(const Grid& grid, const WavespeedProfile& speed, const CauchyData& data,
                         const SimOptions& opts);

// Round-trip defect of N forward and N backward steps, relative sup norm.
double reversal_error(const Grid& grid, const WavespeedProfile& speed, const CauchyData& data,
                      double t_end, double safety);

// True when the generator image of the data stays (numerically) inside
// |x| < r_prime; the relative leak outside is reported through *leak.
bool generator_preserves_support(const Grid& grid, const WavespeedProfile& speed,
                                 const CauchyData& data, double r_prime, double* leak = nullptr);

} // namespace ldl
