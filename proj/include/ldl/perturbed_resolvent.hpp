#pragma once

#include "ldl/free_resolvent.hpp"
#include "ldl/grid.hpp"
#include "ldl/masks.hpp"
#include "ldl/wavespeed.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ldl {

enum class SolveMethod { direct, neumann };
std::string to_string(SolveMethod m);

struct SolveOptions {
    SolveMethod method = SolveMethod::direct;
    double neumann_tail_tol = 1e-14; // stop when a series term falls below this
    int neumann_max_terms = 400;
    double residual_tol = 1e-12; // larger residuals raise the pole flag
    double cond_threshold = 1e12;
};

struct SolveReport {
    Eigen::MatrixXcd chi_R_chi; // cutoff perturbed resolvent, node values to node values
    SpectralPoint lambda;
    SolveMethod method = SolveMethod::direct;
    int neumann_terms = 0;
    double contraction_norm = 0.0;    // measured weighted norm of the coupling matrix
    double prefactor_norm = 0.0;      // norm of the inverted factor
    double residual = 0.0;            // relative defect of the linear solve
    double condition_indicator = 0.0; // reciprocal smallest singular value estimate
    bool pole_flag = false;
    bool coarse_wavelength_warning = false;
};

// Coupling matrix lambda^2 (1 - c^-2) chi R0(lambda) chi. Requires the speed
// perturbation to sit inside the mask plateau.
KernelMatrix assemble_coupling(SpectralPoint lambda, const Grid& grid,
                               const WavespeedProfile& speed, double chi_radius);

// Cutoff perturbed resolvent chi R(lambda) chi via
//   chi R chi = (chi R0 chi) (I + K)^{-1} diag(c^-2),
// solved directly (LU) or by the alternating series when ||K|| < 1/2.
SolveReport solve_cutoff_resolvent(SpectralPoint lambda, const Grid& grid,
                                   const WavespeedProfile& speed, double chi_radius,
                                   const SolveOptions& opts = {});

// Gradient rows of the cutoff perturbed resolvent, one matrix per axis,
// obtained from free-kernel gradients and one auxiliary resolvent solve on
// the wider mask:
//   grad(chi R chi) = grad(chi R0 chi) diag(c^-2)
//                   - lambda^2 grad(chi R0 chi~) diag(V) (chi~ R chi~) diag(chi).
std::vector<Eigen::MatrixXcd> gradient_cutoff_resolvent(SpectralPoint lambda, const Grid& grid,
                                                        const WavespeedProfile& speed,
                                                        double chi_radius,
                                                        double chi_tilde_radius,
                                                        const SolveOptions& opts = {});

// Mask radii for the finite-difference identity checks. chi_one must plateau
// over the speed perturbation with a stencil margin, chi_five over the
// support of chi_one, and chi_tilde over the support of chi_grad.
struct IdentityMasks {
    double chi_one = 0.0;
    double chi_five = 0.0;
    double chi_grad = 0.0;
    double chi_tilde = 0.0;
};

IdentityMasks derive_identity_masks(const Grid& grid, const WavespeedProfile& speed);

struct IdentityReport {
    double first_resolvent = 0.0; // R(l) - R(m) = (l^2 - m^2) R(l) R(m)
    double five_term = 0.0;       // commutator expansion of chi R chi
    double adjoint = 0.0;         // weighted adjoint pairs lambda with conj(lambda)
    double gradient = 0.0;        // gradient identity above
};

// Residuals of the four operator identities on the stencil realization
// (-c^2 Lap_h - z^2)^{-1}, where each identity is exact linear algebra and
// the residuals sit at roundoff level. Both frequencies need Im > 0.
IdentityReport verify_identities(std::complex<double> lambda, std::complex<double> mu,
                                 const Grid& grid, const WavespeedProfile& speed,
                                 const IdentityMasks& masks);

} // namespace ldl
