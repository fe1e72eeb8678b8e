#pragma once

#include "ldl/grid.hpp"
#include "ldl/masks.hpp"
#include "ldl/spectral_point.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ldl {

// Outgoing Helmholtz kernel: exp(i lambda r)/(4 pi r) in dimension 3,
// (i/4) H0^(1)(lambda r) in dimension 2 (on the continued branch).
// r must be positive; dimension 2 rejects lambda on the cut.
std::complex<double> green_kernel(int dim, SpectralPoint lambda, double r);

// x-gradient of the kernel at x != y.
Eigen::Vector3cd grad_green_kernel(int dim, SpectralPoint lambda, const Eigen::Vector3d& x,
                                   const Eigen::Vector3d& y);

// Limit of G(r) minus its singular part as r -> 0: i*lambda/(4 pi) in 3D,
// i/4 - (log(lambda/2) + gamma)/(2 pi) in 2D.
std::complex<double> green_regular_at_zero(int dim, SpectralPoint lambda);

// Integral of the singular kernel part over one grid cell [-h/2, h/2]^dim:
// 1/(4 pi r) in 3D, -(1/2 pi) log r in 2D. Exact in 2D, Duffy-Gauss in 3D.
double singular_cell_integral(int dim, double h);

enum class KernelRole { cutoff_free, cutoff_perturbed, gradient_row, composition };

struct KernelMatrix {
    Eigen::MatrixXcd M; // maps node values to node values (weights folded in)
    SpectralPoint lambda;
    KernelRole role = KernelRole::cutoff_free;
    double chi_radius = 0.0;
    bool coarse_wavelength_warning = false; // fewer than ~10 nodes per wavelength
};

// Nystrom matrix of left * G(lambda) * right with quadrature weights folded
// in and the diagonal corrected by the exact singular cell integral plus the
// midpoint value of the regular part.
Eigen::MatrixXcd assemble_free_kernel_masked(SpectralPoint lambda, const Grid& grid,
                                             const Eigen::VectorXd& left_values,
                                             const Eigen::VectorXd& right_values);

// Cutoff free resolvent chi R0(lambda) chi.
KernelMatrix assemble_free_resolvent(SpectralPoint lambda, const Grid& grid, double chi_radius);

// Rows of grad(chi(x) G(lambda; x, y)) * right(y), one matrix per axis; the
// product rule term grad(chi) G is included.
std::vector<Eigen::MatrixXcd> assemble_grad_free_masked(SpectralPoint lambda, const Grid& grid,
                                                        const CutoffMask& left_mask,
                                                        const Eigen::VectorXd& right_values);

struct LowEnergyProbe {
    std::vector<double> lambdas;
    std::vector<double> norms;
    double near_constant = 0.0;   // fitted constant term
    double envelope_slope = 0.0;  // coefficient of |log lambda| (2D) or lambda (3D)
    double fit_residual = 0.0;    // relative l2 misfit
};

// Measures ||chi R0(lambda) chi|| on a decreasing set of small positive
// frequencies and fits the dimension-dependent low-frequency envelope.
LowEnergyProbe low_energy_expansion_probe(const Grid& grid, double chi_radius,
                                          const std::vector<double>& lambdas);

} // namespace ldl
