#pragma once

#include "ldl/fields.hpp"
#include "ldl/grid.hpp"
#include "ldl/wavespeed.hpp"

#include <Eigen/Dense>

#include <complex>

namespace ldl {

// L^2(c^-2 dx) inner product: sum f_i conj(g_i) c_i^-2 h^dim.
std::complex<double> weighted_inner_product(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                                            const Grid& grid, const WavespeedProfile& speed);
double weighted_norm(const Eigen::VectorXcd& f, const Grid& grid, const WavespeedProfile& speed);

// Homogeneous H^1 seminorm via centered differences. Errors when the field is
// nonzero on the outermost node layer (the zero extension would then bias the
// quotient).
double h1dot_seminorm(const Grid& grid, const Eigen::VectorXcd& f);

// Quadratic form <(-Laplacian) f, f> h^dim of the stencil operator. Agrees
// with the forward-difference Dirichlet sum exactly, so the energy pairing
// and the stencil operator are compatible to roundoff.
double dirichlet_energy(const Grid& grid, const Eigen::VectorXcd& f);

struct StatePair {
    Eigen::VectorXcd first;
    Eigen::VectorXcd second;
};

StatePair to_state(const CauchyData& data);

// Wave generator acting on pairs: (u0, u1) -> (i u1, i c^2 Laplacian u0).
StatePair apply_wave_generator(const Grid& grid, const WavespeedProfile& speed, const StatePair& U);

// Energy norm sqrt( dirichlet_energy(first) + weighted_norm(second)^2 ).
double state_H_norm(const Grid& grid, const WavespeedProfile& speed, const StatePair& U);

// Graph norm of order k in {0,1,2,3}: k = 0 gives the plain energy norm,
// otherwise the energy norm plus the energy norm of the k-fold generator
// image. Errors when the data support touches the outermost k+1 node layers.
double graph_norm(const Grid& grid, const WavespeedProfile& speed, const StatePair& U, int k);
double graph_norm(const Grid& grid, const WavespeedProfile& speed, const CauchyData& data, int k);

// Best constant in |f|_{L^2(B_R)} <= C |grad f|_{L^2} for Dirichlet fields on
// the discrete ball |x| < R, i.e. 1/sqrt(smallest stencil eigenvalue).
double poincare_constant(const Grid& grid, double r, double tol = 1e-12, int max_iters = 5000);

} // namespace ldl
