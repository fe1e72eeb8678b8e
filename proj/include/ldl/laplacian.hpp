#pragma once

#include "ldl/grid.hpp"
#include "ldl/wavespeed.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <vector>

namespace ldl {

// Standard 2*dim+1 point Laplacian with zero extension outside the grid
// (homogeneous Dirichlet one layer out).
void apply_laplacian(const Grid& grid, const Eigen::VectorXd& f, Eigen::VectorXd& out);
void apply_laplacian(const Grid& grid, const Eigen::VectorXcd& f, Eigen::VectorXcd& out);

// Centered first differences (zero extension); column d holds d/dx_d.
Eigen::MatrixXd centered_gradient(const Grid& grid, const Eigen::VectorXd& f);
Eigen::MatrixXcd centered_gradient(const Grid& grid, const Eigen::VectorXcd& f);

// Sparse -Laplacian (positive semidefinite stencil matrix).
Eigen::SparseMatrix<double> neg_laplacian_sparse(const Grid& grid);

// Sparse -c^2 * Laplacian - shift * I.
Eigen::SparseMatrix<std::complex<double>>
helmholtz_sparse(const Grid& grid, const WavespeedProfile& speed, std::complex<double> shift);

// Sparse -Laplacian restricted to the nodes with |x| < r (Dirichlet outside
// the ball). `nodes` receives the retained indices into the full grid.
Eigen::SparseMatrix<double>
neg_laplacian_ball(const Grid& grid, double r, std::vector<long>& nodes);

// Sparse centered difference d/dx_d on the full grid (zero extension).
Eigen::SparseMatrix<double> centered_diff_sparse(const Grid& grid, int axis);

} // namespace ldl
