#pragma once

#include "ldl/grid.hpp"

#include <Eigen/Dense>

namespace ldl {

// C^infinity bump in the scaled variable s = r / r1: exp(1 - 1/(1-s^2)) for
// s < 1, 0 otherwise. Value 1 at s = 0.
double smooth_bump(double s);

// Real Cauchy data (u0, u1) supported in the open ball |x| < support_radius.
struct CauchyData {
    Eigen::VectorXd u0;
    Eigen::VectorXd u1;
    double support_radius = 0.0; // r1
};

// Builds smooth pulse data amp0*psi(r/r1), amp1*psi(r/r1).
CauchyData make_pulse_data(const Grid& grid, double r1, double amp0, double amp1);

// Wraps caller-provided fields, enforcing that both components vanish outside
// |x| < r1 and on the outermost node layer. Throws std::invalid_argument.
CauchyData make_cauchy_data(const Grid& grid, Eigen::VectorXd u0, Eigen::VectorXd u1, double r1);

// Largest node radius carrying |f| > rel_tol * max|f|; 0 for a zero field.
double support_max_radius(const Grid& grid, const Eigen::VectorXd& f, double rel_tol = 1e-13);
double support_max_radius(const Grid& grid, const Eigen::VectorXcd& f, double rel_tol = 1e-13);

} // namespace ldl
