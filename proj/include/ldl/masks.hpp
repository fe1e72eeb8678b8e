#pragma once

#include "ldl/grid.hpp"

#include <Eigen/Dense>

namespace ldl {

// Radial cutoff equal to 1 on |x| <= 0.8*radius, 0 on |x| >= radius, with a
// C^2 quintic-smoothstep ramp in between. The plateau and the exterior return
// exact 1.0 / 0.0 so support and plateau tests are bitwise.
double cutoff_value(double r, double radius);

// Analytic gradient of the cutoff at point x (zero on the plateau, outside
// the support, and at the origin).
Eigen::Vector3d cutoff_gradient(const Eigen::Vector3d& x, double radius);

struct CutoffMask {
    double radius = 0.0;          // support radius
    double plateau_radius = 0.0;  // 0.8 * radius
    Eigen::VectorXd values;       // per grid node
};

CutoffMask make_mask(const Grid& grid, double radius);

} // namespace ldl
