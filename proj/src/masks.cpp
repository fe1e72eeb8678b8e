#include "ldl/masks.hpp"

#include <cmath>
#include <stdexcept>

namespace ldl {

namespace {
// Quintic smoothstep: s(0)=0, s(1)=1, s' = s'' = 0 at both ends.
double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_deriv(double t) {
    const double u = t * (1.0 - t);
    return 30.0 * u * u;
}
} // namespace

double cutoff_value(double r, double radius) {
    const double a = radius;
    const double b = 0.8 * radius;
    if (r <= b) return 1.0;
    if (r >= a) return 0.0;
    // t runs 0 -> 1 as r runs a -> b, so the value ramps 0 -> 1 inward.
    return smoothstep5((a - r) / (a - b));
}

Eigen::Vector3d cutoff_gradient(const Eigen::Vector3d& x, double radius) {
    const double r = x.norm();
    const double a = radius;
    const double b = 0.8 * radius;
    if (r <= b || r >= a || r == 0.0) return Eigen::Vector3d::Zero();
    const double dval_dr = -smoothstep5_deriv((a - r) / (a - b)) / (a - b);
    return (dval_dr / r) * x;
}

CutoffMask make_mask(const Grid& grid, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("mask: radius must be positive");
    if (radius > 0.5 * grid.extent * (1.0 + 1e-12))
        throw std::invalid_argument("mask: support does not fit inside the grid box");
    CutoffMask m;
    m.radius = radius;
    m.plateau_radius = 0.8 * radius;
    m.values.resize(grid.size());
    for (long i = 0; i < grid.size(); ++i)
        m.values[i] = cutoff_value(grid.radius(i), radius);
    return m;
}

} // namespace ldl
