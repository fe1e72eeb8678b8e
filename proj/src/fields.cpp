#include "ldl/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace ldl {

double smooth_bump(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

CauchyData make_pulse_data(const Grid& grid, double r1, double amp0, double amp1) {
    if (!(r1 > 0.0) || r1 >= 0.5 * grid.extent)
        throw std::invalid_argument("fields: pulse radius must lie strictly inside the grid box");
    Eigen::VectorXd u0(grid.size()), u1(grid.size());
    for (long i = 0; i < grid.size(); ++i) {
        const double psi = smooth_bump(grid.radius(i) / r1);
        u0[i] = amp0 * psi;
        u1[i] = amp1 * psi;
    }
    return make_cauchy_data(grid, std::move(u0), std::move(u1), r1);
}

CauchyData make_cauchy_data(const Grid& grid, Eigen::VectorXd u0, Eigen::VectorXd u1, double r1) {
    if (u0.size() != grid.size() || u1.size() != grid.size())
        throw std::invalid_argument("fields: component size does not match the grid");
    if (!(r1 > 0.0)) throw std::invalid_argument("fields: support radius must be positive");
    for (long i = 0; i < grid.size(); ++i) {
        const bool outside = grid.radius(i) >= r1 || grid.on_boundary_layer(i);
        if (outside && (u0[i] != 0.0 || u1[i] != 0.0))
            throw std::invalid_argument("fields: data does not vanish outside the stated support ball");
    }
    CauchyData d;
    d.u0 = std::move(u0);
    d.u1 = std::move(u1);
    d.support_radius = r1;
    return d;
}

namespace {
template <typename Vec>
double support_radius_impl(const Grid& grid, const Vec& f, double rel_tol) {
    double scale = 0.0;
    for (long i = 0; i < grid.size(); ++i) scale = std::max(scale, std::abs(f[i]));
    if (scale == 0.0) return 0.0;
    double r = 0.0;
    for (long i = 0; i < grid.size(); ++i)
        if (std::abs(f[i]) > rel_tol * scale) r = std::max(r, grid.radius(i));
    return r;
}
} // namespace

double support_max_radius(const Grid& grid, const Eigen::VectorXd& f, double rel_tol) {
    return support_radius_impl(grid, f, rel_tol);
}
double support_max_radius(const Grid& grid, const Eigen::VectorXcd& f, double rel_tol) {
    return support_radius_impl(grid, f, rel_tol);
}

} // namespace ldl
