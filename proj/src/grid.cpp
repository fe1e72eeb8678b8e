#include "ldl/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ldl {

double Grid::weight() const {
    double w = spacing;
    for (int d = 1; d < dim; ++d) w *= spacing;
    return w;
}

long Grid::index(int i, int j, int k) const {
    const long m = nodes_per_axis;
    return dim == 2 ? (static_cast<long>(i) * m + j)
                    : ((static_cast<long>(i) * m + j) * m + k);
}

std::array<int, 3> Grid::unflatten(long idx) const {
    const long m = nodes_per_axis;
    if (dim == 2) {
        return {static_cast<int>(idx / m), static_cast<int>(idx % m), 0};
    }
    const long k = idx % m;
    const long j = (idx / m) % m;
    const long i = idx / (m * m);
    return {static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)};
}

bool Grid::on_boundary_layer(long idx) const {
    const auto ijk = unflatten(idx);
    for (int d = 0; d < dim; ++d) {
        if (ijk[static_cast<size_t>(d)] == 0 || ijk[static_cast<size_t>(d)] == nodes_per_axis - 1)
            return true;
    }
    return false;
}

std::vector<long> Grid::ball_nodes(double r) const {
    std::vector<long> out;
    for (long idx = 0; idx < size(); ++idx) {
        if (radii[static_cast<size_t>(idx)] < r) out.push_back(idx);
    }
    return out;
}

Grid make_grid(int dim, double extent, double spacing) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
    if (!(extent > 0.0) || !(spacing > 0.0))
        throw std::invalid_argument("grid: extent and spacing must be positive");
    const double ratio = extent / spacing;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio)
        throw std::invalid_argument("grid: extent must be an integer multiple of spacing");
    const int m = static_cast<int>(rounded);
    if (m < 8)
        throw std::invalid_argument("grid: need at least 8 nodes per axis, got " + std::to_string(m));

    Grid g;
    g.dim = dim;
    g.extent = extent;
    g.spacing = spacing;
    g.nodes_per_axis = m;
    g.axis.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        g.axis[static_cast<size_t>(i)] = -0.5 * extent + (i + 0.5) * spacing;

    const long n = dim == 2 ? static_cast<long>(m) * m : static_cast<long>(m) * m * m;
    g.points.resize(static_cast<size_t>(n));
    g.radii.resize(static_cast<size_t>(n));
    for (long idx = 0; idx < n; ++idx) {
        const auto ijk = g.unflatten(idx);
        Eigen::Vector3d p(g.axis[static_cast<size_t>(ijk[0])],
                          g.axis[static_cast<size_t>(ijk[1])],
                          dim == 3 ? g.axis[static_cast<size_t>(ijk[2])] : 0.0);
        g.points[static_cast<size_t>(idx)] = p;
        g.radii[static_cast<size_t>(idx)] = p.norm();
    }
    return g;
}

} // namespace ldl
