#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace ldl {

// Uniform cell-centered tensor grid on the box [-extent/2, extent/2]^dim.
// Node coordinates along each axis are x_i = -extent/2 + (i + 1/2) * spacing,
// so no node sits on the boundary and the quadrature weight of every node is
// spacing^dim.
struct Grid {
    int dim = 2;          // 2 or 3
    double extent = 0.0;  // full side length
    double spacing = 0.0; // h
    int nodes_per_axis = 0;

    std::vector<double> axis;            // per-axis coordinates, size nodes_per_axis
    std::vector<Eigen::Vector3d> points; // all node coordinates (z = 0 in 2D)
    std::vector<double> radii;           // |x| per node

    long size() const { return static_cast<long>(points.size()); }
    double weight() const; // quadrature weight of one node, spacing^dim

    long index(int i, int j, int k = 0) const;
    std::array<int, 3> unflatten(long idx) const;
    const Eigen::Vector3d& point(long idx) const { return points[static_cast<size_t>(idx)]; }
    double radius(long idx) const { return radii[static_cast<size_t>(idx)]; }

    // True if any axis index is 0 or nodes_per_axis-1.
    bool on_boundary_layer(long idx) const;

    // Indices of nodes with |x| < r.
    std::vector<long> ball_nodes(double r) const;
};

// Validates inputs: dim in {2,3}, extent an integer multiple of spacing
// (relative tolerance 1e-9), at least 8 nodes per axis. Throws
// std::invalid_argument otherwise.
Grid make_grid(int dim, double extent, double spacing);

} // namespace ldl
