#include "ldl/laplacian.hpp"

#include <stdexcept>

namespace ldl {

namespace {

// Neighbor index along axis d, or -1 when the neighbor falls outside the grid
// (where fields are extended by zero).
inline long neighbor(const Grid& g, long idx, int axis, int step) {
    auto ijk = g.unflatten(idx);
    ijk[static_cast<size_t>(axis)] += step;
    if (ijk[static_cast<size_t>(axis)] < 0 || ijk[static_cast<size_t>(axis)] >= g.nodes_per_axis)
        return -1;
    return g.index(ijk[0], ijk[1], ijk[2]);
}

template <typename Vec>
void apply_laplacian_impl(const Grid& g, const Vec& f, Vec& out) {
    if (f.size() != g.size()) throw std::invalid_argument("laplacian: field size mismatch");
    out.resize(g.size());
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    const int m = g.nodes_per_axis;
    const long n = g.size();
    const long stride_k = 1;
    const long stride_j = g.dim == 3 ? m : 1;
    const long stride_i = g.dim == 3 ? static_cast<long>(m) * m : m;
    for (long idx = 0; idx < n; ++idx) {
        const auto ijk = g.unflatten(idx);
        typename Vec::Scalar acc = -2.0 * g.dim * f[idx];
        if (ijk[0] > 0) acc += f[idx - stride_i];
        if (ijk[0] < m - 1) acc += f[idx + stride_i];
        if (ijk[1] > 0) acc += f[idx - stride_j];
        if (ijk[1] < m - 1) acc += f[idx + stride_j];
        if (g.dim == 3) {
            if (ijk[2] > 0) acc += f[idx - stride_k];
            if (ijk[2] < m - 1) acc += f[idx + stride_k];
        }
        out[idx] = acc * inv_h2;
    }
}

template <typename Vec, typename Mat>
Mat centered_gradient_impl(const Grid& g, const Vec& f) {
    if (f.size() != g.size()) throw std::invalid_argument("gradient: field size mismatch");
    Mat out(g.size(), g.dim);
    const double inv_2h = 0.5 / g.spacing;
    for (long idx = 0; idx < g.size(); ++idx) {
        for (int d = 0; d < g.dim; ++d) {
            const long ip = neighbor(g, idx, d, +1);
            const long im = neighbor(g, idx, d, -1);
            typename Vec::Scalar hi = ip >= 0 ? f[ip] : typename Vec::Scalar(0);
            typename Vec::Scalar lo = im >= 0 ? f[im] : typename Vec::Scalar(0);
            out(idx, d) = (hi - lo) * inv_2h;
        }
    }
    return out;
}

} // namespace

void apply_laplacian(const Grid& g, const Eigen::VectorXd& f, Eigen::VectorXd& out) {
    apply_laplacian_impl(g, f, out);
}
void apply_laplacian(const Grid& g, const Eigen::VectorXcd& f, Eigen::VectorXcd& out) {
    apply_laplacian_impl(g, f, out);
}

Eigen::MatrixXd centered_gradient(const Grid& g, const Eigen::VectorXd& f) {
    return centered_gradient_impl<Eigen::VectorXd, Eigen::MatrixXd>(g, f);
}
Eigen::MatrixXcd centered_gradient(const Grid& g, const Eigen::VectorXcd& f) {
    return centered_gradient_impl<Eigen::VectorXcd, Eigen::MatrixXcd>(g, f);
}

Eigen::SparseMatrix<double> neg_laplacian_sparse(const Grid& g) {
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(g.size()) * (2 * g.dim + 1));
    for (long idx = 0; idx < g.size(); ++idx) {
        trips.emplace_back(idx, idx, 2.0 * g.dim * inv_h2);
        for (int d = 0; d < g.dim; ++d) {
            for (int s : {-1, 1}) {
                const long nb = neighbor(g, idx, d, s);
                if (nb >= 0) trips.emplace_back(idx, nb, -inv_h2);
            }
        }
    }
    Eigen::SparseMatrix<double> A(g.size(), g.size());
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

Eigen::SparseMatrix<std::complex<double>>
helmholtz_sparse(const Grid& g, const WavespeedProfile& speed, std::complex<double> shift) {
    using C = std::complex<double>;
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    std::vector<Eigen::Triplet<C>> trips;
    trips.reserve(static_cast<size_t>(g.size()) * (2 * g.dim + 1));
    for (long idx = 0; idx < g.size(); ++idx) {
        const double cs = speed.c_sq[idx];
        trips.emplace_back(idx, idx, C(2.0 * g.dim * inv_h2 * cs, 0.0) - shift);
        for (int d = 0; d < g.dim; ++d) {
            for (int s : {-1, 1}) {
                const long nb = neighbor(g, idx, d, s);
                if (nb >= 0) trips.emplace_back(idx, nb, C(-inv_h2 * cs, 0.0));
            }
        }
    }
    Eigen::SparseMatrix<C> A(g.size(), g.size());
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

Eigen::SparseMatrix<double>
neg_laplacian_ball(const Grid& g, double r, std::vector<long>& nodes) {
    nodes = g.ball_nodes(r);
    std::vector<long> inv(static_cast<size_t>(g.size()), -1);
    for (size_t k = 0; k < nodes.size(); ++k) inv[static_cast<size_t>(nodes[k])] = static_cast<long>(k);

    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    std::vector<Eigen::Triplet<double>> trips;
    for (size_t k = 0; k < nodes.size(); ++k) {
        const long idx = nodes[k];
        trips.emplace_back(static_cast<long>(k), static_cast<long>(k), 2.0 * g.dim * inv_h2);
        for (int d = 0; d < g.dim; ++d) {
            for (int s : {-1, 1}) {
                const long nb = neighbor(g, idx, d, s);
                if (nb >= 0 && inv[static_cast<size_t>(nb)] >= 0)
                    trips.emplace_back(static_cast<long>(k), inv[static_cast<size_t>(nb)], -inv_h2);
            }
        }
    }
    const long nn = static_cast<long>(nodes.size());
    Eigen::SparseMatrix<double> A(nn, nn);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

Eigen::SparseMatrix<double> centered_diff_sparse(const Grid& g, int axis) {
    const double inv_2h = 0.5 / g.spacing;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(g.size()) * 2);
    for (long idx = 0; idx < g.size(); ++idx) {
        const long ip = neighbor(g, idx, axis, +1);
        const long im = neighbor(g, idx, axis, -1);
        if (ip >= 0) trips.emplace_back(idx, ip, inv_2h);
        if (im >= 0) trips.emplace_back(idx, im, -inv_2h);
    }
    Eigen::SparseMatrix<double> D(g.size(), g.size());
    D.setFromTriplets(trips.begin(), trips.end());
    D.makeCompressed();
    return D;
}

} // namespace ldl
