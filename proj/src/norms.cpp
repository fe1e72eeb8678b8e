#include "ldl/norms.hpp"

#include "ldl/laplacian.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>

namespace ldl {

std::complex<double> weighted_inner_product(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                                            const Grid& grid, const WavespeedProfile& speed) {
    if (f.size() != grid.size() || g.size() != grid.size())
        throw std::invalid_argument("norms: field size mismatch");
    std::complex<double> acc(0.0, 0.0);
    for (long i = 0; i < grid.size(); ++i)
        acc += f[i] * std::conj(g[i]) * speed.inv_c_sq[i];
    return acc * grid.weight();
}

double weighted_norm(const Eigen::VectorXcd& f, const Grid& grid, const WavespeedProfile& speed) {
    return std::sqrt(std::abs(weighted_inner_product(f, f, grid, speed)));
}

double h1dot_seminorm(const Grid& grid, const Eigen::VectorXcd& f) {
    if (f.size() != grid.size()) throw std::invalid_argument("norms: field size mismatch");
    for (long i = 0; i < grid.size(); ++i)
        if (grid.on_boundary_layer(i) && f[i] != std::complex<double>(0.0, 0.0))
            throw std::invalid_argument("norms: field is nonzero on the boundary layer");
    const Eigen::MatrixXcd g = centered_gradient(grid, f);
    return std::sqrt(g.squaredNorm() * grid.weight());
}

double dirichlet_energy(const Grid& grid, const Eigen::VectorXcd& f) {
    Eigen::VectorXcd lf;
    apply_laplacian(grid, f, lf);
    const std::complex<double> q = -f.dot(lf) * grid.weight(); // f.dot(x) = sum conj(f) x
    return std::abs(q.real());
}

StatePair to_state(const CauchyData& data) {
    StatePair U;
    U.first = data.u0.cast<std::complex<double>>();
    U.second = data.u1.cast<std::complex<double>>();
    return U;
}

StatePair apply_wave_generator(const Grid& grid, const WavespeedProfile& speed, const StatePair& U) {
    if (U.first.size() != grid.size() || U.second.size() != grid.size())
        throw std::invalid_argument("norms: state size mismatch");
    const std::complex<double> iu(0.0, 1.0);
    StatePair out;
    out.first = iu * U.second;
    Eigen::VectorXcd lap;
    apply_laplacian(grid, U.first, lap);
    out.second = iu * speed.c_sq.cast<std::complex<double>>().cwiseProduct(lap);
    return out;
}

double state_H_norm(const Grid& grid, const WavespeedProfile& speed, const StatePair& U) {
    const double a = dirichlet_energy(grid, U.first);
    const double b = weighted_norm(U.second, grid, speed);
    return std::sqrt(a + b * b);
}

double graph_norm(const Grid& grid, const WavespeedProfile& speed, const StatePair& U, int k) {
    if (k < 0 || k > 3) throw std::invalid_argument("norms: graph order must lie in {0,1,2,3}");
    // Each generator application widens supports by one stencil layer; demand
    // a clean margin so the zero extension stays inert.
    const int m = grid.nodes_per_axis;
    for (long i = 0; i < grid.size(); ++i) {
        const auto ijk = grid.unflatten(i);
        int depth = m;
        for (int d = 0; d < grid.dim; ++d) {
            depth = std::min(depth, ijk[static_cast<size_t>(d)]);
            depth = std::min(depth, m - 1 - ijk[static_cast<size_t>(d)]);
        }
        if (depth <= k && (U.first[i] != std::complex<double>(0.0, 0.0) ||
                           U.second[i] != std::complex<double>(0.0, 0.0)))
            throw std::invalid_argument("norms: data support touches the outer node layers for this graph order");
    }
    const double base = state_H_norm(grid, speed, U);
    if (k == 0) return base;
    StatePair V = U;
    for (int j = 0; j < k; ++j) V = apply_wave_generator(grid, speed, V);
    return base + state_H_norm(grid, speed, V);
}

double graph_norm(const Grid& grid, const WavespeedProfile& speed, const CauchyData& data, int k) {
    return graph_norm(grid, speed, to_state(data), k);
}

double poincare_constant(const Grid& grid, double r, double tol, int max_iters) {
    if (!(r > 0.0) || r + grid.spacing > 0.5 * grid.extent)
        throw std::invalid_argument("norms: ball must lie strictly inside the grid box");
    std::vector<long> nodes;
    const Eigen::SparseMatrix<double> A = neg_laplacian_ball(grid, r, nodes);
    if (nodes.size() < 8) throw std::invalid_argument("norms: ball contains too few nodes");

    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("norms: Cholesky factorization of the ball stencil failed");

    // Inverse power iteration for the smallest stencil eigenvalue.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(A.rows());
    v.normalize();
    double mu_prev = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd w = llt.solve(v);
        w.normalize();
        const double mu = w.dot(A * w);
        if (it > 0 && std::abs(mu - mu_prev) <= tol * std::abs(mu)) {
            mu_prev = mu;
            break;
        }
        mu_prev = mu;
        v = w;
    }
    return 1.0 / std::sqrt(mu_prev);
}

} // namespace ldl
