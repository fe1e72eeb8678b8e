#include "ldl/linalg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ldl {

namespace {

Eigen::VectorXcd seeded_start(long n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::VectorXcd v(n);
    for (long i = 0; i < n; ++i) v[i] = std::complex<double>(unit(rng), unit(rng));
    v.normalize();
    return v;
}

} // namespace

NormEstimate operator_norm_apply(long rows, long cols,
                                 const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                                 const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adj,
                                 double tol, int max_iters, std::uint64_t seed) {
    (void)rows;
    NormEstimate est;
    Eigen::VectorXcd v = seeded_start(cols, seed);
    double sigma_prev = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        Eigen::VectorXcd av = apply(v);
        const double sigma = av.norm();
        est.iterations = it;
        if (sigma == 0.0) { // v in the kernel: restart once from a shifted seed
            if (it > 1) { est.value = 0.0; est.converged = true; return est; }
            v = seeded_start(cols, seed + 1);
            continue;
        }
        Eigen::VectorXcd w = apply_adj(av);
        const double wn = w.norm();
        if (wn == 0.0) { est.value = sigma; est.converged = true; return est; }
        v = w / wn;
        if (it > 1 && std::abs(sigma - sigma_prev) <= tol * sigma) {
            est.value = sigma;
            est.converged = true;
            return est;
        }
        sigma_prev = sigma;
    }
    est.value = sigma_prev;
    est.converged = false;
    return est;
}

NormEstimate operator_norm(const Eigen::MatrixXcd& A, const Eigen::VectorXd& left_weights,
                           const Eigen::VectorXd& right_weights, double tol, int max_iters,
                           std::uint64_t seed) {
    if (A.rows() != left_weights.size() || A.cols() != right_weights.size())
        throw std::invalid_argument("linalg: weight sizes do not match the matrix");
    if (left_weights.minCoeff() <= 0.0 || right_weights.minCoeff() <= 0.0)
        throw std::invalid_argument("linalg: weights must be positive");
    const Eigen::ArrayXd ls = left_weights.array().sqrt();
    const Eigen::ArrayXd rs = right_weights.array().sqrt();
    auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        Eigen::VectorXcd t = (x.array() / rs).matrix();
        Eigen::VectorXcd y = A * t;
        return (y.array() * ls).matrix();
    };
    auto apply_adj = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        Eigen::VectorXcd t = (x.array() * ls).matrix();
        Eigen::VectorXcd y = A.adjoint() * t;
        return (y.array() / rs).matrix();
    };
    return operator_norm_apply(A.rows(), A.cols(), apply, apply_adj, tol, max_iters, seed);
}

double inverse_norm_estimate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, double tol,
                             int max_iters, std::uint64_t seed) {
    auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return lu.solve(x); };
    auto apply_adj = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        return lu.adjoint().solve(x);
    };
    const long n = lu.rows();
    const NormEstimate est = operator_norm_apply(n, n, apply, apply_adj, tol, max_iters, seed);
    return est.value;
}

} // namespace ldl
