#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>

#include <complex>
#include <cstdint>
#include <functional>

namespace ldl {

struct NormEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Largest singular value of diag(sqrt(wl)) A diag(1/sqrt(wr)), i.e. the
// operator norm of A from L^2(wr) to L^2(wl) in the node-value picture.
// Power iteration on the normal matrix with a fixed-seed start vector;
// relative tolerance on the singular value.
NormEstimate operator_norm(const Eigen::MatrixXcd& A, const Eigen::VectorXd& left_weights,
                           const Eigen::VectorXd& right_weights, double tol = 1e-10,
                           int max_iters = 10000, std::uint64_t seed = 0x9e3779b97f4a7c15ull);

// Matrix-free variant: apply(x) = A x, apply_adj(x) = A^H x, both already in
// the weighted picture.
NormEstimate operator_norm_apply(long rows, long cols,
                                 const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                                 const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adj,
                                 double tol = 1e-10, int max_iters = 10000,
                                 std::uint64_t seed = 0x9e3779b97f4a7c15ull);

// Estimate of ||A^{-1}||_2 (the reciprocal smallest singular value) from an
// existing LU factorization, by power iteration on A^{-1} A^{-H}.
double inverse_norm_estimate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, double tol = 1e-6,
                             int max_iters = 500, std::uint64_t seed = 0x2545f4914f6cdd1dull);

} // namespace ldl
