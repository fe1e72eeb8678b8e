#include "ldl/perturbed_resolvent.hpp"

#include "ldl/laplacian.hpp"
#include "ldl/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>

namespace ldl {

namespace {

using C = std::complex<double>;

Eigen::VectorXd weighted_measure(const Grid& grid, const WavespeedProfile& speed) {
    return speed.inv_c_sq * grid.weight();
}

void check_mask_covers_perturbation(const WavespeedProfile& speed, double chi_radius) {
    if (speed.support_radius > 0.8 * chi_radius)
        throw std::invalid_argument(
            "perturbed_resolvent: speed perturbation must sit inside the mask plateau");
}

} // namespace

std::string to_string(SolveMethod m) {
    return m == SolveMethod::direct ? "direct" : "neumann";
}

KernelMatrix assemble_coupling(SpectralPoint pt, const Grid& grid, const WavespeedProfile& speed,
                               double chi_radius) {
    check_mask_covers_perturbation(speed, chi_radius);
    if (pt.lambda == C(0.0, 0.0)) {
        // The lambda^2 prefactor kills the (log-singular in 2D) kernel in the
        // limit, so the coupling at the origin is the zero operator.
        KernelMatrix zero;
        zero.M = Eigen::MatrixXcd::Zero(grid.size(), grid.size());
        zero.lambda = pt;
        zero.role = KernelRole::composition;
        zero.chi_radius = chi_radius;
        return zero;
    }
    KernelMatrix km = assemble_free_resolvent(pt, grid, chi_radius);
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(grid.size()) - speed.inv_c_sq;
    const C lam2 = pt.lambda * pt.lambda;
    km.M = (lam2 * v.cast<C>().asDiagonal()) * km.M;
    km.role = KernelRole::composition;
    return km;
}

SolveReport solve_cutoff_resolvent(SpectralPoint pt, const Grid& grid,
                                   const WavespeedProfile& speed, double chi_radius,
                                   const SolveOptions& opts) {
    check_mask_covers_perturbation(speed, chi_radius);
    const KernelMatrix free_km = assemble_free_resolvent(pt, grid, chi_radius);
    const Eigen::MatrixXcd& F = free_km.M;
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(grid.size()) - speed.inv_c_sq;
    const C lam2 = pt.lambda * pt.lambda;
    const Eigen::MatrixXcd K = (lam2 * v.cast<C>().asDiagonal()) * F;
    const Eigen::VectorXd wc = weighted_measure(grid, speed);

    SolveReport rep;
    rep.lambda = pt;
    rep.method = opts.method;
    rep.coarse_wavelength_warning = free_km.coarse_wavelength_warning;
    rep.contraction_norm = operator_norm(K, wc, wc).value;

    const long n = grid.size();
    Eigen::MatrixXcd X; // solves X (I + K) = F
    if (opts.method == SolveMethod::direct) {
        Eigen::MatrixXcd A = K;
        A.diagonal().array() += C(1.0, 0.0);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        const Eigen::MatrixXcd Xadj = lu.adjoint().solve(F.adjoint());
        X = Xadj.adjoint();
        rep.condition_indicator = inverse_norm_estimate(lu);
        rep.prefactor_norm = rep.condition_indicator; // same matrix-free estimate
        rep.residual = (X * A - F).norm() / F.norm();
    } else {
        if (!(rep.contraction_norm < 0.5))
            throw std::invalid_argument(
                "perturbed_resolvent: series solve requested outside the contraction regime");
        // (I + K)^{-1} = I - S with S = K - K^2 + K^3 - ...
        Eigen::MatrixXcd term = K;
        Eigen::MatrixXcd S = K;
        int terms = 1;
        while (term.norm() > opts.neumann_tail_tol && terms < opts.neumann_max_terms) {
            term = -(term * K);
            S += term;
            ++terms;
        }
        if (terms >= opts.neumann_max_terms)
            throw std::runtime_error("perturbed_resolvent: series did not reach the tail tolerance");
        rep.neumann_terms = terms;
        Eigen::MatrixXcd inv_factor = -S;
        inv_factor.diagonal().array() += C(1.0, 0.0);
        X = F * inv_factor;
        rep.prefactor_norm = operator_norm(inv_factor, wc, wc).value;
        rep.condition_indicator = (1.0 + rep.contraction_norm) * rep.prefactor_norm;
        Eigen::MatrixXcd A = K;
        A.diagonal().array() += C(1.0, 0.0);
        rep.residual = (X * A - F).norm() / F.norm();
    }
    (void)n;
    rep.pole_flag =
        rep.condition_indicator > opts.cond_threshold || rep.residual > opts.residual_tol;
    rep.chi_R_chi = X * speed.inv_c_sq.cast<C>().asDiagonal();
    return rep;
}

std::vector<Eigen::MatrixXcd> gradient_cutoff_resolvent(SpectralPoint pt, const Grid& grid,
                                                        const WavespeedProfile& speed,
                                                        double chi_radius, double chi_tilde_radius,
                                                        const SolveOptions& opts) {
    check_mask_covers_perturbation(speed, chi_radius);
    if (0.8 * chi_tilde_radius < chi_radius)
        throw std::invalid_argument(
            "perturbed_resolvent: wide mask must plateau over the narrow mask support");

    const CutoffMask chi = make_mask(grid, chi_radius);
    const CutoffMask chi_tilde = make_mask(grid, chi_tilde_radius);
    const std::vector<Eigen::MatrixXcd> d_narrow =
        assemble_grad_free_masked(pt, grid, chi, chi.values);
    const std::vector<Eigen::MatrixXcd> d_wide =
        assemble_grad_free_masked(pt, grid, chi, chi_tilde.values);

    const SolveReport wide = solve_cutoff_resolvent(pt, grid, speed, chi_tilde_radius, opts);
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(grid.size()) - speed.inv_c_sq;
    const C lam2 = pt.lambda * pt.lambda;

    // diag(V) [ diag(chi) + lambda^2 (chi~ R chi~) diag(chi) ]
    Eigen::MatrixXcd inner = lam2 * wide.chi_R_chi * chi.values.cast<C>().asDiagonal();
    inner += Eigen::MatrixXcd(chi.values.cast<C>().asDiagonal());
    inner = v.cast<C>().asDiagonal() * inner;

    std::vector<Eigen::MatrixXcd> out(static_cast<size_t>(grid.dim));
    for (int d = 0; d < grid.dim; ++d) {
        const auto k = static_cast<size_t>(d);
        out[k] = d_narrow[k] - d_wide[k] * inner;
    }
    return out;
}

namespace {

// Dense resolvent of the stencil operator -diag(c^2) Lap_h - z^2 on the whole
// grid (zero extension boundary condition).
Eigen::MatrixXcd box_resolvent_dense(const Grid& grid, const WavespeedProfile& speed, C z) {
    const Eigen::SparseMatrix<C> A = helmholtz_sparse(grid, speed, z * z);
    Eigen::MatrixXcd Ad = Eigen::MatrixXcd(A);
    return Ad.partialPivLu().inverse();
}

double rel_resid(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs) {
    const double scale = std::max(lhs.norm(), rhs.norm());
    if (scale == 0.0) return 0.0; // comparing zero matrices (e.g. coincident frequencies)
    return (lhs - rhs).norm() / scale;
}

} // namespace

IdentityMasks derive_identity_masks(const Grid& grid, const WavespeedProfile& speed) {
    const double h = grid.spacing;
    const double rho = std::max(speed.support_radius, 2.0 * h);
    IdentityMasks m;
    // Plateau over the perturbation plus one stencil layer, then nest with a
    // small slack factor so plateau comparisons never sit on a node boundary.
    m.chi_one = 1.02 * (rho + h) / 0.8;
    m.chi_five = 1.02 * (m.chi_one + h) / 0.8;
    m.chi_grad = m.chi_five;
    m.chi_tilde = 1.02 * m.chi_grad / 0.8;
    if (m.chi_tilde > 0.5 * grid.extent)
        throw std::invalid_argument(
            "perturbed_resolvent: grid too small to nest the identity masks");
    return m;
}

IdentityReport verify_identities(std::complex<double> lambda, std::complex<double> mu,
                                 const Grid& grid, const WavespeedProfile& speed,
                                 const IdentityMasks& masks) {
    if (!(lambda.imag() > 0.0) || !(mu.imag() > 0.0))
        throw std::invalid_argument("perturbed_resolvent: identity checks need Im > 0");
    if (0.8 * masks.chi_one < speed.support_radius + grid.spacing)
        throw std::invalid_argument("perturbed_resolvent: inner mask margin too small");
    if (0.8 * masks.chi_five < masks.chi_one)
        throw std::invalid_argument("perturbed_resolvent: outer mask must plateau over the inner");
    if (0.8 * masks.chi_tilde < masks.chi_grad)
        throw std::invalid_argument("perturbed_resolvent: wide mask must plateau over the gradient mask");

    const WavespeedProfile free_speed = make_wavespeed(ProfileKind::constant, {}, grid);
    const Eigen::MatrixXcd R_l = box_resolvent_dense(grid, speed, lambda);
    const Eigen::MatrixXcd R_m = box_resolvent_dense(grid, speed, mu);
    const Eigen::MatrixXcd R_lc = box_resolvent_dense(grid, speed, std::conj(lambda));
    const Eigen::MatrixXcd R0_l = box_resolvent_dense(grid, free_speed, lambda);

    IdentityReport rep;

    // (a) first resolvent identity for the perturbed family.
    {
        const C factor = lambda * lambda - mu * mu;
        rep.first_resolvent = rel_resid(R_l - R_m, factor * (R_l * R_m));
    }

    // (b) five-term difference expansion of chi R(lambda) chi - chi R(mu) chi
    // through the inner mask. Every term carries either the frequency factor
    // or a free-resolvent difference, so coincident frequencies compare zero
    // matrices exactly.
    {
        const CutoffMask chi = make_mask(grid, masks.chi_five);
        const CutoffMask chi1 = make_mask(grid, masks.chi_one);
        const auto dchi = Eigen::MatrixXcd(chi.values.cast<C>().asDiagonal());
        const Eigen::VectorXd inner = chi1.values;
        const auto bridge = Eigen::MatrixXcd(
            (inner.array() * (2.0 - inner.array())).matrix().cast<C>().asDiagonal());
        const auto outer =
            Eigen::MatrixXcd((1.0 - inner.array()).matrix().cast<C>().asDiagonal());

        // Commutator [Lap_h, chi1] as a dense matrix.
        Eigen::SparseMatrix<double> lap = -neg_laplacian_sparse(grid);
        const Eigen::MatrixXcd lap_d = Eigen::MatrixXd(lap).cast<C>();
        const auto dchi1 = Eigen::MatrixXcd(inner.cast<C>().asDiagonal());
        const Eigen::MatrixXcd comm = lap_d * dchi1 - dchi1 * lap_d;

        const Eigen::MatrixXcd R0_m = box_resolvent_dense(grid, free_speed, mu);
        const Eigen::MatrixXcd lhs = dchi * (R_l - R_m) * dchi;
        const Eigen::MatrixXcd diff0 = dchi * (R0_l - R0_m) * dchi;
        const Eigen::MatrixXcd Rl_c = dchi * R_l * dchi;
        const Eigen::MatrixXcd Rm_c = dchi * R_m * dchi;

        const C factor = lambda * lambda - mu * mu;
        const Eigen::MatrixXcd t1 = factor * (Rl_c * bridge * Rm_c);
        const Eigen::MatrixXcd t2 = outer * diff0 * outer;
        const Eigen::MatrixXcd t3 = outer * diff0 * comm * Rm_c;
        const Eigen::MatrixXcd t4 = -Rl_c * comm * diff0 * outer;
        const Eigen::MatrixXcd t5 = -Rl_c * comm * diff0 * comm * Rm_c;
        rep.five_term = rel_resid(lhs, t1 + t2 + t3 + t4 + t5);
    }

    // (c) weighted adjoint symmetry chi R(lambda) chi and chi R(conj lambda) chi.
    {
        const CutoffMask chi = make_mask(grid, masks.chi_five);
        const auto dchi = Eigen::MatrixXcd(chi.values.cast<C>().asDiagonal());
        const Eigen::MatrixXcd lhs_m = dchi * R_l * dchi;
        const Eigen::MatrixXcd rhs_m = dchi * R_lc * dchi;
        const Eigen::VectorXcd wc = speed.inv_c_sq.cast<C>();
        const Eigen::MatrixXcd adj =
            wc.cwiseInverse().asDiagonal() * lhs_m.adjoint() * wc.asDiagonal();
        rep.adjoint = rel_resid(adj, rhs_m);
    }

    // (d) gradient identity through the wide mask.
    {
        const CutoffMask chi = make_mask(grid, masks.chi_grad);
        const CutoffMask chit = make_mask(grid, masks.chi_tilde);
        const auto dchi = Eigen::MatrixXcd(chi.values.cast<C>().asDiagonal());
        const auto dchit = Eigen::MatrixXcd(chit.values.cast<C>().asDiagonal());
        const Eigen::VectorXcd v = (Eigen::VectorXd::Ones(grid.size()) - speed.inv_c_sq).cast<C>();
        const C lam2 = lambda * lambda;

        const Eigen::MatrixXcd core_lhs = dchi * R_l * dchi;
        const Eigen::MatrixXcd core_rhs =
            dchi * R0_l * dchi * speed.inv_c_sq.cast<C>().asDiagonal() -
            lam2 * (dchi * R0_l * dchit) * v.asDiagonal() * (dchit * R_l * dchit) * dchi;

        double num = 0.0, den = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
            const Eigen::MatrixXcd D = centered_diff_sparse(grid, d).cast<C>() * core_lhs;
            const Eigen::MatrixXcd Dr = centered_diff_sparse(grid, d).cast<C>() * core_rhs;
            num += (D - Dr).squaredNorm();
            den += D.squaredNorm();
        }
        rep.gradient = std::sqrt(num / den);
    }

    return rep;
}

} // namespace ldl
