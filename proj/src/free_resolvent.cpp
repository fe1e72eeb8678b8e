#include "ldl/free_resolvent.hpp"

#include "ldl/linalg.hpp"
#include "ldl/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ldl {

namespace {

using C = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286060651209008240243;

void check_dim(int dim) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("free_resolvent: dim must be 2 or 3");
}

// Radial derivative of the kernel.
C green_kernel_dr(int dim, SpectralPoint pt, double r) {
    const C lam = pt.lambda;
    if (dim == 3) {
        const C i(0.0, 1.0);
        return std::exp(i * lam * r) * (i * lam * r - 1.0) / (4.0 * pi * r * r);
    }
    return -(C(0.0, 0.25)) * lam * hankel1_1_branch(lam * r);
}

// integral over [0,1]^3 of 1/|u|, via the Duffy split into three pyramids.
double unit_corner_cube_integral() {
    static const double value = [] {
        // 1.5 * int_{[0,1]^2} (1 + u^2 + v^2)^{-1/2} du dv by 48-point GL.
        constexpr int n = 48;
        std::vector<double> x(n), w(n);
        // Golub-Welsch is overkill here; Newton on Legendre polynomials.
        for (int k = 0; k < n; ++k) {
            double t = std::cos(pi * (k + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            x[static_cast<size_t>(k)] = t;
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            w[static_cast<size_t>(k)] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
            const double u = 0.5 * (x[static_cast<size_t>(a)] + 1.0);
            for (int b = 0; b < n; ++b) {
                const double v = 0.5 * (x[static_cast<size_t>(b)] + 1.0);
                acc += 0.25 * w[static_cast<size_t>(a)] * w[static_cast<size_t>(b)] /
                       std::sqrt(1.0 + u * u + v * v);
            }
        }
        return 1.5 * acc;
    }();
    return value;
}

} // namespace

SpectralPoint make_spectral_point(std::complex<double> lambda, int dim) {
    check_dim(dim);
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw std::invalid_argument("spectral_point: lambda must be finite");
    if (dim == 2 && on_branch_cut(lambda))
        throw std::invalid_argument("spectral_point: lambda on the branch cut in dimension 2");
    return SpectralPoint{lambda};
}

std::complex<double> green_kernel(int dim, SpectralPoint pt, double r) {
    check_dim(dim);
    if (!(r > 0.0)) throw std::invalid_argument("free_resolvent: kernel needs r > 0");
    const C lam = pt.lambda;
    if (dim == 3) {
        const C i(0.0, 1.0);
        return std::exp(i * lam * r) / (4.0 * pi * r);
    }
    if (on_branch_cut(lam))
        throw std::invalid_argument("free_resolvent: lambda on the branch cut in dimension 2");
    return C(0.0, 0.25) * hankel1_0_branch(lam * r);
}

Eigen::Vector3cd grad_green_kernel(int dim, SpectralPoint pt, const Eigen::Vector3d& x,
                                   const Eigen::Vector3d& y) {
    const Eigen::Vector3d d = x - y;
    const double r = d.norm();
    if (!(r > 0.0)) throw std::invalid_argument("free_resolvent: gradient needs x != y");
    const C dr = green_kernel_dr(dim, pt, r);
    Eigen::Vector3cd out;
    for (int k = 0; k < 3; ++k) out[k] = dr * (d[k] / r);
    return out;
}

std::complex<double> green_regular_at_zero(int dim, SpectralPoint pt) {
    check_dim(dim);
    const C lam = pt.lambda;
    if (dim == 3) return C(0.0, 1.0) * lam / (4.0 * pi);
    if (on_branch_cut(lam))
        throw std::invalid_argument("free_resolvent: lambda on the branch cut in dimension 2");
    return C(0.0, 0.25) - (branch_log(0.5 * lam) + euler_gamma) / (2.0 * pi);
}

double singular_cell_integral(int dim, double h) {
    check_dim(dim);
    if (!(h > 0.0)) throw std::invalid_argument("free_resolvent: cell size must be positive");
    if (dim == 3) {
        // int_cell 1/(4 pi r) = h^2 * 2*I3 / (4 pi), I3 the unit corner-cube value.
        return h * h * 2.0 * unit_corner_cube_integral() / (4.0 * pi);
    }
    // int_cell -(1/2 pi) log r, cell = [-h/2, h/2]^2, exactly.
    const double a = 0.5 * h;
    const double corner = 0.5 * (std::log(2.0) - 3.0 + 0.5 * pi); // int_{[0,1]^2} log|u|
    return -(1.0 / (2.0 * pi)) * 4.0 * a * a * (std::log(a) + corner);
}

namespace {

// Kernel values for every lattice offset; the regular grid makes the pairwise
// distance set tiny compared to the matrix.
struct OffsetTable {
    int m = 0;
    int dim = 2;
    std::vector<C> values; // indexed by (di + m-1, dj + m-1, dk + m-1)

    long idx(int di, int dj, int dk) const {
        const long s = 2 * m - 1;
        const long a = di + m - 1, b = dj + m - 1, c = dk + m - 1;
        return dim == 2 ? a * s + b : (a * s + b) * s + c;
    }
};

template <typename F>
OffsetTable build_offset_table(const Grid& g, F&& kernel_of_r) {
    OffsetTable t;
    t.m = g.nodes_per_axis;
    t.dim = g.dim;
    const int m = t.m;
    const long s = 2 * m - 1;
    t.values.resize(static_cast<size_t>(g.dim == 2 ? s * s : s * s * s));
    const double h = g.spacing;
    const int kmax = g.dim == 3 ? m - 1 : 0;
    for (int di = -(m - 1); di <= m - 1; ++di)
        for (int dj = -(m - 1); dj <= m - 1; ++dj)
            for (int dk = -kmax; dk <= kmax; ++dk) {
                const double r = h * std::sqrt(double(di) * di + double(dj) * dj + double(dk) * dk);
                t.values[static_cast<size_t>(t.idx(di, dj, dk))] =
                    r > 0.0 ? kernel_of_r(r) : C(0.0, 0.0);
            }
    return t;
}

} // namespace

Eigen::MatrixXcd assemble_free_kernel_masked(SpectralPoint pt, const Grid& grid,
                                             const Eigen::VectorXd& left_values,
                                             const Eigen::VectorXd& right_values) {
    if (left_values.size() != grid.size() || right_values.size() != grid.size())
        throw std::invalid_argument("free_resolvent: mask size mismatch");
    const double w = grid.weight();
    const OffsetTable table =
        build_offset_table(grid, [&](double r) { return green_kernel(grid.dim, pt, r) * w; });
    const C diag = (singular_cell_integral(grid.dim, grid.spacing) +
                    green_regular_at_zero(grid.dim, pt) * w);

    const long n = grid.size();
    Eigen::MatrixXcd M(n, n);
    for (long i = 0; i < n; ++i) {
        if (left_values[i] == 0.0) {
            M.row(i).setZero();
            continue;
        }
        const auto a = grid.unflatten(i);
        for (long j = 0; j < n; ++j) {
            if (right_values[j] == 0.0) {
                M(i, j) = C(0.0, 0.0);
                continue;
            }
            const auto b = grid.unflatten(j);
            const C g = i == j ? diag
                               : table.values[static_cast<size_t>(
                                     table.idx(a[0] - b[0], a[1] - b[1], a[2] - b[2]))];
            M(i, j) = left_values[i] * g * right_values[j];
        }
    }
    return M;
}

KernelMatrix assemble_free_resolvent(SpectralPoint pt, const Grid& grid, double chi_radius) {
    const CutoffMask chi = make_mask(grid, chi_radius);
    KernelMatrix km;
    km.M = assemble_free_kernel_masked(pt, grid, chi.values, chi.values);
    km.lambda = pt;
    km.role = KernelRole::cutoff_free;
    km.chi_radius = chi_radius;
    km.coarse_wavelength_warning = std::abs(pt.lambda) * grid.spacing > 2.0 * pi / 10.0;
    return km;
}

std::vector<Eigen::MatrixXcd> assemble_grad_free_masked(SpectralPoint pt, const Grid& grid,
                                                        const CutoffMask& left_mask,
                                                        const Eigen::VectorXd& right_values) {
    if (right_values.size() != grid.size())
        throw std::invalid_argument("free_resolvent: mask size mismatch");
    const double w = grid.weight();
    const double h = grid.spacing;
    const OffsetTable val_table =
        build_offset_table(grid, [&](double r) { return green_kernel(grid.dim, pt, r) * w; });
    // dG/dr / r, so each component is (x_d - y_d) * entry.
    const OffsetTable slope_table = build_offset_table(
        grid, [&](double r) { return green_kernel_dr(grid.dim, pt, r) * (w / r); });
    const C diag_val = (singular_cell_integral(grid.dim, grid.spacing) +
                        green_regular_at_zero(grid.dim, pt) * w);

    // The gradient kernel grows like r^(1-n) toward the diagonal, and the
    // midpoint rule on the surrounding cells stalls the convergence of the
    // assembled operator near first order. Within a few spacings the entries
    // therefore use the exact cell average of the kernel (tensor Gauss
    // quadrature per offset, shared across all node pairs).
    static const double q8x[8] = {0.0198550717512319, 0.1016667612931866, 0.2372337950418355,
                                  0.4082826787521751, 0.5917173212478249, 0.7627662049581645,
                                  0.8983332387068134, 0.9801449282487681};
    static const double q8w[8] = {0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
                                  0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
                                  0.1111905172266872, 0.0506142681451881};
    const int near_m = 4;
    const int side = 2 * near_m + 1;
    const int near_k = grid.dim == 3 ? near_m : 0;
    std::vector<std::array<C, 3>> near_grad(
        static_cast<size_t>(side * side * (grid.dim == 3 ? side : 1)),
        {C(0.0, 0.0), C(0.0, 0.0), C(0.0, 0.0)});
    const auto near_idx = [&](int di, int dj, int dk) {
        const int a0 = di + near_m, b0 = dj + near_m, c0 = dk + near_m;
        return static_cast<size_t>(grid.dim == 2 ? a0 * side + b0 : (a0 * side + b0) * side + c0);
    };
    for (int di = -near_m; di <= near_m; ++di)
        for (int dj = -near_m; dj <= near_m; ++dj)
            for (int dk = -near_k; dk <= near_k; ++dk) {
                if (di == 0 && dj == 0 && dk == 0) continue; // exact zero by parity
                std::array<C, 3> acc{C(0.0, 0.0), C(0.0, 0.0), C(0.0, 0.0)};
                if (grid.dim == 2) {
                    for (int qa = 0; qa < 8; ++qa)
                        for (int qb = 0; qb < 8; ++qb) {
                            const double ox = h * di - h * (q8x[qa] - 0.5);
                            const double oy = h * dj - h * (q8x[qb] - 0.5);
                            const double r = std::sqrt(ox * ox + oy * oy);
                            const C s = green_kernel_dr(2, pt, r) * (q8w[qa] * q8w[qb] / r);
                            acc[0] += s * ox;
                            acc[1] += s * oy;
                        }
                } else {
                    for (int qa = 0; qa < 8; ++qa)
                        for (int qb = 0; qb < 8; ++qb)
                            for (int qc = 0; qc < 8; ++qc) {
                                const double ox = h * di - h * (q8x[qa] - 0.5);
                                const double oy = h * dj - h * (q8x[qb] - 0.5);
                                const double oz = h * dk - h * (q8x[qc] - 0.5);
                                const double r = std::sqrt(ox * ox + oy * oy + oz * oz);
                                const C s = green_kernel_dr(3, pt, r) *
                                            (q8w[qa] * q8w[qb] * q8w[qc] / r);
                                acc[0] += s * ox;
                                acc[1] += s * oy;
                                acc[2] += s * oz;
                            }
                }
                for (auto& component : acc) component *= w;
                near_grad[near_idx(di, dj, dk)] = acc;
            }

    const long n = grid.size();
    std::vector<Eigen::MatrixXcd> out(static_cast<size_t>(grid.dim));
    for (auto& Mk : out) Mk.resize(n, n);
    for (long i = 0; i < n; ++i) {
        const double chi_i = left_mask.values[i];
        const Eigen::Vector3d gchi = cutoff_gradient(grid.point(i), left_mask.radius);
        const bool row_zero = chi_i == 0.0 && gchi.isZero(0.0);
        if (row_zero) {
            for (auto& Mk : out) Mk.row(i).setZero();
            continue;
        }
        const auto a = grid.unflatten(i);
        for (long j = 0; j < n; ++j) {
            if (right_values[j] == 0.0) {
                for (auto& Mk : out) Mk(i, j) = C(0.0, 0.0);
                continue;
            }
            const auto b = grid.unflatten(j);
            if (i == j) {
                // grad G integrates to zero over the centered cell by parity;
                // only the product-rule term survives.
                for (int d = 0; d < grid.dim; ++d)
                    out[static_cast<size_t>(d)](i, j) = gchi[d] * diag_val * right_values[j];
                continue;
            }
            const int di = a[0] - b[0], dj = a[1] - b[1], dk = a[2] - b[2];
            const long o = val_table.idx(di, dj, dk);
            const C gval = val_table.values[static_cast<size_t>(o)];
            if (std::abs(di) <= near_m && std::abs(dj) <= near_m && std::abs(dk) <= near_m) {
                const std::array<C, 3>& cell = near_grad[near_idx(di, dj, dk)];
                for (int d = 0; d < grid.dim; ++d)
                    out[static_cast<size_t>(d)](i, j) =
                        (chi_i * cell[static_cast<size_t>(d)] + gchi[d] * gval) * right_values[j];
                continue;
            }
            const C slope = slope_table.values[static_cast<size_t>(o)];
            for (int d = 0; d < grid.dim; ++d) {
                const double dx = h * (a[static_cast<size_t>(d)] - b[static_cast<size_t>(d)]);
                out[static_cast<size_t>(d)](i, j) =
                    (chi_i * slope * dx + gchi[d] * gval) * right_values[j];
            }
        }
    }
    return out;
}

LowEnergyProbe low_energy_expansion_probe(const Grid& grid, double chi_radius,
                                          const std::vector<double>& lambdas) {
    if (lambdas.size() < 3)
        throw std::invalid_argument("free_resolvent: probe needs at least 3 frequencies");
    LowEnergyProbe probe;
    const Eigen::VectorXd weights = Eigen::VectorXd::Constant(grid.size(), grid.weight());
    for (double lam : lambdas) {
        if (!(lam > 0.0) || lam > 0.5)
            throw std::invalid_argument("free_resolvent: probe frequencies must lie in (0, 0.5]");
        const KernelMatrix km = assemble_free_resolvent(make_spectral_point(C(lam, 0.0), grid.dim),
                                                        grid, chi_radius);
        const NormEstimate est = operator_norm(km.M, weights, weights);
        probe.lambdas.push_back(lam);
        probe.norms.push_back(est.value);
    }
    // Fit norm ~ a + b*phi(lambda), phi the dimension's envelope shape.
    const int ns = static_cast<int>(probe.lambdas.size());
    Eigen::MatrixXd X(ns, 2);
    Eigen::VectorXd y(ns);
    for (int k = 0; k < ns; ++k) {
        X(k, 0) = 1.0;
        X(k, 1) = grid.dim == 2 ? std::abs(std::log(probe.lambdas[static_cast<size_t>(k)]))
                                : probe.lambdas[static_cast<size_t>(k)];
        y[k] = probe.norms[static_cast<size_t>(k)];
    }
    const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
    probe.near_constant = beta[0];
    probe.envelope_slope = beta[1];
    probe.fit_residual = (X * beta - y).norm() / std::max(y.norm(), 1e-300);
    return probe;
}

} // namespace ldl
