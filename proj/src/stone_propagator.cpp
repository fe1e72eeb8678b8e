#include "ldl/stone_propagator.hpp"

#include "ldl/laplacian.hpp"
#include "ldl/wave_sim.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace ldl {

namespace {

using C = std::complex<double>;
constexpr double pi = std::numbers::pi;

// ---- free-case fast path: sine-transform diagonalization ----
//
// With c == 1 the stencil operator is diagonalized exactly by the type-I
// discrete sine basis on the cell-centered grid with zero ghost layers:
// eigenvalues per axis (2 - 2 cos((k+1) pi / (m+1))) / h^2.
struct SineSolver {
    int m = 0;
    int dim = 2;
    Eigen::MatrixXcd S; // symmetric involution, complex-typed for mixed products
    Eigen::VectorXd eig;

    explicit SineSolver(const Grid& g) : m(g.nodes_per_axis), dim(g.dim) {
        Eigen::MatrixXd Sr(m, m);
        const double norm = std::sqrt(2.0 / (m + 1));
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j)
                Sr(k, j) = norm * std::sin(pi * (k + 1.0) * (j + 1.0) / (m + 1.0));
        S = Sr.cast<C>();
        eig.resize(m);
        const double inv_h2 = 1.0 / (g.spacing * g.spacing);
        for (int k = 0; k < m; ++k)
            eig[k] = (2.0 - 2.0 * std::cos(pi * (k + 1.0) / (m + 1.0))) * inv_h2;
    }

    // Solve (-Lap_h - shift) x = b.
    Eigen::VectorXcd solve(C shift, const Eigen::VectorXcd& b) const {
        if (dim == 2) {
            Eigen::MatrixXcd X = Eigen::Map<const Eigen::MatrixXcd>(b.data(), m, m);
            // grid index (i,j) -> flat i*m+j, so columns vary fastest in j:
            // Map is column-major, X(j, i) = b[i*m+j]; the operator is
            // symmetric in the axes, so the labeling does not matter.
            Eigen::MatrixXcd coef = S * X * S;
            for (int a = 0; a < m; ++a)
                for (int bidx = 0; bidx < m; ++bidx)
                    coef(a, bidx) /= (eig[a] + eig[bidx] - shift);
            Eigen::MatrixXcd sol = S * coef * S;
            return Eigen::Map<Eigen::VectorXcd>(sol.data(), m * m);
        }
        // dim == 3: contract the sine matrix over each tensor leg in turn.
        const long n = static_cast<long>(m) * m * m;
        Eigen::VectorXcd work = b;
        auto contract_axis = [&](int axis, Eigen::VectorXcd& f) {
            // flat index (i*m + j)*m + k; axis 0 = i, 1 = j, 2 = k.
            Eigen::VectorXcd out(n);
            if (axis == 2) {
                Eigen::Map<const Eigen::MatrixXcd> F(f.data(), m, m * m);
                Eigen::Map<Eigen::MatrixXcd> O(out.data(), m, m * m);
                O = S * F; // k is the fastest index
            } else if (axis == 0) {
                Eigen::Map<const Eigen::MatrixXcd> F(f.data(), m * m, m);
                Eigen::Map<Eigen::MatrixXcd> O(out.data(), m * m, m);
                O = F * S; // i is the slowest index (S symmetric)
            } else {
                for (int i = 0; i < m; ++i) {
                    Eigen::Map<const Eigen::MatrixXcd> F(f.data() + static_cast<long>(i) * m * m,
                                                         m, m);
                    Eigen::Map<Eigen::MatrixXcd> O(out.data() + static_cast<long>(i) * m * m, m,
                                                   m);
                    O = F * S; // j is the middle index: columns of each slab
                }
            }
            f.swap(out);
        };
        for (int axis = 0; axis < 3; ++axis) contract_axis(axis, work);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    work[(static_cast<long>(i) * m + j) * m + k] /=
                        (eig[i] + eig[j] + eig[k] - shift);
        for (int axis = 0; axis < 3; ++axis) contract_axis(axis, work);
        return work;
    }
};

// One scalar Helmholtz solve (-c^2 Lap_h - shift) x = b, choosing the sine
// path for constant speed and sparse LU otherwise.
class HelmholtzSolver {
public:
    HelmholtzSolver(const Grid& g, const WavespeedProfile& speed)
        : grid_(g), speed_(speed), free_(speed.kind == ProfileKind::constant) {
        if (free_) {
            sine_ = std::make_unique<SineSolver>(g);
        } else {
            pattern_ = helmholtz_sparse(g, speed, C(0.0, 0.0));
            lu_.analyzePattern(pattern_);
        }
    }

    void set_shift(C shift) {
        shift_ = shift;
        if (!free_) {
            Eigen::SparseMatrix<C> A = pattern_;
            for (long i = 0; i < grid_.size(); ++i) A.coeffRef(i, i) -= shift;
            lu_.factorize(A);
            if (lu_.info() != Eigen::Success)
                throw std::runtime_error("stone: sparse factorization failed");
        }
    }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const {
        if (free_) return sine_->solve(shift_, b);
        return lu_.solve(b);
    }

private:
    const Grid& grid_;
    const WavespeedProfile& speed_;
    bool free_;
    C shift_{0.0, 0.0};
    std::unique_ptr<SineSolver> sine_;
    Eigen::SparseMatrix<C> pattern_;
    Eigen::SparseLU<Eigen::SparseMatrix<C>> lu_;
};

constexpr double gauss8_x[8] = {-0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975362};
constexpr double gauss8_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};

} // namespace

StatePair apply_generator_resolvent(std::complex<double> lambda, const Grid& grid,
                                    const WavespeedProfile& speed, const CauchyData& data) {
    if (lambda.imag() == 0.0)
        throw std::invalid_argument("stone: generator resolvent needs Im(lambda) != 0");
    HelmholtzSolver solver(grid, speed);
    solver.set_shift(lambda * lambda);
    const C i(0.0, 1.0);
    const Eigen::VectorXcd rhs =
        lambda * data.u0.cast<C>() + i * data.u1.cast<C>();
    StatePair w;
    w.first = solver.solve(rhs);
    w.second = -i * data.u0.cast<C>() - i * lambda * w.first;
    return w;
}

QuadratureLayout stone_quadrature(const StoneOptions& opts, const Grid& grid,
                                  const WavespeedProfile& speed, double max_time) {
    if (!(opts.eps > 0.0) || opts.eps > 0.5)
        throw std::invalid_argument("stone: eps must lie in (0, 0.5]");
    if (!(opts.avoid_radius > 0.0) || opts.avoid_radius >= 1.0)
        throw std::invalid_argument("stone: avoidance radius must lie in (0, 1)");
    if (!(opts.lambda_window > 1.0))
        throw std::invalid_argument("stone: window must exceed 1");

    // Spectral radius of the first-order generator: sqrt of the stencil bound.
    const double omega_max =
        speed.c_max * 2.0 * std::sqrt(double(grid.dim)) / grid.spacing;
    const double fine_limit = std::min(opts.lambda_window, omega_max + 1.0);

    QuadratureLayout q;
    q.fine_limit = fine_limit;
    // Fine width resolves both the eps-jump and the e^{-i t lambda} phase.
    double width = std::min(2.5 * opts.eps, 1.5 / (1.0 + std::abs(max_time)));
    int fine_panels = static_cast<int>(std::ceil((fine_limit - opts.avoid_radius) / width));
    if (fine_panels * 8 < opts.min_half_axis_nodes)
        fine_panels = (opts.min_half_axis_nodes + 7) / 8;
    q.fine_panels = fine_panels;

    auto add_panel = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int j = 0; j < 8; ++j) {
            q.nodes.push_back(mid + half * gauss8_x[j]);
            q.weights.push_back(half * gauss8_w[j]);
        }
    };

    const double fine_h = (fine_limit - opts.avoid_radius) / fine_panels;
    for (int p = 0; p < fine_panels; ++p)
        add_panel(opts.avoid_radius + p * fine_h, opts.avoid_radius + (p + 1) * fine_h);

    // Geometric panels out to the window edge.
    double a = fine_limit;
    double w = fine_h;
    int coarse = 0;
    while (a < opts.lambda_window - 1e-12) {
        w = std::min(w * 1.6, 0.25 * opts.lambda_window);
        const double b = std::min(a + w, opts.lambda_window);
        add_panel(a, b);
        a = b;
        ++coarse;
    }
    q.coarse_panels = coarse;
    return q;
}

StoneOutput stone_evolve(const Grid& grid, const WavespeedProfile& speed, const CauchyData& data,
                         const std::vector<double>& times, const StoneOptions& opts) {
    if (times.empty()) throw std::invalid_argument("stone: no output times requested");
    double max_t = 0.0;
    for (double t : times) max_t = std::max(max_t, std::abs(t));

    StoneOutput out;
    out.times = times;
    out.quad = stone_quadrature(opts, grid, speed, max_t);

    const long n = grid.size();
    const size_t nt = times.size();
    std::vector<Eigen::VectorXcd> acc0(nt, Eigen::VectorXcd::Zero(n));
    std::vector<Eigen::VectorXcd> acc1(nt, Eigen::VectorXcd::Zero(n));

    HelmholtzSolver solver(grid, speed);
    const C i(0.0, 1.0);
    const Eigen::VectorXcd d0 = data.u0.cast<C>();
    const Eigen::VectorXcd d1 = data.u1.cast<C>();

    for (size_t qn = 0; qn < out.quad.nodes.size(); ++qn) {
        const double lam = out.quad.nodes[qn];
        const double wq = out.quad.weights[qn];
        const C lam_up(lam, opts.eps);
        // One factorization serves both sides of the axis: the matrix at the
        // conjugate shift is the conjugate matrix, and the data are real.
        solver.set_shift(lam_up * lam_up);
        const Eigen::VectorXcd w0_up = solver.solve(lam_up * d0 + i * d1);
        const Eigen::VectorXcd w0_dn_conj = solver.solve(lam_up * d0 - i * d1);
        const Eigen::VectorXcd w0_dn = w0_dn_conj.conjugate();
        const C lam_dn = std::conj(lam_up);
        const Eigen::VectorXcd w1_up = -i * d0 - i * lam_up * w0_up;
        const Eigen::VectorXcd w1_dn = -i * d0 - i * lam_dn * w0_dn;

        // Jump of the generator resolvent across the axis, divided by 2 pi i.
        const Eigen::VectorXcd g0 = (w0_up - w0_dn) / (2.0 * pi * i);
        const Eigen::VectorXcd g1 = (w1_up - w1_dn) / (2.0 * pi * i);
        out.solves += 2;

        for (size_t k = 0; k < nt; ++k) {
            const C phase = std::exp(C(0.0, -times[k] * lam)) * wq;
            acc0[k] += phase * g0;
            acc1[k] += phase * g1;
        }
    }

    // The negative half axis contributes the conjugate for real data, so the
    // full integral is twice the real part.
    out.states.resize(nt);
    for (size_t k = 0; k < nt; ++k) {
        out.states[k].first = 2.0 * acc0[k].real().cast<C>();
        out.states[k].second = 2.0 * acc1[k].real().cast<C>();
    }
    return out;
}

CompareResult compare_propagators(const Grid& grid, const WavespeedProfile& speed,
                                  const CauchyData& data, double r2,
                                  const std::vector<double>& times, const StoneOptions& opts,
                                  double sim_safety) {
    if (times.empty()) throw std::invalid_argument("stone: no comparison times");
    double t_end = 0.0;
    for (double t : times) {
        if (t < 0.0) throw std::invalid_argument("stone: comparison times must be nonnegative");
        t_end = std::max(t_end, t);
    }
    if (!(r2 > 0.0) || r2 > 0.5 * grid.extent - grid.spacing)
        throw std::invalid_argument("stone: comparison ball must fit inside the grid");

    SimOptions sopts;
    sopts.t_end = t_end;
    sopts.safety = sim_safety;
    sopts.r2 = r2;
    sopts.sample_stride = 1 << 30; // only endpoints matter; snapshots drive output
    sopts.snapshot_times = times;
    const SimResult sim = run_simulation(grid, speed, data, sopts);

    // Snap the requested times to the leapfrog grid before evolving spectrally.
    std::vector<double> snapped;
    for (const Snapshot& sn : sim.snapshots) snapped.push_back(sn.t);
    const StoneOutput stone = stone_evolve(grid, speed, data, snapped, opts);

    CompareResult cmp;
    cmp.eps = opts.eps;
    cmp.lambda_window = opts.lambda_window;
    cmp.r2 = r2;
    cmp.dt = sim.dt;

    const std::vector<long> ball = grid.ball_nodes(r2);
    for (size_t k = 0; k < snapped.size(); ++k) {
        const Snapshot& sn = sim.snapshots[k];
        const StatePair& st = stone.states[k];
        const Eigen::VectorXd su = st.first.real();
        const Eigen::VectorXd sv = st.second.real();

        const Eigen::MatrixXd g_sim = centered_gradient(grid, sn.u);
        const Eigen::MatrixXd g_stone = centered_gradient(grid, su);
        double diff2 = 0.0, ref2 = 0.0;
        for (long idx : ball) {
            diff2 += (g_stone.row(idx) - g_sim.row(idx)).squaredNorm() +
                     speed.inv_c_sq[idx] * (sv[idx] - sn.v[idx]) * (sv[idx] - sn.v[idx]);
            ref2 += g_sim.row(idx).squaredNorm() +
                    speed.inv_c_sq[idx] * sn.v[idx] * sn.v[idx];
        }
        const double e_sim = local_energy(grid, speed, sn.u, sn.v, r2, true);
        const double e_stone = local_energy(grid, speed, su, sv, r2, true);

        CompareRow row;
        row.t = sn.t;
        row.state_discrepancy = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : 0.0;
        row.energy_discrepancy = e_sim > 0.0 ? std::abs(e_stone - e_sim) / e_sim : 0.0;
        cmp.rows.push_back(row);
    }
    return cmp;
}

} // namespace ldl
