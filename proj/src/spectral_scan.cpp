#include "ldl/spectral_scan.hpp"

#include "ldl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ldl {

namespace {

using C = std::complex<double>;

std::string g17(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Distance from lambda^2 to the positive real axis bounds the resolvent of a
// nonnegative selfadjoint operator.
double spectral_ceiling(C lambda) {
    const C z = lambda * lambda;
    return z.real() >= 0.0 ? 1.0 / std::abs(z.imag()) : 1.0 / std::abs(z);
}

NormSample sample_point(C lambda, const Grid& grid, const WavespeedProfile& speed,
                        double chi_radius, double chi_tilde_radius, bool with_gradient,
                        const SolveOptions& opts) {
    NormSample s;
    s.lambda = lambda;
    const SpectralPoint pt = make_spectral_point(lambda, grid.dim);
    const SolveReport rep = solve_cutoff_resolvent(pt, grid, speed, chi_radius, opts);
    const Eigen::VectorXd wc = speed.inv_c_sq * grid.weight();
    s.norm = operator_norm(rep.chi_R_chi, wc, wc).value;
    s.cond = rep.condition_indicator;
    s.contraction = rep.contraction_norm;
    s.pole_flag = rep.pole_flag;
    s.coarse_flag = rep.coarse_wavelength_warning;
    s.method = rep.method;
    if (with_gradient) {
        const auto grads =
            gradient_cutoff_resolvent(pt, grid, speed, chi_radius, chi_tilde_radius, opts);
        Eigen::MatrixXcd stacked(grid.size() * grid.dim, grid.size());
        for (int d = 0; d < grid.dim; ++d)
            stacked.middleRows(d * grid.size(), grid.size()) = grads[static_cast<size_t>(d)];
        // Gradient rows land in the plain L^2 norm; the source side stays weighted.
        const Eigen::VectorXd wl = Eigen::VectorXd::Constant(stacked.rows(), grid.weight());
        s.grad_norm = operator_norm(stacked, wl, wc).value;
    }
    return s;
}

} // namespace

ScanResult scan_real_axis(const Grid& grid, const WavespeedProfile& speed, double chi_radius,
                          double chi_tilde_radius, double lambda_min, double lambda_max, int count,
                          bool with_gradient, const SolveOptions& opts) {
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
        throw std::invalid_argument("scan: need 0 < lambda_min < lambda_max");
    if (count < 2) throw std::invalid_argument("scan: need at least 2 samples");

    // Geometric spacing below 1, linear above, split proportionally.
    std::vector<double> lambdas;
    const double lo_top = std::min(1.0, lambda_max);
    if (lambda_min < lo_top) {
        const double geo_span = std::log(lo_top / lambda_min);
        const double lin_span = std::max(0.0, lambda_max - lo_top);
        int geo_n = lin_span == 0.0
                        ? count
                        : std::max(2, static_cast<int>(std::round(
                                          count * geo_span / (geo_span + lin_span))));
        geo_n = std::min(geo_n, count);
        const int lin_n = count - geo_n;
        for (int k = 0; k < geo_n; ++k)
            lambdas.push_back(lambda_min *
                              std::exp(geo_span * (geo_n == 1 ? 0.0 : double(k) / (geo_n - 1))));
        for (int k = 1; k <= lin_n; ++k)
            lambdas.push_back(lo_top + (lambda_max - lo_top) * double(k) / lin_n);
    } else {
        for (int k = 0; k < count; ++k)
            lambdas.push_back(lambda_min + (lambda_max - lambda_min) * double(k) / (count - 1));
    }

    ScanResult out;
    SolveOptions series_opts = opts;
    for (double lam : lambdas) {
        SolveOptions use = opts;
        if (lam <= 0.3) {
            // Small frequencies sit deep in the contraction regime; record
            // them through the series solve as a cross-validation path.
            series_opts.method = SolveMethod::neumann;
            try {
                out.samples.push_back(sample_point(C(lam, 0.0), grid, speed, chi_radius,
                                                   chi_tilde_radius, with_gradient, series_opts));
                continue;
            } catch (const std::invalid_argument&) {
                // fall through to the direct path outside the regime
            }
        }
        use.method = SolveMethod::direct;
        out.samples.push_back(sample_point(C(lam, 0.0), grid, speed, chi_radius, chi_tilde_radius,
                                           with_gradient, use));
    }

    // Upper-half-plane ceiling cross checks ride along with every scan.
    const C checks[] = {C(0.0, 2.0), C(1.0, 1.5)};
    for (C lc : checks) {
        SolveOptions use = opts;
        use.method = SolveMethod::direct;
        const NormSample s =
            sample_point(lc, grid, speed, chi_radius, chi_tilde_radius, false, use);
        CeilingSample cs;
        cs.lambda = lc;
        cs.measured = s.norm;
        cs.ceiling = spectral_ceiling(lc);
        cs.ok = cs.measured <= 1.05 * cs.ceiling;
        out.ceiling_checks.push_back(cs);
    }

    double eps0 = 0.0;
    for (const NormSample& s : out.samples) {
        if (s.lambda.imag() != 0.0) continue;
        if (s.contraction < 0.5)
            eps0 = std::max(eps0, s.lambda.real());
        else
            break; // samples are ordered; the regime ends at the first violation
    }
    out.epsilon0 = eps0;
    return out;
}

ScanResult scan_lower_halfplane(const Grid& grid, const WavespeedProfile& speed, double chi_radius,
                                double re_min, double re_max, int re_count, double depth_min,
                                double depth_max, int depth_count, const SolveOptions& opts) {
    if (!(re_min > 0.0) || !(re_max >= re_min))
        throw std::invalid_argument("scan: strip needs 0 < re_min <= re_max (cut avoidance)");
    if (!(depth_min > 0.0) || !(depth_max >= depth_min))
        throw std::invalid_argument("scan: strip needs 0 < depth_min <= depth_max");
    if (re_count < 1 || depth_count < 1) throw std::invalid_argument("scan: strip counts must be >= 1");

    ScanResult out;
    SolveOptions use = opts;
    use.method = SolveMethod::direct;
    for (int i = 0; i < re_count; ++i) {
        const double re =
            re_count == 1 ? re_min : re_min + (re_max - re_min) * double(i) / (re_count - 1);
        double pole_free = 0.0;
        bool clean = true;
        for (int j = 0; j < depth_count; ++j) {
            const double depth = depth_count == 1 ? depth_min
                                                  : depth_min + (depth_max - depth_min) *
                                                                    double(j) / (depth_count - 1);
            const NormSample s =
                sample_point(C(re, -depth), grid, speed, chi_radius, 0.0, false, use);
            out.samples.push_back(s);
            if (clean && !s.pole_flag)
                pole_free = depth;
            else
                clean = false;
        }
        out.re_columns.push_back(re);
        out.pole_free_depth.push_back(pole_free);
    }
    std::sort(out.samples.begin(), out.samples.end(), [](const NormSample& a, const NormSample& b) {
        return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real()
                                                  : a.lambda.imag() < b.lambda.imag();
    });
    return out;
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
    os << "re_lambda,im_lambda,norm,grad_norm,pole_flag,cond,method\n";
    for (const NormSample& s : scan.samples) {
        os << g17(s.lambda.real()) << ',' << g17(s.lambda.imag()) << ',' << g17(s.norm) << ','
           << g17(s.grad_norm) << ',' << (s.pole_flag ? 1 : 0) << ',' << g17(s.cond) << ','
           << to_string(s.method) << '\n';
    }
}

} // namespace ldl
