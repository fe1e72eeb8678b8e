#include "ldl/analysis_fit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ldl {

namespace {

FitResult two_parameter_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                            const std::string& model) {
    const int n = static_cast<int>(xs.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = xs[static_cast<size_t>(i)];
        y[i] = ys[static_cast<size_t>(i)];
    }
    const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
    FitResult fit;
    fit.model = model;
    fit.coeffs = {beta[0], beta[1]};
    fit.residual = (X * beta - y).norm() / std::max(y.norm(), 1e-300);
    fit.n_used = n;
    return fit;
}

bool clean_real(const NormSample& s) {
    return s.lambda.imag() == 0.0 && s.lambda.real() > 0.0 && !s.pole_flag &&
           std::isfinite(s.norm);
}

} // namespace

FitResult fit_low_energy(const std::vector<NormSample>& samples, int dim, double lambda_cap) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("fit: dim must be 2 or 3");
    std::vector<double> xs, ys;
    double lo = lambda_cap, hi = 0.0;
    for (const NormSample& s : samples) {
        if (!clean_real(s) || s.lambda.real() > lambda_cap) continue;
        const double lam = s.lambda.real();
        xs.push_back(dim == 2 ? std::abs(std::log(lam)) : lam);
        ys.push_back(s.norm);
        lo = std::min(lo, lam);
        hi = std::max(hi, lam);
    }
    if (xs.size() < 8)
        throw std::invalid_argument("fit: low-frequency window holds fewer than 8 usable samples");
    FitResult fit = two_parameter_fit(xs, ys, dim == 2 ? "a+b*|log(lambda)|" : "a+b*lambda");
    fit.window_lo = lo;
    fit.window_hi = hi;
    return fit;
}

FitResult fit_high_energy(const std::vector<NormSample>& samples, double lambda_floor) {
    std::vector<double> xs, ys;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const NormSample& s : samples) {
        if (!clean_real(s) || s.lambda.real() < lambda_floor || !(s.norm > 0.0)) continue;
        xs.push_back(s.lambda.real());
        ys.push_back(std::log(s.norm));
        if (first) {
            lo = hi = s.lambda.real();
            first = false;
        } else {
            lo = std::min(lo, s.lambda.real());
            hi = std::max(hi, s.lambda.real());
        }
    }
    if (xs.size() < 6)
        throw std::invalid_argument("fit: high-frequency window holds fewer than 6 usable samples");
    FitResult fit = two_parameter_fit(xs, ys, "log(norm)=a+b*lambda");
    fit.window_lo = lo;
    fit.window_hi = hi;
    return fit;
}

DecayFit fit_decay_envelope(const std::vector<EnergySample>& trace, int k,
                            double graph_norm_value) {
    if (k < 1 || k > 3) throw std::invalid_argument("fit: decay order must lie in {1,2,3}");
    if (!(graph_norm_value > 0.0))
        throw std::invalid_argument("fit: graph norm must be positive");
    if (trace.empty()) throw std::invalid_argument("fit: empty energy trace");
    DecayFit fit;
    fit.k = k;
    bool first = true;
    for (const EnergySample& es : trace) {
        const double ratio =
            std::sqrt(std::max(es.local_e, 0.0)) * std::pow(std::log(2.0 + es.t), k) /
            graph_norm_value;
        fit.ratios.push_back(ratio);
        if (first) {
            fit.ratio_min = fit.ratio_max = ratio;
            first = false;
        } else {
            fit.ratio_min = std::min(fit.ratio_min, ratio);
            fit.ratio_max = std::max(fit.ratio_max, ratio);
        }
    }
    fit.constant = fit.ratio_max;
    return fit;
}

} // namespace ldl
