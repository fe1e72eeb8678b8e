#include "ldl/wavespeed.hpp"

#include <cmath>
#include <stdexcept>

namespace ldl {

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::constant: return "constant";
        case ProfileKind::lipschitz_bump: return "lipschitz_bump";
        case ProfileKind::annulus_well: return "annulus_well";
    }
    return "constant";
}

ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "constant") return ProfileKind::constant;
    if (s == "lipschitz_bump") return ProfileKind::lipschitz_bump;
    if (s == "annulus_well") return ProfileKind::annulus_well;
    throw std::invalid_argument("wavespeed: unknown profile kind '" + s + "'");
}

double wavespeed_value(ProfileKind kind, const ProfileParams& p, double r) {
    switch (kind) {
        case ProfileKind::constant:
            return 1.0;
        case ProfileKind::lipschitz_bump: {
            const double s = 1.0 - r / p.support_radius;
            return s > 0.0 ? 1.0 + p.amplitude * s : 1.0;
        }
        case ProfileKind::annulus_well: {
            // Piecewise-linear radial well: dips to 1 - amplitude on the
            // annulus [0.4, 0.7]*rho, with linear ramps on [0.2, 0.4]*rho
            // and [0.7, 1.0]*rho.
            const double s = r / p.support_radius;
            double depth = 0.0;
            if (s >= 0.2 && s < 0.4) depth = (s - 0.2) / 0.2;
            else if (s >= 0.4 && s <= 0.7) depth = 1.0;
            else if (s > 0.7 && s < 1.0) depth = (1.0 - s) / 0.3;
            return 1.0 - p.amplitude * depth;
        }
    }
    return 1.0;
}

WavespeedProfile make_wavespeed(ProfileKind kind, const ProfileParams& p, const Grid& grid) {
    ProfileParams q = p;
    if (kind == ProfileKind::constant) {
        q.amplitude = 0.0;
        q.support_radius = 0.0;
    } else {
        if (!(q.support_radius > 0.0))
            throw std::invalid_argument("wavespeed: support_radius must be positive");
        if (q.support_radius > 0.5 * grid.extent)
            throw std::invalid_argument("wavespeed: perturbation support exceeds the grid box");
        if (kind == ProfileKind::lipschitz_bump && !(1.0 + q.amplitude > 0.0))
            throw std::invalid_argument("wavespeed: bump amplitude must exceed -1");
        if (kind == ProfileKind::annulus_well && !(1.0 - q.amplitude > 0.0))
            throw std::invalid_argument("wavespeed: well amplitude must be below 1");
    }

    WavespeedProfile w;
    w.kind = kind;
    w.params = q;
    w.support_radius = q.support_radius;

    const long n = grid.size();
    w.c.resize(n);
    for (long i = 0; i < n; ++i) w.c[i] = wavespeed_value(kind, q, grid.radius(i));
    w.c_sq = w.c.array().square();
    w.inv_c_sq = w.c_sq.cwiseInverse();
    w.c_min = w.c.minCoeff();
    w.c_max = w.c.maxCoeff();
    if (!(w.c_min > 0.0)) throw std::invalid_argument("wavespeed: profile is not positive on the grid");

    switch (kind) {
        case ProfileKind::constant: w.lipschitz_analytic = 0.0; break;
        case ProfileKind::lipschitz_bump:
            w.lipschitz_analytic = std::abs(q.amplitude) / q.support_radius;
            break;
        case ProfileKind::annulus_well:
            w.lipschitz_analytic = std::abs(q.amplitude) / (0.2 * q.support_radius);
            break;
    }

    // Discrete difference-quotient bound, constant extension by 1 outside.
    const int m = grid.nodes_per_axis;
    const double h = grid.spacing;
    double lip = 0.0;
    auto value_at = [&](const std::array<int, 3>& ijk) {
        bool outside = false;
        for (int d = 0; d < grid.dim; ++d)
            if (ijk[static_cast<size_t>(d)] < 0 || ijk[static_cast<size_t>(d)] >= m) outside = true;
        if (outside) return 1.0;
        return w.c[grid.index(ijk[0], ijk[1], ijk[2])];
    };
    for (long i = 0; i < n; ++i) {
        const auto ijk = grid.unflatten(i);
        for (int d = 0; d < grid.dim; ++d) {
            auto nb = ijk;
            nb[static_cast<size_t>(d)] += 1;
            lip = std::max(lip, std::abs(value_at(nb) - w.c[i]) / h);
        }
    }
    w.lipschitz_discrete = lip;
    return w;
}

} // namespace ldl
