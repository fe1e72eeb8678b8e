#pragma once

#include "ldl/grid.hpp"

#include <Eigen/Dense>
#include <string>

namespace ldl {

enum class ProfileKind { constant, lipschitz_bump, annulus_well };

std::string to_string(ProfileKind k);
ProfileKind profile_kind_from_string(const std::string& s);

struct ProfileParams {
    double amplitude = 0.0;
    double support_radius = 0.0; // rho: the speed equals 1 outside |x| >= rho
};

// Radial wavespeed formula (exact, grid-free).
double wavespeed_value(ProfileKind kind, const ProfileParams& p, double r);

struct WavespeedProfile {
    ProfileKind kind = ProfileKind::constant;
    ProfileParams params;

    Eigen::VectorXd c;        // per node
    Eigen::VectorXd c_sq;     // c^2
    Eigen::VectorXd inv_c_sq; // c^-2 (the L^2 weight)
    double c_min = 1.0;
    double c_max = 1.0;
    double support_radius = 0.0;

    // Largest one-sided difference quotient |c(x+h e_d) - c(x)| / h over the
    // grid (constant extension by 1 outside), plus the exact slope bound of
    // the radial formula.
    double lipschitz_discrete = 0.0;
    double lipschitz_analytic = 0.0;
};

// Validates positivity of the speed and that the perturbation fits inside the
// grid (support_radius <= extent/2). Throws std::invalid_argument otherwise.
WavespeedProfile make_wavespeed(ProfileKind kind, const ProfileParams& p, const Grid& grid);

} // namespace ldl
