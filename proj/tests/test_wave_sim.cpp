#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ldl/fields.hpp"
#include "ldl/grid.hpp"
#include "ldl/laplacian.hpp"
#include "ldl/wave_sim.hpp"
#include "ldl/wavespeed.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace ldl;

namespace {

WavespeedProfile flat(const Grid& g) {
    return make_wavespeed(ProfileKind::constant, ProfileParams{}, g);
}

WavespeedProfile bump(const Grid& g, double amp = 0.5, double rho = 0.9) {
    ProfileParams p;
    p.amplitude = amp;
    p.support_radius = rho;
    return make_wavespeed(ProfileKind::lipschitz_bump, p, g);
}

} // namespace

TEST_CASE("stability timestep") {
    SUBCASE("formula") {
        const Grid g2 = make_grid(2, 1.0, 0.1);
        CHECK(cfl_timestep(g2, flat(g2), 0.9) ==
              doctest::Approx(0.9 * 0.1 / std::sqrt(2.0)).epsilon(1e-14));
        const Grid g3 = make_grid(3, 4.0, 0.5);
        CHECK(cfl_timestep(g3, flat(g3), 1.0) ==
              doctest::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-14));
    }
    SUBCASE("the step shrinks inversely with the top speed") {
        const Grid g = make_grid(2, 4.0, 0.25);
        // grid-sampled maximum: the apex sits between nodes, so c_max is the
        // largest nodal speed, not the continuum 1 + amplitude
        const WavespeedProfile fast = bump(g, 1.0, 1.0);
        CHECK(fast.c_max > 1.8);
        CHECK(cfl_timestep(g, fast, 0.5) ==
              doctest::Approx(cfl_timestep(g, flat(g), 0.5) / fast.c_max).epsilon(1e-14));
    }
    SUBCASE("safety factor domain") {
        const Grid g = make_grid(2, 4.0, 0.25);
        CHECK_THROWS_AS(cfl_timestep(g, flat(g), 0.0), std::invalid_argument);
        CHECK_THROWS_AS(cfl_timestep(g, flat(g), -0.2), std::invalid_argument);
        CHECK_THROWS_AS(cfl_timestep(g, flat(g), 1.5), std::invalid_argument);
        CHECK_NOTHROW(cfl_timestep(g, flat(g), 1.0));
    }
}

TEST_CASE("single leapfrog steps") {
    const Grid g = make_grid(2, 4.0, 0.25);
    const WavespeedProfile speed = bump(g);

    SUBCASE("zero data stays zero") {
        CauchyData z;
        z.u0 = Eigen::VectorXd::Zero(g.size());
        z.u1 = Eigen::VectorXd::Zero(g.size());
        z.support_radius = 0.5;
        FieldState st = initialize_leapfrog(g, speed, z, 0.01);
        for (int k = 0; k < 5; ++k) leapfrog_step(g, speed, st);
        CHECK(st.u.norm() == 0.0);
        CHECK(st.v.norm() == 0.0);
    }

    SUBCASE("centered velocity recovers the initial slope") {
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.7);
        const FieldState st = initialize_leapfrog(g, speed, data, 0.01);
        const Eigen::VectorXd vc = centered_velocity(g, speed, st);
        CHECK((vc - data.u1).lpNorm<Eigen::Infinity>() <= 1e-12);
    }

    SUBCASE("rest data moves at second order in the step size") {
        // One step from (u0, 0) displaces u by (dt^2/2) c^2 Lap u0; quartering
        // under dt -> dt/2 is the Taylor signature of the time discretization.
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.0);
        auto displacement = [&](double dt) {
            FieldState st = initialize_leapfrog(g, speed, data, dt);
            leapfrog_step(g, speed, st);
            return (st.u - data.u0).lpNorm<Eigen::Infinity>();
        };
        const double d1 = displacement(0.02), d2 = displacement(0.01);
        CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(1e-9));
    }

    SUBCASE("a step followed by its inverse is the identity") {
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.5);
        FieldState st = initialize_leapfrog(g, speed, data, 0.02);
        const Eigen::VectorXd u = st.u, v = st.v;
        leapfrog_step(g, speed, st);
        leapfrog_step_back(g, speed, st);
        CHECK((st.u - u).lpNorm<Eigen::Infinity>() <= 1e-14);
        CHECK((st.v - v).lpNorm<Eigen::Infinity>() <= 1e-14);
        CHECK(st.time == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("energy accounting") {
    const Grid g = make_grid(2, 4.0, 0.25);
    const WavespeedProfile speed = bump(g);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.size());

    SUBCASE("zero state carries no energy") {
        CHECK(local_energy(g, speed, zero, zero, 1.0, false) == 0.0);
        CHECK(local_energy(g, speed, zero, zero, 1.0, true) == 0.0);
        CHECK(global_energy(g, speed, zero, zero) == 0.0);
    }

    SUBCASE("a ball holding the whole field reproduces the global energy") {
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.7);
        const double all = local_energy(g, speed, data.u0, data.u1, 10.0, true);
        CHECK(all == doctest::Approx(global_energy(g, speed, data.u0, data.u1)).epsilon(1e-12));
    }

    SUBCASE("both velocity weights coincide for the unperturbed speed") {
        const WavespeedProfile one = flat(g);
        const CauchyData data = make_pulse_data(g, 1.0, 0.8, 0.6);
        CHECK(local_energy(g, one, data.u0, data.u1, 1.3, false) ==
              local_energy(g, one, data.u0, data.u1, 1.3, true));
    }

    SUBCASE("the weighted variant never exceeds the plain one when c >= 1") {
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.7);
        CHECK(local_energy(g, speed, data.u0, data.u1, 1.5, true) <=
              local_energy(g, speed, data.u0, data.u1, 1.5, false));
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS(local_energy(g, speed, zero, zero, 0.0, false), std::invalid_argument);
        CHECK_THROWS_AS(local_energy(g, speed, zero.head(5), zero, 1.0, false),
                        std::invalid_argument);
    }
}

TEST_CASE("simulation contracts") {
    SUBCASE("zero data evolves to the zero trace") {
        const Grid g = make_grid(2, 8.0, 0.25);
        CauchyData z;
        z.u0 = Eigen::VectorXd::Zero(g.size());
        z.u1 = Eigen::VectorXd::Zero(g.size());
        z.support_radius = 0.5;
        SimOptions o;
        o.t_end = 0.5;
        o.r2 = 1.0;
        const SimResult res = run_simulation(g, flat(g), z, o);
        for (const EnergySample& s : res.trace) {
            CHECK(s.local_e == 0.0);
            CHECK(s.global_e == 0.0);
        }
        CHECK(res.max_support_radius == 0.0);
        CHECK(res.max_envelope_leak == 0.0);
    }

    SUBCASE("global energy band, causal support and envelope leak") {
        const Grid g = make_grid(2, 8.0, 0.0625);
        const WavespeedProfile speed = bump(g);
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.5);
        SimOptions o;
        o.t_end = 0.6;
        o.safety = 0.4;
        o.r2 = 1.0;
        const SimResult res = run_simulation(g, speed, data, o);
        double lo = 1e300, hi = 0.0;
        for (const EnergySample& s : res.trace) {
            CHECK(s.global_e > 0.0);
            CHECK(s.local_e >= 0.0);
            lo = std::min(lo, s.global_e);
            hi = std::max(hi, s.global_e);
        }
        CHECK((hi - lo) / hi < 1e-3);
        CHECK(res.max_envelope_leak < 1e-8);
        CHECK(res.max_support_radius >= data.support_radius);
        CHECK(res.max_support_radius <= 0.5 * 8.0 - 8.0 * g.spacing);
    }

    SUBCASE("round trip in time returns the data") {
        const Grid g = make_grid(2, 8.0, 0.125);
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.5);
        CHECK(reversal_error(g, bump(g), data, 0.5, 0.5) < 1e-6);
    }

    SUBCASE("local energy drains out of the ball after the transit") {
        const Grid g = make_grid(2, 8.0, 0.125);
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.0);
        SimOptions o;
        o.t_end = 1.5;
        o.r2 = 1.0;
        const SimResult res = run_simulation(g, flat(g), data, o);
        CHECK(res.trace.back().local_e < 0.5 * res.trace.front().local_e);
    }

    SUBCASE("snapshots snap to steps and start from the data") {
        const Grid g = make_grid(2, 8.0, 0.25);
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.5);
        SimOptions o;
        o.t_end = 0.5;
        o.snapshot_times = {0.0, 0.3, 0.5};
        const SimResult res = run_simulation(g, flat(g), data, o);
        REQUIRE(res.snapshots.size() == 3);
        for (size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(res.snapshots[k].t - o.snapshot_times[k]) <= 0.5 * res.dt + 1e-12);
            CHECK(res.snapshots[k].u.allFinite());
            CHECK(res.snapshots[k].v.allFinite());
        }
        CHECK((res.snapshots[0].u - data.u0).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((res.snapshots[0].v - data.u1).lpNorm<Eigen::Infinity>() <= 1e-12);
    }

    SUBCASE("precondition and guard failures") {
        const Grid g = make_grid(2, 4.0, 0.25);
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.0);
        SimOptions o;
        o.t_end = 10.0; // cone cannot fit
        CHECK_THROWS_AS(run_simulation(g, flat(g), data, o), std::invalid_argument);
        o.t_end = 0.5;
        o.sample_stride = 0;
        CHECK_THROWS_AS(run_simulation(g, flat(g), data, o), std::invalid_argument);
        o.sample_stride = 1;
        o.snapshot_times = {2.0};
        CHECK_THROWS_AS(run_simulation(g, flat(g), data, o), std::invalid_argument);
        o.snapshot_times.clear();
        o.safety = 0.0;
        CHECK_THROWS_AS(run_simulation(g, flat(g), data, o), std::invalid_argument);
        o.safety = 1.5;
        CHECK_THROWS_AS(run_simulation(g, flat(g), data, o), std::invalid_argument);
        o.safety = 0.5;
        o.t_end = -1.0;
        CHECK_THROWS_AS(run_simulation(g, flat(g), data, o), std::invalid_argument);

        // With the guard band disabled the front reaches the boundary layer
        // and the run must abort rather than let reflections re-enter.
        SimOptions tight;
        tight.t_end = 0.95;
        tight.guard_layers = 0.0;
        CHECK_THROWS_AS(run_simulation(g, flat(g), data, tight), std::runtime_error);
    }
}

TEST_CASE("spherical pulse in three dimensions") {
    // Strong Huygens: after the transit the centre empties out; the residual
    // is the scheme's dispersive tail. Refining h and dt together by 3 pins
    // the second-order signature at a lattice point shared by all levels.
    SUBCASE("centre amplitude converges at second order") {
        double amps[3];
        const int shared_index[3] = {13, 40, 121}; // same physical point each level
        for (int lev = 0; lev < 3; ++lev) {
            const Grid g = make_grid(3, 7.0, 0.25 / std::pow(3.0, lev));
            const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.0);
            SimOptions o;
            o.t_end = 0.5;
            o.r2 = 1.0;
            o.sample_stride = 1 << 20;
            o.guard_layers = 4.0;
            o.snapshot_times = {0.5};
            const SimResult res = run_simulation(g, flat(g), data, o);
            REQUIRE(res.snapshots.size() == 1);
            const int i = shared_index[lev];
            amps[lev] = res.snapshots[0].u[g.index(i, i, i)];
        }
        const double d01 = std::abs(amps[0] - amps[1]);
        const double d12 = std::abs(amps[1] - amps[2]);
        REQUIRE(d12 > 0.0);
        const double order = std::log(d01 / d12) / std::log(3.0);
        CHECK(order > 1.6);
        CHECK(order < 2.4);
    }

    SUBCASE("centre amplitude collapses after the transit") {
        const Grid g = make_grid(3, 7.0, 1.0 / 12.0);
        const CauchyData data = make_pulse_data(g, 0.6, 1.0, 0.0);
        SimOptions o;
        o.t_end = 1.8;
        o.r2 = 1.0;
        o.sample_stride = 1 << 20;
        o.snapshot_times = {1.8};
        const SimResult res = run_simulation(g, flat(g), data, o);
        const long centre = g.index(41, 41, 41);
        REQUIRE(std::abs(data.u0[centre]) > 0.9);
        CHECK(std::abs(res.snapshots[0].u[centre]) < 0.05 * std::abs(data.u0[centre]));
    }
}

TEST_CASE("generator support widening") {
    const Grid g = make_grid(2, 4.0, 0.25);
    const WavespeedProfile speed = flat(g);

    SUBCASE("one stencil layer of slack suffices") {
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.5);
        double leak = -1.0;
        CHECK(generator_preserves_support(g, speed, data, 1.3, &leak));
        CHECK(leak <= 1e-14);
    }
    SUBCASE("no slack fails") {
        const CauchyData data = make_pulse_data(g, 1.0, 1.0, 0.5);
        double leak = 0.0;
        CHECK(!generator_preserves_support(g, speed, data, 1.01, &leak));
        CHECK(leak > 1e-8);
    }
    SUBCASE("zero data passes trivially") {
        CauchyData z;
        z.u0 = Eigen::VectorXd::Zero(g.size());
        z.u1 = Eigen::VectorXd::Zero(g.size());
        z.support_radius = 0.5;
        CHECK(generator_preserves_support(g, speed, z, 0.6));
    }
    SUBCASE("data flush with the box cannot be contained") {
        // widest pulse the constructor accepts: one stencil application
        // already spills past any radius that still fits the box
        const CauchyData data = make_pulse_data(g, 1.8, 1.0, 0.0);
        CHECK(!generator_preserves_support(g, speed, data, 1.85));
    }
}
