#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ldl/free_resolvent.hpp"
#include "ldl/grid.hpp"
#include "ldl/linalg.hpp"
#include "ldl/perturbed_resolvent.hpp"
#include "ldl/spectral_scan.hpp"
#include "ldl/wavespeed.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace ldl;
using C = std::complex<double>;

namespace {

WavespeedProfile profile(const Grid& g, ProfileKind kind, double amp = 0.5, double rho = 1.0) {
    ProfileParams p;
    p.amplitude = amp;
    p.support_radius = rho;
    return make_wavespeed(kind, p, g);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

TEST_CASE("real-axis scan") {
    const Grid g = make_grid(2, 4.0, 0.25);
    const double chi_r = 1.5, chit_r = 1.9;

    SUBCASE("flat speed reproduces the free norms") {
        const WavespeedProfile flat = profile(g, ProfileKind::constant, 0.0, 0.0);
        const ScanResult scan = scan_real_axis(g, flat, chi_r, chit_r, 0.5, 2.5, 5, false);
        REQUIRE(scan.samples.size() == 5);
        const Eigen::VectorXd w = Eigen::VectorXd::Constant(g.size(), g.weight());
        for (const NormSample& s : scan.samples) {
            CAPTURE(s.lambda.real());
            const KernelMatrix free =
                assemble_free_resolvent(make_spectral_point(s.lambda, 2), g, chi_r);
            const double want = operator_norm(free.M, w, w).value;
            CHECK(s.norm == doctest::Approx(want).epsilon(1e-11));
            CHECK(!s.pole_flag);
        }
    }

    SUBCASE("ordered duplicate-free frequencies, geometric low and linear high") {
        const ScanResult scan =
            scan_real_axis(g, profile(g, ProfileKind::lipschitz_bump), chi_r, chit_r, 0.01, 3.0,
                           12, false);
        REQUIRE(scan.samples.size() == 12);
        std::vector<double> lam;
        for (const NormSample& s : scan.samples) {
            CHECK(s.lambda.imag() == 0.0);
            lam.push_back(s.lambda.real());
        }
        for (size_t k = 1; k < lam.size(); ++k) CHECK(lam[k] > lam[k - 1]);
        CHECK(lam.front() == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(lam.back() == doctest::Approx(3.0).epsilon(1e-12));
        // constant ratio below 1, constant step above
        std::vector<double> ratios, steps;
        for (size_t k = 1; k < lam.size(); ++k) {
            if (lam[k] <= 1.0 + 1e-12) ratios.push_back(lam[k] / lam[k - 1]);
            if (lam[k - 1] >= 1.0 - 1e-12) steps.push_back(lam[k] - lam[k - 1]);
        }
        REQUIRE(ratios.size() >= 2);
        REQUIRE(steps.size() >= 2);
        for (double r : ratios) CHECK(r == doctest::Approx(ratios.front()).epsilon(1e-9));
        for (double st : steps) CHECK(st == doctest::Approx(steps.front()).epsilon(1e-9));
    }

    SUBCASE("low-frequency norms climb as the frequency falls") {
        const ScanResult scan = scan_real_axis(g, profile(g, ProfileKind::lipschitz_bump), chi_r,
                                               chit_r, 1e-3, 0.1, 6, false);
        REQUIRE(scan.samples.size() == 6);
        for (size_t k = 1; k < scan.samples.size(); ++k)
            CHECK(scan.samples[k].norm <= scan.samples[k - 1].norm * 1.02);
        CHECK(scan.samples.front().norm > 1.2 * scan.samples.back().norm);
        // every sample sits in the contraction regime, so the measured
        // regime edge is the top of the scanned range
        CHECK(scan.epsilon0 == doctest::Approx(0.1).epsilon(1e-12));
        for (const NormSample& s : scan.samples) CHECK(s.method == SolveMethod::neumann);
    }

    SUBCASE("no pole flags on the real axis for the preset profiles") {
        for (const ProfileKind kind : {ProfileKind::lipschitz_bump, ProfileKind::annulus_well}) {
            const WavespeedProfile speed = profile(g, kind, 0.4, 1.0);
            const ScanResult scan = scan_real_axis(g, speed, chi_r, chit_r, 0.05, 6.0, 10, false);
            for (const NormSample& s : scan.samples) {
                CAPTURE(to_string(kind));
                CAPTURE(s.lambda.real());
                CHECK(!s.pole_flag);
                CHECK(std::isfinite(s.norm));
                CHECK(s.cond < 1e12);
            }
        }
    }

    SUBCASE("upper-half-plane ceiling checks ride along") {
        const ScanResult scan = scan_real_axis(g, profile(g, ProfileKind::lipschitz_bump), chi_r,
                                               chit_r, 0.5, 2.0, 3, false);
        REQUIRE(scan.ceiling_checks.size() >= 2);
        for (const CeilingSample& cs : scan.ceiling_checks) {
            CAPTURE(cs.lambda.real());
            CAPTURE(cs.lambda.imag());
            CHECK(cs.lambda.imag() > 0.0);
            CHECK(cs.measured <= 1.05 * cs.ceiling);
            CHECK(cs.ok);
        }
    }

    SUBCASE("negative real axis is the mirror of the recorded samples") {
        const WavespeedProfile speed = profile(g, ProfileKind::lipschitz_bump);
        const ScanResult scan = scan_real_axis(g, speed, chi_r, chit_r, 0.5, 2.0, 4, false);
        const NormSample& s = scan.samples[2];
        const SolveReport rep =
            solve_cutoff_resolvent(make_spectral_point(-s.lambda, 2), g, speed, chi_r);
        const Eigen::VectorXd wc = speed.inv_c_sq * g.weight();
        const double mirrored = operator_norm(rep.chi_R_chi, wc, wc).value;
        CHECK(mirrored == doctest::Approx(s.norm).epsilon(1e-10));
    }

    SUBCASE("norms move continuously between neighbouring samples") {
        const ScanResult scan = scan_real_axis(g, profile(g, ProfileKind::lipschitz_bump), chi_r,
                                               chit_r, 1.0, 3.0, 9, false);
        for (size_t k = 1; k < scan.samples.size(); ++k) {
            const double a = scan.samples[k - 1].norm, b = scan.samples[k].norm;
            CHECK(std::abs(b - a) <= 0.5 * std::max(a, b));
        }
    }

    SUBCASE("gradient-augmented samples carry a finite gradient norm") {
        const ScanResult scan = scan_real_axis(g, profile(g, ProfileKind::lipschitz_bump), chi_r,
                                               chit_r, 0.8, 1.2, 2, true);
        for (const NormSample& s : scan.samples) {
            CHECK(std::isfinite(s.grad_norm));
            CHECK(s.grad_norm > 0.0);
        }
        const ScanResult plain = scan_real_axis(g, profile(g, ProfileKind::lipschitz_bump), chi_r,
                                                chit_r, 0.8, 1.2, 2, false);
        for (const NormSample& s : plain.samples) CHECK(std::isnan(s.grad_norm));
    }

    SUBCASE("input validation") {
        const WavespeedProfile speed = profile(g, ProfileKind::lipschitz_bump);
        CHECK_THROWS_AS(scan_real_axis(g, speed, chi_r, chit_r, 0.0, 1.0, 4, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_real_axis(g, speed, chi_r, chit_r, -0.5, 1.0, 4, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_real_axis(g, speed, chi_r, chit_r, 2.0, 1.0, 4, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_real_axis(g, speed, chi_r, chit_r, 0.5, 1.0, 1, false),
                        std::invalid_argument);
    }
}

TEST_CASE("lower half-plane strip") {
    const Grid g = make_grid(2, 4.0, 0.25);
    const double chi_r = 1.5;

    SUBCASE("flat speed is pole-free through the window") {
        const ScanResult scan = scan_lower_halfplane(g, profile(g, ProfileKind::constant, 0.0, 0.0),
                                                     chi_r, 0.5, 2.0, 4, 0.05, 0.2, 3);
        REQUIRE(scan.samples.size() == 12);
        REQUIRE(scan.re_columns.size() == 4);
        for (const NormSample& s : scan.samples) {
            CHECK(!s.pole_flag);
            CHECK(s.lambda.imag() < 0.0);
            CHECK(std::isfinite(s.norm));
        }
        for (double d : scan.pole_free_depth) CHECK(d == doctest::Approx(0.2).epsilon(1e-12));
    }

    SUBCASE("samples are sorted and duplicate-free") {
        const ScanResult scan =
            scan_lower_halfplane(g, profile(g, ProfileKind::lipschitz_bump), chi_r, 0.5, 1.5, 3,
                                 0.05, 0.2, 3);
        for (size_t k = 1; k < scan.samples.size(); ++k) {
            const C a = scan.samples[k - 1].lambda, b = scan.samples[k].lambda;
            const bool ordered =
                a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
            CHECK(ordered);
        }
    }

    SUBCASE("bump keeps a nonempty pole-free strip at every column") {
        const ScanResult scan = scan_lower_halfplane(g, profile(g, ProfileKind::lipschitz_bump),
                                                     chi_r, 0.5, 2.0, 4, 0.05, 0.3, 3);
        REQUIRE(scan.pole_free_depth.size() == 4);
        for (double d : scan.pole_free_depth) CHECK(d > 0.0);
    }

    SUBCASE("trapping-like well never beats the bump") {
        const ScanResult well = scan_lower_halfplane(g, profile(g, ProfileKind::annulus_well, 0.4),
                                                     chi_r, 0.5, 2.0, 3, 0.05, 0.3, 3);
        const ScanResult bump = scan_lower_halfplane(g, profile(g, ProfileKind::lipschitz_bump, 0.4),
                                                     chi_r, 0.5, 2.0, 3, 0.05, 0.3, 3);
        double well_min = 1e300, bump_min = 1e300;
        for (double d : well.pole_free_depth) well_min = std::min(well_min, d);
        for (double d : bump.pole_free_depth) bump_min = std::min(bump_min, d);
        CHECK(well_min <= bump_min);
    }

    SUBCASE("region must stay clear of the continuation cut") {
        const WavespeedProfile speed = profile(g, ProfileKind::lipschitz_bump);
        CHECK_THROWS_AS(scan_lower_halfplane(g, speed, chi_r, 0.0, 1.0, 2, 0.1, 0.2, 2),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_lower_halfplane(g, speed, chi_r, -1.0, 1.0, 2, 0.1, 0.2, 2),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_lower_halfplane(g, speed, chi_r, 0.5, 1.0, 2, 0.0, 0.2, 2),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_lower_halfplane(g, speed, chi_r, 0.5, 1.0, 0, 0.1, 0.2, 2),
                        std::invalid_argument);
    }
}

TEST_CASE("scan report serialization") {
    SUBCASE("empty scan writes the bare header") {
        std::ostringstream os;
        write_scan_csv(os, ScanResult{});
        CHECK(os.str() == "re_lambda,im_lambda,norm,grad_norm,pole_flag,cond,method\n");
    }

    SUBCASE("rows are parseable and byte-stable") {
        const Grid g = make_grid(2, 4.0, 0.25);
        const ScanResult scan = scan_real_axis(g, profile(g, ProfileKind::lipschitz_bump), 1.5,
                                               1.9, 0.5, 1.5, 3, false);
        std::ostringstream a, b;
        write_scan_csv(a, scan);
        write_scan_csv(b, scan);
        CHECK(a.str() == b.str());

        std::istringstream in(a.str());
        std::string line;
        REQUIRE(std::getline(in, line));
        CHECK(line == "re_lambda,im_lambda,norm,grad_norm,pole_flag,cond,method");
        size_t rows = 0;
        while (std::getline(in, line)) {
            const std::vector<std::string> f = split(line, ',');
            REQUIRE(f.size() == 7);
            const double re = std::strtod(f[0].c_str(), nullptr);
            CHECK(re == scan.samples[rows].lambda.real()); // %.17g round-trips exactly
            CHECK(std::strtod(f[1].c_str(), nullptr) == 0.0);
            CHECK(std::strtod(f[2].c_str(), nullptr) == doctest::Approx(scan.samples[rows].norm));
            CHECK(f[3] == "nan");
            CHECK((f[4] == "0" || f[4] == "1"));
            CHECK((f[6] == "direct" || f[6] == "neumann"));
            ++rows;
        }
        CHECK(rows == scan.samples.size());
    }
}
