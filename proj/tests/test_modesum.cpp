#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"
#include "negspec/modesum.hpp"

using namespace negspec;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
const double norm = 2.0 * std::pow(2.0 * pi, 6);
} // namespace

TEST_CASE("config validation") {
    ModeSumConfig c;
    CHECK(std::abs(c.spacing() - 1.0) < 1e-15);
    CHECK(std::abs(c.k_magnitude() - 1.0) < 1e-15);
    CHECK_NOTHROW(c.validate());
    c.cutoff = 0.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = ModeSumConfig{};
    c.k_index = {20, 0, 0};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = ModeSumConfig{};
    c.box_side = -1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK_THROWS_AS(discrete_mode_corr(ModeSumConfig{}, 0.0, -1.0), DomainError);
}

TEST_CASE("lattice sum at coincident times grows with the cutoff") {
    ModeSumConfig c;
    double prev = 0.0;
    for (double cut : {2.0, 4.0, 8.0, 16.0}) {
        c.cutoff = cut;
        const double v = discrete_mode_corr(c, 0.0);
        CHECK(v > 0.0);
        CHECK(v > prev);
        prev = v;
    }
    const auto scan = divergence_scan(ModeSumConfig{}, 0.0, {10.0, 20.0, 40.0});
    REQUIRE(scan.rows.size() == 3);
    CHECK(std::abs(scan.log_log_slope - 1.0) < 0.1);
    CHECK_THROWS_AS(divergence_scan(ModeSumConfig{}, 0.0, {}), DomainError);
    CHECK_THROWS_AS(divergence_scan(ModeSumConfig{}, 0.0, {20.0, 10.0}), DomainError);
}

TEST_CASE("lattice sum symmetries") {
    ModeSumConfig c;
    c.cutoff = 6.0;
    for (double tau : {0.3, 1.1}) {
        CHECK(discrete_mode_corr(c, tau, 0.2) == doctest::Approx(discrete_mode_corr(c, -tau, 0.2)).epsilon(1e-13));
        ModeSumConfig m = c;
        m.k_index = {-1, 0, 0};
        CHECK(discrete_mode_corr(m, tau, 0.2) == doctest::Approx(discrete_mode_corr(c, tau, 0.2)).epsilon(1e-13));
        ModeSumConfig y = c;
        y.k_index = {0, 1, 0};
        CHECK(discrete_mode_corr(y, tau, 0.2) == doctest::Approx(discrete_mode_corr(c, tau, 0.2)).epsilon(1e-13));
    }
}

TEST_CASE("regulated continuum at coincident times") {
    // 1/alpha law: alpha * value -> 4 pi / norm
    for (double k : {0.5, 1.0, 3.0}) {
        const double a = 1e-6;
        CHECK(rel(a * continuum_mode_regulated(k, 0.0, a), 4.0 * pi / norm) < 1e-5);
    }
    // continuity in tau
    for (double a : {0.05, 0.5}) {
        const double at0 = continuum_mode_regulated(1.0, 0.0, a);
        CHECK(rel(continuum_mode_regulated(1.0, 1e-9, a), at0) < 1e-6);
    }
    CHECK_THROWS_AS(continuum_mode_coefficient(1.0, 0.0), ExtrapolationDiverged);
    CHECK_THROWS_AS(continuum_mode_regulated(1.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(continuum_mode_regulated(0.0, 0.5, 0.1), DomainError);
}

TEST_CASE("continuum limit reproduces the scalar kernel") {
    CHECK(rel(continuum_mode_coefficient(1.0, 1.0), scalar_ft_kernel(1.0, 1.0)) < 1e-6);
    CHECK(rel(continuum_mode_coefficient(1.0, 0.5), scalar_ft_kernel(0.5, 1.0)) < 1e-6);
    CHECK(std::abs(continuum_mode_coefficient(1.0, pi)) < 1e-6 * std::abs(scalar_ft_kernel(0.0, 1.0)));
    // -sin(k tau)/tau is symmetric under k <-> tau up to the factor k/tau
    CHECK(rel(continuum_mode_coefficient(0.5, 1.0), continuum_mode_coefficient(1.0, 0.5) * 0.5) < 1e-6);
    CHECK(rel(continuum_mode_coefficient(1.0, -0.7), continuum_mode_coefficient(1.0, 0.7)) < 1e-10);
    CHECK_THROWS_AS(continuum_mode_coefficient(1.0, 1.0, std::nullopt, ModePhase::difference),
                    ExtrapolationDiverged);
}

TEST_CASE("lattice sum approaches the regulated continuum") {
    const double tau = 0.7, alpha = 1.0;
    const double target = continuum_mode_regulated(1.0, tau, alpha);
    // the dropped singular points leave a first order error in the spacing 1/m
    std::vector<double> err;
    for (int m : {2, 3, 4}) {
        ModeSumConfig c;
        c.box_side = 2.0 * pi * m;
        c.k_index = {m, 0, 0};
        c.cutoff = 30.0;
        err.push_back(rel(discrete_mode_corr(c, tau, alpha) / std::pow(m, 3), target));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(err[2] / err[0] < 0.6);
}

TEST_CASE("order of limits report") {
    const auto rep = order_of_limits_report(1.0, default_tau_nodes(), {10.0, 20.0, 40.0});
    CHECK(rep.tau0_continuum_diverged);
    CHECK(rep.difference_phase_diverged);
    CHECK(rep.tau0_scan.log_log_slope > 0.9);
    REQUIRE(rep.continuum.size() == 5);
    for (const auto& r : rep.continuum)
        CHECK(r.relative_error < 1e-6);
    CHECK(rep.tau_limit_relative_error < 1e-5);
    CHECK(rep.tau_limit_reference == scalar_ft_kernel(0.0, 1.0));

    const auto again = order_of_limits_report(1.0, default_tau_nodes(), {10.0, 20.0, 40.0});
    CHECK(again.summary() == rep.summary());
    std::ostringstream a, b;
    rep.to_csv().write(a);
    again.to_csv().write(b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("tau_to_zero") != std::string::npos);

    CHECK_THROWS_AS(order_of_limits_report(1.0, {0.5}, {10.0}), DomainError);
    CHECK_THROWS_AS(order_of_limits_report(1.0, {0.5, 0.0}, {10.0}), DomainError);
    CHECK_THROWS_AS(order_of_limits_report(-1.0, {0.5, 1.0}, {10.0}), DomainError);
}
