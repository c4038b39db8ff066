#include <doctest.h>

#include <cmath>
#include <complex>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"

using namespace negspec;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("sinc") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(rel(sinc(1.0), std::sin(1.0)) < 1e-15);
    CHECK(rel(sinc(-2.5), std::sin(2.5) / 2.5) < 1e-15);
    // both sides of the series switch
    const double x = 2.0 * series_tol;
    CHECK(rel(sinc(x), std::sin(x) / x) < 1e-14);
    CHECK(rel(sinc(0.5 * series_tol), 1.0 - 0.25 * series_tol * series_tol / 6.0) < 1e-15);
}

TEST_CASE("scalar correlator") {
    CHECK(rel(scalar_corr({0.0, 1.0}), 1.0 / (8.0 * pi4)) < 1e-15);
    CHECK(rel(scalar_corr({1.0, 2.0}), 1.0 / (8.0 * pi4 * 9.0)) < 1e-15);
    CHECK(rel(scalar_corr({1.0, 0.0}), 1.0 / (8.0 * pi4)) < 1e-15);
    CHECK_THROWS_AS(scalar_corr({1.0, 1.0}), LightConeSingularity);
    CHECK_THROWS_AS(scalar_corr({0.0, 0.0}), LightConeSingularity);
    CHECK_THROWS_AS(scalar_corr({2.0, 2.0 * (1.0 + 1e-13)}), LightConeSingularity);
    CHECK_NOTHROW(scalar_corr({2.0, 2.0 * (1.0 + 1e-10)}));
}

TEST_CASE("scalar correlator on the complex path") {
    // C(i n b, r) with the sign conventions of the real path at im_shift = 0
    const SpacetimeSeparation s{0.7, 1.9, 0.0};
    CHECK(std::abs(scalar_corr_complex(s).real() - scalar_corr(s)) < 1e-18);
    CHECK(scalar_corr_complex(s).imag() == 0.0);
    const SpacetimeSeparation im{0.0, 1.0, 2.0};
    const double expect = 1.0 / (8.0 * pi4 * 25.0); // r^2 - (2i)^2 = 5
    CHECK(rel(scalar_corr_complex(im).real(), expect) < 1e-14);
}

TEST_CASE("scalar Fourier kernel") {
    CHECK(rel(scalar_ft_kernel(0.0, 1.0), -1.0 / (64.0 * pi5)) < 1e-15);
    CHECK(scalar_ft_kernel(0.7, 0.0) == 0.0);
    CHECK(std::abs(scalar_ft_kernel(pi, 1.0)) < 1e-20);
    CHECK(rel(scalar_ft_kernel(1.0, 1.0), -std::sin(1.0) / (64.0 * pi5)) < 1e-15);
    CHECK(scalar_ft_kernel(0.3, 2.0) == scalar_ft_kernel(-0.3, 2.0));
}

TEST_CASE("energy density correlator") {
    CHECK(rel(em_corr({0.0, 1.0}), 3.0 / pi4) < 1e-15);
    CHECK(rel(em_corr({1.0, 0.0}), 3.0 / pi4) < 1e-15);
    CHECK_THROWS_AS(em_corr({1.0, 1.0}), LightConeSingularity);
    // (1 + 12)(4 + 3) / (pi^4 3^6)
    CHECK(rel(em_corr({1.0, 2.0}), 13.0 * 7.0 / (pi4 * 729.0)) < 1e-15);
}

TEST_CASE("energy density Fourier kernel") {
    CHECK(rel(em_ft_kernel(0.0, 1.0), -1.0 / (960.0 * pi5)) < 1e-15);
    CHECK(rel(em_ft_kernel(0.0, 2.0), -32.0 / (960.0 * pi5)) < 1e-15);
    CHECK(std::abs(em_ft_kernel(pi, 1.0)) < 1e-20);
    CHECK(rel(em_ft_kernel(0.5, 3.0), -81.0 * std::sin(1.5) / (960.0 * pi5 * 0.5)) < 1e-14);
}

TEST_CASE("thermal power") {
    CHECK(rel(thermal_power(1.0, ThermalState(1.0)), 3.12258742514194157e-6) < 1e-14);
    CHECK(thermal_power(50.0, ThermalState(1.0)) > 0.0);
    CHECK(rel(thermal_power(50.0, ThermalState(1.0)),
              std::pow(50.0, 4) * std::exp(-50.0) / (480.0 * pi5)) < 1e-15);
    CHECK(thermal_power(1e-8, ThermalState(3.0)) > 0.0);
    CHECK_THROWS_AS(thermal_power(0.0, ThermalState(1.0)), DomainError);
    CHECK_THROWS_AS(thermal_power(-1.0, ThermalState(1.0)), DomainError);
    CHECK_THROWS_AS(ThermalState(0.0), DomainError);
    CHECK_THROWS_AS(ThermalState::from_temperature(-1.0), DomainError);
    CHECK(ThermalState::from_temperature(4.0).beta == 0.25);
}

TEST_CASE("thermal power temperature derivative") {
    const double k = 1.3, T = 0.9, h = 1e-5;
    const double fd = (thermal_power(k, ThermalState::from_temperature(T + h)) -
                       thermal_power(k, ThermalState::from_temperature(T - h))) /
                      (2.0 * h);
    CHECK(rel(thermal_power_dT(k, ThermalState::from_temperature(T)), fd) < 1e-8);
}

TEST_CASE("total power changes sign with temperature") {
    CHECK(em_power_total(1.0, ThermalState::from_temperature(2.0)) > 0.0);
    CHECK(em_power_total(1.0, ThermalState::from_temperature(0.5)) < 0.0);
    const double tc = 1.03904346061751376880;
    const double p = em_power_total(1.0, ThermalState::from_temperature(tc));
    CHECK(std::abs(p) < 1e-14 * std::abs(em_ft_kernel(0.0, 1.0)));
}

TEST_CASE("temporal power") {
    CHECK(temporal_power(0.0) == 0.0);
    CHECK(rel(temporal_power(1.0), 1.80930685075603163e-4) < 1e-15);
    CHECK(rel(temporal_power(2.0), 128.0 / (560.0 * pi2)) < 1e-15);
    CHECK_THROWS_AS(temporal_power(-1.0), DomainError);
}

TEST_CASE("inflation power") {
    const InflationParams p{1.0, 1.0, 1.0};
    CHECK(rel(inflation_power(1.0, p), 0.00511089084348982553) < 1e-14);
    CHECK(rel(sign_change_wavenumber(p), 4.0 * pi / 5.0) < 1e-15);
    CHECK(std::abs(inflation_power(sign_change_wavenumber(p), p)) < 1e-17);
    const InflationParams q{2.0, 0.5, 3.0};
    const double limit = -q.lP * q.H * std::pow(q.S, 3) / inflation_denominator;
    CHECK(inflation_power(1e9, q) < 0.0);
    CHECK(rel(inflation_power(1e9, q), limit) < 1e-8);
    CHECK_THROWS_AS(inflation_power(0.0, p), DomainError);
    CHECK_THROWS_AS(inflation_power(1.0, InflationParams{1.0, -1.0, 1.0}), DomainError);
}
