#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"
#include "negspec/spectra.hpp"

using namespace negspec;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("default schedules") {
    const auto inv = default_inverse_schedule({1.0, 3.0, 0.0});
    CHECK(inv.values.front() == 1.0);
    CHECK(inv.values.size() == 6);
    CHECK(default_forward_schedule(4.0).values.front() == 0.02);
    CHECK(default_forward_schedule(0.5).values.front() == 0.01);
    CHECK(default_temporal_schedule(2.0).values.front() == 0.8);
    CHECK(default_temporal_schedule(0.0).values.front() == 1.6);
}

TEST_CASE("inverse transform of the scalar kernel") {
    const double got = inverse_spatial_ft(scalar_ft_kernel, {1.0, 2.0, 0.0});
    CHECK(rel(got, 1.0 / (72.0 * pi4)) < 1e-4);
    const double in = inverse_spatial_ft(scalar_ft_kernel, {2.0, 0.5, 0.0});
    CHECK(rel(in, scalar_corr({2.0, 0.5})) < 1e-4);
    // tau -> -tau
    CHECK(rel(inverse_spatial_ft(scalar_ft_kernel, {-1.0, 2.0, 0.0}), got) < 1e-12);
}

TEST_CASE("inverse transform of the energy density kernel") {
    const auto d = inverse_spatial_ft_detailed(em_ft_kernel, {1.0, 2.0, 0.0});
    CHECK(rel(d.value, em_corr({1.0, 2.0})) < 1e-3);
    CHECK(d.evaluations > 0);
}

TEST_CASE("inverse transform rejects bad separations") {
    CHECK_THROWS_AS(inverse_spatial_ft(scalar_ft_kernel, {1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(inverse_spatial_ft(scalar_ft_kernel, {0.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(inverse_spatial_ft(scalar_ft_kernel, {1.0, 1.0, 0.0}), LightConeSingularity);
}

TEST_CASE("forward transform of a Gaussian") {
    for (double k : {0.3, 1.0, 2.5}) {
        const double got = forward_spatial_ft([](double u) { return std::exp(-0.5 * u * u); }, k);
        const double exact = std::exp(-0.5 * k * k) / std::pow(2.0 * pi, 1.5);
        CHECK(rel(got, exact) < 1e-8);
    }
    CHECK_THROWS_AS(forward_spatial_ft([](double) { return 1.0; }, 0.0), DomainError);
}

TEST_CASE("forward transform of the thermal correlator") {
    const ThermalState st(1.0);
    // the image sum transforms term by term into the thermal power
    for (double k : {0.5, 2.0}) {
        const double got = forward_spatial_ft(
            [&](double u) {
                double s = 0.0;
                for (int n = 1; n <= 2000; ++n)
                    s += 2.0 * em_corr_complex({0.0, u, n * st.beta}).real();
                return s;
            },
            k);
        CHECK(rel(got, thermal_power(k, st)) < 1e-4);
    }
}

TEST_CASE("temporal transform at the origin") {
    // the correlator is analytic above the real axis and decays like tau^-8
    const double zero = temporal_ft(em_corr_at_origin, 0.0);
    CHECK(std::abs(zero) < 1e-8);

    std::vector<double> w, p;
    for (double x : {1.0, 2.0, 4.0}) {
        w.push_back(x);
        p.push_back(temporal_ft(em_corr_at_origin, x));
    }
    const auto fit = fit_power_law(w, p);
    CHECK(std::abs(fit.exponent - 7.0) < 0.05);
    CHECK(fit.coefficient > 0.0);
    CHECK_THROWS_AS(temporal_ft(em_corr_at_origin, -1.0), DomainError);
}

TEST_CASE("power law fit") {
    const std::vector<double> x{1.0, 2.0, 3.0, 5.0}, y{3.0, 24.0, 81.0, 375.0};
    const auto f = fit_power_law(x, y);
    CHECK(std::abs(f.exponent - 3.0) < 1e-13);
    CHECK(std::abs(f.coefficient - 3.0) < 1e-12);
    CHECK_THROWS_AS(fit_power_law(std::vector<double>{1.0}, std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(fit_power_law(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, -1.0}),
                    DomainError);
}

TEST_CASE("band limited correlator") {
    const RealFunction one = [](double) { return 1.0; };
    CHECK(rel(band_limited_corr(one, {0.0, 2.0}, 0.0), 4.0 * pi * 8.0 / 3.0) < 1e-13);
    // 4 pi / r int_0^1 k sin(kr) dk = 4 pi (sin r - r cos r) / r^3
    const double r = 1.7;
    CHECK(rel(band_limited_corr(one, {0.0, 1.0}, r), 4.0 * pi * (std::sin(r) - r * std::cos(r)) / (r * r * r)) <
          1e-12);
    const RealFunction p0 = [](double k) { return em_ft_kernel(0.0, k); };
    CHECK(rel(band_limited_corr(p0, {1.0, 2.0}, 3.0), 1.765758231563808652e-4) < 1e-12);
    CHECK_THROWS_AS(band_limited_corr(one, {2.0, 1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(band_limited_corr(one, {0.0, 1.0}, -1.0), DomainError);
}

TEST_CASE("negating the spectrum swaps maxima and minima") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i)
        grid.push_back(0.05 + 0.05 * i);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = U(rng), b = 1.0 + U(rng);
        const RealFunction P = [=](double k) { return a + k * k * std::exp(-b * k); };
        const RealFunction N = [&](double k) { return -P(k); };
        const BandLimit band{0.2 * U(rng), 1.0 + 2.0 * U(rng)};
        const auto x = extremum_interchange_report(P, band, grid);
        const auto y = extremum_interchange_report(N, band, grid);
        REQUIRE(x.size() == y.size());
        CHECK(!x.empty());
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i].r == y[i].r);
            CHECK(x[i].value == -y[i].value);
            CHECK(x[i].kind != y[i].kind);
        }
    }
    const std::vector<double> short_grid{1.0, 2.0};
    CHECK(extremum_interchange_report([](double) { return 1.0; }, {0.0, 1.0}, short_grid).empty());
}
