#include <doctest.h>

#include <cmath>
#include <vector>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"
#include "negspec/kernels.hpp"
#include "negspec/regquad.hpp"
#include "negspec/thermal.hpp"

using namespace negspec;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("image sum at the origin") {
    // (2/pi^4) 3 zeta(8) = pi^4 / 1575
    CHECK(rel(thermal_corr_imagesum(0.0, ThermalState(1.0)), 0.0618470419263507538) < 1e-11);
    // scaling C_T(0; beta) = beta^-8 C_T(0; 1)
    CHECK(rel(thermal_corr_imagesum(0.0, ThermalState(2.0)), 0.0618470419263507538 / 256.0) < 1e-11);
}

TEST_CASE("image sum equals the sum over imaginary time images") {
    for (double r : {0.3, 1.0, 2.5}) {
        for (double beta : {0.7, 1.0, 2.0}) {
            const auto d = thermal_corr_imagesum_detailed(r, ThermalState(beta));
            NeumaierSum direct;
            for (int n = 1; n <= 200000; ++n)
                direct.add(2.0 * em_corr_complex({0.0, r, n * beta}).real());
            CHECK(rel(d.value, direct.value()) < 1e-10);
            CHECK(d.terms > 0);
            CHECK(d.tail_bound > 0.0);
        }
    }
}

TEST_CASE("image sum controls") {
    CHECK_THROWS_AS(thermal_corr_imagesum(1.0, ThermalState(1.0), {10, 1e-30}), TailNotConverged);
    CHECK_THROWS_AS(thermal_corr_imagesum(1.0, ThermalState(1.0), {0, 1e-12}), DomainError);
    CHECK_THROWS_AS(thermal_corr_imagesum(1.0, ThermalState(1.0), {100, 0.0}), DomainError);
    CHECK_THROWS_AS(thermal_corr_imagesum(-1.0, ThermalState(1.0)), DomainError);
}

TEST_CASE("power decomposition into images") {
    for (double k : {0.3, 1.0, 4.0}) {
        for (double beta : {0.5, 1.0, 3.0}) {
            const ThermalState st(beta);
            const auto t = thermal_power_image_decomposition(k, st, 400);
            REQUIRE(t.size() == 400);
            NeumaierSum s;
            for (double x : t)
                s.add(x);
            CHECK(rel(s.value(), thermal_power(k, st)) < 1e-12);
            CHECK(rel(t[0] / t[1], 2.0 * std::exp(beta * k)) < 1e-13);
        }
    }
    CHECK_THROWS_AS(thermal_power_image_decomposition(1.0, ThermalState(1.0), 0), DomainError);
    CHECK_THROWS_AS(thermal_power_image_decomposition(0.0, ThermalState(1.0), 3), DomainError);
}

TEST_CASE("crossover temperature") {
    CHECK(rel(crossover_temperature_closed_form(1.0), 1.03904346061751376880) < 1e-15);
    for (double k : {0.5, 1.0, 2.0, 7.0}) {
        const double tc = crossover_temperature(k);
        CHECK(rel(tc, crossover_temperature_closed_form(k)) < 1e-12);
        CHECK(rel(tc / k, crossover_temperature(1.0)) < 1e-12);
    }
    CHECK_THROWS_AS(crossover_temperature(0.0), DomainError);
    CHECK_THROWS_AS(crossover_temperature_closed_form(-2.0), DomainError);
}

TEST_CASE("fig1 table") {
    std::vector<double> T;
    for (int i = 0; i < 1000; ++i)
        T.push_back(0.1 + (3.0 - 0.1) * i / 999.0);
    const auto tables = fig1_table(1.0, T);
    REQUIRE(tables.size() == 3);
    CHECK(tables[0].channel == Channel::vacuum);
    CHECK(tables[1].channel == Channel::thermal);
    CHECK(tables[2].channel == Channel::total);
    int changes = 0;
    double where = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        CHECK(tables[0].rows[i].value == em_ft_kernel(0.0, 1.0));
        CHECK(tables[2].rows[i].value == tables[0].rows[i].value + tables[1].rows[i].value);
        if (i > 0) {
            CHECK(tables[1].rows[i].value > tables[1].rows[i - 1].value);
            if ((tables[2].rows[i].value > 0.0) != (tables[2].rows[i - 1].value > 0.0)) {
                ++changes;
                where = T[i];
            }
        }
    }
    CHECK(changes == 1);
    CHECK(std::abs(where - 1.039) < 3.0 / 999.0);
    CHECK(tables[2].rows.front().value < 0.0);
    CHECK(tables[2].rows.back().value > 0.0);
    CHECK_THROWS_AS(fig1_table(-1.0, T), DomainError);
}
