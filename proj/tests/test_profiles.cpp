#include <doctest.h>

#include <cmath>
#include <random>

#include "negspec/profiles.hpp"
#include "negspec/regquad.hpp"
#include "negspec/smeared.hpp"

using namespace negspec;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("polynomial algebra") {
    const Polynomial p{{1.0, -2.0, 3.0}};
    CHECK(p(2.0) == 9.0);
    CHECK(p.derivative().c == std::vector<double>{-2.0, 6.0});
    CHECK(p.antiderivative().c == std::vector<double>{0.0, 1.0, -1.0, 1.0});
    CHECK(p.times_x()(2.0) == 18.0);
    CHECK((p + Polynomial{{0.0, 0.0, 0.0, 1.0}})(2.0) == 17.0);
    CHECK((p * 2.0)(2.0) == 18.0);
    CHECK((p * p)(1.5) == p(1.5) * p(1.5));
    CHECK((p * Polynomial{}).c.empty());
    const auto b = Polynomial::binomial_power(1.0, -1.0, 6);
    CHECK(b.c.size() == 7);
    CHECK(b(0.25) == doctest::Approx(std::pow(0.75, 6)).epsilon(1e-15));
    CHECK(Polynomial{}(3.0) == 0.0);
}

TEST_CASE("time profile derivatives") {
    const TimeProfile g{{{1.0}}, 0.5};
    const auto d2 = g.second_derivative();
    for (double t : {0.0, 0.4, -1.3, 2.2})
        CHECK(d2(t) == doctest::Approx((t * t - 1.0) * std::exp(-0.5 * t * t)).epsilon(1e-14));
    // bump (1 - t^2)^6 on |t| < 1
    Polynomial six{{1.0}};
    for (int i = 0; i < 6; ++i)
        six = six * Polynomial{{1.0, 0.0, -1.0}};
    const TimeProfile bump{six, 0.0, 1.0};
    CHECK(bump(1.0) == 0.0);
    CHECK(bump(-1.5) == 0.0);
    const auto bd = bump.second_derivative();
    const double h = 1e-4;
    for (double t : {0.0, 0.3, -0.8}) {
        const double fd = (bump(t + h) - 2.0 * bump(t) + bump(t - h)) / (h * h);
        CHECK(std::abs(bd(t) - fd) < 1e-5);
    }
    // a total derivative integrates to zero
    CHECK(std::abs(integrate([&](double t) { return bd(t); }, -1.0, 1.0).value) < 1e-13);
    CHECK(std::abs(integrate_semi_infinite([&](double t) { return d2(t); }, 0.0).value) < 1e-12);
}

TEST_CASE("radial profile laplacian and moment") {
    const RadialProfile g{{{1.0}}, 0.5};
    const auto lap = g.laplacian();
    for (double r : {0.0, 0.7, 2.0})
        CHECK(lap(r) == doctest::Approx((r * r - 3.0) * std::exp(-0.5 * r * r)).epsilon(1e-14));
    // int_0^inf r^2 lap dr vanishes
    CHECK(std::abs(integrate_semi_infinite([&](double r) { return r * r * lap(r); }, 0.0).value) < 1e-12);
    for (double r : {0.5, 1.0, 3.0})
        CHECK(rel(g.moment(r), 1.0 - std::exp(-0.5 * r * r)) < 1e-13);

    const RadialProfile poly{{{1.0, -2.0, 1.0}}, 0.0, 1.0}; // (1 - rho^2)^2
    for (double r : {0.2, 0.9}) {
        const double q = integrate([&](double v) { return v * poly(v); }, 0.0, r).value;
        CHECK(rel(poly.moment(r), q) < 1e-13);
    }
    CHECK(poly.moment(2.0) == poly.moment(1.0));
    CHECK(poly(1.0) == 0.0);
}

TEST_CASE("Gaussian operator image") {
    TestFunctionSpec s;
    s.temporal_width = 0.7;
    s.spatial_width = 1.3;
    s.amplitude = 2.0;
    const auto img = smeared_operator_image(s);
    CHECK(rel(img({0.0, 0.0, 0.0, 0.0}), -3.258332148377014753) < 1e-13);
    CHECK(rel(img({0.3, 0.4, -0.2, 0.5}), -2.634515836495464331) < 1e-13);

    TestFunctionSpec moved = s;
    moved.center = {1.0, -2.0, 0.5, 3.0};
    CHECK(rel(smeared_operator_image(moved)({1.3, -1.6, 0.3, 3.5}), -2.634515836495464331) < 1e-13);

    TestFunctionSpec doubled = s;
    doubled.amplitude = 4.0;
    CHECK(smeared_operator_image(doubled)({0.3, 0.4, -0.2, 0.5}) ==
          doctest::Approx(2.0 * img({0.3, 0.4, -0.2, 0.5})).epsilon(1e-15));
}

TEST_CASE("bump image by differences matches the exact image") {
    TestFunctionSpec s;
    s.kind = TestFunctionKind::compact_bump;
    s.temporal_width = 0.5;
    s.spatial_width = 0.4;
    s.center = {0.1, 0.0, 0.2, -0.1};
    const auto fd = smeared_operator_image(s);
    const auto exact = smeared_operator_image_exact(s);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double scale = std::abs(exact(s.center));
    for (int i = 0; i < 30; ++i) {
        const Point4 x{s.center[0] + 1.8 * U(rng), s.center[1] + 0.8 * U(rng), s.center[2] + 0.8 * U(rng),
                       s.center[3] + 0.8 * U(rng)};
        CHECK(std::abs(fd(x) - exact(x)) < 1e-6 * scale);
    }
    CHECK(exact({5.0, 0.0, 0.0, 0.0}) == 0.0);
}
