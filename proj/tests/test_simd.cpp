#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "negspec/errors.hpp"
#include "negspec/simd/dispatch.hpp"

using namespace negspec;
using namespace negspec::simd;

namespace {

std::vector<double> modes(Isa isa, const std::vector<double>& nx, const std::vector<double>& ny,
                          const std::vector<double>& nz, const ModeTermParams& p) {
    std::vector<double> out(nx.size());
    mode_terms(isa, nx.data(), ny.data(), nz.data(), nx.size(), p, out.data());
    return out;
}

double close(double a, double b) { return std::abs(a - b) <= 1e-13 * std::max(std::abs(a), std::abs(b)) + 1e-300; }

} // namespace

TEST_CASE("scalar mode terms match the formula") {
    const ModeTermParams p{0.5, 2.0, 0.0, 0.0, 0.7, 0.1, 1.0};
    const std::vector<double> nx{1.0, 0.0, -2.0, -2.0}, ny{0.0, 0.0, 1.0, 0.0}, nz{0.0, 0.0, 3.0, 0.0};
    const auto out = modes(Isa::scalar, nx, ny, nz, p);
    const double w = 0.5, w1 = 0.5 * 3.0;
    CHECK(close(out[0], std::cos((w1 + w) * 0.7) * std::exp(-0.1 * w) / (w * w1)));
    CHECK(out[1] == 0.0); // zero mode
    CHECK(out[3] == 0.0); // q = -k, so w1 vanishes
    const double w2 = 0.5 * std::sqrt(14.0), w12 = 0.5 * std::sqrt(0.0 + 1.0 + 9.0);
    CHECK(close(out[2], std::cos((w12 + w2) * 0.7) * std::exp(-0.1 * w2) / (w2 * w12)));

    ModeTermParams d = p;
    d.phase_sign = -1.0;
    const auto diff = modes(Isa::scalar, nx, ny, nz, d);
    CHECK(close(diff[0], std::cos((w1 - w) * 0.7) * std::exp(-0.1 * w) / (w * w1)));
}

TEST_CASE("vector kernels agree with scalar ones") {
    if (!isa_supported(Isa::avx2)) {
        MESSAGE("avx2 not available, skipping");
        return;
    }
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> I(-9, 9);
    std::uniform_real_distribution<double> U(0.0, 2.0);
    for (std::size_t count : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{17}, std::size_t{1000}}) {
        std::vector<double> nx(count), ny(count), nz(count);
        for (std::size_t i = 0; i < count; ++i) {
            nx[i] = I(rng);
            ny[i] = I(rng);
            nz[i] = I(rng);
        }
        const ModeTermParams p{0.8, 1.0, 0.0, 0.0, U(rng), U(rng), 1.0};
        const auto a = modes(Isa::scalar, nx, ny, nz, p);
        const auto b = modes(Isa::avx2, nx, ny, nz, p);
        for (std::size_t i = 0; i < count; ++i)
            CHECK(std::abs(a[i] - b[i]) <= 1e-12 * (std::abs(a[i]) + 1e-3));

        const double r = U(rng), beta = 0.3 + U(rng);
        std::vector<double> sa(count), sb(count);
        image_terms(Isa::scalar, r, beta, 1, count, sa.data());
        image_terms(Isa::avx2, r, beta, 1, count, sb.data());
        for (std::size_t i = 0; i < count; ++i)
            CHECK(close(sa[i], sb[i]));
    }
}

TEST_CASE("image terms match the formula") {
    std::vector<double> out(3);
    image_terms(Isa::scalar, 0.0, 1.0, 1, 3, out.data());
    // r = 0: 3 m^4 / m^12
    CHECK(close(out[0], 3.0));
    CHECK(close(out[2], 3.0 / std::pow(3.0, 8)));
    image_terms(Isa::scalar, 2.0, 0.5, 4, 1, out.data());
    const double m = 2.0, r = 2.0;
    CHECK(close(out[0], (3 * r * r - m * m) * (r * r - 3 * m * m) / std::pow(r * r + m * m, 6)));
}

TEST_CASE("dispatch selection") {
    CHECK(std::string(isa_name(Isa::scalar)) == "scalar");
    CHECK(std::string(isa_name(Isa::avx2)) == "avx2");
    CHECK(isa_supported(Isa::scalar));

    const Isa before = active_isa();
    set_active_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    if (isa_supported(Isa::avx2)) {
        set_active_isa(Isa::avx2);
        CHECK(active_isa() == Isa::avx2);
    } else {
        CHECK_THROWS_AS(set_active_isa(Isa::avx2), DomainError);
    }
    set_active_isa(before);

    ::setenv("NEGSPEC_SIMD", "scalar", 1);
    CHECK(default_isa() == Isa::scalar);
    ::setenv("NEGSPEC_SIMD", "avx2", 1);
    CHECK(default_isa() == (isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar));
    ::unsetenv("NEGSPEC_SIMD");
}
