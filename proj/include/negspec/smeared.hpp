#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "negspec/regquad.hpp"
#include "negspec/table.hpp"

namespace negspec {

using Point4 = std::array<double, 4>; // (t, x, y, z)

enum class TestFunctionKind { gaussian, compact_bump };

const char* test_function_kind_name(TestFunctionKind k);
TestFunctionKind parse_test_function_kind(const std::string& name);

// Gaussian: A exp(-dt^2 / 2 st^2 - |dx|^2 / 2 sx^2).
// Compact bump: A (1 - dt^2 / W^2)^6 (1 - |dx|^2 / R^2)^6 with W = 4 st, R = 4 sx.
struct TestFunctionSpec {
    TestFunctionKind kind = TestFunctionKind::gaussian;
    Point4 center{0.0, 0.0, 0.0, 0.0};
    double temporal_width = 1.0;
    double spatial_width = 1.0;
    double amplitude = 1.0;

    void validate() const;
    double operator()(const Point4& x) const;
    double temporal_support() const; // half-width, infinite for Gaussians
    double spatial_support() const;
};

enum class SmearingMethod { reduced, monte_carlo };

const char* smearing_method_name(SmearingMethod m);
SmearingMethod parse_smearing_method(const std::string& name);

struct SmearingConfig {
    double ell = 1.0;
    // light-cone regulator; unset means 1e-6 times the smallest width
    std::optional<double> epsilon;
    std::int64_t mc_samples = 1000000;
    std::uint64_t seed = 20080417;
    SmearingMethod method = SmearingMethod::reduced;
    int quadrature_order = 16;

    void validate() const;
    double effective_epsilon(const TestFunctionSpec& a, const TestFunctionSpec& b) const;
};

// Re ln^2[(r^2 - (tau - i eps)^2) / ell^2]
double log_kernel(const Point4& x, const Point4& xp, const SmearingConfig& cfg);
double log_kernel_separation(double tau, double r, double epsilon, double ell);

// box grad^2 S, with box = d_t^2 - grad^2
std::function<double(const Point4&)> smeared_operator_image(const TestFunctionSpec& s);
// exact image of either kind, from the profile algebra
std::function<double(const Point4&)> smeared_operator_image_exact(const TestFunctionSpec& s);

QuadratureResult smeared_K(const TestFunctionSpec& s1, const TestFunctionSpec& s2,
                           const SmearingConfig& cfg);

// int int S1(x) S2(x') C0(x - x'); needs supports with no null separated pairs
QuadratureResult direct_smeared_reduced(const TestFunctionSpec& s1, const TestFunctionSpec& s2,
                                        int quadrature_order = 16);
// the same integral by plain Monte Carlo over the two support boxes
QuadratureResult direct_smeared_mc(const TestFunctionSpec& s1, const TestFunctionSpec& s2,
                                   std::int64_t samples, std::uint64_t seed);

bool supports_spacelike_separated(const TestFunctionSpec& s1, const TestFunctionSpec& s2);

struct EllScanRow {
    double factor = 1.0;
    double ell = 1.0;
    QuadratureResult K;
};

struct EllScan {
    std::vector<EllScanRow> rows;
    double max_relative_deviation = 0.0;

    CsvTable to_csv() const;
};

// factors run on up to `threads` worker threads; the result does not depend on the count
EllScan ell_invariance_scan(const TestFunctionSpec& s1, const TestFunctionSpec& s2,
                            const SmearingConfig& cfg, const std::vector<double>& ell_factors,
                            int threads = 1);

} // namespace negspec
