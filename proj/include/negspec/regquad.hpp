#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace negspec {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

struct RegulatorSchedule {
    std::vector<double> values;
    int extrapolation_order = 4;

    // {0.2, 0.1, 0.05, 0.025, 0.0125}, order 4
    static RegulatorSchedule standard();
    static RegulatorSchedule geometric(double first, double ratio, std::size_t count, int order);
    RegulatorSchedule scaled(double factor) const;
    void validate() const;
};

using RealFunction = std::function<double(double)>;

// Polynomial extrapolation of (nodes, values) to zero through a Neville tableau.
// The estimate uses the last order + 1 nodes; the error is the change from order - 1.
QuadratureResult extrapolate_to_zero(std::span<const double> nodes, std::span<const double> values,
                                     int order);

QuadratureResult abel_limit(const RealFunction& f, const RegulatorSchedule& schedule);

struct IntegrationOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 2000;
};

// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b].
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const IntegrationOptions& opts = {});

// Same, on [a, inf) through the substitution x = a + t / (1 - t).
QuadratureResult integrate_semi_infinite(const RealFunction& f, double a,
                                         const IntegrationOptions& opts = {});

enum class OscillatoryWeight { sine, cosine, none };
enum class SeriesAccelerator { epsilon, euler };

struct OscillatoryIntegrand {
    RealFunction amplitude;
    double phase_frequency = 1.0;
    double domain_start = 0.0;
    // sine: amplitude * sin(w u), cosine: amplitude * cos(w u), none: amplitude alone
    OscillatoryWeight weight = OscillatoryWeight::sine;
};

struct OscillatoryOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_panels = 10000;
    std::size_t min_panels = 12;
    SeriesAccelerator accelerator = SeriesAccelerator::epsilon;
    int euler_depth = 12;
};

QuadratureResult oscillatory_integral(const OscillatoryIntegrand& g, double alpha,
                                      const OscillatoryOptions& opts = {});

// Wynn epsilon extrapolation of a sequence of partial sums.
QuadratureResult wynn_epsilon(std::span<const double> partial_sums);

// Repeated averaging of partial sums (Euler transformation), depth levels deep.
QuadratureResult euler_average(std::span<const double> partial_sums, int depth);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

using BoxFunction = std::function<double(std::span<const double>)>;

QuadratureResult mc_integrate(const BoxFunction& f, std::span<const Interval> bounds,
                              std::int64_t samples, std::uint64_t seed);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

// Compensated summation.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Deterministic pairwise sum.
double pairwise_sum(std::span<const double> values);

} // namespace negspec
