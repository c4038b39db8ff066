#include "negspec/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"

namespace negspec {

void BandLimit::validate() const {
    if (!(k0 >= 0.0) || !(k1 > k0) || !std::isfinite(k1))
        throw DomainError("BandLimit: need 0 <= k0 < k1 < inf");
}

RegulatorSchedule default_inverse_schedule(const SpacetimeSeparation& sep) {
    const double d = std::abs(sep.r - std::abs(sep.tau));
    return RegulatorSchedule::geometric(0.5 * d, 0.5, 6, 5);
}

RegulatorSchedule default_forward_schedule(double k) {
    return RegulatorSchedule::geometric(0.02 * std::min(k, 1.0), 0.5, 5, 4);
}

RegulatorSchedule default_temporal_schedule(double omega) {
    const double scale = omega > 0.0 ? 1.0 / omega : 1.0;
    return RegulatorSchedule::geometric(1.6 * scale, 0.5, 5, 4);
}

namespace {

OscillatoryOptions transform_options() {
    OscillatoryOptions o;
    o.abs_tol = 0.0;
    o.rel_tol = 1e-11;
    return o;
}

} // namespace

QuadratureResult inverse_spatial_ft_detailed(const FourierKernel& kernel,
                                             const SpacetimeSeparation& sep,
                                             const std::optional<RegulatorSchedule>& schedule) {
    if (!(sep.r > 0.0) || !std::isfinite(sep.r))
        throw DomainError("inverse_spatial_ft: r must be positive");
    if (sep.tau == 0.0)
        throw DomainError("inverse_spatial_ft: tau must be non-zero");
    if (sep.on_light_cone())
        throw LightConeSingularity("inverse_spatial_ft: separation on the light cone");
    const RegulatorSchedule sch = schedule ? *schedule : default_inverse_schedule(sep);
    const double tau = sep.tau;
    OscillatoryIntegrand g;
    g.amplitude = [&kernel, tau](double k) { return k * kernel(tau, k); };
    g.phase_frequency = sep.r;
    g.weight = OscillatoryWeight::sine;
    std::int64_t evaluations = 0;
    const OscillatoryOptions opts = transform_options();
    QuadratureResult res = abel_limit(
        [&](double alpha) {
            const QuadratureResult q = oscillatory_integral(g, alpha, opts);
            evaluations += q.evaluations;
            return q.value;
        },
        sch);
    const double scale = 4.0 * pi / sep.r;
    res.value *= scale;
    res.error_estimate *= scale;
    res.evaluations = std::max<std::int64_t>(evaluations, 1);
    return res;
}

double inverse_spatial_ft(const FourierKernel& kernel, const SpacetimeSeparation& sep,
                          const std::optional<RegulatorSchedule>& schedule) {
    return inverse_spatial_ft_detailed(kernel, sep, schedule).value;
}

QuadratureResult forward_spatial_ft_detailed(const RealFunction& corr, double k,
                                             const std::optional<RegulatorSchedule>& schedule) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("forward_spatial_ft: k must be positive");
    const RegulatorSchedule sch = schedule ? *schedule : default_forward_schedule(k);
    OscillatoryIntegrand g;
    g.amplitude = [&corr](double u) { return u * corr(u); };
    g.phase_frequency = k;
    g.weight = OscillatoryWeight::sine;
    std::int64_t evaluations = 0;
    const OscillatoryOptions opts = transform_options();
    QuadratureResult res = abel_limit(
        [&](double alpha) {
            const QuadratureResult q = oscillatory_integral(g, alpha, opts);
            evaluations += q.evaluations;
            return q.value;
        },
        sch);
    const double scale = 1.0 / (2.0 * pi2 * k);
    res.value *= scale;
    res.error_estimate *= scale;
    res.evaluations = std::max<std::int64_t>(evaluations, 1);
    return res;
}

double forward_spatial_ft(const RealFunction& corr, double k,
                          const std::optional<RegulatorSchedule>& schedule) {
    return forward_spatial_ft_detailed(corr, k, schedule).value;
}

std::complex<double> em_corr_at_origin(std::complex<double> tau) {
    return em_corr_complex(SpacetimeSeparation{tau.real(), 0.0, tau.imag()});
}

QuadratureResult temporal_ft_detailed(const ComplexFunction& corr, double omega,
                                      const std::optional<RegulatorSchedule>& epsilons) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw DomainError("temporal_ft: omega must be non-negative");
    const RegulatorSchedule sch = epsilons ? *epsilons : default_temporal_schedule(omega);
    const double window = omega > 0.0 ? 60.0 / omega : 60.0;
    const double panel = omega > 0.0 ? pi / omega : 1.0;
    const int panels = static_cast<int>(std::ceil(window / panel));

    IntegrationOptions io;
    io.abs_tol = 0.0;
    io.rel_tol = 1e-13;
    io.max_subdivisions = 400;

    std::int64_t evaluations = 0;
    double quad_error = 0.0;
    double tail = 0.0;
    auto at_eps = [&](double eps) {
        auto f = [&](double t) {
            const std::complex<double> phase(std::cos(omega * t), -std::sin(omega * t));
            return (phase * corr(std::complex<double>(t, eps))).real();
        };
        NeumaierSum sum;
        for (int p = -panels; p < panels; ++p) {
            const double a = std::max(-window, p * panel);
            const double b = std::min(window, (p + 1) * panel);
            const QuadratureResult q = integrate(f, a, b, io);
            sum.add(q.value);
            evaluations += q.evaluations;
            quad_error = std::max(quad_error, q.error_estimate);
        }
        // integrand decays as tau^-8 beyond the window
        const double edge = std::abs(corr(std::complex<double>(window, eps))) +
                            std::abs(corr(std::complex<double>(-window, eps)));
        tail = std::max(tail, edge * window / 7.0);
        return sum.value();
    };
    QuadratureResult res = abel_limit(at_eps, sch);
    res.error_estimate += quad_error + tail;
    res.evaluations = std::max<std::int64_t>(evaluations, 1);
    return res;
}

double temporal_ft(const ComplexFunction& corr, double omega,
                   const std::optional<RegulatorSchedule>& epsilons) {
    return temporal_ft_detailed(corr, omega, epsilons).value;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("fit_power_law: need at least two matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw DomainError("fit_power_law: data must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    PowerLawFit fit;
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.coefficient = std::exp((sy - fit.exponent * sx) / n);
    return fit;
}

double band_limited_corr(const RealFunction& P, const BandLimit& band, double r) {
    band.validate();
    if (!(r >= 0.0) || !std::isfinite(r))
        throw DomainError("band_limited_corr: r must be non-negative");
    IntegrationOptions io;
    io.abs_tol = 0.0;
    io.rel_tol = 1e-13;
    if (r < 1e-6 / band.k1) {
        const QuadratureResult q =
            integrate([&P](double k) { return k * k * P(k); }, band.k0, band.k1, io);
        return 4.0 * pi * q.value;
    }
    const QuadratureResult q =
        integrate([&P, r](double k) { return k * std::sin(k * r) * P(k); }, band.k0, band.k1, io);
    return 4.0 * pi / r * q.value;
}

std::vector<Extremum> extremum_interchange_report(const RealFunction& P, const BandLimit& band,
                                                  std::span<const double> r_grid) {
    std::vector<double> c;
    c.reserve(r_grid.size());
    for (double r : r_grid)
        c.push_back(band_limited_corr(P, band, r));
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        const double left = c[i] - c[i - 1];
        const double right = c[i + 1] - c[i];
        if (left > 0.0 && right <= 0.0)
            out.push_back({r_grid[i], c[i], ExtremumKind::maximum});
        else if (left < 0.0 && right >= 0.0)
            out.push_back({r_grid[i], c[i], ExtremumKind::minimum});
    }
    return out;
}

} // namespace negspec
