#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "negspec/kernels.hpp"
#include "negspec/regquad.hpp"

namespace negspec {

struct BandLimit {
    double k0 = 0.0;
    double k1 = 1.0;

    void validate() const;
};

using FourierKernel = std::function<double(double tau, double k)>;
using ComplexFunction = std::function<std::complex<double>(std::complex<double>)>;

// Regulator values proportional to the distance |r - |tau|| from the light cone.
RegulatorSchedule default_inverse_schedule(const SpacetimeSeparation& sep);
RegulatorSchedule default_forward_schedule(double k);
// Shifts eps_j = x_j / omega, x_j = 1.6, 0.8, ...
RegulatorSchedule default_temporal_schedule(double omega);

// C(tau, r) = (4 pi / r) int_0^inf dk k sin(kr) kernel(tau, k), Abel regulated
QuadratureResult inverse_spatial_ft_detailed(const FourierKernel& kernel,
                                             const SpacetimeSeparation& sep,
                                             const std::optional<RegulatorSchedule>& schedule = {});
double inverse_spatial_ft(const FourierKernel& kernel, const SpacetimeSeparation& sep,
                          const std::optional<RegulatorSchedule>& schedule = {});

// P(k) = (1 / (2 pi^2 k)) int_0^inf du u sin(ku) corr(u), Abel regulated
QuadratureResult forward_spatial_ft_detailed(const RealFunction& corr, double k,
                                             const std::optional<RegulatorSchedule>& schedule = {});
double forward_spatial_ft(const RealFunction& corr, double k,
                          const std::optional<RegulatorSchedule>& schedule = {});

// Re int dtau exp(-i omega tau) corr(tau + i eps) over |tau| < 60/omega, eps -> 0
QuadratureResult temporal_ft_detailed(const ComplexFunction& corr, double omega,
                                      const std::optional<RegulatorSchedule>& epsilons = {});
double temporal_ft(const ComplexFunction& corr, double omega,
                   const std::optional<RegulatorSchedule>& epsilons = {});

// energy density correlator at r = 0 as a function of complex time
std::complex<double> em_corr_at_origin(std::complex<double> tau);

struct PowerLawFit {
    double exponent = 0.0;
    double coefficient = 0.0;
};
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

// (4 pi / r) int_{k0}^{k1} dk k sin(kr) P(k), or 4 pi int k^2 P for r < 1e-6 / k1
double band_limited_corr(const RealFunction& P, const BandLimit& band, double r);

enum class ExtremumKind { minimum, maximum };

struct Extremum {
    double r = 0.0;
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::maximum;
};

std::vector<Extremum> extremum_interchange_report(const RealFunction& P, const BandLimit& band,
                                                  std::span<const double> r_grid);

} // namespace negspec
