#include "negspec/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "negspec/constants.hpp"
#include "negspec/errors.hpp"

namespace negspec {

namespace {

void require_off_light_cone(const SpacetimeSeparation& sep, const char* what) {
    if (!(sep.r >= 0.0))
        throw DomainError(std::string(what) + ": r must be non-negative");
    if (sep.on_light_cone())
        throw LightConeSingularity(std::string(what) + ": separation on the light cone (r = " +
                                   std::to_string(sep.r) + ", tau = " + std::to_string(sep.tau) + ")");
}

void require_wavenumber(double k, const char* what) {
    if (!(k >= 0.0) || !std::isfinite(k))
        throw DomainError(std::string(what) + ": wavenumber must be finite and non-negative");
}

} // namespace

bool SpacetimeSeparation::on_light_cone() const {
    if (im_shift != 0.0)
        return false;
    const double scale = std::max(r, std::abs(tau));
    return std::abs(r - std::abs(tau)) <= lightcone_tol * scale;
}

ThermalState::ThermalState(double beta_) : beta(beta_) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("ThermalState: beta must be positive and finite");
}

ThermalState ThermalState::from_temperature(double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature))
        throw DomainError("ThermalState: temperature must be positive and finite");
    return ThermalState(1.0 / temperature);
}

void InflationParams::validate() const {
    if (!(lP > 0.0) || !(H > 0.0) || !(S > 0.0) || !std::isfinite(lP) || !std::isfinite(H) ||
        !std::isfinite(S))
        throw DomainError("InflationParams: lP, H and S must be positive and finite");
}

double sinc(double x) {
    if (std::abs(x) < series_tol) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return std::sin(x) / x;
}

std::complex<double> scalar_corr_complex(const SpacetimeSeparation& sep) {
    require_off_light_cone(sep, "scalar_corr");
    const std::complex<double> t = sep.complex_tau();
    const std::complex<double> s = sep.r * sep.r - t * t;
    return 1.0 / (8.0 * pi4 * s * s);
}

double scalar_corr(const SpacetimeSeparation& sep) {
    if (sep.im_shift == 0.0) {
        require_off_light_cone(sep, "scalar_corr");
        const double s = sep.r * sep.r - sep.tau * sep.tau;
        return 1.0 / (8.0 * pi4 * s * s);
    }
    return scalar_corr_complex(sep).real();
}

double scalar_ft_kernel(double tau, double k) {
    require_wavenumber(k, "scalar_ft_kernel");
    return -k * sinc(k * tau) / (64.0 * pi5);
}

std::complex<double> em_corr_complex(const SpacetimeSeparation& sep) {
    require_off_light_cone(sep, "em_corr");
    const std::complex<double> t = sep.complex_tau();
    const std::complex<double> t2 = t * t;
    const double r2 = sep.r * sep.r;
    const std::complex<double> s = r2 - t2;
    const std::complex<double> s2 = s * s;
    return (t2 + 3.0 * r2) * (r2 + 3.0 * t2) / (pi4 * s2 * s2 * s2);
}

double em_corr(const SpacetimeSeparation& sep) {
    if (sep.im_shift == 0.0) {
        require_off_light_cone(sep, "em_corr");
        const double t2 = sep.tau * sep.tau;
        const double r2 = sep.r * sep.r;
        const double s = r2 - t2;
        const double s2 = s * s;
        return (t2 + 3.0 * r2) * (r2 + 3.0 * t2) / (pi4 * s2 * s2 * s2);
    }
    return em_corr_complex(sep).real();
}

double em_ft_kernel(double tau, double k) {
    require_wavenumber(k, "em_ft_kernel");
    const double k2 = k * k;
    return -k2 * k2 * k * sinc(k * tau) / (960.0 * pi5);
}

double thermal_power(double k, const ThermalState& state) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("thermal_power: k must be positive");
    const double k2 = k * k;
    return -k2 * k2 * std::log1p(-std::exp(-state.beta * k)) / (480.0 * pi5 * state.beta);
}

double thermal_power_dT(double k, const ThermalState& state) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("thermal_power_dT: k must be positive");
    const double x = state.beta * k;
    const double k2 = k * k;
    return -k2 * k2 / (480.0 * pi5) * (std::log1p(-std::exp(-x)) - x / std::expm1(x));
}

double em_power_total(double k, const ThermalState& state) {
    return em_ft_kernel(0.0, k) + thermal_power(k, state);
}

double temporal_power(double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw DomainError("temporal_power: omega must be non-negative");
    const double w2 = omega * omega;
    return w2 * w2 * w2 * omega / (560.0 * pi2);
}

double inflation_power(double k, const InflationParams& p) {
    p.validate();
    if (!(k > 0.0) || !std::isfinite(k))
        throw DomainError("inflation_power: k must be positive");
    return p.lP * p.H * p.S * p.S / inflation_denominator * (-p.S + 4.0 * pi * p.H / (5.0 * k));
}

double sign_change_wavenumber(const InflationParams& p) {
    p.validate();
    return 4.0 * pi * p.H / (5.0 * p.S);
}

} // namespace negspec
