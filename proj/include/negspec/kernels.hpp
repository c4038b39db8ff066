#pragma once

#include <complex>

namespace negspec {

struct SpacetimeSeparation {
    double tau = 0.0;
    double r = 0.0;
    double im_shift = 0.0; // tau -> tau + i * im_shift

    std::complex<double> complex_tau() const { return {tau, im_shift}; }
    bool on_light_cone() const;
};

struct ThermalState {
    double beta = 1.0;

    explicit ThermalState(double beta_);
    static ThermalState from_temperature(double temperature);
    double temperature() const { return 1.0 / beta; }
};

struct InflationParams {
    double lP = 1.0;
    double H = 1.0;
    double S = 1.0;

    void validate() const;
};

// sin(x)/x, switching to a four term Taylor series for |x| < series_tol
double sinc(double x);

std::complex<double> scalar_corr_complex(const SpacetimeSeparation& sep);
double scalar_corr(const SpacetimeSeparation& sep);
double scalar_ft_kernel(double tau, double k);

std::complex<double> em_corr_complex(const SpacetimeSeparation& sep);
double em_corr(const SpacetimeSeparation& sep);
double em_ft_kernel(double tau, double k);

double thermal_power(double k, const ThermalState& state);
// d P_T / d T at fixed k
double thermal_power_dT(double k, const ThermalState& state);
double em_power_total(double k, const ThermalState& state);

double temporal_power(double omega);

double inflation_power(double k, const InflationParams& p);
double sign_change_wavenumber(const InflationParams& p);

} // namespace negspec
